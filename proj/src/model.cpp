#include "relcost/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <utility>

namespace relcost
{
    namespace
    {
        void check_unit_interval(std::vector<Violation> &out, const char *field, double v)
        {
            if (!(v >= 0.0))
                out.push_back({field, fmt::format("{} must be >= 0", field)});
            else if (!(v <= 1.0))
                out.push_back({field, fmt::format("{} must be <= 1", field)});
        }

        void check_crash_rate(std::vector<Violation> &out, const char *field, double v)
        {
            if (!(v > 0.0))
                out.push_back({field, fmt::format("{} must be > 0", field)});
            else if (!(v <= 1.0))
                out.push_back({field, fmt::format("{} must be <= 1", field)});
        }

        template <class F>
        void read_fields(const nlohmann::json &doc, std::string_view what, F &&assign)
        {
            if (!doc.is_object())
                throw PreconditionError(fmt::format("{} must be a JSON object", what));
            for (const auto &[key, value] : doc.items())
            {
                if (!assign(key, value))
                    throw PreconditionError(fmt::format("unknown key '{}' in {}", key, what));
            }
        }

        double as_double(const std::string &key, const nlohmann::json &v)
        {
            if (!v.is_number())
                throw PreconditionError(fmt::format("'{}' must be a number", key));
            return v.get<double>();
        }

        Tick as_tick(const std::string &key, const nlohmann::json &v)
        {
            if (!v.is_number_integer())
                throw PreconditionError(fmt::format("'{}' must be an integer", key));
            return v.get<Tick>();
        }

        constexpr std::array<std::pair<ProtocolKind, std::string_view>, 5> kProtocolNames{{
            {ProtocolKind::Trivial, "trivial"},
            {ProtocolKind::SenderDriven, "sender"},
            {ProtocolKind::ReceiverDriven, "receiver"},
            {ProtocolKind::SRhb, "srhb"},
            {ProtocolKind::Pathological, "pathological"},
        }};
    } // namespace

    std::vector<Violation> validate(const SystemParams &params, const CostParams &costs)
    {
        std::vector<Violation> out;
        check_unit_interval(out, "alpha_p", params.alpha_p);
        check_unit_interval(out, "alpha_q", params.alpha_q);
        check_crash_rate(out, "beta_p", params.beta_p);
        check_crash_rate(out, "beta_q", params.beta_q);
        if (!(params.gamma >= 0.0))
            out.push_back({"gamma", "gamma must be >= 0"});
        else if (!(params.gamma < 1.0))
            out.push_back({"gamma", "gamma must be < 1"});
        if (params.tau < 1)
            out.push_back({"tau", "tau must be >= 1"});
        if (params.delta < 1)
            out.push_back({"delta", "delta must be >= 1"});
        check_unit_interval(out, "sigma", params.sigma);

        if (!(costs.c_send >= 0.0))
            out.push_back({"c_send", "c_send must be >= 0"});
        if (!(costs.c_wait >= 0.0))
            out.push_back({"c_wait", "c_wait must be >= 0"});
        if (!(costs.n_exp > 1.0))
            out.push_back({"n_exp", "n_exp must be > 1"});
        return out;
    }

    std::vector<Violation> validate_c1(const SystemParams &params, const CostParams &costs)
    {
        std::vector<Violation> out;
        const double survive = (1.0 - params.beta_p) * (1.0 - params.beta_q);
        if (!(costs.n_exp * survive > 1.0))
            out.push_back({"n_exp", "n_exp * (1 - beta_p) * (1 - beta_q) must be > 1"});
        return out;
    }

    std::vector<Violation> validate_protocol(const ProtocolSpec &spec, const SystemParams &params,
                                             bool require_divergence)
    {
        std::vector<Violation> out;
        if (spec.kind != ProtocolKind::Pathological)
            return out;
        if (!(spec.ack_base > 1.0))
            out.push_back({"ack_base", "ack_base must be > 1"});
        else if (require_divergence && !(spec.ack_base * params.gamma > 1.0))
            out.push_back({"ack_base", "ack_base * gamma must be > 1"});
        return out;
    }

    double combined_crash_rate(const SystemParams &params) noexcept
    {
        return params.beta_p + params.beta_q - params.beta_p * params.beta_q;
    }

    std::string_view to_string(ProtocolKind kind) noexcept
    {
        for (const auto &[k, name] : kProtocolNames)
            if (k == kind)
                return name;
        return "unknown";
    }

    ProtocolKind protocol_kind_from_string(std::string_view name)
    {
        for (const auto &[k, n] : kProtocolNames)
            if (n == name)
                return k;
        throw PreconditionError(fmt::format(
            "unknown protocol '{}' (expected trivial|sender|receiver|srhb|pathological)", name));
    }

    bool uses_heartbeats(ProtocolKind kind) noexcept
    {
        return kind == ProtocolKind::SRhb;
    }

    SystemParams system_params_from_json(const nlohmann::json &doc)
    {
        SystemParams p;
        read_fields(doc, "system params", [&p](const std::string &key, const nlohmann::json &v) {
            if (key == "alpha_p")
                p.alpha_p = as_double(key, v);
            else if (key == "alpha_q")
                p.alpha_q = as_double(key, v);
            else if (key == "beta_p")
                p.beta_p = as_double(key, v);
            else if (key == "beta_q")
                p.beta_q = as_double(key, v);
            else if (key == "gamma")
                p.gamma = as_double(key, v);
            else if (key == "tau")
                p.tau = as_tick(key, v);
            else if (key == "delta")
                p.delta = as_tick(key, v);
            else if (key == "sigma")
                p.sigma = as_double(key, v);
            else
                return false;
            return true;
        });
        return p;
    }

    CostParams cost_params_from_json(const nlohmann::json &doc)
    {
        CostParams c;
        read_fields(doc, "cost params", [&c](const std::string &key, const nlohmann::json &v) {
            if (key == "c_send")
                c.c_send = as_double(key, v);
            else if (key == "c_wait")
                c.c_wait = as_double(key, v);
            else if (key == "n_exp")
                c.n_exp = as_double(key, v);
            else
                return false;
            return true;
        });
        return c;
    }

    nlohmann::json to_json(const SystemParams &p)
    {
        return {{"alpha_p", p.alpha_p}, {"alpha_q", p.alpha_q}, {"beta_p", p.beta_p},
                {"beta_q", p.beta_q},   {"gamma", p.gamma},     {"tau", p.tau},
                {"delta", p.delta},     {"sigma", p.sigma}};
    }

    nlohmann::json to_json(const CostParams &c)
    {
        return {{"c_send", c.c_send}, {"c_wait", c.c_wait}, {"n_exp", c.n_exp}};
    }

    void require_valid(const std::vector<Violation> &violations)
    {
        if (violations.empty())
            return;
        std::string msg = "invalid parameters:";
        for (const auto &v : violations)
            msg += fmt::format(" [{}] {};", v.field, v.message);
        msg.pop_back();
        throw PreconditionError(msg);
    }

} // namespace relcost
