#include "relcost/closed_forms.hpp"

#include <fmt/format.h>

#include <array>
#include <utility>

namespace relcost
{
    namespace
    {
        constexpr std::array<std::pair<Metric, std::string_view>, 5> kMetricNames{{
            {Metric::TWait, "t_wait"},
            {Metric::NSend, "n_send"},
            {Metric::C0, "c0"},
            {Metric::C1, "c1"},
            {Metric::CAvg, "c_avg"},
        }};

        double as_cost(const ProtocolPrediction &p, const CostParams &costs) noexcept
        {
            return p.e_nsend * costs.c_send + p.e_twait * costs.c_wait;
        }
    } // namespace

    std::string_view to_string(Metric m) noexcept
    {
        for (const auto &[metric, name] : kMetricNames)
            if (metric == m)
                return name;
        return "?";
    }

    Metric metric_from_string(std::string_view name)
    {
        for (const auto &[metric, n] : kMetricNames)
            if (n == name)
                return metric;
        throw PreconditionError(fmt::format("unknown metric '{}'", name));
    }

    Tick sends_per_direction(const SystemParams &params) noexcept
    {
        return (2 * params.tau + params.delta - 1) / params.delta;
    }

    SmallRateTable closed_form_small_rates(const SystemParams &params)
    {
        require_valid(validate(params, CostParams{}));
        if (params.alpha_p != 0.0 || params.alpha_q != 0.0)
            throw PreconditionError("the trivial/sender/receiver closed forms require alpha_p = alpha_q = 0");

        const double beta = combined_crash_rate(params);
        const double tau = static_cast<double>(params.tau);
        const double delta = static_cast<double>(params.delta);
        const double both_ways = 2.0 * static_cast<double>(sends_per_direction(params));

        SmallRateTable out;
        out.trivial = {(1.0 - beta) / beta, 0.0};
        out.sender = {tau, (tau + 1.0) * params.beta_q / (delta * params.beta_p) + both_ways};
        out.receiver = {2.0 * tau, (tau + 1.0) * params.beta_p / (delta * params.beta_q) + both_ways};
        return out;
    }

    HeartbeatPrediction closed_form_heartbeat(const SystemParams &params, const CostParams &costs)
    {
        HeartbeatPrediction out;
        out.e_twait = 2.0 * static_cast<double>(params.tau);
        out.e_nsend = 2.0 * static_cast<double>(sends_per_direction(params));
        out.cost = out.e_twait * costs.c_wait + out.e_nsend * costs.c_send;
        return out;
    }

    double avg_cost_z(const SystemParams &params, const CostParams &costs) noexcept
    {
        const double phase = static_cast<double>(params.delta - 1) / 2.0;
        return 2.0 * static_cast<double>(sends_per_direction(params)) * costs.c_send +
               (static_cast<double>(params.tau) + phase) * costs.c_wait;
    }

    AvgCostPrediction closed_form_avg_cost(const SystemParams &params, const CostParams &costs,
                                    std::optional<double> lambda)
    {
        if (!(params.sigma > 0.0))
            throw PreconditionError("the average-cost closed form requires sigma > 0");
        const double faulty = (1.0 - params.alpha_p) * (1.0 - params.alpha_q);
        double lam = 0.0;
        if (faulty > 0.0)
        {
            if (!lambda)
                throw PreconditionError("lambda is required unless alpha_p or alpha_q equals 1");
            if (!(*lambda > 0.0 && *lambda < 1.0))
                throw PreconditionError("lambda must lie in (0, 1)");
            lam = *lambda;
        }
        AvgCostPrediction out;
        out.coefficient = faulty * lam + params.alpha_p * params.alpha_q;
        out.z = avg_cost_z(params, costs);
        out.heartbeat_term = costs.c_send / (static_cast<double>(params.delta) * params.sigma);
        out.c_avg = out.coefficient * out.z + out.heartbeat_term;
        return out;
    }

    bool in_small_regime(const SystemParams &params, double epsilon) noexcept
    {
        if (params.gamma > epsilon)
            return false;
        if (params.alpha_p < 1.0 && params.beta_p > epsilon)
            return false;
        if (params.alpha_q < 1.0 && params.beta_q > epsilon)
            return false;
        return true;
    }

    std::optional<Prediction> predict(const ProtocolSpec &protocol, Metric metric, const SystemParams &params,
                                      const CostParams &costs, double epsilon_gate, std::optional<double> lambda)
    {
        if (!in_small_regime(params, epsilon_gate))
            return std::nullopt;

        if (metric == Metric::CAvg)
        {
            const double faulty = (1.0 - params.alpha_p) * (1.0 - params.alpha_q);
            if (!(params.sigma > 0.0) || (faulty > 0.0 && !lambda))
                return std::nullopt;
            return Prediction{closed_form_avg_cost(params, costs, lambda).c_avg, "avg-cost"};
        }
        if (metric == Metric::C1)
            return std::nullopt;

        auto pick = [&](double twait, double nsend, double cost) -> double {
            switch (metric)
            {
            case Metric::TWait:
                return twait;
            case Metric::NSend:
                return nsend;
            default:
                return cost;
            }
        };

        switch (protocol.kind)
        {
        case ProtocolKind::SRhb:
        {
            const auto p = closed_form_heartbeat(params, costs);
            return Prediction{pick(p.e_twait, p.e_nsend, p.cost), "heartbeat"};
        }
        case ProtocolKind::Trivial:
        case ProtocolKind::SenderDriven:
        case ProtocolKind::ReceiverDriven:
        {
            if (params.alpha_p != 0.0 || params.alpha_q != 0.0)
                return std::nullopt;
            const auto table = closed_form_small_rates(params);
            const ProtocolPrediction &p = protocol.kind == ProtocolKind::Trivial        ? table.trivial
                                          : protocol.kind == ProtocolKind::SenderDriven ? table.sender
                                                                                        : table.receiver;
            return Prediction{pick(p.e_twait, p.e_nsend, as_cost(p, costs)), "no-correct-process"};
        }
        case ProtocolKind::Pathological:
            break;
        }
        return std::nullopt;
    }

} // namespace relcost
