#include "relcost/config.hpp"

#include "relcost/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace relcost
{
    namespace
    {
        const std::set<std::string, std::less<>> kKeys{
            "protocol",  "ack_base",     "params",  "costs",     "mode",   "metrics",
            "n_runs",    "horizon",      "seed",    "traces",    "t_grid", "delta_range",
            "horizons",  "tolerance",    "epsilon_gate", "lambda", "probe", "growth_threshold",
            "stable_tolerance", "simulate_curve",
        };

        std::int64_t get_int(const nlohmann::json &doc, const char *key, std::int64_t min)
        {
            const auto &v = doc.at(key);
            if (!v.is_number_integer())
                throw PreconditionError(fmt::format("'{}' must be an integer", key));
            const auto x = v.get<std::int64_t>();
            if (x < min)
                throw PreconditionError(fmt::format("'{}' must be >= {}", key, min));
            return x;
        }

        double get_double(const nlohmann::json &doc, const char *key)
        {
            const auto &v = doc.at(key);
            if (!v.is_number())
                throw PreconditionError(fmt::format("'{}' must be a number", key));
            return v.get<double>();
        }

        std::string get_string(const nlohmann::json &doc, const char *key)
        {
            const auto &v = doc.at(key);
            if (!v.is_string())
                throw PreconditionError(fmt::format("'{}' must be a string", key));
            return v.get<std::string>();
        }

        std::vector<Tick> tick_list(const nlohmann::json &v, const char *key)
        {
            std::vector<Tick> out;
            if (v.is_object())
            {
                for (const auto &[k, _] : v.items())
                    if (k != "min" && k != "max" && k != "step")
                        throw PreconditionError(fmt::format("unknown key '{}' in '{}'", k, key));
                const Tick lo = get_int(v, "min", 0);
                const Tick hi = get_int(v, "max", lo);
                const Tick step = v.contains("step") ? get_int(v, "step", 1) : 1;
                for (Tick t = lo; t <= hi; t += step)
                    out.push_back(t);
                return out;
            }
            if (!v.is_array())
                throw PreconditionError(fmt::format("'{}' must be an array or a {{min, max, step}} object", key));
            for (const auto &x : v)
            {
                if (!x.is_number_integer())
                    throw PreconditionError(fmt::format("'{}' must contain integers", key));
                out.push_back(x.get<Tick>());
            }
            return out;
        }

        void require_increasing(const std::vector<Tick> &xs, const char *key)
        {
            for (std::size_t i = 1; i < xs.size(); ++i)
                if (xs[i] <= xs[i - 1])
                    throw PreconditionError(fmt::format("'{}' must be strictly increasing", key));
        }
    } // namespace

    ExperimentConfig config_from_json(const nlohmann::json &doc)
    {
        if (!doc.is_object())
            throw PreconditionError("config must be a JSON object");
        for (const auto &[key, _] : doc.items())
            if (!kKeys.contains(key))
                throw PreconditionError(fmt::format("unknown key '{}' in config", key));

        ExperimentConfig c;
        double ack_base = ProtocolSpec{}.ack_base;
        if (doc.contains("ack_base"))
            ack_base = get_double(doc, "ack_base");
        if (doc.contains("protocol"))
        {
            const auto &v = doc.at("protocol");
            std::vector<std::string> names;
            if (v.is_string())
                names.push_back(v.get<std::string>());
            else if (v.is_array())
            {
                for (const auto &x : v)
                {
                    if (!x.is_string())
                        throw PreconditionError("'protocol' entries must be strings");
                    names.push_back(x.get<std::string>());
                }
            }
            else
                throw PreconditionError("'protocol' must be a string or an array of strings");
            if (names.empty())
                throw PreconditionError("'protocol' must name at least one protocol");
            c.protocols.clear();
            for (const auto &n : names)
                c.protocols.push_back({protocol_kind_from_string(n), ack_base});
        }
        else
        {
            c.protocols.front().ack_base = ack_base;
        }

        if (doc.contains("params"))
            c.params = system_params_from_json(doc.at("params"));
        if (doc.contains("costs"))
            c.costs = cost_params_from_json(doc.at("costs"));
        if (doc.contains("mode"))
        {
            const auto m = get_string(doc, "mode");
            if (m == "single")
                c.mode = RunMode::Single;
            else if (m == "repeated")
                c.mode = RunMode::Repeated;
            else
                throw PreconditionError(fmt::format("unknown mode '{}'", m));
        }
        if (doc.contains("metrics"))
        {
            const auto &v = doc.at("metrics");
            if (!v.is_array())
                throw PreconditionError("'metrics' must be an array of strings");
            for (const auto &x : v)
            {
                if (!x.is_string())
                    throw PreconditionError("'metrics' must be an array of strings");
                c.metrics.push_back(metric_from_string(x.get<std::string>()));
            }
        }
        if (doc.contains("n_runs"))
            c.n_runs = get_int(doc, "n_runs", 1);
        if (doc.contains("horizon"))
            c.horizon = get_int(doc, "horizon", 1);
        if (doc.contains("seed"))
        {
            const auto &v = doc.at("seed");
            if (!v.is_number_unsigned())
                throw PreconditionError("'seed' must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        }
        if (doc.contains("traces"))
            c.traces = get_int(doc, "traces", 0);
        if (doc.contains("t_grid"))
        {
            c.t_grid = tick_list(doc.at("t_grid"), "t_grid");
            require_increasing(c.t_grid, "t_grid");
        }
        if (doc.contains("delta_range"))
            c.delta_range = tick_list(doc.at("delta_range"), "delta_range");
        if (doc.contains("horizons"))
        {
            c.horizons = tick_list(doc.at("horizons"), "horizons");
            require_increasing(c.horizons, "horizons");
        }
        if (doc.contains("tolerance"))
            c.tolerance = get_double(doc, "tolerance");
        if (doc.contains("epsilon_gate"))
            c.epsilon_gate = get_double(doc, "epsilon_gate");
        if (doc.contains("lambda"))
            c.lambda = get_double(doc, "lambda");
        if (doc.contains("probe"))
        {
            const auto p = get_string(doc, "probe");
            if (p == "divergence")
                c.probe = ProbeKind::Divergence;
            else if (p == "impossibility")
                c.probe = ProbeKind::Impossibility;
            else if (p == "lambda")
                c.probe = ProbeKind::Lambda;
            else
                throw PreconditionError(fmt::format("unknown probe '{}'", p));
        }
        if (doc.contains("growth_threshold"))
            c.growth_threshold = get_double(doc, "growth_threshold");
        if (doc.contains("stable_tolerance"))
            c.stable_tolerance = get_double(doc, "stable_tolerance");
        if (doc.contains("simulate_curve"))
        {
            if (!doc.at("simulate_curve").is_boolean())
                throw PreconditionError("'simulate_curve' must be a boolean");
            c.simulate_curve = doc.at("simulate_curve").get<bool>();
        }

        require_valid(validate(c.params, c.costs));
        for (const ProtocolSpec &p : c.protocols)
            require_valid(validate_protocol(p, c.params));
        if (c.tolerance && !(*c.tolerance > 0.0))
            throw PreconditionError("'tolerance' must be > 0");
        if (!(c.epsilon_gate >= 0.0))
            throw PreconditionError("'epsilon_gate' must be >= 0");
        if (c.lambda && !(*c.lambda > 0.0 && *c.lambda < 1.0))
            throw PreconditionError("'lambda' must lie in (0, 1)");
        return c;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw PreconditionError(fmt::format("cannot open config '{}'", path.string()));
        return config_from_json(nlohmann::json::parse(in));
    }

    nlohmann::json to_json(const ExperimentConfig &c)
    {
        nlohmann::json protocols = nlohmann::json::array();
        for (const ProtocolSpec &p : c.protocols)
            protocols.push_back(to_json(p));
        nlohmann::json metrics = nlohmann::json::array();
        for (Metric m : c.metrics)
            metrics.push_back(to_string(m));
        nlohmann::json j{{"protocols", protocols},
                         {"params", to_json(c.params)},
                         {"costs", to_json(c.costs)},
                         {"mode", c.mode == RunMode::Single ? "single" : "repeated"},
                         {"metrics", metrics},
                         {"n_runs", c.n_runs},
                         {"horizon", c.horizon},
                         {"seed", c.seed},
                         {"epsilon_gate", c.epsilon_gate}};
        if (c.tolerance)
            j["tolerance"] = *c.tolerance;
        if (c.lambda)
            j["lambda"] = *c.lambda;
        return j;
    }

} // namespace relcost
