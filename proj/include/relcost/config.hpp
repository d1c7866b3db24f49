#pragma once

#include "relcost/closed_forms.hpp"
#include "relcost/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace relcost
{
    enum class RunMode
    {
        Single,
        Repeated,
    };

    enum class ProbeKind
    {
        Divergence,
        Impossibility,
        Lambda,
    };

    /// Everything one experiment needs. Loaded from a JSON object whose
    /// "params" and "costs" members are the flat parameter documents.
    struct ExperimentConfig
    {
        std::vector<ProtocolSpec> protocols{ProtocolSpec{}};
        SystemParams params;
        CostParams costs;
        RunMode mode = RunMode::Single;
        std::vector<Metric> metrics;
        std::int64_t n_runs = 1000;
        Tick horizon = 10000;
        std::uint64_t seed = 1;
        std::int64_t traces = 1; ///< simulate: how many runs get a trace file
        std::vector<Tick> t_grid;
        std::vector<Tick> delta_range;
        std::vector<Tick> horizons;
        std::optional<double> tolerance;
        double epsilon_gate = 0.01;
        std::optional<double> lambda;
        ProbeKind probe = ProbeKind::Divergence;
        double growth_threshold = 1.3;
        double stable_tolerance = 0.05;
        bool simulate_curve = false; ///< optimize: also simulate every delta
    };

    /// Throws PreconditionError on unknown keys, wrong types or invalid
    /// parameter values; nlohmann::json::parse_error on malformed text.
    ExperimentConfig config_from_json(const nlohmann::json &doc);
    ExperimentConfig load_config(const std::filesystem::path &path);

    nlohmann::json to_json(const ExperimentConfig &config);

} // namespace relcost
