#pragma once

#include "relcost/closed_forms.hpp"
#include "relcost/engine.hpp"
#include "relcost/model.hpp"
#include "relcost/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace relcost
{
    struct EstimateOptions
    {
        std::int64_t n_runs = 1000;
        Tick horizon = 10000;
        std::uint64_t seed = 1;
        std::int64_t first_run = 0; ///< run i uses run_seed(seed, first_run + i)
        unsigned jobs = 1;
        double epsilon_gate = 0.01;
        std::optional<double> tolerance; ///< default: 2% for trivial, 5% otherwise
        std::optional<double> lambda;
        /// Keep censored runs in the mean at their horizon-truncated value
        /// (they are still counted as censored).
        bool truncated = false;
    };

    enum class Verdict
    {
        Pass,
        Fail,
        NoPrediction,
    };

    std::string_view to_string(Verdict v) noexcept;

    struct EstimateReport
    {
        Metric metric = Metric::TWait;
        ProtocolSpec protocol;
        std::int64_t n_runs = 0;
        std::int64_t censored = 0;
        Accumulator samples; ///< runs that entered the mean
        double mean = 0.0;
        double std_error = 0.0;
        Interval ci95;
        std::optional<Prediction> closed_form;
        std::optional<double> relative_deviation;
        double tolerance = 0.0;
        Verdict verdict = Verdict::NoPrediction;
        std::optional<double> mean_invocations; ///< c_avg only
    };

    double default_tolerance(const ProtocolSpec &protocol) noexcept;

    /// Monte Carlo estimate of several metrics over the same seeded runs.
    /// c_avg uses repeated-invocation runs (the protocol is then always the
    /// heartbeat protocol); all other metrics use single runs.
    std::vector<EstimateReport> estimate_many(const ProtocolSpec &protocol, const SystemParams &params,
                                              const CostParams &costs, const std::vector<Metric> &metrics,
                                              const EstimateOptions &options);

    EstimateReport estimate(const ProtocolSpec &protocol, const SystemParams &params, const CostParams &costs,
                            Metric metric, const EstimateOptions &options);

} // namespace relcost
