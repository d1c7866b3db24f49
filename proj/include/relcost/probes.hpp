#pragma once

#include "relcost/cost.hpp"
#include "relcost/engine.hpp"
#include "relcost/estimate.hpp"
#include "relcost/model.hpp"
#include "relcost/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace relcost
{
    struct S2Point
    {
        Tick t = 0;
        std::int64_t finished = 0; ///< runs with t_f < t among the denominator
        std::int64_t both_up = 0;  ///< runs where neither process crashed before t
        std::optional<double> probability; ///< empty when both_up == 0
        double std_error = 0.0;
    };

    struct S2Options
    {
        std::int64_t n_runs = 1000;
        std::uint64_t seed = 1;
        unsigned jobs = 1;
    };

    /// Pr(receiver finished strictly before t | both processes still up at
    /// t) for every t of an increasing grid. Acting at tick t counts towards
    /// the round that ends at t + 1.
    std::vector<S2Point> s2_curve(const ProtocolSpec &protocol, const SystemParams &params,
                                  const std::vector<Tick> &t_grid, const S2Options &options);

    enum class GrowthVerdict
    {
        Divergent,
        Bounded,
        Inconclusive,
    };

    std::string_view to_string(GrowthVerdict v) noexcept;

    struct GrowthRow
    {
        Tick horizon = 0;
        double mean = 0.0;
        double std_error = 0.0;
        std::int64_t censored = 0;
        std::optional<double> ratio; ///< mean / previous mean
    };

    struct GrowthOptions
    {
        std::int64_t n_runs = 1000;
        std::uint64_t seed = 1;
        unsigned jobs = 1;
        Metric metric = Metric::NSend;
        double growth_threshold = 1.3; ///< every successive ratio at least this: DIVERGENT
        double stable_tolerance = 0.05; ///< last relative change at most this: BOUNDED
    };

    /// Growth table of a horizon-truncated mean. The verdict is a growth
    /// heuristic: a simulation cannot prove an expectation infinite.
    struct GrowthReport
    {
        Metric metric = Metric::NSend;
        std::vector<GrowthRow> rows;
        GrowthVerdict verdict = GrowthVerdict::Inconclusive;
        double growth_threshold = 0.0;
        double stable_tolerance = 0.0;
    };

    GrowthVerdict classify_growth(const std::vector<GrowthRow> &rows, double growth_threshold,
                                  double stable_tolerance) noexcept;

    /// Same run seeds at every horizon, so the rows differ only by truncation.
    GrowthReport divergence_probe(const ProtocolSpec &protocol, const SystemParams &params, const CostParams &costs,
                                  const std::vector<Tick> &horizons, const GrowthOptions &options);

    struct ScenarioResult
    {
        std::string name;
        std::string description;
        Lifetimes lifetimes;
        Tick loss_until = 0; ///< every message sent before this tick is lost
        std::int64_t num_sends = 0;
        bool sends_stopped = false; ///< quiescent before the horizon
        Tick stop_time = 0;         ///< one past the last protocol send (0 if none)
        bool receiver_finished = false;
        Observed<Tick> wait;
        bool unbounded = false; ///< sends or wait still growing at the horizon
        RunTrace trace;
    };

    struct ImpossibilityReport
    {
        ProtocolSpec protocol;
        Tick horizon = 0;
        std::vector<ScenarioResult> scenarios; ///< R1, R2, R3
        bool unbounded_signature = false;
        bool heartbeat_escape = false;
        std::string note;
    };

    /// Forced scenarios: R1 receiver dead at 0 and sender correct; R2 sender
    /// dead at 0 and receiver correct; R3 both correct and every message sent
    /// before one tick past the later stop time of R1/R2 is lost (all messages
    /// when either never stops).
    ImpossibilityReport impossibility_probe(const ProtocolSpec &protocol, const SystemParams &params, Tick horizon,
                                            std::uint64_t seed);

    struct LambdaOptions
    {
        std::int64_t n_runs = 200;
        Tick horizon = 20000;
        std::uint64_t seed = 1;
        std::int64_t first_run = 0;
        unsigned jobs = 1;
        double min_invocations = 30.0; ///< mean invocations per run below this is flagged
    };

    struct LambdaEstimate
    {
        double lambda = 0.0;
        Interval ci95;
        double z = 0.0;
        double heartbeat_term = 0.0;
        EstimateReport c_avg;
        bool in_unit_interval = false;  ///< 0 < lambda < 1
        bool consistent = false;        ///< the interval meets [0, 1]
        bool low_invocations = false;
    };

    /// lambda = (mean c_avg - c_send / (delta sigma)) / Z. Requires
    /// alpha_p = alpha_q = 0 and sigma > 0.
    LambdaEstimate estimate_lambda(const SystemParams &params, const CostParams &costs, const LambdaOptions &options);

} // namespace relcost
