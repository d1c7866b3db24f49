#pragma once

#include "relcost/engine.hpp"
#include "relcost/model.hpp"

#include <vector>

namespace relcost
{
    /// A value read off a finite trace. When `censored` is set the true value
    /// lies beyond the horizon (possibly infinite) and `value` holds the
    /// horizon-truncated value instead.
    template <class T>
    struct Observed
    {
        T value{};
        bool censored = false;

        bool operator==(const Observed &) const = default;
    };

    struct CostBreakdown
    {
        Observed<std::int64_t> num_sends;
        Observed<Tick> wait;
        Observed<double> c0;
        Observed<double> c1;
    };

    /// max{min{t_p, t_q, t_f}, t_s} - t_s. Censored when none of the three
    /// times was observed before the horizon.
    Observed<Tick> t_wait(const RunTrace &trace);

    /// Msg + Ack + Req transmissions (heartbeats excluded). Censored when the
    /// protocol was still active at the horizon.
    Observed<std::int64_t> num_sends(const RunTrace &trace);

    /// num_sends * c_send + t_wait * c_wait.
    Observed<double> cost_c0(const RunTrace &trace, const CostParams &costs);

    /// n_exp ^ t_wait; the truncated value is n_exp ^ (horizon - t_s).
    Observed<double> cost_c1(const RunTrace &trace, const CostParams &costs);

    CostBreakdown breakdown(const RunTrace &trace, const CostParams &costs);

    struct AvgCostPoint
    {
        Tick t = 0;
        double c_total = 0.0;
        std::int64_t num_completed = 0;
        std::int64_t num_hb = 0;
        double ratio = 0.0; ///< c_total / (num_completed + 1)
    };

    struct AvgCostSeries
    {
        std::vector<AvgCostPoint> points; ///< one per tick with a completion or heartbeat, plus horizon - 1
        double running_sup = 0.0;
        double final_ratio = 0.0; ///< value at the last simulated tick
        std::int64_t incomplete = 0; ///< invocations excluded because they could still send
    };

    /// c0 of one invocation of a repeated run.
    double invocation_cost(const InvocationRecord &inv, const CostParams &costs);

    /// c_total(t) = cost of invocations completed by t + heartbeats sent by t
    /// times c_send, divided by (completed + 1). The running supremum is the
    /// finite-horizon stand-in for the lim sup.
    AvgCostSeries avg_cost_series(const RepeatedTrace &trace, const CostParams &costs);

    /// Final ratio only, without materialising the series.
    double final_avg_cost(const RepeatedTrace &trace, const CostParams &costs);

} // namespace relcost
