#pragma once

#include "relcost/model.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace relcost
{
    enum class Metric
    {
        TWait,
        NSend,
        C0,
        C1,
        CAvg,
    };

    std::string_view to_string(Metric m) noexcept;
    Metric metric_from_string(std::string_view name);

    struct ProtocolPrediction
    {
        double e_twait = 0.0;
        double e_nsend = 0.0;
    };

    /// Expected wait and send count of the trivial, sender-driven and
    /// receiver-driven protocols when neither process is correct.
    struct SmallRateTable
    {
        ProtocolPrediction trivial;
        ProtocolPrediction sender;
        ProtocolPrediction receiver;
    };

    /// Requires alpha_p == alpha_q == 0; throws PreconditionError otherwise.
    SmallRateTable closed_form_small_rates(const SystemParams &params);

    struct HeartbeatPrediction
    {
        double e_twait = 0.0; ///< 2 tau
        double e_nsend = 0.0; ///< 2 ceil(2 tau / delta)
        double cost = 0.0;    ///< e_twait * c_wait + e_nsend * c_send
    };

    HeartbeatPrediction closed_form_heartbeat(const SystemParams &params, const CostParams &costs);

    /// ceil(2 tau / delta).
    Tick sends_per_direction(const SystemParams &params) noexcept;

    /// Per-invocation cost of the heartbeat protocol:
    /// 2 ceil(2 tau / delta) c_send + (tau + (delta - 1) / 2) c_wait.
    double avg_cost_z(const SystemParams &params, const CostParams &costs) noexcept;

    struct AvgCostPrediction
    {
        double coefficient = 0.0; ///< (1 - alpha_p)(1 - alpha_q) lambda + alpha_p alpha_q
        double z = 0.0;
        double heartbeat_term = 0.0; ///< c_send / (delta sigma)
        double c_avg = 0.0;
    };

    /// Needs sigma > 0, and lambda whenever (1 - alpha_p)(1 - alpha_q) > 0.
    AvgCostPrediction closed_form_avg_cost(const SystemParams &params, const CostParams &costs,
                                    std::optional<double> lambda);

    /// True when gamma and the crash rate of every possibly-faulty process
    /// are at most epsilon.
    bool in_small_regime(const SystemParams &params, double epsilon) noexcept;

    struct Prediction
    {
        double value = 0.0;
        std::string source; ///< short label of the formula used
    };

    /// Closed form matching (protocol, metric), or nothing when none applies
    /// or the parameters are outside the small-rate regime.
    std::optional<Prediction> predict(const ProtocolSpec &protocol, Metric metric, const SystemParams &params,
                                      const CostParams &costs, double epsilon_gate,
                                      std::optional<double> lambda = std::nullopt);

} // namespace relcost
