#pragma once

#include "relcost/estimate.hpp"
#include "relcost/model.hpp"

#include <optional>
#include <vector>

namespace relcost
{
    struct DeltaPoint
    {
        Tick delta = 1;
        double value = 0.0;
        double std_error = 0.0; ///< 0 for closed-form points
    };

    struct DeltaCurve
    {
        Tick delta_star = 1;
        double best = 0.0;
        std::vector<DeltaPoint> curve;
    };

    /// Index of the smallest value; ties go to the earlier (smaller delta) point.
    std::size_t argmin(const std::vector<DeltaPoint> &curve);

    /// Minimises the predicted average cost over the given deltas.
    DeltaCurve optimize_delta(const SystemParams &params, const CostParams &costs, std::optional<double> lambda,
                              const std::vector<Tick> &deltas);

    /// Simulated mean average cost at each delta, with the same run seeds at
    /// every delta.
    DeltaCurve simulate_delta_curve(const SystemParams &params, const CostParams &costs,
                                    const std::vector<Tick> &deltas, const EstimateOptions &options);

} // namespace relcost
