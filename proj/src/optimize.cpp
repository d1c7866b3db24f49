#include "relcost/optimize.hpp"

#include "relcost/closed_forms.hpp"

#include <algorithm>

namespace relcost
{
    namespace
    {
        void check_range(const std::vector<Tick> &deltas)
        {
            if (deltas.empty())
                throw PreconditionError("delta range must not be empty");
            if (std::any_of(deltas.begin(), deltas.end(), [](Tick d) { return d < 1; }))
                throw PreconditionError("every delta must be >= 1");
        }

        DeltaCurve finish(std::vector<DeltaPoint> curve)
        {
            DeltaCurve out;
            const std::size_t best = argmin(curve);
            out.delta_star = curve[best].delta;
            out.best = curve[best].value;
            out.curve = std::move(curve);
            return out;
        }
    } // namespace

    std::size_t argmin(const std::vector<DeltaPoint> &curve)
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < curve.size(); ++i)
        {
            const bool lower = curve[i].value < curve[best].value;
            const bool tie_smaller = curve[i].value == curve[best].value && curve[i].delta < curve[best].delta;
            if (lower || tie_smaller)
                best = i;
        }
        return best;
    }

    DeltaCurve optimize_delta(const SystemParams &params, const CostParams &costs, std::optional<double> lambda,
                              const std::vector<Tick> &deltas)
    {
        check_range(deltas);
        std::vector<DeltaPoint> curve;
        curve.reserve(deltas.size());
        SystemParams p = params;
        for (Tick d : deltas)
        {
            p.delta = d;
            curve.push_back({d, closed_form_avg_cost(p, costs, lambda).c_avg, 0.0});
        }
        return finish(std::move(curve));
    }

    DeltaCurve simulate_delta_curve(const SystemParams &params, const CostParams &costs,
                                    const std::vector<Tick> &deltas, const EstimateOptions &options)
    {
        check_range(deltas);
        std::vector<DeltaPoint> curve;
        curve.reserve(deltas.size());
        SystemParams p = params;
        EstimateOptions eo = options;
        eo.tolerance.reset();
        for (Tick d : deltas)
        {
            p.delta = d;
            const EstimateReport r = estimate(ProtocolSpec{ProtocolKind::SRhb}, p, costs, Metric::CAvg, eo);
            curve.push_back({d, r.mean, r.std_error});
        }
        return finish(std::move(curve));
    }

} // namespace relcost
