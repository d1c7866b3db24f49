#include "relcost/cost.hpp"

#include <algorithm>
#include <cmath>

namespace relcost
{
    Observed<Tick> t_wait(const RunTrace &trace)
    {
        const Tick first = std::min({trace.t_p, trace.t_q, trace.t_f});
        if (!trace.is_finite(first))
            return {trace.horizon - trace.t_s, true};
        return {std::max(first, trace.t_s) - trace.t_s, false};
    }

    Observed<std::int64_t> num_sends(const RunTrace &trace)
    {
        const auto n = std::count_if(trace.messages.begin(), trace.messages.end(),
                                     [](const MessageRecord &m) { return m.kind != PayloadKind::Hbmsg; });
        return {static_cast<std::int64_t>(n), trace.truncated};
    }

    Observed<double> cost_c0(const RunTrace &trace, const CostParams &costs)
    {
        const auto sends = num_sends(trace);
        const auto wait = t_wait(trace);
        return {static_cast<double>(sends.value) * costs.c_send + static_cast<double>(wait.value) * costs.c_wait,
                sends.censored || wait.censored};
    }

    Observed<double> cost_c1(const RunTrace &trace, const CostParams &costs)
    {
        const auto wait = t_wait(trace);
        return {std::pow(costs.n_exp, static_cast<double>(wait.value)), wait.censored};
    }

    CostBreakdown breakdown(const RunTrace &trace, const CostParams &costs)
    {
        return {num_sends(trace), t_wait(trace), cost_c0(trace, costs), cost_c1(trace, costs)};
    }

    double invocation_cost(const InvocationRecord &inv, const CostParams &costs)
    {
        return static_cast<double>(inv.num_sends) * costs.c_send + static_cast<double>(inv.wait) * costs.c_wait;
    }

    namespace
    {
        struct Completion
        {
            Tick t;
            double cost;
        };

        std::vector<Completion> completions(const RepeatedTrace &trace, const CostParams &costs,
                                            std::int64_t &incomplete)
        {
            std::vector<Completion> out;
            incomplete = 0;
            for (const InvocationRecord &inv : trace.invocations)
            {
                if (inv.complete)
                    out.push_back({inv.completion, invocation_cost(inv, costs)});
                else
                    ++incomplete;
            }
            std::stable_sort(out.begin(), out.end(),
                             [](const Completion &a, const Completion &b) { return a.t < b.t; });
            return out;
        }
    } // namespace

    AvgCostSeries avg_cost_series(const RepeatedTrace &trace, const CostParams &costs)
    {
        AvgCostSeries series;
        const auto done = completions(trace, costs, series.incomplete);
        const auto &hb = trace.heartbeat_times;

        double protocol_cost = 0.0;
        std::int64_t completed = 0;
        std::size_t ci = 0;
        std::size_t hi = 0;
        bool have_sup = false;

        auto push = [&](Tick t) {
            AvgCostPoint pt;
            pt.t = t;
            pt.num_completed = completed;
            pt.num_hb = static_cast<std::int64_t>(hi);
            pt.c_total = protocol_cost + static_cast<double>(pt.num_hb) * costs.c_send;
            pt.ratio = pt.c_total / static_cast<double>(completed + 1);
            series.running_sup = have_sup ? std::max(series.running_sup, pt.ratio) : pt.ratio;
            have_sup = true;
            series.points.push_back(pt);
        };

        while (ci < done.size() || hi < hb.size())
        {
            const Tick next = std::min(ci < done.size() ? done[ci].t : kNever, hi < hb.size() ? hb[hi] : kNever);
            while (ci < done.size() && done[ci].t == next)
            {
                protocol_cost += done[ci].cost;
                ++completed;
                ++ci;
            }
            while (hi < hb.size() && hb[hi] == next)
                ++hi;
            push(next);
        }
        const Tick last = trace.horizon - 1;
        if (series.points.empty() || series.points.back().t != last)
            push(last);
        series.final_ratio = series.points.back().ratio;
        return series;
    }

    double final_avg_cost(const RepeatedTrace &trace, const CostParams &costs)
    {
        double protocol_cost = 0.0;
        std::int64_t completed = 0;
        for (const InvocationRecord &inv : trace.invocations)
        {
            if (!inv.complete)
                continue;
            protocol_cost += invocation_cost(inv, costs);
            ++completed;
        }
        const double hb = static_cast<double>(trace.heartbeat_times.size()) * costs.c_send;
        return (protocol_cost + hb) / static_cast<double>(completed + 1);
    }

} // namespace relcost
