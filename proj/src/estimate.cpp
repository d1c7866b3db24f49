#include "relcost/estimate.hpp"

#include "relcost/cost.hpp"
#include "relcost/parallel.hpp"
#include "relcost/random.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace relcost
{
    namespace
    {
        struct MetricTally
        {
            Accumulator used;
            std::int64_t censored = 0;
        };

        struct BlockTally
        {
            std::vector<MetricTally> metrics;
            Accumulator invocations;
        };

        template <class T>
        void record(MetricTally &tally, const Observed<T> &x, bool truncated)
        {
            if (x.censored)
                ++tally.censored;
            if (!x.censored || truncated)
                tally.used.add(static_cast<double>(x.value));
        }
    } // namespace

    std::string_view to_string(Verdict v) noexcept
    {
        switch (v)
        {
        case Verdict::Pass:
            return "PASS";
        case Verdict::Fail:
            return "FAIL";
        case Verdict::NoPrediction:
            return "NO-PREDICTION";
        }
        return "?";
    }

    double default_tolerance(const ProtocolSpec &protocol) noexcept
    {
        return protocol.kind == ProtocolKind::Trivial ? 0.02 : 0.05;
    }

    std::vector<EstimateReport> estimate_many(const ProtocolSpec &protocol, const SystemParams &params,
                                              const CostParams &costs, const std::vector<Metric> &metrics,
                                              const EstimateOptions &options)
    {
        if (options.n_runs < 2)
            throw PreconditionError("n_runs must be >= 2");
        if (metrics.empty())
            throw PreconditionError("no metric requested");
        require_valid(validate(params, costs));
        require_valid(validate_protocol(protocol, params));

        const bool need_single = std::any_of(metrics.begin(), metrics.end(), [](Metric m) { return m != Metric::CAvg; });
        const bool need_repeated = std::any_of(metrics.begin(), metrics.end(), [](Metric m) { return m == Metric::CAvg; });
        if (need_repeated && !(params.sigma > 0.0))
            throw PreconditionError("c_avg requires sigma > 0");

        auto blocks = map_blocks(options.n_runs, options.jobs, [&](std::int64_t begin, std::int64_t end) {
            BlockTally tally;
            tally.metrics.resize(metrics.size());
            for (std::int64_t i = begin; i < end; ++i)
            {
                const std::uint64_t seed = run_seed(options.seed, static_cast<std::uint64_t>(options.first_run + i));
                std::optional<CostBreakdown> single;
                if (need_single)
                    single = breakdown(run_single(protocol, params, seed, options.horizon), costs);
                std::optional<double> avg;
                if (need_repeated)
                {
                    const RepeatedTrace rt = run_repeated(params, seed, options.horizon);
                    avg = final_avg_cost(rt, costs);
                    tally.invocations.add(static_cast<double>(rt.invocations.size()));
                }
                for (std::size_t m = 0; m < metrics.size(); ++m)
                {
                    MetricTally &t = tally.metrics[m];
                    switch (metrics[m])
                    {
                    case Metric::TWait:
                        record(t, single->wait, options.truncated);
                        break;
                    case Metric::NSend:
                        record(t, single->num_sends, options.truncated);
                        break;
                    case Metric::C0:
                        record(t, single->c0, options.truncated);
                        break;
                    case Metric::C1:
                        record(t, single->c1, options.truncated);
                        break;
                    case Metric::CAvg:
                        t.used.add(*avg);
                        break;
                    }
                }
            }
            return tally;
        });

        std::vector<EstimateReport> reports(metrics.size());
        Accumulator invocations;
        for (const BlockTally &b : blocks)
            invocations.merge(b.invocations);

        for (std::size_t m = 0; m < metrics.size(); ++m)
        {
            EstimateReport &r = reports[m];
            r.metric = metrics[m];
            r.protocol = metrics[m] == Metric::CAvg ? ProtocolSpec{ProtocolKind::SRhb, protocol.ack_base} : protocol;
            r.n_runs = options.n_runs;
            for (const BlockTally &b : blocks)
            {
                r.samples.merge(b.metrics[m].used);
                r.censored += b.metrics[m].censored;
            }
            if (r.samples.count() == 0)
                throw PreconditionError(fmt::format("all {} runs censored for metric {}", r.n_runs, to_string(r.metric)));
            r.mean = r.samples.mean();
            r.std_error = r.samples.std_error();
            r.ci95 = r.samples.ci95();
            r.tolerance = options.tolerance.value_or(default_tolerance(r.protocol));
            if (r.metric == Metric::CAvg)
                r.mean_invocations = invocations.mean();

            r.closed_form = predict(r.protocol, r.metric, params, costs, options.epsilon_gate, options.lambda);
            if (r.closed_form)
            {
                r.relative_deviation = relative_deviation(r.mean, r.closed_form->value);
                r.verdict = *r.relative_deviation <= r.tolerance ? Verdict::Pass : Verdict::Fail;
            }
        }
        return reports;
    }

    EstimateReport estimate(const ProtocolSpec &protocol, const SystemParams &params, const CostParams &costs,
                            Metric metric, const EstimateOptions &options)
    {
        return estimate_many(protocol, params, costs, {metric}, options).front();
    }

} // namespace relcost
