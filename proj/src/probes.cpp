#include "relcost/probes.hpp"

#include "relcost/closed_forms.hpp"
#include "relcost/parallel.hpp"
#include "relcost/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace relcost
{
    std::string_view to_string(GrowthVerdict v) noexcept
    {
        switch (v)
        {
        case GrowthVerdict::Divergent:
            return "DIVERGENT";
        case GrowthVerdict::Bounded:
            return "BOUNDED";
        case GrowthVerdict::Inconclusive:
            return "INCONCLUSIVE";
        }
        return "?";
    }

    std::vector<S2Point> s2_curve(const ProtocolSpec &protocol, const SystemParams &params,
                                  const std::vector<Tick> &t_grid, const S2Options &options)
    {
        if (t_grid.empty())
            throw PreconditionError("t_grid must not be empty");
        if (!std::is_sorted(t_grid.begin(), t_grid.end()) ||
            std::adjacent_find(t_grid.begin(), t_grid.end()) != t_grid.end())
            throw PreconditionError("t_grid must be strictly increasing");
        if (t_grid.front() < 0)
            throw PreconditionError("t_grid must be non-negative");
        if (options.n_runs < 1)
            throw PreconditionError("n_runs must be >= 1");

        const Tick horizon = t_grid.back() + 1;
        struct Counts
        {
            std::vector<std::int64_t> finished;
            std::vector<std::int64_t> both_up;
        };

        auto blocks = map_blocks(options.n_runs, options.jobs, [&](std::int64_t begin, std::int64_t end) {
            Counts c;
            c.finished.assign(t_grid.size(), 0);
            c.both_up.assign(t_grid.size(), 0);
            for (std::int64_t i = begin; i < end; ++i)
            {
                const RunTrace tr =
                    run_single(protocol, params, run_seed(options.seed, static_cast<std::uint64_t>(i)), horizon);
                for (std::size_t k = 0; k < t_grid.size(); ++k)
                {
                    const Tick t = t_grid[k];
                    if (tr.t_p < t || tr.t_q < t)
                        continue;
                    ++c.both_up[k];
                    if (tr.t_f < t)
                        ++c.finished[k];
                }
            }
            return c;
        });

        std::vector<S2Point> out(t_grid.size());
        for (std::size_t k = 0; k < t_grid.size(); ++k)
        {
            S2Point &p = out[k];
            p.t = t_grid[k];
            for (const Counts &c : blocks)
            {
                p.finished += c.finished[k];
                p.both_up += c.both_up[k];
            }
            if (p.both_up > 0)
            {
                const double n = static_cast<double>(p.both_up);
                const double prob = static_cast<double>(p.finished) / n;
                p.probability = prob;
                p.std_error = std::sqrt(prob * (1.0 - prob) / n);
            }
        }
        return out;
    }

    GrowthVerdict classify_growth(const std::vector<GrowthRow> &rows, double growth_threshold,
                                  double stable_tolerance) noexcept
    {
        if (rows.size() < 2)
            return GrowthVerdict::Inconclusive;
        const bool growing = std::all_of(rows.begin() + 1, rows.end(), [&](const GrowthRow &r) {
            return r.ratio && *r.ratio >= growth_threshold;
        });
        if (growing)
            return GrowthVerdict::Divergent;
        const double prev = rows[rows.size() - 2].mean;
        const double last = rows.back().mean;
        if (prev == last || std::fabs(last - prev) <= stable_tolerance * std::fabs(prev))
            return GrowthVerdict::Bounded;
        return GrowthVerdict::Inconclusive;
    }

    GrowthReport divergence_probe(const ProtocolSpec &protocol, const SystemParams &params, const CostParams &costs,
                                  const std::vector<Tick> &horizons, const GrowthOptions &options)
    {
        if (horizons.empty())
            throw PreconditionError("horizons must not be empty");
        for (std::size_t i = 1; i < horizons.size(); ++i)
            if (horizons[i] <= horizons[i - 1])
                throw PreconditionError("horizons must be strictly increasing");

        GrowthReport report;
        report.metric = options.metric;
        report.growth_threshold = options.growth_threshold;
        report.stable_tolerance = options.stable_tolerance;

        EstimateOptions eo;
        eo.n_runs = options.n_runs;
        eo.seed = options.seed;
        eo.jobs = options.jobs;
        eo.truncated = true;
        for (Tick h : horizons)
        {
            eo.horizon = h;
            const EstimateReport r = estimate(protocol, params, costs, options.metric, eo);
            GrowthRow row;
            row.horizon = h;
            row.mean = r.mean;
            row.std_error = r.std_error;
            row.censored = r.censored;
            if (!report.rows.empty() && report.rows.back().mean > 0.0)
                row.ratio = r.mean / report.rows.back().mean;
            report.rows.push_back(row);
        }
        report.verdict = classify_growth(report.rows, options.growth_threshold, options.stable_tolerance);
        return report;
    }

    namespace
    {
        ScenarioResult run_scenario(std::string name, std::string description, const ProtocolSpec &protocol,
                                    const SystemParams &params, Tick horizon, std::uint64_t seed, Lifetimes life,
                                    Tick loss_until)
        {
            RunOverrides ov;
            ov.lifetimes = life;
            if (loss_until > 0)
                ov.force_loss = [loss_until](const MessageRecord &m) { return m.send_time < loss_until; };

            ScenarioResult s;
            s.name = std::move(name);
            s.description = std::move(description);
            s.lifetimes = life;
            s.loss_until = loss_until;
            s.trace = run_single(protocol, params, seed, horizon, ov);
            s.num_sends = num_sends(s.trace).value;
            s.sends_stopped = !s.trace.truncated;
            for (const MessageRecord &m : s.trace.messages)
                if (m.kind != PayloadKind::Hbmsg)
                    s.stop_time = std::max(s.stop_time, m.send_time + 1);
            s.receiver_finished = s.trace.is_finite(s.trace.t_f);
            s.wait = t_wait(s.trace);
            s.unbounded = s.trace.truncated || s.wait.censored;
            return s;
        }
    } // namespace

    ImpossibilityReport impossibility_probe(const ProtocolSpec &protocol, const SystemParams &params, Tick horizon,
                                            std::uint64_t seed)
    {
        ImpossibilityReport report;
        report.protocol = protocol;
        report.horizon = horizon;

        auto r1 = run_scenario("R1", "receiver crashes at 0, sender correct", protocol, params, horizon, seed,
                               Lifetimes{kNever, 0}, 0);
        auto r2 = run_scenario("R2", "sender crashes at 0, receiver correct", protocol, params, horizon, seed,
                               Lifetimes{0, kNever}, 0);
        const Tick loss_until =
            r1.sends_stopped && r2.sends_stopped ? std::max(r1.stop_time, r2.stop_time) + 1 : horizon;
        auto r3 = run_scenario("R3", fmt::format("both correct, every message sent before {} lost", loss_until),
                               protocol, params, horizon, seed, Lifetimes{kNever, kNever}, loss_until);

        report.scenarios = {std::move(r1), std::move(r2), std::move(r3)};
        report.unbounded_signature = std::any_of(report.scenarios.begin(), report.scenarios.end(),
                                                 [](const ScenarioResult &s) { return s.unbounded; });
        const ScenarioResult &first = report.scenarios.front();
        report.heartbeat_escape = uses_heartbeats(protocol.kind) && first.sends_stopped && first.num_sends == 0 &&
                                  !first.receiver_finished && !report.unbounded_signature;
        if (report.heartbeat_escape)
            report.note = "sender stays silent without heartbeats from the crashed receiver; the receiver never "
                          "finishes but c0 charges nothing for it";
        else if (report.unbounded_signature)
            report.note = "at least one forced scenario keeps sending or waiting until the horizon";
        else
            report.note = "no scenario reached the horizon with unbounded cost";
        return report;
    }

    LambdaEstimate estimate_lambda(const SystemParams &params, const CostParams &costs, const LambdaOptions &options)
    {
        if (params.alpha_p != 0.0 || params.alpha_q != 0.0)
            throw PreconditionError("lambda estimation requires alpha_p = alpha_q = 0");
        if (!(params.sigma > 0.0))
            throw PreconditionError("lambda estimation requires sigma > 0");

        EstimateOptions eo;
        eo.n_runs = options.n_runs;
        eo.horizon = options.horizon;
        eo.seed = options.seed;
        eo.first_run = options.first_run;
        eo.jobs = options.jobs;

        LambdaEstimate out;
        out.c_avg = estimate(ProtocolSpec{ProtocolKind::SRhb}, params, costs, Metric::CAvg, eo);
        out.z = avg_cost_z(params, costs);
        out.heartbeat_term = costs.c_send / (static_cast<double>(params.delta) * params.sigma);
        if (!(out.z > 0.0))
            throw PreconditionError("lambda is undefined when the per-invocation cost is 0");
        out.lambda = (out.c_avg.mean - out.heartbeat_term) / out.z;
        out.ci95 = {(out.c_avg.ci95.lo - out.heartbeat_term) / out.z, (out.c_avg.ci95.hi - out.heartbeat_term) / out.z};
        out.in_unit_interval = out.lambda > 0.0 && out.lambda < 1.0;
        out.consistent = out.ci95.hi >= 0.0 && out.ci95.lo <= 1.0;
        out.low_invocations = out.c_avg.mean_invocations.value_or(0.0) < options.min_invocations;
        return out;
    }

} // namespace relcost
