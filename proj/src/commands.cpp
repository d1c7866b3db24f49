#include "relcost/commands.hpp"

#include "relcost/cost.hpp"
#include "relcost/engine.hpp"
#include "relcost/estimate.hpp"
#include "relcost/optimize.hpp"
#include "relcost/parallel.hpp"
#include "relcost/probes.hpp"
#include "relcost/random.hpp"
#include "relcost/report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <ostream>

namespace relcost
{
    namespace
    {
        const ProtocolSpec &only_protocol(const ExperimentConfig &config, std::string_view command)
        {
            if (config.protocols.size() != 1)
                throw PreconditionError(fmt::format("{} takes exactly one protocol", command));
            return config.protocols.front();
        }

        nlohmann::json header(std::string_view command, const ExperimentConfig &config)
        {
            return {{"command", command}, {"config", to_json(config)}};
        }

        std::string trace_name(std::uint64_t seed) { return fmt::format("trace-{}.log", seed); }

        struct SingleTally
        {
            Accumulator sends, wait, c0, c1;
            std::int64_t sends_censored = 0, wait_censored = 0, c0_censored = 0, c1_censored = 0;
        };

        template <class T>
        void tally(Accumulator &acc, std::int64_t &censored, const Observed<T> &x)
        {
            if (x.censored)
                ++censored;
            else
                acc.add(static_cast<double>(x.value));
        }

        nlohmann::json aggregate_json(const Accumulator &acc, std::int64_t censored)
        {
            return {{"n_used", acc.count()},
                    {"censored", censored},
                    {"mean", acc.count() > 0 ? json_number(acc.mean()) : nlohmann::json("undefined")},
                    {"stderr", json_number(acc.std_error())}};
        }

        std::string aggregate_cell(const Accumulator &acc)
        {
            return acc.count() > 0 ? fmt::format("{:.4f}", acc.mean()) : "undefined";
        }

        CommandOutputs simulate_single(const ExperimentConfig &config, const ProtocolSpec &protocol, unsigned jobs)
        {
            CommandOutputs out;
            out.summary = header("simulate", config);

            auto blocks = map_blocks(config.n_runs, jobs, [&](std::int64_t begin, std::int64_t end) {
                SingleTally t;
                for (std::int64_t i = begin; i < end; ++i)
                {
                    const auto seed = run_seed(config.seed, static_cast<std::uint64_t>(i));
                    const CostBreakdown b = breakdown(run_single(protocol, config.params, seed, config.horizon), config.costs);
                    tally(t.sends, t.sends_censored, b.num_sends);
                    tally(t.wait, t.wait_censored, b.wait);
                    tally(t.c0, t.c0_censored, b.c0);
                    tally(t.c1, t.c1_censored, b.c1);
                }
                return t;
            });
            SingleTally total;
            for (const SingleTally &t : blocks)
            {
                total.sends.merge(t.sends);
                total.wait.merge(t.wait);
                total.c0.merge(t.c0);
                total.c1.merge(t.c1);
                total.sends_censored += t.sends_censored;
                total.wait_censored += t.wait_censored;
                total.c0_censored += t.c0_censored;
                total.c1_censored += t.c1_censored;
            }

            nlohmann::json runs = nlohmann::json::array();
            out.series_csv = csv_line({"seed", "num_sends", "sends_censored", "wait", "wait_censored", "c0", "c1"});
            const std::int64_t traced = std::min(config.traces, config.n_runs);
            for (std::int64_t i = 0; i < traced; ++i)
            {
                const auto seed = run_seed(config.seed, static_cast<std::uint64_t>(i));
                const RunTrace trace = run_single(protocol, config.params, seed, config.horizon);
                const CostBreakdown b = breakdown(trace, config.costs);
                nlohmann::json run = to_json(b);
                run["seed"] = seed;
                run["t_p"] = format_tick(trace.t_p, trace.horizon);
                run["t_q"] = format_tick(trace.t_q, trace.horizon);
                run["t_f"] = format_tick(trace.t_f, trace.horizon);
                run["truncated"] = trace.truncated;
                runs.push_back(run);
                out.series_csv += csv_line({fmt::format("{}", seed), fmt::format("{}", b.num_sends.value),
                                            b.num_sends.censored ? "1" : "0", fmt::format("{}", b.wait.value),
                                            b.wait.censored ? "1" : "0", format_number(b.c0.value),
                                            b.c1.censored ? "inf" : format_number(b.c1.value)});
                out.traces.emplace_back(trace_name(seed), serialize(trace));
            }

            out.summary["mode"] = "single";
            out.summary["protocol"] = to_json(protocol);
            out.summary["runs"] = runs;
            out.summary["aggregate"] = {{"n_send", aggregate_json(total.sends, total.sends_censored)},
                                        {"t_wait", aggregate_json(total.wait, total.wait_censored)},
                                        {"c0", aggregate_json(total.c0, total.c0_censored)},
                                        {"c1", aggregate_json(total.c1, total.c1_censored)}};

            TextTable table({"metric", "runs", "censored", "mean", "stderr"});
            auto row = [&](const char *name, const Accumulator &acc, std::int64_t censored) {
                table.add_row({name, fmt::format("{}", config.n_runs), fmt::format("{}", censored), aggregate_cell(acc),
                               fmt::format("{:.4f}", acc.std_error())});
            };
            row("n_send", total.sends, total.sends_censored);
            row("t_wait", total.wait, total.wait_censored);
            row("c0", total.c0, total.c0_censored);
            row("c1", total.c1, total.c1_censored);
            out.table = fmt::format("simulate {} runs={} horizon={} seed={}\n", to_string(protocol.kind),
                                    config.n_runs, config.horizon, config.seed) +
                        table.render();
            return out;
        }

        CommandOutputs simulate_repeated(const ExperimentConfig &config, unsigned jobs)
        {
            CommandOutputs out;
            out.summary = header("simulate", config);

            struct Tally
            {
                Accumulator final_ratio, running_sup, invocations, incomplete;
            };
            auto blocks = map_blocks(config.n_runs, jobs, [&](std::int64_t begin, std::int64_t end) {
                Tally t;
                for (std::int64_t i = begin; i < end; ++i)
                {
                    const auto seed = run_seed(config.seed, static_cast<std::uint64_t>(i));
                    const RepeatedTrace rt = run_repeated(config.params, seed, config.horizon);
                    const AvgCostSeries s = avg_cost_series(rt, config.costs);
                    t.final_ratio.add(s.final_ratio);
                    t.running_sup.add(s.running_sup);
                    t.invocations.add(static_cast<double>(rt.invocations.size()));
                    t.incomplete.add(static_cast<double>(s.incomplete));
                }
                return t;
            });
            Tally total;
            for (const Tally &t : blocks)
            {
                total.final_ratio.merge(t.final_ratio);
                total.running_sup.merge(t.running_sup);
                total.invocations.merge(t.invocations);
                total.incomplete.merge(t.incomplete);
            }

            nlohmann::json runs = nlohmann::json::array();
            const std::int64_t traced = std::min(config.traces, config.n_runs);
            for (std::int64_t i = 0; i < traced; ++i)
            {
                const auto seed = run_seed(config.seed, static_cast<std::uint64_t>(i));
                const RepeatedTrace rt = run_repeated(config.params, seed, config.horizon);
                const AvgCostSeries s = avg_cost_series(rt, config.costs);
                runs.push_back({{"seed", seed},
                                {"invocations", rt.invocations.size()},
                                {"incomplete", s.incomplete},
                                {"heartbeats_p", rt.heartbeats_p},
                                {"heartbeats_q", rt.heartbeats_q},
                                {"final_ratio", json_number(s.final_ratio)},
                                {"running_sup", json_number(s.running_sup)}});
                if (i == 0)
                    out.series_csv = avg_series_csv(s);
                out.traces.emplace_back(trace_name(seed), serialize(rt));
            }
            if (traced == 0)
                out.series_csv = csv_line({"t", "c_total", "num_completed", "num_hb", "ratio"});

            auto stats = [](const Accumulator &a) {
                return nlohmann::json{{"mean", json_number(a.mean())}, {"stderr", json_number(a.std_error())}};
            };
            out.summary["mode"] = "repeated";
            out.summary["runs"] = runs;
            out.summary["aggregate"] = {{"c_avg_at_horizon", stats(total.final_ratio)},
                                        {"c_avg_running_sup", stats(total.running_sup)},
                                        {"invocations", stats(total.invocations)},
                                        {"incomplete", stats(total.incomplete)}};

            TextTable table({"quantity", "mean", "stderr"});
            auto row = [&](const char *name, const Accumulator &a) {
                table.add_row({name, fmt::format("{:.4f}", a.mean()), fmt::format("{:.4f}", a.std_error())});
            };
            row("c_avg_at_horizon", total.final_ratio);
            row("c_avg_running_sup", total.running_sup);
            row("invocations", total.invocations);
            row("incomplete", total.incomplete);
            out.table = fmt::format("simulate repeated runs={} horizon={} seed={}\n", config.n_runs, config.horizon,
                                    config.seed) +
                        table.render();
            return out;
        }

        EstimateOptions estimate_options(const ExperimentConfig &config, unsigned jobs)
        {
            EstimateOptions eo;
            eo.n_runs = config.n_runs;
            eo.horizon = config.horizon;
            eo.seed = config.seed;
            eo.jobs = jobs;
            eo.epsilon_gate = config.epsilon_gate;
            eo.tolerance = config.tolerance;
            eo.lambda = config.lambda;
            return eo;
        }
    } // namespace

    CommandOutputs cmd_simulate(const ExperimentConfig &config, unsigned jobs)
    {
        if (config.mode == RunMode::Repeated)
            return simulate_repeated(config, jobs);
        return simulate_single(config, only_protocol(config, "simulate"), jobs);
    }

    CommandOutputs cmd_compare(const ExperimentConfig &config, unsigned jobs)
    {
        std::vector<Metric> metrics = config.metrics;
        if (metrics.empty())
            metrics = config.mode == RunMode::Repeated ? std::vector<Metric>{Metric::CAvg}
                                                       : std::vector<Metric>{Metric::TWait, Metric::NSend};
        const EstimateOptions eo = estimate_options(config, jobs);

        std::vector<EstimateReport> reports;
        if (config.mode == RunMode::Repeated)
        {
            for (Metric m : metrics)
                if (m != Metric::CAvg)
                    throw PreconditionError("repeated mode compares c_avg only");
            reports = estimate_many(ProtocolSpec{ProtocolKind::SRhb}, config.params, config.costs, metrics, eo);
        }
        else
        {
            for (const ProtocolSpec &p : config.protocols)
            {
                auto r = estimate_many(p, config.params, config.costs, metrics, eo);
                reports.insert(reports.end(), r.begin(), r.end());
            }
        }

        CommandOutputs out;
        out.summary = header("compare", config);
        nlohmann::json rows = nlohmann::json::array();
        bool all_pass = true;
        out.series_csv = csv_line({"protocol", "metric", "n_runs", "censored", "mean", "stderr", "closed_form",
                                   "relative_deviation", "tolerance", "verdict"});
        for (const EstimateReport &r : reports)
        {
            rows.push_back(to_json(r));
            all_pass = all_pass && r.verdict != Verdict::Fail;
            out.series_csv += csv_line(
                {std::string(to_string(r.protocol.kind)), std::string(to_string(r.metric)), fmt::format("{}", r.n_runs),
                 fmt::format("{}", r.censored), format_number(r.mean), format_number(r.std_error),
                 r.closed_form ? format_number(r.closed_form->value) : "",
                 r.relative_deviation ? format_number(*r.relative_deviation) : "", format_number(r.tolerance),
                 std::string(to_string(r.verdict))});
        }
        out.summary["rows"] = rows;
        out.summary["no_fail"] = all_pass;
        out.table = estimates_table(reports);
        return out;
    }

    CommandOutputs cmd_s2(const ExperimentConfig &config, unsigned jobs)
    {
        const ProtocolSpec &protocol = only_protocol(config, "s2");
        if (config.t_grid.empty())
            throw PreconditionError("s2 needs a non-empty 't_grid'");
        S2Options so;
        so.n_runs = config.n_runs;
        so.seed = config.seed;
        so.jobs = jobs;
        const auto curve = s2_curve(protocol, config.params, config.t_grid, so);

        CommandOutputs out;
        out.summary = header("s2", config);
        out.summary["protocol"] = to_json(protocol);
        out.summary["curve"] = to_json(curve);
        out.series_csv = csv_line({"t", "finished", "both_up", "probability", "stderr"});
        TextTable table({"t", "finished", "both_up", "probability", "stderr"});
        for (const S2Point &p : curve)
        {
            const std::string prob = p.probability ? format_number(*p.probability) : "undefined";
            out.series_csv += csv_line({fmt::format("{}", p.t), fmt::format("{}", p.finished),
                                        fmt::format("{}", p.both_up), prob, format_number(p.std_error)});
            table.add_row({fmt::format("{}", p.t), fmt::format("{}", p.finished), fmt::format("{}", p.both_up),
                           p.probability ? fmt::format("{:.4f}", *p.probability) : "undefined",
                           fmt::format("{:.4f}", p.std_error)});
        }
        out.table = table.render();
        return out;
    }

    CommandOutputs cmd_probe(const ExperimentConfig &config, unsigned jobs)
    {
        CommandOutputs out;
        out.summary = header("probe", config);
        switch (config.probe)
        {
        case ProbeKind::Divergence:
        {
            const ProtocolSpec &protocol = only_protocol(config, "probe");
            if (config.horizons.empty())
                throw PreconditionError("divergence probe needs 'horizons'");
            GrowthOptions go;
            go.n_runs = config.n_runs;
            go.seed = config.seed;
            go.jobs = jobs;
            go.metric = config.metrics.empty() ? Metric::NSend : config.metrics.front();
            go.growth_threshold = config.growth_threshold;
            go.stable_tolerance = config.stable_tolerance;
            if (go.metric == Metric::C1)
                require_valid(validate_c1(config.params, config.costs));
            const GrowthReport r = divergence_probe(protocol, config.params, config.costs, config.horizons, go);
            out.summary["probe"] = "divergence";
            out.summary["protocol"] = to_json(protocol);
            out.summary["report"] = to_json(r);
            out.series_csv = csv_line({"horizon", "mean", "stderr", "censored", "ratio"});
            TextTable table({"horizon", "mean", "stderr", "censored", "ratio"});
            for (const GrowthRow &row : r.rows)
            {
                out.series_csv += csv_line({fmt::format("{}", row.horizon), format_number(row.mean),
                                            format_number(row.std_error), fmt::format("{}", row.censored),
                                            row.ratio ? format_number(*row.ratio) : ""});
                table.add_row({fmt::format("{}", row.horizon), fmt::format("{:.4f}", row.mean),
                               fmt::format("{:.4f}", row.std_error), fmt::format("{}", row.censored),
                               row.ratio ? fmt::format("{:.3f}", *row.ratio) : "-"});
            }
            out.table = table.render() + fmt::format("verdict: {} (growth heuristic, threshold {}, tolerance {})\n",
                                                     to_string(r.verdict), r.growth_threshold, r.stable_tolerance);
            break;
        }
        case ProbeKind::Impossibility:
        {
            nlohmann::json reports = nlohmann::json::array();
            out.series_csv = csv_line({"protocol", "scenario", "num_sends", "sends_stopped", "stop_time",
                                       "receiver_finished", "wait", "wait_censored", "unbounded"});
            TextTable table({"protocol", "scenario", "sends", "stopped", "finished", "wait", "unbounded"});
            std::string notes;
            for (const ProtocolSpec &p : config.protocols)
            {
                const ImpossibilityReport r = impossibility_probe(p, config.params, config.horizon, config.seed);
                reports.push_back(to_json(r));
                for (const ScenarioResult &s : r.scenarios)
                {
                    const std::string kind(to_string(p.kind));
                    out.series_csv += csv_line({kind, s.name, fmt::format("{}", s.num_sends),
                                                s.sends_stopped ? "1" : "0", fmt::format("{}", s.stop_time),
                                                s.receiver_finished ? "1" : "0", fmt::format("{}", s.wait.value),
                                                s.wait.censored ? "1" : "0", s.unbounded ? "1" : "0"});
                    table.add_row({kind, s.name, fmt::format("{}", s.num_sends), s.sends_stopped ? "yes" : "no",
                                   s.receiver_finished ? "yes" : "no",
                                   s.wait.censored ? fmt::format(">={}", s.wait.value) : fmt::format("{}", s.wait.value),
                                   s.unbounded ? "yes" : "no"});
                }
                notes += fmt::format("{}: {}\n", to_string(p.kind), r.note);
            }
            out.summary["probe"] = "impossibility";
            out.summary["reports"] = reports;
            out.table = table.render() + notes;
            break;
        }
        case ProbeKind::Lambda:
        {
            LambdaOptions lo;
            lo.n_runs = config.n_runs;
            lo.horizon = config.horizon;
            lo.seed = config.seed;
            lo.jobs = jobs;
            const LambdaEstimate e = estimate_lambda(config.params, config.costs, lo);
            out.summary["probe"] = "lambda";
            out.summary["estimate"] = to_json(e);
            out.series_csv = csv_line({"lambda", "ci_lo", "ci_hi", "c_avg", "c_avg_stderr", "z", "heartbeat_term",
                                       "mean_invocations"});
            out.series_csv += csv_line({format_number(e.lambda), format_number(e.ci95.lo), format_number(e.ci95.hi),
                                        format_number(e.c_avg.mean), format_number(e.c_avg.std_error),
                                        format_number(e.z), format_number(e.heartbeat_term),
                                        format_number(e.c_avg.mean_invocations.value_or(0.0))});
            TextTable table({"quantity", "value"});
            table.add_row({"lambda", fmt::format("{:.4f}", e.lambda)});
            table.add_row({"ci95", fmt::format("[{:.4f}, {:.4f}]", e.ci95.lo, e.ci95.hi)});
            table.add_row({"c_avg", fmt::format("{:.4f}", e.c_avg.mean)});
            table.add_row({"z", fmt::format("{:.4f}", e.z)});
            table.add_row({"heartbeat_term", fmt::format("{:.4f}", e.heartbeat_term)});
            table.add_row({"mean_invocations", fmt::format("{:.2f}", e.c_avg.mean_invocations.value_or(0.0))});
            table.add_row({"in_unit_interval", e.in_unit_interval ? "yes" : "no"});
            table.add_row({"consistent", e.consistent ? "yes" : "INCONSISTENT"});
            table.add_row({"low_invocations", e.low_invocations ? "yes" : "no"});
            out.table = table.render();
            break;
        }
        }
        return out;
    }

    CommandOutputs cmd_optimize(const ExperimentConfig &config, unsigned jobs)
    {
        if (config.delta_range.empty())
            throw PreconditionError("optimize needs a non-empty 'delta_range'");
        const DeltaCurve predicted = optimize_delta(config.params, config.costs, config.lambda, config.delta_range);

        CommandOutputs out;
        out.summary = header("optimize", config);
        out.summary["predicted"] = to_json(predicted);

        std::optional<DeltaCurve> simulated;
        if (config.simulate_curve)
        {
            simulated = simulate_delta_curve(config.params, config.costs, config.delta_range,
                                             estimate_options(config, jobs));
            out.summary["simulated"] = to_json(*simulated);
        }

        out.series_csv = simulated ? csv_line({"delta", "predicted", "simulated", "simulated_stderr"})
                                   : csv_line({"delta", "predicted"});
        TextTable table(simulated ? std::vector<std::string>{"delta", "predicted", "simulated", "stderr"}
                                  : std::vector<std::string>{"delta", "predicted"});
        for (std::size_t i = 0; i < predicted.curve.size(); ++i)
        {
            const DeltaPoint &p = predicted.curve[i];
            std::vector<std::string> csv{fmt::format("{}", p.delta), format_number(p.value)};
            std::vector<std::string> cells{fmt::format("{}", p.delta), fmt::format("{:.4f}", p.value)};
            if (simulated)
            {
                const DeltaPoint &s = simulated->curve[i];
                csv.push_back(format_number(s.value));
                csv.push_back(format_number(s.std_error));
                cells.push_back(fmt::format("{:.4f}", s.value));
                cells.push_back(fmt::format("{:.4f}", s.std_error));
            }
            out.series_csv += csv_line(csv);
            table.add_row(cells);
        }
        out.table = table.render() + fmt::format("delta* (predicted) = {}\n", predicted.delta_star);
        if (simulated)
            out.table += fmt::format("delta* (simulated) = {}\n", simulated->delta_star);
        return out;
    }

    void write_outputs(const std::filesystem::path &dir, const CommandOutputs &outputs)
    {
        std::filesystem::create_directories(dir);
        auto write = [&](const std::string &name, const std::string &text) {
            std::ofstream f(dir / name, std::ios::binary);
            if (!f)
                throw std::runtime_error(fmt::format("cannot write '{}'", (dir / name).string()));
            f << text;
        };
        write("summary.json", outputs.summary.dump(2) + "\n");
        write("table.txt", outputs.table);
        write("series.csv", outputs.series_csv);
        for (const auto &[name, text] : outputs.traces)
            write(name, text);
    }

    int run_command(const CommandRequest &request, std::ostream &out, std::ostream &err)
    {
        ExperimentConfig config;
        try
        {
            config = load_config(request.config);
            if (request.seed_override)
                config.seed = *request.seed_override;
        }
        catch (const std::exception &e)
        {
            err << "config error: " << e.what() << '\n';
            return kExitConfigError;
        }

        try
        {
            const unsigned jobs = std::max(1u, request.jobs);
            CommandOutputs outputs;
            if (request.command == "simulate")
                outputs = cmd_simulate(config, jobs);
            else if (request.command == "compare")
                outputs = cmd_compare(config, jobs);
            else if (request.command == "s2")
                outputs = cmd_s2(config, jobs);
            else if (request.command == "probe")
                outputs = cmd_probe(config, jobs);
            else if (request.command == "optimize")
                outputs = cmd_optimize(config, jobs);
            else
            {
                err << "unknown command '" << request.command << "'\n";
                return kExitConfigError;
            }
            write_outputs(request.out, outputs);
            out << outputs.table;
        }
        catch (const PreconditionError &e)
        {
            err << "config error: " << e.what() << '\n';
            return kExitConfigError;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return kExitRuntimeError;
        }
        return kExitOk;
    }

} // namespace relcost
