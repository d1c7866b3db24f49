#include "relcost/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace relcost
{
    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        return fmt::format("{}", x);
    }

    nlohmann::json json_number(double x)
    {
        if (std::isfinite(x))
            return x;
        return format_number(x);
    }

    TextTable::TextTable(std::vector<std::string> header) : m_header(std::move(header)) {}

    void TextTable::add_row(std::vector<std::string> row)
    {
        row.resize(m_header.size());
        m_rows.push_back(std::move(row));
    }

    std::string TextTable::render() const
    {
        std::vector<std::size_t> width(m_header.size());
        for (std::size_t c = 0; c < m_header.size(); ++c)
        {
            width[c] = m_header[c].size();
            for (const auto &row : m_rows)
                width[c] = std::max(width[c], row[c].size());
        }
        std::string out;
        auto line = [&](const std::vector<std::string> &cells) {
            std::string text;
            for (std::size_t c = 0; c < cells.size(); ++c)
            {
                if (c > 0)
                    text += "  ";
                text += fmt::format("{:<{}}", cells[c], width[c]);
            }
            while (!text.empty() && text.back() == ' ')
                text.pop_back();
            out += text;
            out += '\n';
        };
        line(m_header);
        std::vector<std::string> rule;
        for (std::size_t w : width)
            rule.emplace_back(w, '-');
        line(rule);
        for (const auto &row : m_rows)
            line(row);
        return out;
    }

    std::string csv_line(const std::vector<std::string> &fields)
    {
        std::string out;
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i > 0)
                out += ',';
            out += fields[i];
        }
        out += '\n';
        return out;
    }

    namespace
    {
        template <class T>
        nlohmann::json observed_json(const Observed<T> &x)
        {
            return {{"value", json_number(static_cast<double>(x.value))}, {"censored", x.censored}};
        }

        nlohmann::json interval_json(const Interval &i)
        {
            return nlohmann::json::array({json_number(i.lo), json_number(i.hi)});
        }
    } // namespace

    nlohmann::json to_json(const ProtocolSpec &spec)
    {
        nlohmann::json j{{"kind", to_string(spec.kind)}};
        if (spec.kind == ProtocolKind::Pathological)
            j["ack_base"] = spec.ack_base;
        return j;
    }

    nlohmann::json to_json(const CostBreakdown &b)
    {
        nlohmann::json j{{"num_sends", observed_json(b.num_sends)},
                         {"wait", observed_json(b.wait)},
                         {"c0", observed_json(b.c0)},
                         {"c1", observed_json(b.c1)}};
        if (b.c1.censored)
            j["c1"]["value"] = "inf";
        return j;
    }

    nlohmann::json to_json(const EstimateReport &r)
    {
        nlohmann::json j{{"metric", to_string(r.metric)},
                         {"protocol", to_json(r.protocol)},
                         {"n_runs", r.n_runs},
                         {"n_used", r.samples.count()},
                         {"censored", r.censored},
                         {"mean", json_number(r.mean)},
                         {"stderr", json_number(r.std_error)},
                         {"ci95", interval_json(r.ci95)},
                         {"tolerance", r.tolerance},
                         {"verdict", to_string(r.verdict)}};
        if (r.closed_form)
        {
            j["closed_form"] = json_number(r.closed_form->value);
            j["closed_form_source"] = r.closed_form->source;
        }
        else
        {
            j["closed_form"] = nullptr;
        }
        j["relative_deviation"] = r.relative_deviation ? json_number(*r.relative_deviation) : nlohmann::json(nullptr);
        if (r.mean_invocations)
            j["mean_invocations"] = json_number(*r.mean_invocations);
        return j;
    }

    nlohmann::json to_json(const std::vector<S2Point> &curve)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const S2Point &p : curve)
        {
            arr.push_back({{"t", p.t},
                           {"finished", p.finished},
                           {"both_up", p.both_up},
                           {"probability", p.probability ? json_number(*p.probability) : nlohmann::json("undefined")},
                           {"stderr", json_number(p.std_error)}});
        }
        return arr;
    }

    nlohmann::json to_json(const GrowthReport &r)
    {
        nlohmann::json rows = nlohmann::json::array();
        for (const GrowthRow &row : r.rows)
        {
            rows.push_back({{"horizon", row.horizon},
                            {"mean", json_number(row.mean)},
                            {"stderr", json_number(row.std_error)},
                            {"censored", row.censored},
                            {"ratio", row.ratio ? json_number(*row.ratio) : nlohmann::json(nullptr)}});
        }
        return {{"metric", to_string(r.metric)},
                {"rows", rows},
                {"verdict", to_string(r.verdict)},
                {"growth_threshold", r.growth_threshold},
                {"stable_tolerance", r.stable_tolerance},
                {"method", "growth heuristic on horizon-truncated means, not a proof"}};
    }

    nlohmann::json to_json(const ImpossibilityReport &r)
    {
        nlohmann::json scenarios = nlohmann::json::array();
        for (const ScenarioResult &s : r.scenarios)
        {
            scenarios.push_back({{"name", s.name},
                                 {"description", s.description},
                                 {"t_p", format_tick(s.lifetimes.p, r.horizon)},
                                 {"t_q", format_tick(s.lifetimes.q, r.horizon)},
                                 {"loss_until", s.loss_until},
                                 {"num_sends", s.num_sends},
                                 {"sends_stopped", s.sends_stopped},
                                 {"stop_time", s.stop_time},
                                 {"receiver_finished", s.receiver_finished},
                                 {"wait", observed_json(s.wait)},
                                 {"unbounded", s.unbounded}});
        }
        return {{"protocol", to_json(r.protocol)},
                {"horizon", r.horizon},
                {"scenarios", scenarios},
                {"unbounded_signature", r.unbounded_signature},
                {"heartbeat_escape", r.heartbeat_escape},
                {"note", r.note}};
    }

    nlohmann::json to_json(const LambdaEstimate &e)
    {
        return {{"lambda", json_number(e.lambda)},
                {"ci95", interval_json(e.ci95)},
                {"z", e.z},
                {"heartbeat_term", json_number(e.heartbeat_term)},
                {"c_avg", to_json(e.c_avg)},
                {"in_unit_interval", e.in_unit_interval},
                {"consistent", e.consistent},
                {"low_invocations", e.low_invocations},
                {"provenance", "estimated by simulation"}};
    }

    nlohmann::json to_json(const DeltaCurve &c)
    {
        nlohmann::json curve = nlohmann::json::array();
        for (const DeltaPoint &p : c.curve)
            curve.push_back({{"delta", p.delta}, {"value", json_number(p.value)}, {"stderr", json_number(p.std_error)}});
        return {{"delta_star", c.delta_star}, {"best", json_number(c.best)}, {"curve", curve}};
    }

    std::string estimates_table(const std::vector<EstimateReport> &reports)
    {
        TextTable table({"protocol", "metric", "runs", "censored", "mean", "stderr", "ci95", "closed_form", "rel_dev",
                         "tol", "verdict"});
        for (const EstimateReport &r : reports)
        {
            table.add_row({std::string(to_string(r.protocol.kind)), std::string(to_string(r.metric)),
                           fmt::format("{}", r.n_runs), fmt::format("{}", r.censored), fmt::format("{:.4f}", r.mean),
                           fmt::format("{:.4f}", r.std_error), fmt::format("[{:.4f}, {:.4f}]", r.ci95.lo, r.ci95.hi),
                           r.closed_form ? fmt::format("{:.4f}", r.closed_form->value) : "-",
                           r.relative_deviation ? fmt::format("{:.2f}%", 100.0 * *r.relative_deviation) : "-",
                           fmt::format("{:.0f}%", 100.0 * r.tolerance), std::string(to_string(r.verdict))});
        }
        return table.render();
    }

    std::string avg_series_csv(const AvgCostSeries &series)
    {
        std::string out = csv_line({"t", "c_total", "num_completed", "num_hb", "ratio"});
        for (const AvgCostPoint &p : series.points)
        {
            out += csv_line({fmt::format("{}", p.t), format_number(p.c_total), fmt::format("{}", p.num_completed),
                             fmt::format("{}", p.num_hb), format_number(p.ratio)});
        }
        return out;
    }

} // namespace relcost
