#include "trace_audit.hpp"

#include <algorithm>
#include <sstream>

namespace audit
{
    ParsedTrace parse(const std::string &text)
    {
        ParsedTrace out;
        std::istringstream in(text);
        std::string row;
        while (std::getline(in, row))
        {
            if (row.empty())
                continue;
            if (row[0] == '#')
            {
                std::istringstream fields(row.substr(1));
                std::string f;
                while (fields >> f)
                {
                    const auto eq = f.find('=');
                    if (eq != std::string::npos)
                        out.header[f.substr(0, eq)] = f.substr(eq + 1);
                }
                continue;
            }
            std::istringstream fields(row);
            Line l;
            fields >> l.time >> l.actor >> l.action >> l.kind >> l.invocation >> l.lost;
            out.lines.push_back(l);
        }
        return out;
    }

    namespace
    {
        std::string other(const std::string &x) { return x == "p" ? "q" : "p"; }

        std::int64_t crash_time(const ParsedTrace &t, const std::string &x)
        {
            for (const Line &l : t.lines)
                if (l.action == "crash" && l.actor == x)
                    return l.time;
            return INT64_MAX;
        }
    } // namespace

    std::vector<std::string> check(const ParsedTrace &trace, std::int64_t tau)
    {
        std::vector<std::string> problems;
        const auto &ls = trace.lines;

        for (std::size_t i = 1; i < ls.size(); ++i)
            if (ls[i].time < ls[i - 1].time)
                problems.push_back("event times decrease at line " + std::to_string(i));

        std::vector<bool> used(ls.size(), false);
        for (const Line &r : ls)
        {
            if (r.action != "recv")
                continue;
            bool matched = false;
            for (std::size_t j = 0; j < ls.size() && !matched; ++j)
            {
                const Line &s = ls[j];
                if (!used[j] && s.action == "send" && s.actor == other(r.actor) && s.kind == r.kind &&
                    s.invocation == r.invocation && s.lost == "0" && s.time + tau == r.time)
                {
                    used[j] = true;
                    matched = true;
                }
            }
            if (!matched)
                problems.push_back("recv without matching send at t=" + std::to_string(r.time));
        }

        for (const std::string x : {"p", "q"})
        {
            const std::int64_t crash = crash_time(trace, x);
            for (const Line &s : ls)
                if (s.action == "send" && s.actor == x && s.time >= crash)
                    problems.push_back(x + " sends at t=" + std::to_string(s.time) + " after crashing");
        }

        for (const Line &f : ls)
        {
            if (f.action != "finish")
                continue;
            const bool seen = std::any_of(ls.begin(), ls.end(), [&](const Line &r) {
                return r.action == "recv" && r.kind == "msg" && r.actor == f.actor && r.time <= f.time &&
                       (r.invocation == f.invocation || r.invocation == "0");
            });
            if (!seen)
                problems.push_back("finish without Msg delivery at t=" + std::to_string(f.time));
        }
        return problems;
    }

    std::int64_t max_quiescence_lag(const ParsedTrace &trace)
    {
        std::map<std::string, std::int64_t> first_ack;
        std::map<std::string, std::string> sender;
        for (const Line &l : trace.lines)
        {
            if (l.action == "invoke")
                sender[l.invocation] = l.actor;
            if (l.action == "recv" && l.kind == "ack" && !first_ack.contains(l.invocation))
                first_ack[l.invocation] = l.time;
        }
        std::int64_t worst = -1;
        for (const auto &[inv, ack] : first_ack)
        {
            std::int64_t last = ack;
            for (const Line &l : trace.lines)
                if (l.action == "send" && l.kind != "hb" && l.invocation == inv)
                    last = std::max(last, l.time);
            worst = std::max(worst, last - ack);
        }
        return worst;
    }

} // namespace audit
