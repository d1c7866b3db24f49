#include "relcost/engine.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace relcost
{
    namespace
    {
        // Order of event classes inside one tick, following the tick contract.
        enum class Phase : int
        {
            Receive = 0,
            Drop = 1,
            Finish = 2,
            Crash = 3,
            Invoke = 4,
            Send = 5,
        };

        struct Event
        {
            Tick time;
            Phase phase;
            std::string line;
        };

        std::string inv_field(std::int64_t id)
        {
            return id == kNoInvocation ? std::string("-") : fmt::format("{}", id);
        }

        void add_messages(std::vector<Event> &events, const std::vector<MessageRecord> &messages, Tick horizon)
        {
            for (const MessageRecord &m : messages)
            {
                events.push_back({m.send_time, Phase::Send,
                                  fmt::format("{} {} send {} {} {}", m.send_time, to_string(m.sender),
                                              to_string(m.kind), inv_field(m.invocation), m.lost ? 1 : 0)});
                if (m.received)
                    events.push_back({m.deliver_time, Phase::Receive,
                                      fmt::format("{} {} recv {} {} -", m.deliver_time, to_string(other(m.sender)),
                                                  to_string(m.kind), inv_field(m.invocation))});
                else if (!m.lost && m.deliver_time < horizon)
                    events.push_back({m.deliver_time, Phase::Drop,
                                      fmt::format("{} {} drop {} {} -", m.deliver_time, to_string(other(m.sender)),
                                                  to_string(m.kind), inv_field(m.invocation))});
            }
        }

        void add_crash(std::vector<Event> &events, Process x, Tick t, Tick horizon)
        {
            if (t < horizon)
                events.push_back({t, Phase::Crash, fmt::format("{} {} crash - - -", t, to_string(x))});
        }

        std::string render(std::string header, std::vector<Event> events)
        {
            std::stable_sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
                return a.time != b.time ? a.time < b.time : a.phase < b.phase;
            });
            for (const Event &e : events)
            {
                header += e.line;
                header += '\n';
            }
            return header;
        }
    } // namespace

    std::string format_tick(Tick t, Tick horizon)
    {
        return t < horizon ? fmt::format("{}", t) : std::string("inf");
    }

    std::string serialize(const RunTrace &trace)
    {
        const Tick h = trace.horizon;
        std::string header = "# relcost trace v1 mode=single\n";
        header += fmt::format("# seed={} horizon={} t_s={} t_p={} t_q={} t_f={} truncated={} quiescent_at={}\n",
                              trace.seed, h, trace.t_s, format_tick(trace.t_p, h), format_tick(trace.t_q, h),
                              format_tick(trace.t_f, h), trace.truncated ? 1 : 0, format_tick(trace.quiescent_at, h));
        header += "# time actor action kind invocation lost\n";

        std::vector<Event> events;
        events.push_back({trace.t_s, Phase::Invoke,
                          fmt::format("{} {} invoke - 0 -", trace.t_s, to_string(trace.initiator))});
        add_messages(events, trace.messages, h);
        add_crash(events, Process::P, trace.t_p, h);
        add_crash(events, Process::Q, trace.t_q, h);
        if (trace.t_f < h)
            events.push_back({trace.t_f, Phase::Finish, fmt::format("{} q finish msg 0 -", trace.t_f)});
        return render(std::move(header), std::move(events));
    }

    std::string serialize(const RepeatedTrace &trace)
    {
        const Tick h = trace.horizon;
        std::string header = "# relcost trace v1 mode=repeated\n";
        header += fmt::format("# seed={} horizon={} t_p={} t_q={} invocations={} heartbeats_p={} heartbeats_q={}\n",
                              trace.seed, h, format_tick(trace.lifetimes.p, h), format_tick(trace.lifetimes.q, h),
                              trace.invocations.size(), trace.heartbeats_p, trace.heartbeats_q);
        header += "# time actor action kind invocation lost\n";

        std::vector<Event> events;
        add_messages(events, trace.messages, h);
        add_crash(events, Process::P, trace.lifetimes.p, h);
        add_crash(events, Process::Q, trace.lifetimes.q, h);
        for (const InvocationRecord &r : trace.invocations)
        {
            events.push_back({r.start, Phase::Invoke,
                              fmt::format("{} {} invoke - {} -", r.start, to_string(r.sender), r.id)});
            if (r.t_f < h)
                events.push_back({r.t_f, Phase::Finish,
                                  fmt::format("{} {} finish msg {} -", r.t_f, to_string(other(r.sender)), r.id)});
        }
        return render(std::move(header), std::move(events));
    }

} // namespace relcost
