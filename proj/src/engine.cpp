#include "relcost/engine.hpp"

#include "relcost/random.hpp"

#include <algorithm>
#include <array>
#include <deque>

namespace relcost
{
    std::string_view to_string(Process x) noexcept
    {
        return x == Process::P ? "p" : "q";
    }

    Lifetimes sample_lifetimes(const SystemParams &params, std::uint64_t seed)
    {
        RandomStream rng(seed, streams::kLifetimes);
        auto draw = [&rng](double alpha, double beta) -> Tick {
            // Both draws are always taken so q's lifetime does not depend on p's branch.
            const bool correct = rng.bernoulli(alpha);
            const Tick crash = rng.geometric(beta);
            return correct ? kNever : crash;
        };
        Lifetimes out;
        out.p = draw(params.alpha_p, params.beta_p);
        out.q = draw(params.alpha_q, params.beta_q);
        return out;
    }

    namespace
    {
        // The lossy link: records every transmission and hands due messages
        // back in send order (the delay is constant, so FIFO is exact).
        class Link
        {
        public:
            Link(const SystemParams &params, std::uint64_t seed, const RunOverrides &overrides,
                 const Lifetimes &life, std::vector<MessageRecord> &log)
                : m_tau(params.tau), m_gamma(params.gamma), m_loss(seed, streams::kLoss),
                  m_force_loss(overrides.force_loss), m_life(life), m_log(log)
            {
            }

            void send(Process from, PayloadKind kind, std::int64_t invocation, Tick now)
            {
                MessageRecord m;
                m.sender = from;
                m.kind = kind;
                m.invocation = invocation;
                m.send_time = now;
                m.deliver_time = now + m_tau;
                m.lost = m_loss.bernoulli(m_gamma);
                if (m_force_loss && m_force_loss(m))
                    m.lost = true;
                m_log.push_back(m);
                if (m.lost)
                    return;
                m_in_flight.push_back(m_log.size() - 1);
                if (kind == PayloadKind::Hbmsg)
                    ++m_heartbeats_to[index(other(from))];
                else
                    ++m_protocol_in_flight;
            }

            // Calls on_arrival(record) for each message due at `now` whose
            // destination has not crashed before `now`.
            template <class F>
            void deliver_due(Tick now, F &&on_arrival)
            {
                while (!m_in_flight.empty() && m_log[m_in_flight.front()].deliver_time == now)
                {
                    MessageRecord &m = m_log[m_in_flight.front()];
                    m_in_flight.pop_front();
                    const Process dest = other(m.sender);
                    if (m.kind == PayloadKind::Hbmsg)
                        --m_heartbeats_to[index(dest)];
                    else
                        --m_protocol_in_flight;
                    if (m_life.of(dest) < now)
                        continue;
                    m.received = true;
                    on_arrival(static_cast<const MessageRecord &>(m));
                }
            }

            std::int64_t protocol_in_flight() const noexcept { return m_protocol_in_flight; }
            std::int64_t heartbeats_in_flight_to(Process x) const noexcept { return m_heartbeats_to[index(x)]; }

        private:
            Tick m_tau;
            double m_gamma;
            RandomStream m_loss;
            const std::function<bool(const MessageRecord &)> &m_force_loss;
            const Lifetimes &m_life;
            std::vector<MessageRecord> &m_log;
            std::deque<std::size_t> m_in_flight;
            std::int64_t m_protocol_in_flight = 0;
            std::array<std::int64_t, 2> m_heartbeats_to{};
        };

        void check_common(const SystemParams &params, Tick horizon)
        {
            require_valid(validate(params, CostParams{}));
            if (horizon < 1)
                throw PreconditionError("horizon must be >= 1");
        }

        Tick observed(Tick t, Tick horizon) noexcept
        {
            return t < horizon ? t : horizon + 1;
        }

        constexpr std::array<Process, 2> kProcesses{Process::P, Process::Q};
    } // namespace

    RunTrace run_single(const ProtocolSpec &protocol, const SystemParams &params, std::uint64_t seed,
                        Tick horizon, const RunOverrides &overrides)
    {
        check_common(params, horizon);
        require_valid(validate_protocol(protocol, params));

        const Lifetimes life = overrides.lifetimes.value_or(sample_lifetimes(params, seed));
        RunTrace trace;
        trace.horizon = horizon;
        trace.seed = seed;
        trace.t_s = 0;
        trace.initiator = protocol.kind == ProtocolKind::ReceiverDriven ? Process::Q : Process::P;

        Link link(params, seed, overrides, life, trace.messages);
        EndpointPair pair = make_endpoints(protocol, params);
        const std::array<Endpoint *, 2> ep{pair.sender.get(), pair.receiver.get()};
        std::array<ProtocolStep, 2> step;
        const bool heartbeat_layer = uses_heartbeats(protocol.kind);

        ep[0]->start(0);
        ep[1]->start(0);

        Tick finish = kNever;
        Tick quiescent_at = kNever;
        for (Tick t = 0; t < horizon; ++t)
        {
            std::array<bool, 2> heartbeat{};
            link.deliver_due(t, [&](const MessageRecord &m) {
                const std::size_t dest = index(other(m.sender));
                if (m.kind == PayloadKind::Hbmsg)
                    heartbeat[dest] = true;
                else
                    ep[dest]->deliver(m.kind, t, step[dest]);
            });
            if (finish == kNever && ep[index(Process::Q)]->finished())
                finish = t;

            for (Process x : kProcesses)
            {
                const std::size_t i = index(x);
                if (life.of(x) <= t)
                {
                    step[i].clear();
                    continue;
                }
                if (heartbeat[i])
                    ep[i]->deliver(PayloadKind::Hbmsg, t, step[i]);
                ep[i]->tick(t, step[i]);
                for (PayloadKind kind : step[i].sends)
                {
                    if (kind == PayloadKind::Hbmsg)
                        throw std::logic_error("protocol endpoints must not send heartbeats");
                    link.send(x, kind, 0, t);
                }
                step[i].clear();
                if (heartbeat_layer && t % params.delta == 0)
                    link.send(x, PayloadKind::Hbmsg, kNoInvocation, t);
            }

            bool active = link.protocol_in_flight() > 0;
            for (Process x : kProcesses)
            {
                if (active)
                    break;
                if (life.of(x) <= t)
                    continue;
                const Endpoint &e = *ep[index(x)];
                if (e.has_timer())
                    active = true;
                else if (heartbeat_layer && e.listens_to_heartbeats() &&
                         (life.of(other(x)) > t || link.heartbeats_in_flight_to(x) > 0))
                    active = true;
            }
            if (!active)
            {
                quiescent_at = t;
                break;
            }
        }

        trace.t_p = observed(life.p, horizon);
        trace.t_q = observed(life.q, horizon);
        trace.t_f = observed(finish, horizon);
        trace.truncated = quiescent_at == kNever;
        trace.quiescent_at = observed(quiescent_at, horizon);
        return trace;
    }

    RepeatedTrace run_repeated(const SystemParams &params, std::uint64_t seed, Tick horizon,
                               const RunOverrides &overrides)
    {
        check_common(params, horizon);

        struct Live
        {
            EndpointPair endpoints;
        };

        RepeatedTrace trace;
        trace.horizon = horizon;
        trace.seed = seed;
        trace.lifetimes = overrides.lifetimes.value_or(sample_lifetimes(params, seed));
        const Lifetimes &life = trace.lifetimes;

        Link link(params, seed, overrides, life, trace.messages);
        RandomStream coins(seed, streams::kInvocations);

        std::vector<Live> live;
        auto &records = trace.invocations;
        std::array<std::vector<std::int64_t>, 2> listening;
        std::array<std::vector<std::pair<std::int64_t, PayloadKind>>, 2> queued;
        ProtocolStep step;

        auto emit = [&](Process x, std::int64_t id, PayloadKind kind, Tick t) {
            if (kind == PayloadKind::Hbmsg)
                throw std::logic_error("protocol endpoints must not send heartbeats");
            link.send(x, kind, id, t);
            InvocationRecord &r = records[static_cast<std::size_t>(id)];
            ++r.num_sends;
            r.completion = t;
        };

        for (Tick t = 0; t < horizon; ++t)
        {
            std::array<bool, 2> heartbeat{};
            link.deliver_due(t, [&](const MessageRecord &m) {
                const Process dest = other(m.sender);
                if (m.kind == PayloadKind::Hbmsg)
                {
                    heartbeat[index(dest)] = true;
                    return;
                }
                const auto id = static_cast<std::size_t>(m.invocation);
                InvocationRecord &r = records[id];
                Endpoint &e = dest == r.sender ? *live[id].endpoints.sender : *live[id].endpoints.receiver;
                step.clear();
                e.deliver(m.kind, t, step);
                if (step.finished && r.t_f == kNever)
                    r.t_f = t;
                if (m.kind == PayloadKind::Ack && r.ack_time == kNever)
                    r.ack_time = t;
                for (PayloadKind kind : step.sends)
                    queued[index(dest)].emplace_back(m.invocation, kind);
            });

            for (Process x : kProcesses)
            {
                const std::size_t i = index(x);
                if (life.of(x) <= t)
                {
                    queued[i].clear();
                    continue;
                }

                if (coins.bernoulli(params.sigma))
                {
                    InvocationRecord r;
                    r.id = static_cast<std::int64_t>(records.size());
                    r.sender = x;
                    r.start = t;
                    r.t_f = kNever;
                    r.ack_time = kNever;
                    r.completion = t;
                    records.push_back(r);
                    live.push_back(Live{srhb_pair()});
                    live.back().endpoints.sender->start(t);
                    live.back().endpoints.receiver->start(t);
                    listening[i].push_back(r.id);
                }

                for (const auto &[id, kind] : queued[i])
                    emit(x, id, kind, t);
                queued[i].clear();

                for (std::int64_t id : listening[i])
                {
                    Endpoint &e = *live[static_cast<std::size_t>(id)].endpoints.sender;
                    if (!heartbeat[i] && !e.has_timer())
                        continue;
                    step.clear();
                    if (heartbeat[i])
                        e.deliver(PayloadKind::Hbmsg, t, step);
                    e.tick(t, step);
                    for (PayloadKind kind : step.sends)
                        emit(x, id, kind, t);
                }
                std::erase_if(listening[i], [&](std::int64_t id) {
                    const Endpoint &e = *live[static_cast<std::size_t>(id)].endpoints.sender;
                    return !e.listens_to_heartbeats() && !e.has_timer();
                });

                if (t % params.delta == 0)
                {
                    link.send(x, PayloadKind::Hbmsg, kNoInvocation, t);
                    trace.heartbeat_times.push_back(t);
                    ++(x == Process::P ? trace.heartbeats_p : trace.heartbeats_q);
                }
            }
        }

        const Tick inf = trace.infinity();
        for (InvocationRecord &r : records)
        {
            const Tick sender_crash = life.of(r.sender);
            const Tick receiver_crash = life.of(other(r.sender));

            Tick terminal = std::min({r.ack_time, sender_crash, receiver_crash});
            r.complete = terminal < horizon && terminal <= horizon - params.tau;

            const Tick first = std::min({sender_crash, receiver_crash, r.t_f});
            r.wait = first < horizon ? std::max(first, r.start) - r.start : horizon - r.start;

            r.t_f = r.t_f < horizon ? r.t_f : inf;
            r.ack_time = r.ack_time < horizon ? r.ack_time : inf;
        }
        return trace;
    }

} // namespace relcost
