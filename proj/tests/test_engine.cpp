#include "relcost/cost.hpp"
#include "relcost/engine.hpp"
#include "relcost/random.hpp"
#include "relcost/stats.hpp"
#include "trace_audit.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace relcost;

namespace
{
    const std::vector<ProtocolSpec> kAllProtocols{
        {ProtocolKind::Trivial},        {ProtocolKind::SenderDriven}, {ProtocolKind::ReceiverDriven},
        {ProtocolKind::SRhb},           {ProtocolKind::Pathological, 1.8},
    };

    SystemParams noisy(std::uint64_t i)
    {
        RandomStream r(i, 99);
        SystemParams p;
        p.alpha_p = r.uniform() < 0.3 ? 1.0 : 0.0;
        p.alpha_q = r.uniform() < 0.3 ? 1.0 : 0.0;
        p.beta_p = 0.005 + 0.1 * r.uniform();
        p.beta_q = 0.005 + 0.1 * r.uniform();
        p.gamma = 0.6 * r.uniform();
        p.tau = 1 + static_cast<Tick>(r.uniform() * 5);
        p.delta = 1 + static_cast<Tick>(r.uniform() * 6);
        p.sigma = 0.02 + 0.2 * r.uniform();
        return p;
    }
} // namespace

TEST_SUITE("engine")
{
    TEST_CASE("correct processes never crash")
    {
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        for (std::uint64_t s = 0; s < 1000; ++s)
        {
            const Lifetimes l = sample_lifetimes(p, s);
            CHECK(l.p == kNever);
            CHECK(l.q == kNever);
        }
    }

    TEST_CASE("faulty lifetime is geometric from 0")
    {
        SystemParams p;
        p.alpha_p = 0.0;
        p.beta_p = 0.5;
        Accumulator acc;
        bool saw_zero = false;
        for (std::uint64_t s = 0; s < 100000; ++s)
        {
            const Tick t = sample_lifetimes(p, s).p;
            saw_zero = saw_zero || t == 0;
            acc.add(static_cast<double>(t));
        }
        CHECK(saw_zero);
        CHECK(std::fabs(acc.mean() - 1.0) < 3.0 * acc.std_error());
    }

    TEST_CASE("alpha is the fraction of correct processes")
    {
        SystemParams p;
        p.alpha_q = 0.5;
        const int n = 10000;
        int correct = 0;
        for (std::uint64_t s = 0; s < n; ++s)
            correct += sample_lifetimes(p, s).q == kNever ? 1 : 0;
        const double frac = static_cast<double>(correct) / n;
        CHECK(std::fabs(frac - 0.5) < 3.0 * std::sqrt(0.25 / n));
    }

    TEST_CASE("runs are byte-identical per seed")
    {
        for (std::uint64_t i = 0; i < 40; ++i)
        {
            const SystemParams p = noisy(i);
            for (const ProtocolSpec &spec : kAllProtocols)
                CHECK(serialize(run_single(spec, p, i, 3000)) == serialize(run_single(spec, p, i, 3000)));
            CHECK(serialize(run_repeated(p, i, 2000)) == serialize(run_repeated(p, i, 2000)));
        }
    }

    TEST_CASE("single-run traces pass the audit")
    {
        for (std::uint64_t i = 0; i < 150; ++i)
        {
            const SystemParams p = noisy(i);
            for (const ProtocolSpec &spec : kAllProtocols)
            {
                const RunTrace t = run_single(spec, p, i * 31 + 7, 400);
                const auto problems = audit::check(audit::parse(serialize(t)), p.tau);
                CAPTURE(i);
                CAPTURE(to_string(spec.kind));
                CHECK(problems.empty());
                if (t.t_f < t.horizon)
                    CHECK(t.t_f >= t.t_s + p.tau);
                for (const MessageRecord &m : t.messages)
                {
                    CHECK(m.send_time < (m.sender == Process::P ? t.t_p : t.t_q));
                    CHECK(m.deliver_time - m.send_time == p.tau);
                }
            }
        }
    }

    TEST_CASE("repeated traces pass the audit")
    {
        for (std::uint64_t i = 0; i < 60; ++i)
        {
            const SystemParams p = noisy(i);
            const RepeatedTrace t = run_repeated(p, i, 600);
            CAPTURE(i);
            CHECK(audit::check(audit::parse(serialize(t)), p.tau).empty());
            std::set<std::int64_t> ids;
            for (const InvocationRecord &r : t.invocations)
                ids.insert(r.id);
            CHECK(ids.size() == t.invocations.size());
        }
    }

    TEST_CASE("a process that crashes at 0 never acts")
    {
        SystemParams p;
        p.gamma = 0.0;
        RunOverrides ov;
        ov.lifetimes = Lifetimes{0, kNever};
        for (const ProtocolSpec &spec : kAllProtocols)
        {
            const RunTrace t = run_single(spec, p, 1, 100, ov);
            for (const MessageRecord &m : t.messages)
                CHECK(m.sender == Process::Q);
        }
    }

    TEST_CASE("delivery happens before the crash of the same tick")
    {
        SystemParams p;
        p.gamma = 0.0;
        p.tau = 3;
        p.delta = 2;
        RunOverrides ov;
        ov.lifetimes = Lifetimes{kNever, 3};
        const RunTrace t = run_single({ProtocolKind::SenderDriven}, p, 1, 50, ov);
        CHECK(t.t_f == 3);
        for (const MessageRecord &m : t.messages)
        {
            CHECK(m.kind == PayloadKind::Msg);
            if (m.deliver_time > 3)
                CHECK(!m.received);
        }
        CHECK(t_wait(t).value == 3);
    }

    TEST_CASE("loss coin is independent with rate gamma")
    {
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        p.gamma = 0.3;
        std::int64_t sent = 0;
        std::int64_t lost = 0;
        for (std::uint64_t s = 0; s < 300; ++s)
        {
            RunOverrides ov;
            ov.lifetimes = Lifetimes{kNever, 0};
            const RunTrace t = run_single({ProtocolKind::SenderDriven}, p, s, 200, ov);
            for (const MessageRecord &m : t.messages)
            {
                ++sent;
                lost += m.lost ? 1 : 0;
            }
        }
        const double frac = static_cast<double>(lost) / static_cast<double>(sent);
        CHECK(std::fabs(frac - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / static_cast<double>(sent)));
    }

    TEST_CASE("heartbeat sender stops after the Ack")
    {
        for (std::uint64_t i = 0; i < 100; ++i)
        {
            SystemParams p = noisy(i);
            const RunTrace t = run_single({ProtocolKind::SRhb}, p, i, 2000);
            const auto parsed = audit::parse(serialize(t));
            Tick ack = kNever;
            for (const MessageRecord &m : t.messages)
                if (m.kind == PayloadKind::Ack && m.received)
                    ack = std::min(ack, m.deliver_time);
            for (const MessageRecord &m : t.messages)
                if (m.kind == PayloadKind::Msg)
                    CHECK(m.send_time <= ack);
            const auto lag = audit::max_quiescence_lag(parsed);
            CHECK(lag <= 2 * p.tau);
        }
    }

    TEST_CASE("quiescent runs stop early and record when")
    {
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        p.tau = 4;
        p.delta = 3;
        const RunTrace t = run_single({ProtocolKind::SenderDriven}, p, 1, 100000);
        CHECK(!t.truncated);
        CHECK(t.quiescent_at < 100);
    }

    TEST_CASE("no invocations without sigma")
    {
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        p.sigma = 0.0;
        p.delta = 3;
        const RepeatedTrace t = run_repeated(p, 5, 100);
        CHECK(t.invocations.empty());
        CHECK(t.heartbeats_p == 34);
        CHECK(t.heartbeats_q == 34);
    }

    TEST_CASE("lossless repeated invocations with delta 1")
    {
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        p.gamma = 0.0;
        p.sigma = 1.0;
        p.delta = 1;
        p.tau = 3;
        const Tick h = 200;
        const RepeatedTrace t = run_repeated(p, 5, h);
        CHECK(t.invocations.size() == static_cast<std::size_t>(2 * h));
        for (const InvocationRecord &r : t.invocations)
        {
            if (r.start + 3 * p.tau + 1 >= h)
                continue;
            CAPTURE(r.start);
            CHECK(r.complete);
            CHECK(r.num_sends == 4 * p.tau);
            CHECK(r.wait == (r.start >= p.tau ? p.tau : 2 * p.tau - r.start));
        }
    }

    TEST_CASE("crash-prone repeated runs finish all their invocations")
    {
        SystemParams p;
        p.beta_p = p.beta_q = 0.2;
        p.sigma = 0.3;
        p.gamma = 0.1;
        p.tau = 2;
        p.delta = 2;
        for (std::uint64_t s = 0; s < 100; ++s)
        {
            const RepeatedTrace t = run_repeated(p, s, 5000);
            for (const InvocationRecord &r : t.invocations)
                CHECK(r.complete);
        }
    }

    TEST_CASE("sentinel renders as inf")
    {
        CHECK(format_tick(5, 10) == "5");
        CHECK(format_tick(11, 10) == "inf");
        SystemParams p;
        p.alpha_p = p.alpha_q = 1.0;
        const RunTrace t = run_single({ProtocolKind::Trivial}, p, 1, 10);
        const auto parsed = audit::parse(serialize(t));
        CHECK(parsed.header.at("t_f") == "inf");
        CHECK(parsed.header.at("t_p") == "inf");
    }

    TEST_CASE("invalid input is refused")
    {
        SystemParams p;
        p.gamma = 1.0;
        CHECK_THROWS_AS(run_single({ProtocolKind::SRhb}, p, 1, 10), PreconditionError);
        CHECK_THROWS_AS(run_single({ProtocolKind::SRhb}, SystemParams{}, 1, 0), PreconditionError);
    }
}
