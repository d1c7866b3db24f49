#pragma once

#include "relcost/model.hpp"
#include "relcost/protocols.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relcost
{
    enum class Process : std::uint8_t
    {
        P = 0,
        Q = 1,
    };

    constexpr Process other(Process x) noexcept { return x == Process::P ? Process::Q : Process::P; }
    constexpr std::size_t index(Process x) noexcept { return static_cast<std::size_t>(x); }
    std::string_view to_string(Process x) noexcept;

    inline constexpr std::int64_t kNoInvocation = -1;

    struct MessageRecord
    {
        Process sender = Process::P;
        PayloadKind kind = PayloadKind::Msg;
        std::int64_t invocation = kNoInvocation;
        Tick send_time = 0;
        bool lost = false;
        Tick deliver_time = 0; ///< send_time + tau
        bool received = false; ///< delivered to a live destination within the horizon

        bool operator==(const MessageRecord &) const = default;
    };

    /// Sampled crash times; kNever for a correct process.
    struct Lifetimes
    {
        Tick p = kNever;
        Tick q = kNever;

        Tick of(Process x) const noexcept { return x == Process::P ? p : q; }
        bool operator==(const Lifetimes &) const = default;
    };

    /// Each process is correct with probability alpha_x; otherwise its crash
    /// time is geometric with per-tick rate beta_x, support {0, 1, ...}.
    Lifetimes sample_lifetimes(const SystemParams &params, std::uint64_t seed);

    /// Event record of one single-invocation run. Times that were not
    /// observed inside [0, horizon) hold the sentinel horizon + 1.
    struct RunTrace
    {
        Tick t_s = 0;
        Process initiator = Process::P;
        Tick t_p = 0;
        Tick t_q = 0;
        Tick t_f = 0;
        std::vector<MessageRecord> messages;
        Tick horizon = 0;
        std::uint64_t seed = 0;
        bool truncated = false;  ///< protocol still active at the horizon
        Tick quiescent_at = 0;   ///< last tick after which no protocol message is ever sent

        Tick infinity() const noexcept { return horizon + 1; }
        bool is_finite(Tick t) const noexcept { return t < horizon; }
    };

    /// Test and probe hooks. Forced lifetimes replace the sampled ones;
    /// force_loss, when set and returning true, drops the message regardless
    /// of the loss coin (the coin is still drawn).
    struct RunOverrides
    {
        std::optional<Lifetimes> lifetimes;
        std::function<bool(const MessageRecord &)> force_loss;
    };

    /// Simulates one invocation started at time 0 for ticks 0 .. horizon-1.
    ///
    /// Each tick: (1) deliver messages due now to processes that are still
    /// up (messages to a crashed process vanish); (2) crash processes whose
    /// lifetime equals now; (3) every live process runs its protocol step
    /// and, for heartbeat-driven protocols, its heartbeat step (Hbmsg at
    /// 0, delta, 2*delta, ...). Stops early once no protocol message can
    /// ever be sent again.
    RunTrace run_single(const ProtocolSpec &protocol, const SystemParams &params, std::uint64_t seed,
                        Tick horizon, const RunOverrides &overrides = {});

    struct InvocationRecord
    {
        std::int64_t id = 0;
        Process sender = Process::P;
        Tick start = 0;
        Tick t_f = 0;        ///< receiver's first Msg delivery, or sentinel
        Tick ack_time = 0;   ///< sender's first Ack delivery, or sentinel
        Tick completion = 0; ///< time of the last Msg/Ack sent for it (start if none)
        std::int64_t num_sends = 0;
        Tick wait = 0;        ///< per-invocation t-wait, truncated at the horizon
        bool complete = false; ///< no further sends are possible after the horizon
    };

    struct RepeatedTrace
    {
        std::vector<InvocationRecord> invocations;
        std::vector<Tick> heartbeat_times; ///< send times of all Hbmsg, ascending
        std::int64_t heartbeats_p = 0;
        std::int64_t heartbeats_q = 0;
        std::vector<MessageRecord> messages;
        Lifetimes lifetimes;
        Tick horizon = 0;
        std::uint64_t seed = 0;

        Tick infinity() const noexcept { return horizon + 1; }
    };

    /// Both processes run the heartbeat layer and, while up, start a fresh
    /// heartbeat-driven invocation with probability sigma each tick. A new
    /// invocation sees a heartbeat that arrived in the same tick.
    /// Completion is decided retrospectively at the horizon.
    RepeatedTrace run_repeated(const SystemParams &params, std::uint64_t seed, Tick horizon,
                               const RunOverrides &overrides = {});

    // Line-oriented trace format, one event per line:
    //   <time> <actor> <action> <kind> <invocation> <lost>
    // preceded by '#'-prefixed header lines.
    std::string serialize(const RunTrace &trace);
    std::string serialize(const RepeatedTrace &trace);
    std::string format_tick(Tick t, Tick horizon);

} // namespace relcost
