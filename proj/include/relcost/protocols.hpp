#pragma once

#include "relcost/model.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace relcost
{
    enum class PayloadKind : std::uint8_t
    {
        Msg,
        Ack,
        Hbmsg,
        Req,
    };

    std::string_view to_string(PayloadKind kind) noexcept;

    /// What one endpoint wants the engine to put on the link, plus whether the
    /// receiving side finished RECEIVE during this step. Protocol endpoints
    /// never emit Hbmsg; heartbeats belong to the engine's heartbeat layer.
    struct ProtocolStep
    {
        std::vector<PayloadKind> sends;
        bool finished = false;

        void clear()
        {
            sends.clear();
            finished = false;
        }
    };

    /// One side (sender or receiver) of one invocation of a send/receive
    /// protocol. Endpoints consume no randomness.
    ///
    /// Per tick the engine first calls deliver() for each protocol message
    /// arriving at this process, then (if the process is still up) deliver()
    /// once with Hbmsg when a heartbeat arrived this tick, then tick().
    class Endpoint
    {
    public:
        virtual ~Endpoint() = default;

        /// Invocation start. Called before the first tick().
        virtual void start(Tick now) { (void)now; }
        virtual void deliver(PayloadKind kind, Tick now, ProtocolStep &out) = 0;
        virtual void tick(Tick now, ProtocolStep &out) = 0;

        /// The endpoint may send at some later tick with nothing delivered.
        virtual bool has_timer() const = 0;
        /// The endpoint may send in response to a heartbeat arrival.
        virtual bool listens_to_heartbeats() const { return false; }
        /// Receiver side only: RECEIVE has completed.
        virtual bool finished() const { return false; }
    };

    /// Endpoints for p (sender role) and q (receiver role).
    struct EndpointPair
    {
        std::unique_ptr<Endpoint> sender;
        std::unique_ptr<Endpoint> receiver;
    };

    /// "Do nothing": never sends, never finishes.
    EndpointPair trivial();

    /// p sends Msg every `delta` ticks from its start until an Ack arrives;
    /// q acks every Msg delivery and finishes on the first.
    EndpointPair sender_driven(Tick delta);

    /// q sends Req every `delta` ticks until a Msg arrives (then finishes);
    /// p answers every Req with a Msg.
    EndpointPair receiver_driven(Tick delta);

    /// Heartbeat-driven protocol: p sends Msg whenever a heartbeat from q
    /// arrives and no Ack has been received yet; q acks every Msg delivery.
    EndpointPair srhb_pair();

    /// p behaves as sender_driven(1); q sends its k-th Ack ceil(ack_base^k)
    /// ticks after the k-th Msg delivery.
    EndpointPair pathological(double ack_base);

    EndpointPair make_endpoints(const ProtocolSpec &spec, const SystemParams &params);

} // namespace relcost
