#include "relcost/protocols.hpp"

#include <cmath>
#include <map>

namespace relcost
{
    std::string_view to_string(PayloadKind kind) noexcept
    {
        switch (kind)
        {
        case PayloadKind::Msg:
            return "msg";
        case PayloadKind::Ack:
            return "ack";
        case PayloadKind::Hbmsg:
            return "hb";
        case PayloadKind::Req:
            return "req";
        }
        return "?";
    }

    namespace
    {
        class Silent final : public Endpoint
        {
        public:
            void deliver(PayloadKind, Tick, ProtocolStep &) override {}
            void tick(Tick, ProtocolStep &) override {}
            bool has_timer() const override { return false; }
        };

        // Sends Msg at start, start + period, ... until the first Ack.
        class PeriodicSender final : public Endpoint
        {
        public:
            explicit PeriodicSender(Tick period) : m_period(period) {}

            void start(Tick now) override { m_start = now; }

            void deliver(PayloadKind kind, Tick, ProtocolStep &) override
            {
                if (kind == PayloadKind::Ack)
                    m_acked = true;
            }

            void tick(Tick now, ProtocolStep &out) override
            {
                if (!m_acked && now >= m_start && (now - m_start) % m_period == 0)
                    out.sends.push_back(PayloadKind::Msg);
            }

            bool has_timer() const override { return !m_acked; }

        private:
            Tick m_period;
            Tick m_start = 0;
            bool m_acked = false;
        };

        // Acks every Msg delivery; finishes on the first. Keeps acking after
        // finishing, so duplicates are acknowledged too.
        class AckingReceiver final : public Endpoint
        {
        public:
            void deliver(PayloadKind kind, Tick, ProtocolStep &out) override
            {
                if (kind != PayloadKind::Msg)
                    return;
                out.sends.push_back(PayloadKind::Ack);
                if (!m_finished)
                {
                    m_finished = true;
                    out.finished = true;
                }
            }

            void tick(Tick, ProtocolStep &) override {}
            bool has_timer() const override { return false; }
            bool finished() const override { return m_finished; }

        private:
            bool m_finished = false;
        };

        class RequestingReceiver final : public Endpoint
        {
        public:
            explicit RequestingReceiver(Tick period) : m_period(period) {}

            void start(Tick now) override { m_start = now; }

            void deliver(PayloadKind kind, Tick, ProtocolStep &out) override
            {
                if (kind == PayloadKind::Msg && !m_finished)
                {
                    m_finished = true;
                    out.finished = true;
                }
            }

            void tick(Tick now, ProtocolStep &out) override
            {
                if (!m_finished && now >= m_start && (now - m_start) % m_period == 0)
                    out.sends.push_back(PayloadKind::Req);
            }

            bool has_timer() const override { return !m_finished; }
            bool finished() const override { return m_finished; }

        private:
            Tick m_period;
            Tick m_start = 0;
            bool m_finished = false;
        };

        class ReplyingSender final : public Endpoint
        {
        public:
            void deliver(PayloadKind kind, Tick, ProtocolStep &out) override
            {
                if (kind == PayloadKind::Req)
                    out.sends.push_back(PayloadKind::Msg);
            }

            void tick(Tick, ProtocolStep &) override {}
            bool has_timer() const override { return false; }
        };

        // while not receive(ack): if receive(hbmsg) then send(m)
        class HeartbeatSender final : public Endpoint
        {
        public:
            void deliver(PayloadKind kind, Tick, ProtocolStep &) override
            {
                if (kind == PayloadKind::Ack)
                    m_acked = true;
                else if (kind == PayloadKind::Hbmsg)
                    m_new_heartbeat = true;
            }

            void tick(Tick, ProtocolStep &out) override
            {
                if (!m_acked && m_new_heartbeat)
                    out.sends.push_back(PayloadKind::Msg);
                m_new_heartbeat = false;
            }

            bool has_timer() const override { return false; }
            bool listens_to_heartbeats() const override { return !m_acked; }

        private:
            bool m_acked = false;
            bool m_new_heartbeat = false;
        };

        class DelayedAckReceiver final : public Endpoint
        {
        public:
            explicit DelayedAckReceiver(double base) : m_base(base) {}

            void deliver(PayloadKind kind, Tick now, ProtocolStep &out) override
            {
                if (kind != PayloadKind::Msg)
                    return;
                ++m_receipts;
                if (!m_finished)
                {
                    m_finished = true;
                    out.finished = true;
                }
                const double delay = std::ceil(std::pow(m_base, static_cast<double>(m_receipts)));
                // Past ~2^62 ticks the ack can never be observed; park it at the end of time.
                const Tick at = delay >= 0x1p62 ? kNever : now + static_cast<Tick>(delay);
                ++m_pending[at];
            }

            void tick(Tick now, ProtocolStep &out) override
            {
                auto it = m_pending.find(now);
                if (it == m_pending.end())
                    return;
                out.sends.insert(out.sends.end(), it->second, PayloadKind::Ack);
                m_pending.erase(it);
            }

            bool has_timer() const override { return !m_pending.empty(); }
            bool finished() const override { return m_finished; }

        private:
            double m_base;
            std::int64_t m_receipts = 0;
            bool m_finished = false;
            std::map<Tick, int> m_pending;
        };
    } // namespace

    EndpointPair trivial()
    {
        return {std::make_unique<Silent>(), std::make_unique<Silent>()};
    }

    EndpointPair sender_driven(Tick delta)
    {
        if (delta < 1)
            throw PreconditionError("sender_driven requires delta >= 1");
        return {std::make_unique<PeriodicSender>(delta), std::make_unique<AckingReceiver>()};
    }

    EndpointPair receiver_driven(Tick delta)
    {
        if (delta < 1)
            throw PreconditionError("receiver_driven requires delta >= 1");
        return {std::make_unique<ReplyingSender>(), std::make_unique<RequestingReceiver>(delta)};
    }

    EndpointPair srhb_pair()
    {
        return {std::make_unique<HeartbeatSender>(), std::make_unique<AckingReceiver>()};
    }

    EndpointPair pathological(double ack_base)
    {
        if (!(ack_base > 1.0))
            throw PreconditionError("pathological requires ack_base > 1");
        return {std::make_unique<PeriodicSender>(1), std::make_unique<DelayedAckReceiver>(ack_base)};
    }

    EndpointPair make_endpoints(const ProtocolSpec &spec, const SystemParams &params)
    {
        switch (spec.kind)
        {
        case ProtocolKind::Trivial:
            return trivial();
        case ProtocolKind::SenderDriven:
            return sender_driven(params.delta);
        case ProtocolKind::ReceiverDriven:
            return receiver_driven(params.delta);
        case ProtocolKind::SRhb:
            return srhb_pair();
        case ProtocolKind::Pathological:
            return pathological(spec.ack_base);
        }
        throw PreconditionError("unknown protocol kind");
    }

} // namespace relcost
