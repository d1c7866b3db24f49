#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace relcost
{
    /// Discrete simulation time. One tick is one time unit of the model.
    using Tick = std::int64_t;

    /// Lifetime value for a process that never crashes.
    inline constexpr Tick kNever = std::numeric_limits<Tick>::max();

    /// Raised when an operation is asked to work outside its stated
    /// preconditions (refusals, not bugs).
    class PreconditionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// Stochastic model of the two processes and the link between them.
    struct SystemParams
    {
        double alpha_p = 0.0; ///< probability that p is correct
        double alpha_q = 0.0; ///< probability that q is correct
        double beta_p = 0.01; ///< per-tick crash probability of a faulty p
        double beta_q = 0.01; ///< per-tick crash probability of a faulty q
        double gamma = 0.0;   ///< per-message loss probability
        Tick tau = 1;         ///< link delay
        Tick delta = 1;       ///< heartbeat / retransmission period
        double sigma = 0.0;   ///< per-tick invocation probability (repeated mode)

        bool operator==(const SystemParams &) const = default;
    };

    /// Utility constants of the cost functions. Costs are non-negative
    /// magnitudes; larger is worse.
    struct CostParams
    {
        double c_send = 1.0;
        double c_wait = 1.0;
        double n_exp = 2.0; ///< base of the exponential waiting cost

        bool operator==(const CostParams &) const = default;
    };

    enum class ProtocolKind
    {
        Trivial,
        SenderDriven,
        ReceiverDriven,
        SRhb,
        Pathological,
    };

    struct ProtocolSpec
    {
        ProtocolKind kind = ProtocolKind::SRhb;
        double ack_base = 2.0; ///< only used by Pathological

        bool operator==(const ProtocolSpec &) const = default;
    };

    /// One broken invariant: the offending field and the bound it broke.
    struct Violation
    {
        std::string field;
        std::string message;

        bool operator==(const Violation &) const = default;
    };

    std::vector<Violation> validate(const SystemParams &params, const CostParams &costs);

    /// Extra condition needed before exponential waiting cost is analysed:
    /// n_exp * (1 - beta_p) * (1 - beta_q) > 1.
    std::vector<Violation> validate_c1(const SystemParams &params, const CostParams &costs);

    /// ack_base > 1 always; ack_base * gamma > 1 is only reported when
    /// `require_divergence` is set.
    std::vector<Violation> validate_protocol(const ProtocolSpec &spec, const SystemParams &params,
                                             bool require_divergence = false);

    /// Probability that at least one of two live processes crashes in a tick.
    double combined_crash_rate(const SystemParams &params) noexcept;

    std::string_view to_string(ProtocolKind kind) noexcept;
    ProtocolKind protocol_kind_from_string(std::string_view name);

    /// True when the protocol's sender is driven by heartbeat arrivals.
    bool uses_heartbeats(ProtocolKind kind) noexcept;

    // Flat JSON documents with exactly the struct's field names. Unknown keys
    // throw; missing keys keep the defaults above.
    SystemParams system_params_from_json(const nlohmann::json &doc);
    CostParams cost_params_from_json(const nlohmann::json &doc);
    nlohmann::json to_json(const SystemParams &params);
    nlohmann::json to_json(const CostParams &costs);

    /// Throws PreconditionError listing every violation, if any.
    void require_valid(const std::vector<Violation> &violations);

} // namespace relcost
