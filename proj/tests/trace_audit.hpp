#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace audit
{
    /// One event line of a serialized trace, parsed without using the
    /// library's own types.
    struct Line
    {
        std::int64_t time = 0;
        std::string actor;
        std::string action;
        std::string kind;
        std::string invocation;
        std::string lost;
    };

    struct ParsedTrace
    {
        std::map<std::string, std::string> header; ///< key=value pairs of '#' lines
        std::vector<Line> lines;
    };

    ParsedTrace parse(const std::string &text);

    /// Problems found; empty when the trace passes every check:
    ///  - each recv pairs with a distinct, not-lost send of the same kind and
    ///    invocation from the other process exactly tau earlier;
    ///  - no process sends at or after its crash time;
    ///  - each finish is preceded (same tick allowed) by a Msg recv at the
    ///    finishing process for the same invocation;
    ///  - event times never decrease.
    std::vector<std::string> check(const ParsedTrace &trace, std::int64_t tau);

    /// For every invocation whose sender received an Ack at time a, the
    /// largest (last non-heartbeat send time - a), or -1 when no invocation
    /// was acked.
    std::int64_t max_quiescence_lag(const ParsedTrace &trace);

} // namespace audit
