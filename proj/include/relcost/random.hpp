#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relcost
{
    inline std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Independent random stream derived from (seed, stream id). Draws are
    /// computed from raw engine output only, so they are identical on every
    /// standard library.
    class RandomStream
    {
    public:
        RandomStream(std::uint64_t seed, std::uint64_t stream)
            : m_engine(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed270b27a5c0deULL)))
        {
        }

        /// Uniform in [0, 1).
        double uniform() noexcept { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

        bool bernoulli(double p) noexcept { return uniform() < p; }

        /// Number of failures before the first success; support {0, 1, 2, ...}.
        std::int64_t geometric(double p) noexcept
        {
            if (p >= 1.0)
                return 0;
            const double u = uniform();
            const double k = std::floor(std::log1p(-u) / std::log1p(-p));
            return k >= 0x1p62 ? (std::int64_t{1} << 62) : static_cast<std::int64_t>(k);
        }

    private:
        std::mt19937_64 m_engine;
    };

    /// Stream ids used by the engine; kept apart so that, for example,
    /// invocation arrivals do not shift when the loss pattern changes.
    namespace streams
    {
        inline constexpr std::uint64_t kLifetimes = 1;
        inline constexpr std::uint64_t kLoss = 2;
        inline constexpr std::uint64_t kInvocations = 3;
    } // namespace streams

    /// Seed of the i-th run of a batch that starts from `base`.
    inline std::uint64_t run_seed(std::uint64_t base, std::uint64_t index) noexcept
    {
        return splitmix64(base ^ splitmix64(index));
    }

} // namespace relcost
