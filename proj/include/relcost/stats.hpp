#pragma once

#include <cstdint>

namespace relcost
{
    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;

        bool contains(double x) const noexcept { return lo <= x && x <= hi; }
        bool operator==(const Interval &) const = default;
    };

    /// Streaming (count, sum, sum of squares). Merging is associative; the
    /// estimators merge fixed blocks in index order so any worker count
    /// reproduces the sequential numbers bit for bit.
    class Accumulator
    {
    public:
        void add(double x) noexcept
        {
            ++m_count;
            m_sum += x;
            m_sumsq += x * x;
        }

        void merge(const Accumulator &other) noexcept
        {
            m_count += other.m_count;
            m_sum += other.m_sum;
            m_sumsq += other.m_sumsq;
        }

        std::int64_t count() const noexcept { return m_count; }
        double sum() const noexcept { return m_sum; }
        double sumsq() const noexcept { return m_sumsq; }

        double mean() const noexcept;
        /// Unbiased sample variance, 0 for fewer than two samples.
        double variance() const noexcept;
        double std_error() const noexcept;
        /// Normal-approximation 95% interval around the mean.
        Interval ci95() const noexcept;

        bool operator==(const Accumulator &) const = default;

    private:
        std::int64_t m_count = 0;
        double m_sum = 0.0;
        double m_sumsq = 0.0;
    };

    inline constexpr double kZ95 = 1.959963984540054;

    /// |value - reference| / |reference|; absolute deviation when the
    /// reference is zero.
    double relative_deviation(double value, double reference) noexcept;

} // namespace relcost
