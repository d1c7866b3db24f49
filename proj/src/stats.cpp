#include "relcost/stats.hpp"

#include <algorithm>
#include <cmath>

namespace relcost
{
    double Accumulator::mean() const noexcept
    {
        return m_count == 0 ? 0.0 : m_sum / static_cast<double>(m_count);
    }

    double Accumulator::variance() const noexcept
    {
        if (m_count < 2)
            return 0.0;
        const double n = static_cast<double>(m_count);
        const double m = mean();
        return std::max(0.0, (m_sumsq - n * m * m) / (n - 1.0));
    }

    double Accumulator::std_error() const noexcept
    {
        return m_count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(m_count));
    }

    Interval Accumulator::ci95() const noexcept
    {
        const double m = mean();
        const double h = kZ95 * std_error();
        return {m - h, m + h};
    }

    double relative_deviation(double value, double reference) noexcept
    {
        const double diff = std::fabs(value - reference);
        return reference == 0.0 ? diff : diff / std::fabs(reference);
    }

} // namespace relcost
