#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace relcost
{
    inline constexpr std::int64_t kRunsPerBlock = 256;

    /// Splits [0, n) into fixed blocks of kRunsPerBlock and evaluates
    /// fn(begin, end) for each, on up to `jobs` threads. Results come back in
    /// block order, so the caller's merge does not depend on `jobs`.
    template <class F>
    auto map_blocks(std::int64_t n, unsigned jobs, F &&fn) -> std::vector<decltype(fn(std::int64_t{}, std::int64_t{}))>
    {
        using Result = decltype(fn(std::int64_t{}, std::int64_t{}));
        const std::int64_t blocks = (n + kRunsPerBlock - 1) / kRunsPerBlock;
        std::vector<Result> results(static_cast<std::size_t>(blocks));

        auto run_block = [&](std::int64_t b) {
            const std::int64_t begin = b * kRunsPerBlock;
            results[static_cast<std::size_t>(b)] = fn(begin, std::min(n, begin + kRunsPerBlock));
        };

        const auto workers = static_cast<std::int64_t>(std::max(1u, jobs));
        if (workers == 1 || blocks <= 1)
        {
            for (std::int64_t b = 0; b < blocks; ++b)
                run_block(b);
            return results;
        }

        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::int64_t w = 0; w < std::min(workers, blocks); ++w)
        {
            pool.emplace_back([&] {
                for (std::int64_t b = next++; b < blocks; b = next++)
                {
                    try
                    {
                        run_block(b);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = blocks;
                    }
                }
            });
        }
        for (std::thread &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
        return results;
    }

} // namespace relcost
