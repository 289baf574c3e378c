// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace digestlab::detail
{
/// Calls fn(i) for every i in [0, count) on up to `threads` threads. Callers
/// write results into per-index slots, so output never depends on scheduling.
/// The first exception thrown by fn is rethrown after all threads stop.
template <class Fn>
void parallel_for(uint64_t count, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2)
    {
        for (uint64_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (uint64_t i = next++; i < count && !failed; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        failed = true;
                    }
                }
            });
    }
    if (error)
        std::rethrow_exception(error);
}
}  // namespace digestlab::detail
