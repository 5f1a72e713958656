// SPDX-License-Identifier: Apache-2.0
//
// mmwpc - multi-cell hybrid mmWave pilot contamination simulator
// Copyright (C) 2026 The mmwpc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MMWPC_PARALLEL_HPP
#define MMWPC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace mmwpc
{
    /// Neumaier-compensated sum. Order of `add` calls fixes the result bit-for-bit.
    class CompensatedSum
    {
    public:
        void add(double x) noexcept
        {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }
        double value() const noexcept { return sum_ + comp_; }

    private:
        double sum_ = 0.0;
        double comp_ = 0.0;
    };

    inline double compensated_sum(std::span<const double> values) noexcept
    {
        CompensatedSum acc;
        for (double v : values)
            acc.add(v);
        return acc.value();
    }

    inline unsigned default_workers() noexcept
    {
        return std::max(1u, std::thread::hardware_concurrency());
    }

    // Runs body(i) for i in [0, count) on up to `workers` threads. Each index is processed
    // exactly once; callers write into per-index slots and reduce afterwards in index order,
    // which keeps results independent of the worker count. The first exception is rethrown.
    template <class Body>
    void parallel_for(std::size_t count, unsigned workers, Body &&body)
    {
        workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
        if (workers == 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto run = [&]
        {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w)
            pool.emplace_back(run);
        run();
        pool.clear();
        if (failure)
            std::rethrow_exception(failure);
    }
}

#endif
