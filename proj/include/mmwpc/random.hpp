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

#ifndef MMWPC_RANDOM_HPP
#define MMWPC_RANDOM_HPP

#include "core.hpp"

#include <cstdint>
#include <random>

namespace mmwpc
{
    // SplitMix64 finalizer, used to derive statistically independent substream seeds.
    constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Purposes of the substreams drawn within one trial. Keeping them separate means that,
    // e.g., switching the noise on or off leaves the sampled geometry untouched (paired seeds).
    enum class StreamPurpose : std::uint64_t
    {
        geometry = 1,
        aoa_error = 2,
        uplink_noise = 3,
        baseline_error = 4,
        scenario = 5,
    };

    /// Seeded random stream. Copyable value type; a copy continues the same sequence.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed = 0) : seed_(seed), engine_(mix_seed(seed)) {}

        std::uint64_t seed() const noexcept { return seed_; }

        /// Independent child stream identified by `key`; does not advance this stream.
        RandomStream substream(std::uint64_t key) const
        {
            return RandomStream(mix_seed(seed_ ^ mix_seed(key + 0x632BE59BD9B4E019ULL)));
        }

        RandomStream substream(StreamPurpose purpose) const
        {
            return substream(static_cast<std::uint64_t>(purpose));
        }

        /// Stream of trial `trial` in a run seeded with `seed`.
        static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial)
        {
            return RandomStream(seed).substream(trial);
        }

        double uniform(double lo, double hi)
        {
            return std::uniform_real_distribution<double>(lo, hi)(engine_);
        }

        double normal(double mean = 0.0, double stddev = 1.0)
        {
            return std::normal_distribution<double>(mean, stddev)(engine_);
        }

        /// Circularly symmetric complex Gaussian CN(0, variance).
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(0.5 * variance);
            const double re = normal(0.0, s);
            const double im = normal(0.0, s);
            return {re, im};
        }

        CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0)
        {
            CMatrix out(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r)
                    out(r, c) = complex_normal(variance);
            return out;
        }

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
    };
}

#endif
