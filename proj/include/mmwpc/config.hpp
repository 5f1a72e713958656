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

#ifndef MMWPC_CONFIG_HPP
#define MMWPC_CONFIG_HPP

#include "core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mmwpc
{
    enum class AngleSampling
    {
        cos_uniform,   // cos(angle) ~ U[-1, 1]; canonical
        uniform_angle, // angle ~ U[0, pi]
    };

    inline const char *to_string(AngleSampling s)
    {
        return s == AngleSampling::cos_uniform ? "cos_uniform" : "uniform_angle";
    }

    /// Scenario parameters of the multi-cell uplink.
    ///
    /// Per-link quantities are stored flat: desired-cell vectors have N entries (index k),
    /// inter-cell vectors have L*N entries (index l*N + k, both 0-based). Neighbouring user k
    /// of every cell reuses the pilot of desired user k.
    struct SystemConfig
    {
        int M = 64;         // antennas per BS RF chain
        int P = 16;         // antennas per user
        int N = 10;         // users per cell, equal to the number of BS RF chains
        int L = 6;          // neighbouring cells
        int n_clusters = 8; // NLOS clusters per link
        double d_over_lambda = 0.5;

        std::vector<double> rician_k_intra;  // desired-user Rician factors
        std::vector<double> rician_k_inter;  // inter-cell Rician factors
        std::vector<double> path_loss_intra; // desired-user large-scale loss
        std::vector<double> rel_loss_inter;  // relative inter-cell loss coefficient (amplitude)

        double pilot_energy = 1.0;
        double noise_variance = 0.0; // uplink noise at the BS antennas
        bool high_snr = false;       // forces the uplink noise to zero
        AngleSampling angle_sampling = AngleSampling::cos_uniform;
        double aoa_error_std = 0.0; // std of the strongest-AoA/AoD error in radians

        int trials = 2000;
        std::uint64_t seed = 1;

        /// Fills every per-link vector with one value. `xi_sq` is spread evenly over the
        /// L neighbouring cells, so each inter-cell link gets rel_loss^2 = xi_sq / L.
        void set_uniform_links(double k_intra, double k_inter, double path_loss, double xi_sq)
        {
            detail::require(N >= 1 && L >= 0, "N must be >= 1 and L >= 0 before assigning links");
            rician_k_intra.assign(static_cast<std::size_t>(N), k_intra);
            path_loss_intra.assign(static_cast<std::size_t>(N), path_loss);
            const auto inter = static_cast<std::size_t>(L) * static_cast<std::size_t>(N);
            rician_k_inter.assign(inter, k_inter);
            rel_loss_inter.assign(inter, L > 0 ? std::sqrt(xi_sq / L) : 0.0);
        }

        static SystemConfig uniform(int M, int P, int N, int L, double k_intra, double k_inter,
                                    double path_loss, double xi_sq)
        {
            SystemConfig cfg;
            cfg.M = M;
            cfg.P = P;
            cfg.N = N;
            cfg.L = L;
            cfg.set_uniform_links(k_intra, k_inter, path_loss, xi_sq);
            return cfg;
        }

        double effective_noise_variance() const noexcept { return high_snr ? 0.0 : noise_variance; }

        std::size_t link(int l, int k) const noexcept
        {
            return static_cast<std::size_t>(l) * static_cast<std::size_t>(N) + static_cast<std::size_t>(k);
        }

        double k_intra(int k) const { return rician_k_intra.at(static_cast<std::size_t>(k)); }
        double k_inter(int l, int k) const { return rician_k_inter.at(link(l, k)); }
        double path_loss(int k) const { return path_loss_intra.at(static_cast<std::size_t>(k)); }
        double rel_loss(int l, int k) const { return rel_loss_inter.at(link(l, k)); }

        /// Contamination level of pilot k: sum over cells of rel_loss^2.
        double xi_sq(int k) const
        {
            double s = 0.0;
            for (int l = 0; l < L; ++l)
                s += rel_loss(l, k) * rel_loss(l, k);
            return s;
        }

        double mean_xi_sq() const
        {
            double s = 0.0;
            for (int k = 0; k < N; ++k)
                s += xi_sq(k);
            return s / N;
        }

        /// Throws ConfigError naming the first violated field.
        void validate() const
        {
            using detail::require;
            require(N >= 1, "N must be >= 1", "N");
            require(M >= 1, "M must be >= 1", "M");
            require(M >= N, "M must be ≥ N (M=" + std::to_string(M) + ", N=" + std::to_string(N) + ")", "M");
            require(P >= 1, "P must be >= 1", "P");
            require(L >= 0, "L must be >= 0", "L");
            require(n_clusters >= 1, "n_clusters must be >= 1", "n_clusters");
            require(d_over_lambda > 0.0 && std::isfinite(d_over_lambda), "d_over_lambda must be positive", "d_over_lambda");

            const auto n = static_cast<std::size_t>(N);
            const auto nl = static_cast<std::size_t>(L) * n;
            require(rician_k_intra.size() == n, "rician_k_intra needs N entries", "rician_k_intra");
            require(path_loss_intra.size() == n, "path_loss_intra needs N entries", "path_loss_intra");
            require(rician_k_inter.size() == nl, "rician_k_inter needs L*N entries", "rician_k_inter");
            require(rel_loss_inter.size() == nl, "rel_loss_inter needs L*N entries", "rel_loss_inter");
            for (double k : rician_k_intra)
                require(k >= 0.0, "rician_k_intra must be >= 0", "rician_k_intra");
            for (double k : rician_k_inter)
                require(k >= 0.0, "rician_k_inter must be >= 0", "rician_k_inter");
            for (double w : path_loss_intra)
                require(w > 0.0 && std::isfinite(w), "path_loss_intra must be > 0", "path_loss_intra");
            for (double r : rel_loss_inter)
                require(r >= 0.0 && std::isfinite(r), "rel_loss_inter must be >= 0", "rel_loss_inter");

            require(pilot_energy > 0.0 && std::isfinite(pilot_energy), "pilot_energy must be > 0", "pilot_energy");
            require(noise_variance >= 0.0 && std::isfinite(noise_variance), "noise_variance must be >= 0", "noise_variance");
            require(aoa_error_std >= 0.0 && std::isfinite(aoa_error_std), "aoa_error_std must be >= 0", "aoa_error_std");
            require(trials >= 1, "trials must be >= 1", "trials");
        }
    };
}

#endif
