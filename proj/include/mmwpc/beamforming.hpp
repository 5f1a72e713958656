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

#ifndef MMWPC_BEAMFORMING_HPP
#define MMWPC_BEAMFORMING_HPP

#include "channel_model.hpp"

#include <algorithm>
#include <span>
#include <vector>

namespace mmwpc
{
    /// Analog receive beamformer of one BS RF chain aimed at `theta`. Entries are
    /// exp(+j 2 pi m d cos theta) / sqrt(M), so that |w^T a_bs(theta)| = sqrt(M).
    inline CVector receive_beamformer(double theta, int M, double d_over_lambda = 0.5)
    {
        detail::require_angle(theta, "theta");
        detail::require_elements(M, "M");
        return detail::ula_response(std::cos(theta), M, d_over_lambda).conjugate() / std::sqrt(static_cast<double>(M));
    }

    /// Analog transmit beamformer of a user aimed at `phi`. The transmitted vector is its
    /// conjugate, conj(w) = a_user(phi) / sqrt(P), hence |a_user(phi)^H conj(w)| = sqrt(P).
    inline CVector transmit_beamformer(double phi, int P, double d_over_lambda = 0.5)
    {
        detail::require_angle(phi, "phi");
        detail::require_elements(P, "P");
        return detail::ula_response(std::cos(phi), P, d_over_lambda).conjugate() / std::sqrt(static_cast<double>(P));
    }

    /// Stacks the receive beamformers as columns of the BS analog matrix (M x N).
    inline CMatrix assemble_frf(std::span<const CVector> beams)
    {
        if (beams.empty())
            throw DimensionError("assemble_frf: no beamformers given");
        const auto M = beams.front().size();
        CMatrix f(M, static_cast<Eigen::Index>(beams.size()));
        for (std::size_t k = 0; k < beams.size(); ++k)
        {
            if (beams[k].size() != M)
                throw DimensionError("assemble_frf: beamformers have different lengths");
            f.col(static_cast<Eigen::Index>(k)) = beams[k];
        }
        return f;
    }

    /// Angle plus N(0, sigma^2), clamped to [0, pi]. sigma = 0 returns the input untouched
    /// and consumes no randomness.
    inline double perturb_aoa(double angle, double sigma, RandomStream &rng)
    {
        detail::require(sigma >= 0.0, "sigma_angle must be >= 0", "aoa_error_std");
        if (sigma == 0.0)
            return angle;
        return std::clamp(angle + rng.normal(0.0, sigma), 0.0, pi);
    }

    struct AnalogBeamformers
    {
        int N = 0;
        int L = 0;
        CMatrix f_rf;                 // M x N, column k serves desired user k
        std::vector<CVector> user_tx; // desired users
        std::vector<CVector> inter_tx; // user k of cell l, index l*N + k

        const CVector &inter(int l, int k) const
        {
            return inter_tx.at(static_cast<std::size_t>(l) * static_cast<std::size_t>(N) + static_cast<std::size_t>(k));
        }
    };

    /// Beams of the desired BS and users aligned with the strongest-path angles of `geometry`,
    /// each angle perturbed by `cfg.aoa_error_std` first. Interfering users aim at their own BS.
    inline AnalogBeamformers design_beamformers(const SystemConfig &cfg, const Geometry &geometry, RandomStream &aoa_rng)
    {
        AnalogBeamformers b;
        b.N = cfg.N;
        b.L = cfg.L;
        std::vector<CVector> rx;
        rx.reserve(static_cast<std::size_t>(cfg.N));
        b.user_tx.reserve(static_cast<std::size_t>(cfg.N));
        for (int k = 0; k < cfg.N; ++k)
        {
            const double theta = perturb_aoa(geometry.theta_k(k), cfg.aoa_error_std, aoa_rng);
            const double phi = perturb_aoa(geometry.phi_k(k), cfg.aoa_error_std, aoa_rng);
            rx.push_back(receive_beamformer(theta, cfg.M, cfg.d_over_lambda));
            b.user_tx.push_back(transmit_beamformer(phi, cfg.P, cfg.d_over_lambda));
        }
        b.f_rf = assemble_frf(rx);
        b.inter_tx.reserve(geometry.inter_aim.size());
        for (int l = 0; l < cfg.L; ++l)
            for (int k = 0; k < cfg.N; ++k)
                b.inter_tx.push_back(transmit_beamformer(geometry.phi_lk(l, k), cfg.P, cfg.d_over_lambda));
        return b;
    }

    /// ULA array gain sin^2(n pi d x) / (n sin^2(pi d x)). The removable singularities
    /// (sin(pi d x) = 0) evaluate to their limit n.
    inline double array_gain(double x, int n, double d_over_lambda = 0.5)
    {
        detail::require_elements(n, "n");
        const double den = std::sin(pi * d_over_lambda * x);
        if (std::abs(den) < 1e-9)
            return static_cast<double>(n);
        const double num = std::sin(n * pi * d_over_lambda * x);
        return num * num / (n * den * den);
    }

    /// Large-array form of array_gain at half-wavelength spacing: n * sinc^2(pi n x / 2),
    /// sinc(t) = sin(t) / t. Bounded by n; integrates to ~2 over x in [-1, 1] for large n.
    inline double sinc_gain(double x, int n)
    {
        detail::require_elements(n, "n");
        const double t = 0.5 * pi * n * x;
        if (std::abs(t) < 1e-8)
            return static_cast<double>(n);
        const double s = std::sin(t) / t;
        return n * s * s;
    }

    struct PatternSample
    {
        double angle = 0.0; // radians
        double gain = 0.0;  // linear power gain
    };

    /// |a_bs(theta)^T w|^2 for every angle of `grid`.
    inline std::vector<PatternSample> beam_pattern(const CVector &beamformer, std::span<const double> grid,
                                                   double d_over_lambda = 0.5)
    {
        if (grid.empty())
            throw ConfigError("beam_pattern needs a non-empty angle grid", "grid");
        const int M = static_cast<int>(beamformer.size());
        std::vector<PatternSample> out;
        out.reserve(grid.size());
        for (double theta : grid)
        {
            const cplx v = steering_bs(theta, M, d_over_lambda).transpose() * beamformer;
            out.push_back({theta, std::norm(v)});
        }
        return out;
    }

    /// `points` equally spaced angles covering [0, pi] inclusive.
    inline std::vector<double> angle_grid(int points)
    {
        detail::require(points >= 2, "angle grid needs at least 2 points", "grid_points");
        std::vector<double> g(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            g[static_cast<std::size_t>(i)] = pi * i / (points - 1);
        g.back() = pi;
        return g;
    }

    inline double to_db(double linear)
    {
        constexpr double floor_db = -300.0;
        if (linear <= 0.0)
            return floor_db;
        return std::max(floor_db, 10.0 * std::log10(linear));
    }

    /// Width (radians) of the contiguous region around the pattern peak where gain >= peak / 2.
    inline double half_power_beamwidth(std::span<const PatternSample> pattern)
    {
        if (pattern.empty())
            return 0.0;
        const auto peak = std::max_element(pattern.begin(), pattern.end(),
                                           [](const auto &a, const auto &b) { return a.gain < b.gain; });
        const double half = 0.5 * peak->gain;
        auto lo = peak;
        while (lo != pattern.begin() && std::prev(lo)->gain >= half)
            --lo;
        auto hi = peak;
        while (std::next(hi) != pattern.end() && std::next(hi)->gain >= half)
            ++hi;
        return hi->angle - lo->angle;
    }

    /// Largest gain relative to the peak among angles with |cos(theta) - cos(aim)| >= exclusion.
    /// Returns 0 if no grid point lies outside the excluded region.
    inline double max_sidelobe_level(std::span<const PatternSample> pattern, double aim, double exclusion)
    {
        double peak = 0.0;
        for (const auto &s : pattern)
            peak = std::max(peak, s.gain);
        if (peak <= 0.0)
            return 0.0;
        double side = 0.0;
        for (const auto &s : pattern)
            if (std::abs(std::cos(s.angle) - std::cos(aim)) >= exclusion)
                side = std::max(side, s.gain);
        return side / peak;
    }
}

#endif
