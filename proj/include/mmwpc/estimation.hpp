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

#ifndef MMWPC_ESTIMATION_HPP
#define MMWPC_ESTIMATION_HPP

#include "beamforming.hpp"
#include "parallel.hpp"

#include <vector>

namespace mmwpc
{
    /// Orthogonal pilots of the N users: psi = sqrt(E_P) * [Phi_1 ... Phi_N] with unit-norm,
    /// mutually orthogonal columns, so psi^H psi = E_P I.
    struct PilotMatrix
    {
        CMatrix psi;
        double energy = 1.0;

        int size() const noexcept { return static_cast<int>(psi.cols()); }
    };

    /// Normalized N-point DFT scaled by sqrt(energy).
    inline PilotMatrix pilot_matrix(int N, double energy)
    {
        detail::require(N >= 1, "N must be >= 1", "N");
        detail::require(energy > 0.0 && std::isfinite(energy), "pilot_energy must be > 0", "pilot_energy");
        CMatrix psi(N, N);
        const double scale = std::sqrt(energy / N);
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c)
                psi(r, c) = std::polar(scale, -2.0 * pi * ((static_cast<long long>(r) * c) % N) / N);
        return {std::move(psi), energy};
    }

    /// Diagonal of the path-loss compensation matrix, 1 / sqrt(path_loss(k)).
    inline RVector compensation_diagonal(const SystemConfig &cfg)
    {
        RVector b(cfg.N);
        for (int k = 0; k < cfg.N; ++k)
            b[k] = 1.0 / std::sqrt(cfg.path_loss(k));
        return b;
    }

    namespace detail
    {
        inline void check_dimensions(const ChannelRealization &ch, const AnalogBeamformers &beams, const PilotMatrix &pilots)
        {
            const auto n = static_cast<std::size_t>(ch.N);
            if (ch.intra.size() != n || beams.user_tx.size() != n || beams.f_rf.cols() != ch.N || pilots.size() != ch.N)
                throw DimensionError("uplink: user counts of channels, beamformers and pilots differ");
            if (ch.L != beams.L || ch.inter.size() != beams.inter_tx.size())
                throw DimensionError("uplink: inter-cell channels and beamformers differ");
            if (pilots.psi.rows() != pilots.psi.cols())
                throw DimensionError("uplink: pilot matrix must be square");
        }
    }

    /// C(k, i) = gamma_k^T * (sum of channels carrying pilot i, each times its conj(tx beam)).
    /// Intra-cell and inter-cell contributions can be selected separately.
    inline CMatrix pilot_coupling(const ChannelRealization &ch, const AnalogBeamformers &beams,
                                  bool with_intra = true, bool with_inter = true)
    {
        CMatrix c = CMatrix::Zero(ch.N, ch.N);
        for (int i = 0; i < ch.N; ++i)
        {
            CRowVector col = CRowVector::Zero(ch.N);
            if (with_intra)
                col += ch.intra[static_cast<std::size_t>(i)].project(beams.f_rf, beams.user_tx[static_cast<std::size_t>(i)]);
            if (with_inter)
                for (int l = 0; l < ch.L; ++l)
                    col += ch.inter_link(l, i).project(beams.f_rf, beams.inter(l, i));
            c.col(i) = col.transpose();
        }
        return c;
    }

    /// Received pilot block at the N RF chains; row k is the signal of RF chain k.
    /// `noise` is the M x N antenna noise matrix Z.
    inline CMatrix uplink_receive(const ChannelRealization &ch, const AnalogBeamformers &beams,
                                  const PilotMatrix &pilots, const CMatrix &noise)
    {
        detail::check_dimensions(ch, beams, pilots);
        if (noise.rows() != beams.f_rf.rows() || noise.cols() != ch.N)
            throw DimensionError("uplink_receive: noise matrix must be M x N");
        return pilot_coupling(ch, beams) * pilots.psi.transpose() + beams.f_rf.transpose() * noise;
    }

    /// As above with Z drawn i.i.d. CN(0, noise_variance). A zero variance draws nothing.
    inline CMatrix uplink_receive(const ChannelRealization &ch, const AnalogBeamformers &beams,
                                  const PilotMatrix &pilots, double noise_variance, RandomStream &rng)
    {
        detail::check_dimensions(ch, beams, pilots);
        detail::require(noise_variance >= 0.0, "noise_variance must be >= 0", "noise_variance");
        if (noise_variance == 0.0)
            return pilot_coupling(ch, beams) * pilots.psi.transpose();
        return uplink_receive(ch, beams, pilots, rng.complex_normal_matrix(beams.f_rf.rows(), ch.N, noise_variance));
    }

    /// Equivalent channel with users as rows: row k = tx_k^H H_k^T F_RF.
    inline CMatrix true_equivalent_channel(const ChannelRealization &ch, const AnalogBeamformers &beams)
    {
        if (ch.intra.size() != beams.user_tx.size() || beams.f_rf.cols() != ch.N)
            throw DimensionError("true_equivalent_channel: channel and beamformer counts differ");
        CMatrix h(ch.N, ch.N);
        for (int k = 0; k < ch.N; ++k)
            h.row(k) = ch.intra[static_cast<std::size_t>(k)].project(beams.f_rf, beams.user_tx[static_cast<std::size_t>(k)]);
        return h;
    }

    /// B * (psi^H / E_P) * received^T, with users as rows.
    inline CMatrix estimate_equivalent_channel(const CMatrix &received, const PilotMatrix &pilots, const RVector &b)
    {
        const auto n = pilots.psi.cols();
        if (received.rows() != n || received.cols() != n || b.size() != n || pilots.psi.rows() != n)
            throw DimensionError("estimate_equivalent_channel: received block, pilots and B must all be N x N");
        const CMatrix gram = pilots.psi.adjoint() * pilots.psi;
        const double off = (gram - pilots.energy * CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
        if (!(off <= 1e-9 * pilots.energy))
            throw ConfigError("pilot matrix is not orthogonal with energy E_P", "pilots");
        return b.asDiagonal() * (pilots.psi.adjoint() / pilots.energy) * received.transpose();
    }

    /// True equivalent channel, its estimate and the estimation error estimate - B * true_eq.
    struct EquivalentChannel
    {
        CMatrix true_eq;
        CMatrix estimate;
        CMatrix error;
        RVector b;
    };

    /// The three labelled parts of the estimate, each computed directly from dense channel
    /// matrices: signal B*H_eq, effective noise and pilot contamination.
    struct EstimateTerms
    {
        CMatrix signal;
        CMatrix effective_noise;
        CMatrix contamination;

        CMatrix sum() const { return signal + effective_noise + contamination; }
    };

    inline EstimateTerms decompose_estimate(const SystemConfig &cfg, const Geometry &geometry,
                                            const AnalogBeamformers &beams, const PilotMatrix &pilots,
                                            const CMatrix &noise)
    {
        const int N = cfg.N;
        const RVector b = compensation_diagonal(cfg);
        const CMatrix &f = beams.f_rf;
        EstimateTerms t{CMatrix(N, N), CMatrix(N, N), CMatrix::Zero(N, N)};
        const CMatrix phi = pilots.psi / std::sqrt(pilots.energy);
        for (int i = 0; i < N; ++i)
        {
            const auto ui = static_cast<std::size_t>(i);
            const CMatrix h = intracell_channel(i, cfg, geometry);
            t.signal.row(i) = b[i] * (beams.user_tx[ui].adjoint() * h.transpose() * f);
            t.effective_noise.row(i) = (b[i] / std::sqrt(pilots.energy)) * (phi.col(i).adjoint() * noise.transpose() * f);
            for (int l = 0; l < cfg.L; ++l)
                t.contamination.row(i) += b[i] * (beams.inter(l, i).adjoint() * intercell_channel(l, i, cfg, geometry).transpose() * f);
        }
        return t;
    }

    /// Closed-form NMSE of one RF chain.
    struct AnalyticalNmse
    {
        double full = 0.0;       // with the LOS / scattering split of the contamination
        double simplified = 0.0; // contamination_term + noise_term
        double contamination_term = 0.0;
        double noise_term = 0.0;
    };

    inline AnalyticalNmse analytical_nmse(const SystemConfig &cfg, int k)
    {
        detail::require(k >= 0 && k < cfg.N, "user index out of range", "k");
        const double M = cfg.M, P = cfg.P, N = cfg.N;
        double los = 0.0, scat = 0.0, xi = 0.0;
        for (int l = 0; l < cfg.L; ++l)
        {
            const double rho2 = cfg.rel_loss(l, k) * cfg.rel_loss(l, k);
            const auto [w_los, w_scat] = detail::rician_weights(cfg.k_inter(l, k));
            los += rho2 * w_los * w_los;
            scat += rho2 * w_scat * w_scat;
            xi += rho2;
        }
        // tr(F_RF^H F_RF) = N for unit-norm beamformer columns
        const double trace_frf = N;
        const double sigma2 = cfg.effective_noise_variance();
        const double denom = cfg.path_loss(k) * cfg.pilot_energy;

        AnalyticalNmse a;
        a.contamination_term = xi / (M * P);
        a.noise_term = sigma2 / (denom * M * P);
        a.full = los * N / (N * M * P) + scat / (M * P) + sigma2 * trace_frf / (denom * N * M * P);
        a.simplified = a.contamination_term + a.noise_term;
        return a;
    }

    /// Empirical statistics of one configuration next to their closed forms.
    struct NmseReport
    {
        std::vector<double> empirical_per_chain;
        std::vector<double> analytical_full_per_chain;
        std::vector<double> analytical_simplified_per_chain;
        double empirical = 0.0; // averages over RF chains
        double analytical_full = 0.0;
        double analytical_simplified = 0.0;
        double contamination_term = 0.0;
        double noise_term = 0.0;
        int trials_used = 0;
    };

    /// One full uplink estimation trial (geometry, beams, pilots, reception, estimate).
    inline EquivalentChannel simulate_estimation_trial(const SystemConfig &cfg, const PilotMatrix &pilots,
                                                       const RVector &b, std::uint64_t trial)
    {
        const RandomStream root = RandomStream::for_trial(cfg.seed, trial);
        RandomStream geo_rng = root.substream(StreamPurpose::geometry);
        RandomStream aoa_rng = root.substream(StreamPurpose::aoa_error);
        RandomStream noise_rng = root.substream(StreamPurpose::uplink_noise);

        const ChannelRealization ch = realize_channels(cfg, sample_geometry(cfg, geo_rng));
        const AnalogBeamformers beams = design_beamformers(cfg, ch.geometry, aoa_rng);
        const CMatrix received = uplink_receive(ch, beams, pilots, cfg.effective_noise_variance(), noise_rng);

        EquivalentChannel eq;
        eq.true_eq = true_equivalent_channel(ch, beams);
        eq.estimate = estimate_equivalent_channel(received, pilots, b);
        eq.error = eq.estimate - b.asDiagonal() * eq.true_eq;
        eq.b = b;
        return eq;
    }

    /// Monte Carlo NMSE per RF chain, (1/(N M P)) E|error row k|^2, over cfg.trials trials.
    /// Results depend only on cfg (including the seed), not on `workers`.
    inline NmseReport empirical_nmse(const SystemConfig &cfg, unsigned workers = 1)
    {
        cfg.validate();
        const int N = cfg.N;
        const PilotMatrix pilots = pilot_matrix(N, cfg.pilot_energy);
        const RVector b = compensation_diagonal(cfg);
        const double norm = 1.0 / (static_cast<double>(N) * cfg.M * cfg.P);

        const auto trials = static_cast<std::size_t>(cfg.trials);
        std::vector<double> sq(trials * static_cast<std::size_t>(N));
        parallel_for(trials, workers, [&](std::size_t t)
                     {
                         const EquivalentChannel eq = simulate_estimation_trial(cfg, pilots, b, t);
                         for (int k = 0; k < N; ++k)
                             sq[t * static_cast<std::size_t>(N) + static_cast<std::size_t>(k)] = eq.error.row(k).squaredNorm() * norm; });

        NmseReport r;
        r.trials_used = cfg.trials;
        CompensatedSum mean_emp, mean_full, mean_simple, mean_cont, mean_noise;
        for (int k = 0; k < N; ++k)
        {
            CompensatedSum acc;
            for (std::size_t t = 0; t < trials; ++t)
                acc.add(sq[t * static_cast<std::size_t>(N) + static_cast<std::size_t>(k)]);
            const double emp = acc.value() / static_cast<double>(trials);
            const AnalyticalNmse a = analytical_nmse(cfg, k);
            r.empirical_per_chain.push_back(emp);
            r.analytical_full_per_chain.push_back(a.full);
            r.analytical_simplified_per_chain.push_back(a.simplified);
            mean_emp.add(emp);
            mean_full.add(a.full);
            mean_simple.add(a.simplified);
            mean_cont.add(a.contamination_term);
            mean_noise.add(a.noise_term);
        }
        r.empirical = mean_emp.value() / N;
        r.analytical_full = mean_full.value() / N;
        r.analytical_simplified = mean_simple.value() / N;
        r.contamination_term = mean_cont.value() / N;
        r.noise_term = mean_noise.value() / N;
        return r;
    }
}

#endif
