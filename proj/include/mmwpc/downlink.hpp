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

#ifndef MMWPC_DOWNLINK_HPP
#define MMWPC_DOWNLINK_HPP

#include "estimation.hpp"

#include <limits>
#include <vector>

namespace mmwpc
{
    struct DownlinkConfig
    {
        double power_budget = 1.0;    // total transmit power, split equally over the users
        double noise_variance = 0.01; // receiver noise of every user
        double rcond_threshold = 1e-10;
        double hybrid_xi_sq = 0.3;   // contamination level of the hybrid chain
        double baseline_xi_sq = 0.2; // per-coefficient error power of the LS baseline
        int trials = 500;

        void validate() const
        {
            using detail::require;
            require(power_budget > 0.0 && std::isfinite(power_budget), "power_budget must be > 0", "power_budget");
            require(noise_variance >= 0.0 && std::isfinite(noise_variance), "downlink noise_variance must be >= 0", "noise_variance");
            require(rcond_threshold >= 0.0 && rcond_threshold < 1.0, "rcond_threshold must lie in [0, 1)", "rcond_threshold");
            require(hybrid_xi_sq >= 0.0, "hybrid_xi_sq must be >= 0", "hybrid_xi_sq");
            require(baseline_xi_sq >= 0.0, "baseline_xi_sq must be >= 0", "baseline_xi_sq");
            require(trials >= 1, "trials must be >= 1", "trials");
        }
    };

    /// Zero-forcing precoder on an estimated channel with users as rows (N x K, K >= N).
    struct Precoder
    {
        CMatrix w;              // K x N, column k serves user k, total power = budget
        CMatrix w_unnormalized; // estimate * w_unnormalized = I
        double power_per_user = 0.0;
    };

    /// sigma_min / sigma_max of `a`; 0 for empty or non-finite input.
    inline double reciprocal_condition(const CMatrix &a)
    {
        if (a.size() == 0 || !a.allFinite())
            return 0.0;
        const RVector s = Eigen::JacobiSVD<CMatrix>(a).singularValues();
        if (s[0] <= 0.0)
            return 0.0;
        return s[s.size() - 1] / s[0];
    }

    /// W = estimate^H (estimate estimate^H)^-1 with columns rescaled to equal power
    /// budget / N. Throws DegenerateChannelError below the conditioning threshold.
    inline Precoder zf_precoder(const CMatrix &estimate, double power_budget, double rcond_threshold = 1e-10)
    {
        const auto n = estimate.rows();
        if (n == 0 || estimate.cols() < n)
            throw DimensionError("zf_precoder: estimate must have at least as many columns as users");
        detail::require(power_budget > 0.0, "power_budget must be > 0", "power_budget");
        const double rc = reciprocal_condition(estimate);
        if (!(rc >= rcond_threshold) || rc == 0.0)
            throw DegenerateChannelError("zf_precoder: estimated channel is degenerate (rcond " + std::to_string(rc) + ")", rc);

        Precoder p;
        const CMatrix gram = estimate * estimate.adjoint();
        p.w_unnormalized = estimate.adjoint() * gram.partialPivLu().inverse();
        p.power_per_user = power_budget / static_cast<double>(n);
        p.w = p.w_unnormalized;
        for (Eigen::Index k = 0; k < n; ++k)
            p.w.col(k) *= std::sqrt(p.power_per_user) / p.w_unnormalized.col(k).norm();
        return p;
    }

    enum class Scenario
    {
        hybrid,
        fully_digital_ls,
    };

    inline const char *to_string(Scenario s)
    {
        return s == Scenario::hybrid ? "hybrid" : "fully_digital_ls";
    }

    /// Average achievable rate per user. For a single draw std_error is 0 and
    /// per_trial_rate has one entry; discarded trials appear there as NaN.
    struct RateReport
    {
        Scenario scenario = Scenario::hybrid;
        double avg_rate = 0.0; // bits/s/Hz
        double std_error = 0.0;
        std::vector<double> per_user_sinr; // mean over kept trials
        std::vector<double> per_trial_rate;
        int trials = 0;
        int discarded_trials = 0;
    };

    /// Per-user SINR when `precoder` drives the true channel (users as rows):
    /// signal |(H W)_kk|^2, interference sum_{j != k} |(H W)_kj|^2.
    inline std::vector<double> downlink_sinr(const CMatrix &true_channel, const Precoder &precoder, double noise_variance)
    {
        if (true_channel.cols() != precoder.w.rows() || true_channel.rows() != precoder.w.cols())
            throw DimensionError("downlink_sinr: channel and precoder are not conformable");
        const CMatrix a = true_channel * precoder.w;
        std::vector<double> sinr(static_cast<std::size_t>(a.rows()));
        for (Eigen::Index k = 0; k < a.rows(); ++k)
        {
            const double signal = std::norm(a(k, k));
            const double interference = a.row(k).squaredNorm() - signal;
            sinr[static_cast<std::size_t>(k)] = signal / (std::max(interference, 0.0) + noise_variance);
        }
        return sinr;
    }

    /// ZF on `estimate`, evaluated on `true_channel`. Both have users as rows.
    inline RateReport downlink_rate(const CMatrix &true_channel, const CMatrix &estimate, double noise_variance,
                                    double power_budget, double rcond_threshold = 1e-10)
    {
        if (true_channel.rows() != estimate.rows() || true_channel.cols() != estimate.cols())
            throw DimensionError("downlink_rate: true channel and estimate shapes differ");
        const Precoder p = zf_precoder(estimate, power_budget, rcond_threshold);
        RateReport r;
        r.per_user_sinr = downlink_sinr(true_channel, p, noise_variance);
        CompensatedSum acc;
        for (double s : r.per_user_sinr)
            acc.add(std::log2(1.0 + s));
        r.avg_rate = acc.value() / static_cast<double>(r.per_user_sinr.size());
        r.per_trial_rate = {r.avg_rate};
        r.trials = 1;
        return r;
    }

    namespace detail
    {
        // Runs `draw(t)` (returning a single-draw RateReport) over all trials and aggregates.
        // Degenerate draws are counted and excluded.
        template <class Draw>
        RateReport aggregate_rates(Scenario scenario, int n_users, int trials, unsigned workers, Draw &&draw)
        {
            const auto n = static_cast<std::size_t>(trials);
            std::vector<RateReport> per(n);
            std::vector<char> ok(n, 0);
            parallel_for(n, workers, [&](std::size_t t)
                         {
                             try
                             {
                                 per[t] = draw(t);
                                 ok[t] = 1;
                             }
                             catch (const DegenerateChannelError &) {} });

            RateReport r;
            r.scenario = scenario;
            r.trials = trials;
            r.per_trial_rate.assign(n, std::numeric_limits<double>::quiet_NaN());
            std::vector<CompensatedSum> sinr(static_cast<std::size_t>(n_users));
            CompensatedSum sum, sum_sq;
            int kept = 0;
            for (std::size_t t = 0; t < n; ++t)
            {
                if (!ok[t])
                {
                    ++r.discarded_trials;
                    continue;
                }
                ++kept;
                r.per_trial_rate[t] = per[t].avg_rate;
                sum.add(per[t].avg_rate);
                sum_sq.add(per[t].avg_rate * per[t].avg_rate);
                for (std::size_t k = 0; k < sinr.size(); ++k)
                    sinr[k].add(per[t].per_user_sinr[k]);
            }
            if (kept == 0)
            {
                r.avg_rate = std::numeric_limits<double>::quiet_NaN();
                return r;
            }
            r.avg_rate = sum.value() / kept;
            if (kept > 1)
            {
                const double var = std::max(0.0, (sum_sq.value() - kept * r.avg_rate * r.avg_rate) / (kept - 1));
                r.std_error = std::sqrt(var / kept);
            }
            for (const auto &s : sinr)
                r.per_user_sinr.push_back(s.value() / kept);
            return r;
        }
    }

    /// End-to-end hybrid chain: uplink estimation of the equivalent channel under the
    /// contamination configured in `cfg`, then ZF on the estimate. Uses dl.trials trials.
    inline RateReport hybrid_rate(const SystemConfig &cfg, const DownlinkConfig &dl, unsigned workers = 1)
    {
        cfg.validate();
        dl.validate();
        const PilotMatrix pilots = pilot_matrix(cfg.N, cfg.pilot_energy);
        const RVector b = compensation_diagonal(cfg);
        return detail::aggregate_rates(Scenario::hybrid, cfg.N, dl.trials, workers, [&](std::size_t t)
                                       {
                                           const EquivalentChannel eq = simulate_estimation_trial(cfg, pilots, b, t);
                                           return downlink_rate(eq.true_eq, eq.estimate, dl.noise_variance, dl.power_budget, dl.rcond_threshold); });
    }

    /// Fully digital M-antenna BS with conventional LS estimation. Each user beams toward the
    /// BS with its analog vector, giving the effective channel g_k = H_k conj(w_k). The LS
    /// estimate is g_k + e_k with e_k i.i.d. CN(0, xi_sq * path_loss(k)) per coefficient; this
    /// error power does not shrink with M. ZF on the estimate, evaluated on the true channels.
    /// Geometry draws are shared with hybrid_rate for the same seed (paired trials).
    inline RateReport ls_fully_digital_baseline(const SystemConfig &cfg, const DownlinkConfig &dl, double xi_sq,
                                                unsigned workers = 1)
    {
        cfg.validate();
        dl.validate();
        detail::require(xi_sq >= 0.0, "xi_sq must be >= 0", "baseline_xi_sq");
        return detail::aggregate_rates(Scenario::fully_digital_ls, cfg.N, dl.trials, workers, [&](std::size_t t)
                                       {
                                           const RandomStream root = RandomStream::for_trial(cfg.seed, t);
                                           RandomStream geo_rng = root.substream(StreamPurpose::geometry);
                                           RandomStream aoa_rng = root.substream(StreamPurpose::aoa_error);
                                           RandomStream err_rng = root.substream(StreamPurpose::baseline_error);

                                           const Geometry geometry = sample_geometry(cfg, geo_rng);
                                           const AnalogBeamformers beams = design_beamformers(cfg, geometry, aoa_rng);
                                           CMatrix g(cfg.N, cfg.M);
                                           for (int k = 0; k < cfg.N; ++k)
                                           {
                                               const auto link = LinkChannel::from_link(geometry.intra[static_cast<std::size_t>(k)], cfg.path_loss(k),
                                                                                        cfg.k_intra(k), cfg.M, cfg.P, cfg.d_over_lambda);
                                               g.row(k) = link.apply_tx(beams.user_tx[static_cast<std::size_t>(k)]).transpose();
                                           }
                                           CMatrix estimate = g;
                                           if (xi_sq > 0.0)
                                               for (int k = 0; k < cfg.N; ++k)
                                                   for (int m = 0; m < cfg.M; ++m)
                                                       estimate(k, m) += err_rng.complex_normal(xi_sq * cfg.path_loss(k));
                                           return downlink_rate(g, estimate, dl.noise_variance, dl.power_budget, dl.rcond_threshold); });
    }
}

#endif
