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

#ifndef MMWPC_CHANNEL_MODEL_HPP
#define MMWPC_CHANNEL_MODEL_HPP

#include "config.hpp"
#include "random.hpp"

#include <vector>

namespace mmwpc
{
    // ---------------------------------------------------------------------------------------
    // Uniform linear array responses
    // ---------------------------------------------------------------------------------------

    namespace detail
    {
        // Entry m: exp(-j 2 pi m d cos_angle).
        inline CVector ula_response(double cos_angle, int n, double d_over_lambda)
        {
            CVector v(n);
            const double step = -2.0 * pi * d_over_lambda * cos_angle;
            for (int m = 0; m < n; ++m)
                v[m] = std::polar(1.0, step * m);
            return v;
        }

        inline void require_elements(int n, const char *name)
        {
            require(n >= 1, std::string(name) + " must be >= 1", name);
        }
    }

    /// BS array response toward incidence angle `theta` (radians, [0, pi]).
    inline CVector steering_bs(double theta, int M, double d_over_lambda = 0.5)
    {
        detail::require_angle(theta, "theta");
        detail::require_elements(M, "M");
        return detail::ula_response(std::cos(theta), M, d_over_lambda);
    }

    /// User array response toward incidence angle `phi` (radians, [0, pi]).
    inline CVector steering_user(double phi, int P, double d_over_lambda = 0.5)
    {
        detail::require_angle(phi, "phi");
        detail::require_elements(P, "P");
        return detail::ula_response(std::cos(phi), P, d_over_lambda);
    }

    /// Rank-one line-of-sight matrix sqrt(loss) * a_bs(theta) * a_user(phi)^H.
    inline CMatrix los_channel(double theta, double phi, double loss, int M, int P, double d_over_lambda = 0.5)
    {
        detail::require(loss > 0.0 && std::isfinite(loss), "loss must be > 0", "loss");
        return std::sqrt(loss) * steering_bs(theta, M, d_over_lambda) * steering_user(phi, P, d_over_lambda).adjoint();
    }

    // ---------------------------------------------------------------------------------------
    // Geometry
    // ---------------------------------------------------------------------------------------

    struct ScatterPath
    {
        double theta_bs = pi / 2; // angle at the BS array
        double phi_user = pi / 2; // angle at the user array
        cplx gain{1.0, 0.0};      // path attenuation, CN(0, 1)
    };

    /// Angles of one user-to-BS link: the strongest (LOS) path plus its NLOS clusters.
    struct LinkGeometry
    {
        double theta_bs = pi / 2;
        double phi_user = pi / 2;
        std::vector<ScatterPath> clusters;
    };

    /// All angles and gains of one Monte Carlo draw.
    struct Geometry
    {
        int N = 0;
        int L = 0;
        std::vector<LinkGeometry> intra; // desired user k -> desired BS
        std::vector<LinkGeometry> inter; // user k of cell l -> desired BS, index l*N + k
        // Aim angle of the transmit beam of user k in cell l. Interfering users steer toward
        // their own serving BS, so this angle is unrelated to inter[l*N + k].phi_user.
        std::vector<double> inter_aim;

        std::size_t link(int l, int k) const noexcept
        {
            return static_cast<std::size_t>(l) * static_cast<std::size_t>(N) + static_cast<std::size_t>(k);
        }
        double theta_k(int k) const { return intra.at(static_cast<std::size_t>(k)).theta_bs; }
        double phi_k(int k) const { return intra.at(static_cast<std::size_t>(k)).phi_user; }
        double theta_lk(int l, int k) const { return inter.at(link(l, k)).theta_bs; }
        double delta_phi_lk(int l, int k) const { return inter.at(link(l, k)).phi_user; }
        double phi_lk(int l, int k) const { return inter_aim.at(link(l, k)); }
    };

    namespace detail
    {
        inline double draw_angle(RandomStream &rng, AngleSampling mode)
        {
            if (mode == AngleSampling::cos_uniform)
                return std::acos(rng.uniform(-1.0, 1.0));
            return rng.uniform(0.0, pi);
        }

        inline LinkGeometry draw_link(RandomStream &rng, const SystemConfig &cfg, double k_factor)
        {
            LinkGeometry g;
            g.theta_bs = draw_angle(rng, cfg.angle_sampling);
            g.phi_user = draw_angle(rng, cfg.angle_sampling);
            if (std::isinf(k_factor))
                return g;
            g.clusters.resize(static_cast<std::size_t>(cfg.n_clusters));
            for (auto &c : g.clusters)
            {
                c.theta_bs = draw_angle(rng, cfg.angle_sampling);
                c.phi_user = draw_angle(rng, cfg.angle_sampling);
                c.gain = rng.complex_normal(1.0);
            }
            return g;
        }
    }

    /// Draws every angle and NLOS gain of one realization. Deterministic in `rng`; the draw
    /// order does not depend on M or P, so one stream yields paired geometries across array sizes.
    inline Geometry sample_geometry(const SystemConfig &cfg, RandomStream &rng)
    {
        Geometry g;
        g.N = cfg.N;
        g.L = cfg.L;
        g.intra.reserve(static_cast<std::size_t>(cfg.N));
        for (int k = 0; k < cfg.N; ++k)
            g.intra.push_back(detail::draw_link(rng, cfg, cfg.k_intra(k)));
        const auto n_inter = static_cast<std::size_t>(cfg.L) * static_cast<std::size_t>(cfg.N);
        g.inter.reserve(n_inter);
        g.inter_aim.reserve(n_inter);
        for (int l = 0; l < cfg.L; ++l)
            for (int k = 0; k < cfg.N; ++k)
            {
                g.inter.push_back(detail::draw_link(rng, cfg, cfg.k_inter(l, k)));
                g.inter_aim.push_back(detail::draw_angle(rng, cfg.angle_sampling));
            }
        return g;
    }

    // ---------------------------------------------------------------------------------------
    // Dense channel matrices
    // ---------------------------------------------------------------------------------------

    /// NLOS component sqrt(loss) * sqrt(1/N_cl) * sum_i alpha_i a_bs(theta_i) a_user(phi_i)^H.
    inline CMatrix scattering_channel(const LinkGeometry &link, double loss, int M, int P, double d_over_lambda = 0.5)
    {
        detail::require(!link.clusters.empty(), "scattering channel needs at least one cluster", "n_clusters");
        detail::require(loss >= 0.0 && std::isfinite(loss), "loss must be >= 0", "loss");
        CMatrix h = CMatrix::Zero(M, P);
        for (const auto &c : link.clusters)
            h.noalias() += c.gain * steering_bs(c.theta_bs, M, d_over_lambda) * steering_user(c.phi_user, P, d_over_lambda).adjoint();
        return std::sqrt(loss / static_cast<double>(link.clusters.size())) * h;
    }

    /// sqrt(K/(K+1)) * H_los + sqrt(1/(K+1)) * H_scat; K = inf returns H_los.
    inline CMatrix compose_rician(const CMatrix &h_los, const CMatrix &h_scat, double k_factor)
    {
        if (h_los.rows() != h_scat.rows() || h_los.cols() != h_scat.cols())
            throw DimensionError("compose_rician: LOS and scattering shapes differ");
        detail::require(k_factor >= 0.0, "Rician factor must be >= 0", "k_factor");
        const auto [w_los, w_scat] = detail::rician_weights(k_factor);
        if (w_scat == 0.0)
            return w_los * h_los;
        return w_los * h_los + w_scat * h_scat;
    }

    namespace detail
    {
        inline CMatrix rician_link_dense(const LinkGeometry &link, double loss, double k_factor, int M, int P, double d)
        {
            if (loss == 0.0)
                return CMatrix::Zero(M, P);
            const CMatrix los = los_channel(link.theta_bs, link.phi_user, loss, M, P, d);
            if (std::isinf(k_factor))
                return los;
            return compose_rician(los, scattering_channel(link, loss, M, P, d), k_factor);
        }
    }

    /// Desired-cell channel H_k (M x P) with 0-based user index k.
    inline CMatrix intracell_channel(int k, const SystemConfig &cfg, const Geometry &geometry)
    {
        detail::require(k >= 0 && k < cfg.N, "user index out of range", "k");
        return detail::rician_link_dense(geometry.intra.at(static_cast<std::size_t>(k)), cfg.path_loss(k),
                                         cfg.k_intra(k), cfg.M, cfg.P, cfg.d_over_lambda);
    }

    /// Inter-cell channel from user k of neighbouring cell l (both 0-based) to the desired BS.
    /// Its large-scale loss is rel_loss(l,k)^2 * path_loss(k).
    inline CMatrix intercell_channel(int l, int k, const SystemConfig &cfg, const Geometry &geometry)
    {
        detail::require(l >= 0 && l < cfg.L, "cell index out of range", "l");
        detail::require(k >= 0 && k < cfg.N, "user index out of range", "k");
        const double rho = cfg.rel_loss(l, k);
        return detail::rician_link_dense(geometry.inter.at(geometry.link(l, k)), rho * rho * cfg.path_loss(k),
                                         cfg.k_inter(l, k), cfg.M, cfg.P, cfg.d_over_lambda);
    }

    // ---------------------------------------------------------------------------------------
    // Factored channels
    // ---------------------------------------------------------------------------------------

    /// An M x P channel kept as a sum of rank-one array-response products,
    ///   H = sum_t coef_t * a_bs(cos_bs_t) * a_user(cos_user_t)^H.
    /// Projections onto beamformers cost O(terms * (M + P)) instead of O(M * P).
    class LinkChannel
    {
    public:
        struct Term
        {
            cplx coef;
            double cos_bs;
            double cos_user;
        };

        LinkChannel() = default;
        LinkChannel(int M, int P, double d_over_lambda) : M_(M), P_(P), d_(d_over_lambda) {}

        static LinkChannel from_link(const LinkGeometry &link, double loss, double k_factor, int M, int P, double d)
        {
            LinkChannel ch(M, P, d);
            if (loss == 0.0)
                return ch;
            const auto [w_los, w_scat] = detail::rician_weights(k_factor);
            const double amp = std::sqrt(loss);
            ch.terms_.push_back({cplx(amp * w_los, 0.0), std::cos(link.theta_bs), std::cos(link.phi_user)});
            if (w_scat > 0.0)
            {
                detail::require(!link.clusters.empty(), "scattering channel needs at least one cluster", "n_clusters");
                const double s = amp * w_scat / std::sqrt(static_cast<double>(link.clusters.size()));
                for (const auto &c : link.clusters)
                    ch.terms_.push_back({s * c.gain, std::cos(c.theta_bs), std::cos(c.phi_user)});
            }
            return ch;
        }

        int rows() const noexcept { return M_; }
        int cols() const noexcept { return P_; }
        const std::vector<Term> &terms() const noexcept { return terms_; }

        CMatrix dense() const
        {
            CMatrix h = CMatrix::Zero(M_, P_);
            for (const auto &t : terms_)
                h.noalias() += t.coef * detail::ula_response(t.cos_bs, M_, d_) *
                               detail::ula_response(t.cos_user, P_, d_).adjoint();
            return h;
        }

        /// Row vector with entries rx.col(j)^T * H * conj(tx), i.e. tx^H H^T rx.
        CRowVector project(const CMatrix &rx, const CVector &tx) const
        {
            if (rx.rows() != M_ || tx.size() != P_)
                throw DimensionError("LinkChannel::project: beamformer sizes do not match the channel");
            CRowVector out = CRowVector::Zero(rx.cols());
            const CVector tx_conj = tx.conjugate();
            for (const auto &t : terms_)
            {
                const cplx user_side = detail::ula_response(t.cos_user, P_, d_).dot(tx_conj);
                out.noalias() += (t.coef * user_side) * (rx.transpose() * detail::ula_response(t.cos_bs, M_, d_)).transpose();
            }
            return out;
        }

        /// Effective M-vector H * conj(tx).
        CVector apply_tx(const CVector &tx) const
        {
            if (tx.size() != P_)
                throw DimensionError("LinkChannel::apply_tx: beamformer size does not match the channel");
            CVector out = CVector::Zero(M_);
            const CVector tx_conj = tx.conjugate();
            for (const auto &t : terms_)
                out.noalias() += (t.coef * detail::ula_response(t.cos_user, P_, d_).dot(tx_conj)) *
                                 detail::ula_response(t.cos_bs, M_, d_);
            return out;
        }

    private:
        int M_ = 0;
        int P_ = 0;
        double d_ = 0.5;
        std::vector<Term> terms_;
    };

    /// One Monte Carlo draw of every channel seen by the desired BS.
    struct ChannelRealization
    {
        int N = 0;
        int L = 0;
        std::vector<LinkChannel> intra; // H_k
        std::vector<LinkChannel> inter; // inter-cell channels, index l*N + k
        Geometry geometry;

        const LinkChannel &inter_link(int l, int k) const
        {
            return inter.at(static_cast<std::size_t>(l) * static_cast<std::size_t>(N) + static_cast<std::size_t>(k));
        }
    };

    inline ChannelRealization realize_channels(const SystemConfig &cfg, Geometry geometry)
    {
        ChannelRealization r;
        r.N = cfg.N;
        r.L = cfg.L;
        r.intra.reserve(static_cast<std::size_t>(cfg.N));
        for (int k = 0; k < cfg.N; ++k)
            r.intra.push_back(LinkChannel::from_link(geometry.intra.at(static_cast<std::size_t>(k)), cfg.path_loss(k),
                                                     cfg.k_intra(k), cfg.M, cfg.P, cfg.d_over_lambda));
        r.inter.reserve(geometry.inter.size());
        for (int l = 0; l < cfg.L; ++l)
            for (int k = 0; k < cfg.N; ++k)
            {
                const double rho = cfg.rel_loss(l, k);
                r.inter.push_back(LinkChannel::from_link(geometry.inter.at(geometry.link(l, k)), rho * rho * cfg.path_loss(k),
                                                         cfg.k_inter(l, k), cfg.M, cfg.P, cfg.d_over_lambda));
            }
        r.geometry = std::move(geometry);
        return r;
    }

    // ---------------------------------------------------------------------------------------
    // Optional scenario builder: first hexagonal ring of neighbouring cells
    // ---------------------------------------------------------------------------------------

    struct HexRingLayout
    {
        double inter_site_distance = 200.0; // metres between neighbouring BSs
        double cell_radius = 100.0;         // users are dropped uniformly in a disc of this radius
        double min_distance = 10.0;         // exclusion radius around each BS
        double path_loss_exponent = 2.0;
    };

    /// Relative inter-cell loss amplitudes rel_loss(l,k) = (d_k / d_lk)^(eta/2) from a random
    /// drop of users around the desired BS and the L <= 6 first-ring BSs (log-distance loss).
    inline std::vector<double> hex_ring_rel_losses(const SystemConfig &cfg, const HexRingLayout &layout, RandomStream &rng)
    {
        detail::require(cfg.L <= 6, "the hexagonal first ring holds at most 6 cells", "L");
        detail::require(layout.cell_radius > layout.min_distance && layout.min_distance > 0.0,
                        "cell_radius must exceed min_distance > 0", "cell_radius");
        detail::require(layout.inter_site_distance > 0.0, "inter_site_distance must be > 0", "inter_site_distance");

        auto drop = [&](double cx, double cy)
        {
            // uniform in the annulus [min_distance, cell_radius]
            const double r2min = layout.min_distance * layout.min_distance;
            const double r2max = layout.cell_radius * layout.cell_radius;
            const double r = std::sqrt(rng.uniform(r2min, r2max));
            const double a = rng.uniform(0.0, 2.0 * pi);
            return std::pair{cx + r * std::cos(a), cy + r * std::sin(a)};
        };

        std::vector<double> d_own(static_cast<std::size_t>(cfg.N));
        for (auto &d : d_own)
        {
            const auto [x, y] = drop(0.0, 0.0);
            d = std::hypot(x, y);
        }
        std::vector<double> out(static_cast<std::size_t>(cfg.L) * static_cast<std::size_t>(cfg.N));
        for (int l = 0; l < cfg.L; ++l)
        {
            const double a = pi / 6.0 + l * pi / 3.0;
            const double bx = layout.inter_site_distance * std::cos(a);
            const double by = layout.inter_site_distance * std::sin(a);
            for (int k = 0; k < cfg.N; ++k)
            {
                const auto [x, y] = drop(bx, by);
                const double ratio = d_own[static_cast<std::size_t>(k)] / std::hypot(x, y);
                out[cfg.link(l, k)] = std::pow(ratio, 0.5 * layout.path_loss_exponent);
            }
        }
        return out;
    }
}

#endif
