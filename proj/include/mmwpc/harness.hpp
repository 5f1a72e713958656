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

#ifndef MMWPC_HARNESS_HPP
#define MMWPC_HARNESS_HPP

#include "downlink.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mmwpc
{
    inline constexpr const char *version_tag = "mmwpc 0.1.0";

    enum class ExperimentKind
    {
        beam_pattern,
        nmse_sweep,
        rate_sweep,
        single_point,
    };

    inline const char *to_string(ExperimentKind k)
    {
        switch (k)
        {
        case ExperimentKind::beam_pattern:
            return "beam_pattern";
        case ExperimentKind::nmse_sweep:
            return "nmse_sweep";
        case ExperimentKind::rate_sweep:
            return "rate_sweep";
        case ExperimentKind::single_point:
            return "single_point";
        }
        return "?";
    }

    /// A fully resolved experiment: what to sweep, over which base scenario, with which seed.
    struct ExperimentSpec
    {
        ExperimentKind kind = ExperimentKind::single_point;
        std::string name = "config";  // preset tag or "config"
        std::vector<int> sweep_m;      // M values; required for sweeps
        std::vector<int> sweep_p;      // optional P values (nmse_sweep); empty = base.P
        SystemConfig base;
        DownlinkConfig downlink;
        double aim_angle = pi / 2;     // beam_pattern aim, radians
        int grid_points = 3601;        // beam_pattern angle grid over [0, pi]
        std::string output_path;
        std::uint64_t seed = 1;

        std::vector<int> p_values() const { return sweep_p.empty() ? std::vector<int>{base.P} : sweep_p; }

        /// Base config with the given array sizes and the experiment seed.
        SystemConfig at(int M, int P) const
        {
            SystemConfig c = base;
            c.M = M;
            c.P = P;
            c.seed = seed;
            return c;
        }

        void validate() const
        {
            auto strictly_increasing = [](const std::vector<int> &v)
            {
                return std::adjacent_find(v.begin(), v.end(), [](int a, int b) { return a >= b; }) == v.end();
            };
            if (kind != ExperimentKind::single_point)
                detail::require(!sweep_m.empty(), "sweep.M must list at least one value", "sweep.M");
            detail::require(strictly_increasing(sweep_m), "sweep.M must be strictly increasing", "sweep.M");
            detail::require(strictly_increasing(sweep_p), "sweep.P must be strictly increasing", "sweep.P");
            downlink.validate();
            if (kind == ExperimentKind::beam_pattern)
            {
                detail::require_angle(aim_angle, "aim_angle");
                detail::require(grid_points >= 2, "grid_points must be >= 2", "grid_points");
                for (int m : sweep_m)
                    detail::require(m >= 1, "sweep.M entries must be >= 1", "sweep.M");
                return;
            }
            const std::vector<int> ms = sweep_m.empty() ? std::vector<int>{base.M} : sweep_m;
            for (int m : ms)
                for (int p : p_values())
                    at(m, p).validate();
        }
    };

    // -------------------------------------------------------------------------------------
    // Configuration file
    // -------------------------------------------------------------------------------------

    namespace detail
    {
        inline std::string strip_comment(std::string v)
        {
            const auto pos = v.find_first_of(";#");
            if (pos != std::string::npos)
                v.erase(pos);
            while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
                v.pop_back();
            return v;
        }

        inline int parse_int(const std::string &v, const std::string &field)
        {
            int out = 0;
            const auto *end = v.data() + v.size();
            const auto [ptr, ec] = std::from_chars(v.data(), end, out);
            if (ec != std::errc() || ptr != end || v.empty())
                throw ConfigError(field + ": expected an integer, got '" + v + "'", field);
            return out;
        }

        inline std::uint64_t parse_u64(const std::string &v, const std::string &field)
        {
            std::uint64_t out = 0;
            const auto *end = v.data() + v.size();
            const auto [ptr, ec] = std::from_chars(v.data(), end, out);
            if (ec != std::errc() || ptr != end || v.empty())
                throw ConfigError(field + ": expected a non-negative integer, got '" + v + "'", field);
            return out;
        }

        inline double parse_double(const std::string &v, const std::string &field)
        {
            if (v == "inf" || v == "infinity")
                return std::numeric_limits<double>::infinity();
            char *end = nullptr;
            const double out = std::strtod(v.c_str(), &end);
            if (v.empty() || end != v.c_str() + v.size())
                throw ConfigError(field + ": expected a number, got '" + v + "'", field);
            return out;
        }

        inline bool parse_bool(const std::string &v, const std::string &field)
        {
            if (v == "true" || v == "yes" || v == "1" || v == "on")
                return true;
            if (v == "false" || v == "no" || v == "0" || v == "off")
                return false;
            throw ConfigError(field + ": expected true or false, got '" + v + "'", field);
        }

        inline std::vector<int> parse_int_list(const std::string &v, const std::string &field)
        {
            std::vector<int> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                const auto b = item.find_first_not_of(" \t");
                const auto e = item.find_last_not_of(" \t");
                if (b == std::string::npos)
                    throw ConfigError(field + ": empty list entry", field);
                out.push_back(parse_int(item.substr(b, e - b + 1), field));
            }
            return out;
        }

        inline ExperimentKind parse_kind(const std::string &v)
        {
            for (auto k : {ExperimentKind::beam_pattern, ExperimentKind::nmse_sweep, ExperimentKind::rate_sweep,
                           ExperimentKind::single_point})
                if (v == to_string(k))
                    return k;
            throw ConfigError("kind: unknown experiment kind '" + v + "'", "kind");
        }

        inline std::string format_double(double x)
        {
            if (std::isinf(x))
                return x > 0 ? "inf" : "-inf";
            if (std::isnan(x))
                return "nan";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        // Every uniform per-link vector is written back as its scalar; otherwise as "mixed".
        inline std::string uniform_value(const std::vector<double> &v)
        {
            if (v.empty())
                return "none";
            if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); }))
                return format_double(v.front());
            return "mixed";
        }
    }

    /// Parses the key-value experiment description. Top-level keys (kind, seed, output) must
    /// precede the [channel], [beamforming], [estimation], [downlink] and [sweep] sections.
    inline ExperimentSpec parse_config(std::istream &in)
    {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        try
        {
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ParseError(e.message(), e.line());
        }

        ExperimentSpec spec;
        double k_intra = 5.0, k_inter = 5.0, path_loss = 1.0, xi_sq = 0.01;
        std::string rel_loss_text;
        bool have_kind = false;

        static const std::map<std::string, std::vector<std::string>> known = {
            {"channel", {"M", "P", "N", "L", "clusters", "d_over_lambda", "rician_k_intra", "rician_k_inter", "path_loss_intra", "xi_sq", "rel_loss_inter", "angle_sampling"}},
            {"beamforming", {"aoa_error_std", "aim_angle", "grid_points"}},
            {"estimation", {"pilot_energy", "noise_variance", "high_snr", "trials"}},
            {"downlink", {"power_budget", "noise_variance", "rcond_threshold", "hybrid_xi_sq", "baseline_xi_sq", "trials"}},
            {"sweep", {"M", "P"}},
        };

        for (const auto &[key, node] : tree)
        {
            if (node.empty())
            {
                const std::string v = detail::strip_comment(node.data());
                if (key == "kind")
                {
                    spec.kind = detail::parse_kind(v);
                    have_kind = true;
                }
                else if (key == "seed")
                    spec.seed = detail::parse_u64(v, "seed");
                else if (key == "output")
                    spec.output_path = v;
                else if (key == "name")
                    spec.name = v;
                else
                    throw ConfigError("unknown top-level key '" + key + "'", key);
                continue;
            }
            const auto section = known.find(key);
            if (section == known.end())
                throw ConfigError("unknown section [" + key + "]", key);
            for (const auto &[name, leaf] : node)
            {
                const std::string field = key + "." + name;
                if (std::find(section->second.begin(), section->second.end(), name) == section->second.end())
                    throw ConfigError("unknown key '" + field + "'", field);
                const std::string v = detail::strip_comment(leaf.data());
                if (key == "channel")
                {
                    if (name == "M")
                        spec.base.M = detail::parse_int(v, field);
                    else if (name == "P")
                        spec.base.P = detail::parse_int(v, field);
                    else if (name == "N")
                        spec.base.N = detail::parse_int(v, field);
                    else if (name == "L")
                        spec.base.L = detail::parse_int(v, field);
                    else if (name == "clusters")
                        spec.base.n_clusters = detail::parse_int(v, field);
                    else if (name == "d_over_lambda")
                        spec.base.d_over_lambda = detail::parse_double(v, field);
                    else if (name == "rician_k_intra")
                        k_intra = detail::parse_double(v, field);
                    else if (name == "rician_k_inter")
                        k_inter = detail::parse_double(v, field);
                    else if (name == "path_loss_intra")
                        path_loss = detail::parse_double(v, field);
                    else if (name == "xi_sq")
                        xi_sq = detail::parse_double(v, field);
                    else if (name == "rel_loss_inter")
                        rel_loss_text = v;
                    else if (name == "angle_sampling")
                    {
                        if (v == "cos_uniform")
                            spec.base.angle_sampling = AngleSampling::cos_uniform;
                        else if (v == "uniform_angle")
                            spec.base.angle_sampling = AngleSampling::uniform_angle;
                        else
                            throw ConfigError(field + ": expected cos_uniform or uniform_angle", field);
                    }
                }
                else if (key == "beamforming")
                {
                    if (name == "aoa_error_std")
                        spec.base.aoa_error_std = detail::parse_double(v, field);
                    else if (name == "aim_angle")
                        spec.aim_angle = detail::parse_double(v, field);
                    else
                        spec.grid_points = detail::parse_int(v, field);
                }
                else if (key == "estimation")
                {
                    if (name == "pilot_energy")
                        spec.base.pilot_energy = detail::parse_double(v, field);
                    else if (name == "noise_variance")
                        spec.base.noise_variance = detail::parse_double(v, field);
                    else if (name == "high_snr")
                        spec.base.high_snr = detail::parse_bool(v, field);
                    else
                        spec.base.trials = detail::parse_int(v, field);
                }
                else if (key == "downlink")
                {
                    if (name == "power_budget")
                        spec.downlink.power_budget = detail::parse_double(v, field);
                    else if (name == "noise_variance")
                        spec.downlink.noise_variance = detail::parse_double(v, field);
                    else if (name == "rcond_threshold")
                        spec.downlink.rcond_threshold = detail::parse_double(v, field);
                    else if (name == "hybrid_xi_sq")
                        spec.downlink.hybrid_xi_sq = detail::parse_double(v, field);
                    else if (name == "baseline_xi_sq")
                        spec.downlink.baseline_xi_sq = detail::parse_double(v, field);
                    else
                        spec.downlink.trials = detail::parse_int(v, field);
                }
                else // sweep
                {
                    if (name == "M")
                        spec.sweep_m = detail::parse_int_list(v, field);
                    else
                        spec.sweep_p = detail::parse_int_list(v, field);
                }
            }
        }
        detail::require(have_kind, "missing required key 'kind'", "kind");
        detail::require(spec.base.N >= 1 && spec.base.L >= 0, "channel.N must be >= 1 and channel.L >= 0", "channel.N");
        detail::require(!(rel_loss_text.size() && tree.get_child_optional("channel.xi_sq")),
                        "channel.xi_sq and channel.rel_loss_inter are mutually exclusive", "channel.rel_loss_inter");
        spec.base.set_uniform_links(k_intra, k_inter, path_loss, xi_sq);
        if (!rel_loss_text.empty())
        {
            const double rho = detail::parse_double(rel_loss_text, "channel.rel_loss_inter");
            spec.base.rel_loss_inter.assign(spec.base.rel_loss_inter.size(), rho);
        }
        spec.base.seed = spec.seed;
        spec.validate();
        return spec;
    }

    inline ExperimentSpec load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open configuration file", path);
        return parse_config(in);
    }

    /// Bundled setups reproducing the three figures of the study: "fig3" (beam patterns),
    /// "fig4" (NMSE versus M for two user array sizes) and "fig5" (rate versus M).
    inline ExperimentSpec preset(const std::string &name)
    {
        ExperimentSpec s;
        s.name = name;
        s.seed = 20170601;
        s.base = SystemConfig::uniform(64, 16, 10, 6, 5.0, 5.0, 1.0, 0.01);
        s.base.high_snr = true;
        if (name == "fig3")
        {
            s.kind = ExperimentKind::beam_pattern;
            s.sweep_m = {16, 32, 64, 128};
            s.aim_angle = pi / 2;
            s.grid_points = 3601;
        }
        else if (name == "fig4")
        {
            // M grid is a reconstruction: the published axis granularity is not recoverable.
            s.kind = ExperimentKind::nmse_sweep;
            s.sweep_m = {16, 32, 64, 128, 256};
            s.sweep_p = {8, 16};
            s.base.trials = 2000;
        }
        else if (name == "fig5")
        {
            s.kind = ExperimentKind::rate_sweep;
            s.sweep_m = {16, 32, 64, 128};
            s.downlink.trials = 500;
            s.downlink.baseline_xi_sq = 0.2;
            s.downlink.hybrid_xi_sq = 0.3;
        }
        else
            throw ConfigError("unknown preset '" + name + "' (expected fig3, fig4 or fig5)", "preset");
        s.base.seed = s.seed;
        s.validate();
        return s;
    }

    // -------------------------------------------------------------------------------------
    // Results
    // -------------------------------------------------------------------------------------

    struct NmseRow
    {
        SystemConfig config;
        NmseReport report;
    };

    struct RateRow
    {
        SystemConfig config;
        double xi_sq = 0.0;
        RateReport report;
    };

    struct BeamRow
    {
        int M = 0;
        PatternSample sample;
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::vector<NmseRow> nmse;
        std::vector<RateRow> rates;
        std::vector<BeamRow> beams;
    };

    inline ExperimentResult run_experiment(const ExperimentSpec &spec, unsigned workers = 1)
    {
        spec.validate();
        ExperimentResult out;
        out.spec = spec;
        switch (spec.kind)
        {
        case ExperimentKind::beam_pattern:
        {
            const auto grid = angle_grid(spec.grid_points);
            for (int m : spec.sweep_m)
                for (const auto &s : beam_pattern(receive_beamformer(spec.aim_angle, m, spec.base.d_over_lambda), grid,
                                                  spec.base.d_over_lambda))
                    out.beams.push_back({m, s});
            break;
        }
        case ExperimentKind::nmse_sweep:
        case ExperimentKind::single_point:
        {
            const std::vector<int> ms = spec.kind == ExperimentKind::single_point ? std::vector<int>{spec.base.M} : spec.sweep_m;
            const std::vector<int> ps = spec.kind == ExperimentKind::single_point ? std::vector<int>{spec.base.P} : spec.p_values();
            for (int p : ps)
                for (int m : ms)
                {
                    const SystemConfig cfg = spec.at(m, p);
                    out.nmse.push_back({cfg, empirical_nmse(cfg, workers)});
                }
            break;
        }
        case ExperimentKind::rate_sweep:
            for (int m : spec.sweep_m)
            {
                SystemConfig hybrid = spec.at(m, spec.base.P);
                hybrid.set_uniform_links(spec.base.k_intra(0), spec.base.L ? spec.base.k_inter(0, 0) : 0.0,
                                         spec.base.path_loss(0), spec.downlink.hybrid_xi_sq);
                out.rates.push_back({hybrid, spec.downlink.hybrid_xi_sq, hybrid_rate(hybrid, spec.downlink, workers)});
                const SystemConfig fd = spec.at(m, spec.base.P);
                out.rates.push_back({fd, spec.downlink.baseline_xi_sq,
                                     ls_fully_digital_baseline(fd, spec.downlink, spec.downlink.baseline_xi_sq, workers)});
            }
            break;
        }
        return out;
    }

    inline const std::vector<std::string> &nmse_columns()
    {
        static const std::vector<std::string> c = {"M", "P", "N", "L", "K", "xi_sq", "snr_mode", "nmse_empirical",
                                                   "nmse_analytical_full", "nmse_analytical_simplified",
                                                   "contamination_term", "noise_term", "trials"};
        return c;
    }

    inline const std::vector<std::string> &rate_columns()
    {
        static const std::vector<std::string> c = {"scenario", "M", "P", "N", "L", "xi_sq", "avg_rate", "discarded_trials"};
        return c;
    }

    inline const std::vector<std::string> &beam_columns()
    {
        static const std::vector<std::string> c = {"M", "angle_rad", "gain_linear", "gain_db"};
        return c;
    }

    namespace detail
    {
        inline std::string join(const std::vector<std::string> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + v[i];
            return s;
        }

        inline std::string join(const std::vector<int> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        }

        inline double mean_inter_k(const SystemConfig &c)
        {
            const auto &v = c.L > 0 ? c.rician_k_inter : c.rician_k_intra;
            double s = 0.0;
            for (double x : v)
                s += x;
            return s / static_cast<double>(v.size());
        }

        inline void write_provenance(std::ostream &os, const ExperimentSpec &s)
        {
            const auto &b = s.base;
            os << "# " << version_tag << '\n'
               << "# kind = " << to_string(s.kind) << '\n'
               << "# source = " << s.name << '\n'
               << "# seed = " << s.seed << '\n'
               << "# estimation.trials = " << b.trials << '\n'
               << "# downlink.trials = " << s.downlink.trials << '\n'
               << "# channel.M = " << b.M << '\n'
               << "# channel.P = " << b.P << '\n'
               << "# channel.N = " << b.N << '\n'
               << "# channel.L = " << b.L << '\n'
               << "# channel.clusters = " << b.n_clusters << '\n'
               << "# channel.d_over_lambda = " << format_double(b.d_over_lambda) << '\n'
               << "# channel.rician_k_intra = " << uniform_value(b.rician_k_intra) << '\n'
               << "# channel.rician_k_inter = " << uniform_value(b.rician_k_inter) << '\n'
               << "# channel.path_loss_intra = " << uniform_value(b.path_loss_intra) << '\n'
               << "# channel.rel_loss_inter = " << uniform_value(b.rel_loss_inter) << '\n'
               << "# channel.xi_sq = " << format_double(b.mean_xi_sq()) << '\n'
               << "# channel.angle_sampling = " << to_string(b.angle_sampling) << '\n'
               << "# beamforming.aoa_error_std = " << format_double(b.aoa_error_std) << '\n'
               << "# beamforming.aim_angle = " << format_double(s.aim_angle) << '\n'
               << "# beamforming.grid_points = " << s.grid_points << '\n'
               << "# estimation.pilot_energy = " << format_double(b.pilot_energy) << '\n'
               << "# estimation.noise_variance = " << format_double(b.noise_variance) << '\n'
               << "# estimation.high_snr = " << (b.high_snr ? "true" : "false") << '\n'
               << "# downlink.power_budget = " << format_double(s.downlink.power_budget) << '\n'
               << "# downlink.noise_variance = " << format_double(s.downlink.noise_variance) << '\n'
               << "# downlink.rcond_threshold = " << format_double(s.downlink.rcond_threshold) << '\n'
               << "# downlink.hybrid_xi_sq = " << format_double(s.downlink.hybrid_xi_sq) << '\n'
               << "# downlink.baseline_xi_sq = " << format_double(s.downlink.baseline_xi_sq) << '\n'
               << "# sweep.M = " << join(s.sweep_m) << '\n'
               << "# sweep.P = " << join(s.p_values()) << '\n';
        }
    }

    /// CSV text of a result: provenance comment block ('#'), header, one row per report.
    /// Numbers carry 17 significant digits.
    inline std::string format_results(const ExperimentResult &r)
    {
        using detail::format_double;
        std::ostringstream os;
        detail::write_provenance(os, r.spec);
        switch (r.spec.kind)
        {
        case ExperimentKind::beam_pattern:
            os << detail::join(beam_columns()) << '\n';
            for (const auto &b : r.beams)
                os << b.M << ',' << format_double(b.sample.angle) << ',' << format_double(b.sample.gain) << ','
                   << format_double(to_db(b.sample.gain)) << '\n';
            break;
        case ExperimentKind::nmse_sweep:
        case ExperimentKind::single_point:
            os << detail::join(nmse_columns()) << '\n';
            for (const auto &n : r.nmse)
            {
                const auto &c = n.config;
                os << c.M << ',' << c.P << ',' << c.N << ',' << c.L << ',' << format_double(detail::mean_inter_k(c)) << ','
                   << format_double(c.mean_xi_sq()) << ',' << (c.effective_noise_variance() == 0.0 ? "high" : "finite") << ','
                   << format_double(n.report.empirical) << ',' << format_double(n.report.analytical_full) << ','
                   << format_double(n.report.analytical_simplified) << ',' << format_double(n.report.contamination_term) << ','
                   << format_double(n.report.noise_term) << ',' << n.report.trials_used << '\n';
            }
            break;
        case ExperimentKind::rate_sweep:
            os << detail::join(rate_columns()) << '\n';
            for (const auto &row : r.rates)
            {
                const auto &c = row.config;
                os << to_string(row.report.scenario) << ',' << c.M << ',' << c.P << ',' << c.N << ',' << c.L << ','
                   << format_double(row.xi_sq) << ',' << format_double(row.report.avg_rate) << ','
                   << row.report.discarded_trials << '\n';
            }
            break;
        }
        return os.str();
    }

    inline void write_results(const ExperimentResult &r, const std::string &path)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open output file", path);
        out << format_results(r);
        out.flush();
        if (!out)
            throw IoError("failed writing results", path);
    }

    /// Parsed CSV: comment lines, header and rows as strings.
    struct CsvTable
    {
        std::vector<std::string> comments;
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
    };

    inline CsvTable read_csv(std::istream &in)
    {
        CsvTable t;
        std::string line;
        auto split = [](const std::string &s)
        {
            std::vector<std::string> out;
            std::stringstream ss(s);
            std::string cell;
            while (std::getline(ss, cell, ','))
                out.push_back(cell);
            return out;
        };
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            if (line[0] == '#')
                t.comments.push_back(line);
            else if (t.header.empty())
                t.header = split(line);
            else
                t.rows.push_back(split(line));
        }
        return t;
    }
}

#endif
