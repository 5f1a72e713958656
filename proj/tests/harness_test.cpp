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

#include <mmwpc/harness.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mmwpc;

namespace
{
    ExperimentSpec parse(const std::string &text)
    {
        std::istringstream in(text);
        return parse_config(in);
    }

    std::filesystem::path temp_file(const std::string &name)
    {
        return std::filesystem::temp_directory_path() / ("mmwpc_test_" + name);
    }

    ExperimentSpec small_nmse_spec()
    {
        ExperimentSpec s = parse("kind = nmse_sweep\nseed = 5\n[estimation]\ntrials = 12\n[sweep]\nM = 16, 32\nP = 4, 8\n");
        return s;
    }
}

TEST(LoadConfig, MinimalFileGetsDefaults)
{
    const ExperimentSpec s = parse("kind = nmse_sweep\n[sweep]\nM = 16, 32, 64\n");
    EXPECT_EQ(s.kind, ExperimentKind::nmse_sweep);
    EXPECT_EQ(s.sweep_m, (std::vector<int>{16, 32, 64}));
    EXPECT_EQ(s.base.d_over_lambda, 0.5);
    EXPECT_EQ(s.base.n_clusters, 8);
    EXPECT_EQ(s.base.N, 10);
    EXPECT_EQ(s.base.rician_k_intra.size(), 10u);
    EXPECT_EQ(s.base.rel_loss_inter.size(), 60u);
    EXPECT_NO_THROW(s.validate());
}

TEST(LoadConfig, FullSchemaWithComments)
{
    const ExperimentSpec s = parse(R"(# experiment
kind = rate_sweep   ; trailing comment
seed = 99
output = out.csv

[channel]
P = 4
N = 4
L = 2
clusters = 3
d_over_lambda = 0.4
rician_k_intra = inf
rician_k_inter = 2
path_loss_intra = 1.5
xi_sq = 0.2
angle_sampling = uniform_angle

[beamforming]
aoa_error_std = 0.01
aim_angle = 1.0
grid_points = 11

[estimation]
pilot_energy = 2
noise_variance = 0.1
high_snr = false
trials = 7

[downlink]
power_budget = 2
noise_variance = 0.02
rcond_threshold = 1e-8
hybrid_xi_sq = 0.25
baseline_xi_sq = 0.15
trials = 9

[sweep]
M = 8, 16
)");
    EXPECT_EQ(s.kind, ExperimentKind::rate_sweep);
    EXPECT_EQ(s.seed, 99u);
    EXPECT_EQ(s.base.seed, 99u);
    EXPECT_EQ(s.output_path, "out.csv");
    EXPECT_EQ(s.base.P, 4);
    EXPECT_EQ(s.base.n_clusters, 3);
    EXPECT_DOUBLE_EQ(s.base.d_over_lambda, 0.4);
    EXPECT_TRUE(std::isinf(s.base.k_intra(0)));
    EXPECT_DOUBLE_EQ(s.base.k_inter(1, 3), 2.0);
    EXPECT_NEAR(s.base.xi_sq(2), 0.2, 1e-15);
    EXPECT_EQ(s.base.angle_sampling, AngleSampling::uniform_angle);
    EXPECT_DOUBLE_EQ(s.base.aoa_error_std, 0.01);
    EXPECT_DOUBLE_EQ(s.aim_angle, 1.0);
    EXPECT_EQ(s.grid_points, 11);
    EXPECT_DOUBLE_EQ(s.base.pilot_energy, 2.0);
    EXPECT_DOUBLE_EQ(s.base.noise_variance, 0.1);
    EXPECT_EQ(s.base.trials, 7);
    EXPECT_DOUBLE_EQ(s.downlink.power_budget, 2.0);
    EXPECT_DOUBLE_EQ(s.downlink.rcond_threshold, 1e-8);
    EXPECT_DOUBLE_EQ(s.downlink.hybrid_xi_sq, 0.25);
    EXPECT_DOUBLE_EQ(s.downlink.baseline_xi_sq, 0.15);
    EXPECT_EQ(s.downlink.trials, 9);
}

TEST(LoadConfig, MSmallerThanNRejected)
{
    try
    {
        parse("kind = nmse_sweep\n[channel]\nN = 10\n[sweep]\nM = 8, 16\n");
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError &e)
    {
        EXPECT_NE(std::string(e.what()).find("M must be ≥ N"), std::string::npos);
        EXPECT_EQ(e.field(), "M");
    }
}

TEST(LoadConfig, DuplicateKeyIsLineLocatedParseError)
{
    try
    {
        parse("kind = nmse_sweep\n[sweep]\nM = 16\nM = 32\n");
        FAIL() << "expected ParseError";
    }
    catch (const ParseError &e)
    {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(LoadConfig, MalformedLineIsParseError)
{
    EXPECT_THROW(parse("kind = nmse_sweep\n[sweep\nM = 16\n"), ParseError);
}

TEST(LoadConfig, InvariantViolationsNameTheField)
{
    auto field_of = [](const std::string &text)
    {
        try
        {
            parse(text);
        }
        catch (const ConfigError &e)
        {
            return e.field();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(field_of("[sweep]\nM = 16\n"), "kind");
    EXPECT_EQ(field_of("kind = warp\n"), "kind");
    EXPECT_EQ(field_of("kind = nmse_sweep\n"), "sweep.M");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[sweep]\nM = 32, 16\n"), "sweep.M");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[sweep]\nM = 16, 16\n"), "sweep.M");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[sweep]\nM = 16\nP = 8, 4\n"), "sweep.P");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[sweep]\nM = 16, x\n"), "sweep.M");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[channel]\nP = 1.5\n[sweep]\nM = 16\n"), "channel.P");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[channel]\ncolour = red\n[sweep]\nM = 16\n"), "channel.colour");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[plot]\nx = 1\n[sweep]\nM = 16\n"), "plot");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[estimation]\nhigh_snr = maybe\n[sweep]\nM = 16\n"), "estimation.high_snr");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[channel]\nrician_k_inter = -1\n[sweep]\nM = 16\n"), "rician_k_inter");
    EXPECT_EQ(field_of("kind = nmse_sweep\n[downlink]\ntrials = 0\n[sweep]\nM = 16\n"), "trials");
    EXPECT_EQ(field_of("kind = beam_pattern\n[beamforming]\naim_angle = 4\n[sweep]\nM = 16\n"), "aim_angle");
}

TEST(LoadConfig, MissingFileReportsPath)
{
    try
    {
        load_config("/nonexistent/dir/cfg.ini");
        FAIL() << "expected IoError";
    }
    catch (const IoError &e)
    {
        EXPECT_EQ(e.path(), "/nonexistent/dir/cfg.ini");
    }
}

TEST(LoadConfig, ReadsFromDisk)
{
    const auto path = temp_file("cfg.ini");
    {
        std::ofstream out(path);
        out << "kind = beam_pattern\n[sweep]\nM = 8, 16\n";
    }
    const ExperimentSpec s = load_config(path.string());
    EXPECT_EQ(s.kind, ExperimentKind::beam_pattern);
    std::filesystem::remove(path);
}

TEST(Presets, AllFiguresAvailable)
{
    const ExperimentSpec f3 = preset("fig3");
    EXPECT_EQ(f3.kind, ExperimentKind::beam_pattern);
    const ExperimentSpec f4 = preset("fig4");
    EXPECT_EQ(f4.kind, ExperimentKind::nmse_sweep);
    EXPECT_EQ(f4.sweep_m, (std::vector<int>{16, 32, 64, 128, 256}));
    EXPECT_EQ(f4.sweep_p.size(), 2u);
    EXPECT_EQ(f4.base.L, 6);
    EXPECT_EQ(f4.base.N, 10);
    EXPECT_NEAR(f4.base.mean_xi_sq(), 0.01, 1e-15);
    EXPECT_EQ(f4.base.trials, 2000);
    EXPECT_TRUE(f4.base.high_snr);
    const ExperimentSpec f5 = preset("fig5");
    EXPECT_EQ(f5.kind, ExperimentKind::rate_sweep);
    EXPECT_EQ(f5.downlink.trials, 500);
    EXPECT_EQ(f5.sweep_m, (std::vector<int>{16, 32, 64, 128}));
    EXPECT_THROW(preset("fig6"), ConfigError);
}

TEST(RunExperiment, NmseSweepRowsCarryTheirConfig)
{
    const ExperimentSpec s = small_nmse_spec();
    const ExperimentResult r = run_experiment(s);
    ASSERT_EQ(r.nmse.size(), 4u);
    EXPECT_EQ(r.nmse[0].config.M, 16);
    EXPECT_EQ(r.nmse[0].config.P, 4);
    EXPECT_EQ(r.nmse[3].config.M, 32);
    EXPECT_EQ(r.nmse[3].config.P, 8);
    for (const auto &row : r.nmse)
    {
        EXPECT_NO_THROW(row.config.validate());
        EXPECT_EQ(row.config.seed, 5u);
        EXPECT_EQ(row.report.trials_used, 12);
        EXPECT_EQ(row.report.empirical, empirical_nmse(row.config).empirical);
    }
}

TEST(RunExperiment, RateSweepHasBothScenariosPerM)
{
    ExperimentSpec s = parse("kind = rate_sweep\n[channel]\nN = 4\nP = 4\n[downlink]\ntrials = 8\n[sweep]\nM = 8, 16\n");
    const ExperimentResult r = run_experiment(s);
    ASSERT_EQ(r.rates.size(), 4u);
    EXPECT_EQ(r.rates[0].report.scenario, Scenario::hybrid);
    EXPECT_EQ(r.rates[1].report.scenario, Scenario::fully_digital_ls);
    EXPECT_EQ(r.rates[2].config.M, 16);
    EXPECT_DOUBLE_EQ(r.rates[0].xi_sq, s.downlink.hybrid_xi_sq);
    EXPECT_NEAR(r.rates[0].config.mean_xi_sq(), s.downlink.hybrid_xi_sq, 1e-15);
    EXPECT_DOUBLE_EQ(r.rates[1].xi_sq, s.downlink.baseline_xi_sq);
    for (const auto &row : r.rates)
        EXPECT_NO_THROW(row.config.validate());
}

TEST(RunExperiment, BeamPatternSamplesPerM)
{
    ExperimentSpec s = parse("kind = beam_pattern\n[beamforming]\ngrid_points = 101\n[sweep]\nM = 4, 8\n");
    const ExperimentResult r = run_experiment(s);
    ASSERT_EQ(r.beams.size(), 202u);
    EXPECT_EQ(r.beams[0].M, 4);
    EXPECT_EQ(r.beams[101].M, 8);
    EXPECT_NEAR(r.beams[50].sample.gain, 4.0, 1e-12); // aim pi/2 at the grid centre
}

TEST(RunExperiment, SinglePoint)
{
    ExperimentSpec s = parse("kind = single_point\n[channel]\nM = 16\nP = 4\nN = 4\n[estimation]\ntrials = 5\n");
    const ExperimentResult r = run_experiment(s);
    ASSERT_EQ(r.nmse.size(), 1u);
    EXPECT_EQ(r.nmse[0].config.M, 16);
}

TEST(RunExperiment, SameSeedSameBytesAnyWorkerCount)
{
    const ExperimentSpec s = small_nmse_spec();
    const std::string a = format_results(run_experiment(s, 1));
    const std::string b = format_results(run_experiment(s, 1));
    const std::string c = format_results(run_experiment(s, 3));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    ExperimentSpec other = s;
    other.seed = 6;
    EXPECT_NE(a, format_results(run_experiment(other, 1)));
}

TEST(WriteResults, EmptyResultIsHeaderAndProvenance)
{
    ExperimentResult r;
    r.spec = small_nmse_spec();
    std::istringstream in(format_results(r));
    const CsvTable t = read_csv(in);
    EXPECT_EQ(t.header, nmse_columns());
    EXPECT_TRUE(t.rows.empty());
    ASSERT_FALSE(t.comments.empty());
    EXPECT_NE(t.comments[0].find(version_tag), std::string::npos);
    bool has_seed = false;
    for (const auto &c : t.comments)
        has_seed |= c == "# seed = 5";
    EXPECT_TRUE(has_seed);
}

TEST(WriteResults, RoundTripIsLossless)
{
    const ExperimentResult r = run_experiment(small_nmse_spec());
    const auto path = temp_file("nmse.csv");
    write_results(r, path.string());
    std::ifstream in(path);
    const CsvTable t = read_csv(in);
    ASSERT_EQ(t.header, nmse_columns());
    ASSERT_EQ(t.rows.size(), r.nmse.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        const auto &row = t.rows[i];
        ASSERT_EQ(row.size(), nmse_columns().size());
        EXPECT_EQ(std::stoi(row[0]), r.nmse[i].config.M);
        EXPECT_EQ(std::stoi(row[1]), r.nmse[i].config.P);
        EXPECT_EQ(row[6], "high");
        EXPECT_EQ(std::strtod(row[7].c_str(), nullptr), r.nmse[i].report.empirical);
        EXPECT_EQ(std::strtod(row[8].c_str(), nullptr), r.nmse[i].report.analytical_full);
        EXPECT_EQ(std::strtod(row[9].c_str(), nullptr), r.nmse[i].report.analytical_simplified);
        EXPECT_EQ(std::stoi(row[12]), r.nmse[i].report.trials_used);
    }
    std::filesystem::remove(path);
}

TEST(WriteResults, RateAndBeamSchemas)
{
    ExperimentSpec rs = parse("kind = rate_sweep\n[channel]\nN = 2\nP = 2\nL = 1\n[downlink]\ntrials = 3\n[sweep]\nM = 4\n");
    std::istringstream rin(format_results(run_experiment(rs)));
    const CsvTable rt = read_csv(rin);
    EXPECT_EQ(rt.header, rate_columns());
    ASSERT_EQ(rt.rows.size(), 2u);
    EXPECT_EQ(rt.rows[0][0], "hybrid");
    EXPECT_EQ(rt.rows[1][0], "fully_digital_ls");

    ExperimentSpec bs = parse("kind = beam_pattern\n[beamforming]\ngrid_points = 3\n[sweep]\nM = 4\n");
    std::istringstream bin(format_results(run_experiment(bs)));
    const CsvTable bt = read_csv(bin);
    EXPECT_EQ(bt.header, beam_columns());
    ASSERT_EQ(bt.rows.size(), 3u);
    EXPECT_EQ(bt.rows[1][2], "4");
    EXPECT_NEAR(std::strtod(bt.rows[1][3].c_str(), nullptr), 10.0 * std::log10(4.0), 1e-12);
}

TEST(WriteResults, UnwritablePathReported)
{
    ExperimentResult r;
    r.spec = small_nmse_spec();
    try
    {
        write_results(r, "/nonexistent/dir/out.csv");
        FAIL() << "expected IoError";
    }
    catch (const IoError &e)
    {
        EXPECT_EQ(e.path(), "/nonexistent/dir/out.csv");
    }
}

TEST(FormatDouble, SeventeenSignificantDigits)
{
    EXPECT_EQ(detail::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(detail::format_double(los_only), "inf");
    const double x = 4.8828125000000009e-06;
    EXPECT_EQ(std::strtod(detail::format_double(x).c_str(), nullptr), x);
}
