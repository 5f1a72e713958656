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

// Command-line front end: run a configuration file, run a bundled preset, or validate a file.

#include <mmwpc/mmwpc.hpp>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <iostream>
#include <optional>
#include <string>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_usage = 1,
        exit_parse = 2,
        exit_config = 3,
        exit_io = 4,
        exit_numeric = 5,
        exit_internal = 6,
    };

    int exit_code_for(const mmwpc::Error &e)
    {
        if (dynamic_cast<const mmwpc::ParseError *>(&e))
            return exit_parse;
        if (dynamic_cast<const mmwpc::ConfigError *>(&e))
            return exit_config;
        if (dynamic_cast<const mmwpc::IoError *>(&e))
            return exit_io;
        return exit_numeric;
    }

    void emit(const mmwpc::ExperimentResult &result, const std::string &out)
    {
        if (out.empty() || out == "-")
            std::cout << mmwpc::format_results(result);
        else
        {
            mmwpc::write_results(result, out);
            std::cerr << "wrote " << out << '\n';
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Multi-cell hybrid mmWave pilot contamination simulator"};
    app.set_version_flag("--version", std::string(mmwpc::version_tag));
    app.require_subcommand(1);

    unsigned workers = 1;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;

    auto *run = app.add_subcommand("run", "Run the experiment described by a configuration file");
    std::string config_path;
    run->add_option("config", config_path, "Configuration file")->required();
    run->add_option("--out", out, "Output CSV path (default: the file's 'output' key, else stdout)");
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--trials", trials, "Override the Monte Carlo trial count");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

    auto *pre = app.add_subcommand("preset", "Run a bundled figure reproduction");
    std::string preset_name;
    pre->add_option("name", preset_name, "Preset")->required()->check(CLI::IsMember({"fig3", "fig4", "fig5"}));
    pre->add_option("--out", out, "Output CSV path (default: stdout)");
    pre->add_option("--seed", seed, "Override the master seed");
    pre->add_option("--trials", trials, "Override the Monte Carlo trial count");
    pre->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

    auto *val = app.add_subcommand("validate", "Check a configuration file without running it");
    val->add_option("config", config_path, "Configuration file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        std::cerr << "error[UsageError]: " << e.what() << "\nRun with --help for more information.\n";
        return exit_usage;
    }

    try
    {
        mmwpc::ExperimentSpec spec;
        if (*val)
        {
            spec = mmwpc::load_config(config_path);
            std::cout << "ok: " << mmwpc::to_string(spec.kind) << ", " << spec.sweep_m.size() << " sweep point(s)\n";
            return exit_ok;
        }
        spec = *pre ? mmwpc::preset(preset_name) : mmwpc::load_config(config_path);
        if (seed)
        {
            spec.seed = *seed;
            spec.base.seed = *seed;
        }
        if (trials)
        {
            spec.base.trials = *trials;
            spec.downlink.trials = *trials;
        }
        if (out.empty())
            out = spec.output_path;
        spec.validate();
        emit(mmwpc::run_experiment(spec, workers), out);
        return exit_ok;
    }
    catch (const mmwpc::Error &e)
    {
        std::cerr << "error[" << e.kind() << "]: " << e.what() << '\n';
        return exit_code_for(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error[InternalError]: " << e.what() << '\n';
        return exit_internal;
    }
}
