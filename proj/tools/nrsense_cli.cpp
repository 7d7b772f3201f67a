// SPDX-License-Identifier: Apache-2.0
//
// nrsense: delay/Doppler sensing with 5G NR OFDM waveforms
// Copyright (C) 2026 nrsense authors
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

// nrsense command line: Monte Carlo runs, single-trial spectra and SNR sweeps.

#include "nrsense/errors.hpp"
#include "nrsense/outputs.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Common {
    std::string scenario_file;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool full_size = false;
    bool wall_time = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("scenario", c.scenario_file, "Scenario file")->required()->check(
        CLI::ExistingFile);
    cmd->add_option("--trials", c.trials, "Override the trial count")->check(
        CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Override the base seed");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_flag("--full-size", c.full_size, "264 RBs and a whole frame");
    cmd->add_flag("--wall-time", c.wall_time, "Write measured wall times to trials.csv");
}

nrsense::Scenario load(const Common& c) {
    nrsense::Scenario s = nrsense::parse_scenario(c.scenario_file);
    if (c.full_size) {
        nrsense::apply_full_size(s);
    }
    if (c.trials) {
        s.trials = *c.trials;
    }
    if (c.seed) {
        s.seed = *c.seed;
    }
    if (c.out) {
        s.output_dir = *c.out;
    }
    nrsense::validate(s);
    return s;
}

void report(const std::vector<nrsense::TrialRecord>& records, const nrsense::Scenario& s) {
    for (const auto& row : nrsense::summarize(records, s.effective_gate())) {
        std::cout << nrsense::to_string(row.algorithm) << ' ' << nrsense::method_label(row.method)
                  << " snr=" << (row.snr_db ? nrsense::format_number(*row.snr_db) : "inf")
                  << " target " << row.target_idx << ": bias=" << nrsense::format_number(row.bias)
                  << " rmse=" << nrsense::format_number(row.rmse)
                  << " p_res=" << nrsense::format_number(row.resolution_prob) << '\n';
    }
    std::cout << "wrote " << s.output_dir.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay/Doppler estimation with 5G NR OFDM waveforms"};
    app.require_subcommand(1);

    Common sim;
    auto* simulate = app.add_subcommand("simulate", "Run every trial of a scenario");
    add_common(simulate, sim);

    Common spec;
    int spectra_trial = 0;
    auto* spectra = app.add_subcommand("spectra", "Dump per-algorithm spectra of one trial");
    add_common(spectra, spec);
    spectra->add_option("--trial", spectra_trial, "Trial index")->required()->check(
        CLI::NonNegativeNumber);

    Common sw;
    std::string param;
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "Repeat a scenario over parameter values");
    add_common(sweep, sw);
    sweep->add_option("--param", param, "Swept parameter")->required()->check(
        CLI::IsMember({"snr"}));
    sweep->add_option("--values", values, "Comma-separated values (snr: dB or none)")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        nrsense::RunOptions options;
        options.log = &std::cerr;
        if (*simulate) {
            const auto s = load(sim);
            options.measure_time = sim.wall_time;
            report(nrsense::simulate(s, s.output_dir, options), s);
        } else if (*spectra) {
            auto s = load(spec);
            s.trials = std::max(s.trials, spectra_trial + 1);
            s.snr_db.resize(1);
            const auto result = nrsense::run_trial(s, s.snr_db.front(), spectra_trial,
                                                   {.keep_spectra = true, .measure_time = false});
            for (const auto& r : result.records) {
                if (r.failed) {
                    std::cerr << nrsense::to_string(r.algorithm) << '/'
                              << nrsense::method_label(r.method) << " failed: " << r.error
                              << '\n';
                }
            }
            for (const auto& named : result.spectra) {
                const auto path = s.output_dir / nrsense::spectrum_filename(named);
                nrsense::write_spectrum_csv(path, named.spectrum);
                std::cout << "wrote " << path.string() << '\n';
            }
        } else if (*sweep) {
            auto s = load(sw);
            s.snr_db.clear();
            for (const auto& v : values) {
                if (v == "none") {
                    s.snr_db.emplace_back(std::nullopt);
                } else {
                    s.snr_db.emplace_back(std::stod(v));
                }
            }
            nrsense::validate(s);
            options.measure_time = sw.wall_time;
            report(nrsense::simulate(s, s.output_dir, options), s);
        }
    } catch (const nrsense::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
