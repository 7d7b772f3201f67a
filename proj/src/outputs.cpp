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

#include "nrsense/outputs.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef NRSENSE_VERSION
#define NRSENSE_VERSION "unknown"
#endif

namespace nrsense {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string snr_label(const std::optional<double>& snr) {
    return snr ? format_number(*snr) : "inf";
}

} // namespace

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string method_label(const std::optional<CpMethod>& method) {
    return method ? std::string(to_string(*method)) : "none";
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records,
                      double gate) {
    auto out = open_out(path);
    out << kTrialsHeader << '\n';
    for (const auto& r : records) {
        const Match m = match_estimates(r.estimates, r.truths, gate);
        for (std::size_t i = 0; i < r.truths.size(); ++i) {
            const double est = (!r.failed && m.matched[i]) ? *m.matched[i] : std::nan("");
            out << r.scenario << ',' << r.trial << ',' << r.seed << ',' << to_string(r.algorithm)
                << ',' << method_label(r.method) << ',' << i << ',' << format_number(est) << ','
                << format_number(r.truths[i]) << ',' << (r.resolved ? 1 : 0) << ','
                << format_number(r.wall_ms) << '\n';
        }
    }
    finish(out, path);
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows) {
    auto out = open_out(path);
    out << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        out << r.scenario << ',' << to_string(r.algorithm) << ',' << method_label(r.method) << ','
            << snr_label(r.snr_db) << ',' << r.target_idx << ',' << format_number(r.truth) << ','
            << format_number(r.bias) << ',' << format_number(r.rmse) << ','
            << format_number(r.resolution_prob) << ',' << r.n_trials << '\n';
    }
    finish(out, path);
}

std::string spectrum_filename(const NamedSpectrum& s) {
    return std::string(to_string(s.algorithm)) + "_" + method_label(s.method) + "_" +
           std::string(to_string(s.spectrum.kind)) + ".csv";
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    if (spectrum.axis.size() != spectrum.values.size()) {
        throw std::invalid_argument("spectrum axis and values differ in length");
    }
    auto out = open_out(path);
    out << kSpectrumHeader << '\n';
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        out << format_number(spectrum.axis[i]) << ',' << format_number(spectrum.values[i])
            << '\n';
    }
    finish(out, path);
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kSpectrumHeader) {
        throw std::runtime_error(path.string() + ": expected header '" +
                                 std::string(kSpectrumHeader) + "'");
    }
    Spectrum spec;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) {
                throw std::invalid_argument("missing comma");
            }
            const double a = std::stod(line.substr(0, comma));
            const double v = std::stod(line.substr(comma + 1));
            spec.axis.push_back(a);
            spec.values.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed row");
        }
    }
    return spec;
}

void write_manifest(const std::filesystem::path& path, const Scenario& s, const RunInfo& info) {
    using nlohmann::json;
    json targets = json::array();
    for (const auto& t : s.targets) {
        targets.push_back({{"distance_m", t.distance_m},
                           {"delay_s", t.delay_s},
                           {"velocity_mps", t.velocity_mps},
                           {"doppler_hz", t.doppler_hz},
                           {"alpha_abs", std::abs(t.alpha)},
                           {"alpha_phase_rad", std::arg(t.alpha)}});
    }
    json snr = json::array();
    for (const auto& v : info.snr_db) {
        snr.push_back(v ? json(*v) : json(nullptr));
    }
    json algorithms = json::array();
    for (auto a : s.algorithms) {
        algorithms.push_back(std::string(to_string(a)));
    }
    json methods = json::array();
    for (auto m : s.methods) {
        methods.push_back(std::string(to_string(m)));
    }
    json seeds = json::array();
    for (int t = 0; t < info.trials; ++t) {
        seeds.push_back(trial_seed(s.seed, t));
    }

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    json doc = {{"code_version", NRSENSE_VERSION},
                {"created_utc", stamp},
                {"scenario",
                 {{"name", s.name},
                  {"mu", s.mu},
                  {"n_rb", s.n_rb},
                  {"n_symbols", s.n_symbols},
                  {"carrier_hz", s.carrier_hz},
                  {"c0", s.c0},
                  {"long_cp", s.long_cp},
                  {"full_size", s.full_size},
                  {"axis", std::string(to_string(s.axis))},
                  {"targets", targets},
                  {"algorithms", algorithms},
                  {"methods", methods},
                  {"rho", s.rho},
                  {"mssp_window", static_cast<int>(std::floor(s.rho * s.subcarriers()))},
                  {"forward_backward", s.forward_backward},
                  {"gate", s.effective_gate()}}},
                {"snr_db", snr},
                {"base_seed", s.seed},
                {"trials", info.trials},
                {"trial_seeds", seeds},
                {"spectra_trial", info.spectra_trial}};
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
    finish(out, path);
}

void write_outputs(const std::filesystem::path& dir, const Scenario& scenario,
                   const std::vector<TrialRecord>& records,
                   const std::vector<NamedSpectrum>& spectra, const RunInfo& info) {
    std::filesystem::create_directories(dir / "spectra");
    const double gate = scenario.effective_gate();
    write_metrics_csv(dir / "metrics.csv", summarize(records, gate));
    write_trials_csv(dir / "trials.csv", records, gate);
    for (const auto& s : spectra) {
        write_spectrum_csv(dir / "spectra" / spectrum_filename(s), s.spectrum);
    }
    write_manifest(dir / "manifest.json", scenario, info);
}

std::vector<TrialRecord> simulate(const Scenario& scenario, const std::filesystem::path& dir,
                                  const RunOptions& options) {
    validate(scenario);
    if (options.spectra_trial < 0 || options.spectra_trial >= scenario.trials) {
        throw std::invalid_argument("spectra trial outside [0, trials)");
    }
    const double gate = scenario.effective_gate();
    const bool split_by_snr = scenario.snr_db.size() > 1;
    RunInfo info{scenario.snr_db, scenario.trials, options.spectra_trial};
    std::vector<TrialRecord> all;
    for (const auto& snr : scenario.snr_db) {
        std::vector<TrialRecord> records;
        std::vector<NamedSpectrum> spectra;
        for (int t = 0; t < scenario.trials; ++t) {
            TrialOptions trial_options;
            trial_options.keep_spectra = t == options.spectra_trial;
            trial_options.measure_time = options.measure_time;
            auto result = run_trial(scenario, snr, t, trial_options);
            for (auto& r : result.records) {
                if (r.failed && options.log) {
                    *options.log << "trial " << t << " " << to_string(r.algorithm) << "/"
                                 << method_label(r.method) << " failed: " << r.error << '\n';
                }
                records.push_back(std::move(r));
            }
            if (trial_options.keep_spectra) {
                spectra = std::move(result.spectra);
            }
        }
        const auto sub = split_by_snr ? dir / ("snr_" + snr_label(snr)) : dir;
        RunInfo sub_info{{snr}, scenario.trials, options.spectra_trial};
        write_outputs(sub, scenario, records, spectra, sub_info);
        all.insert(all.end(), std::make_move_iterator(records.begin()),
                   std::make_move_iterator(records.end()));
    }
    if (split_by_snr) {
        std::filesystem::create_directories(dir);
        write_metrics_csv(dir / "metrics.csv", summarize(all, gate));
        write_manifest(dir / "manifest.json", scenario, info);
    }
    return all;
}

} // namespace nrsense
