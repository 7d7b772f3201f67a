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

#include <doctest.h>

#include "nrsense/outputs.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

using namespace nrsense;
namespace fs = std::filesystem;

namespace {

TrialRecord record(int trial, std::vector<double> estimates, std::vector<double> truths,
                   std::optional<CpMethod> method = CpMethod::MethodIII) {
    TrialRecord r;
    r.scenario = "unit";
    r.trial = trial;
    r.seed = trial_seed(1, trial);
    r.algorithm = Algorithm::Music;
    r.method = method;
    r.snr_db = 15.0;
    r.estimates = std::move(estimates);
    r.truths = std::move(truths);
    return r;
}

Scenario small_scenario() {
    Scenario s = parse_scenario_text(R"(name = small
n_rb = 4
n_symbols = 112
snr_db = 20
trials = 3
seed = 5
[target]
distance_m = 4.5
doppler_hz = 3000
[target]
distance_m = 6
doppler_hz = 9000
)");
    return s;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const char* name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("harness - matching") {
    const std::vector<double> truths{100.0, 200.0};
    auto m = match_estimates({101.0, 198.0}, truths, 5.0);
    CHECK(m.resolved);
    CHECK(m.matched[0] == 101.0);
    CHECK(m.matched[1] == 198.0);

    m = match_estimates({101.0, 198.0}, truths, 1.5);
    CHECK_FALSE(m.resolved);

    // Both estimates land on the first truth; the nearer one is kept.
    m = match_estimates({99.0, 140.0}, truths, 100.0);
    CHECK_FALSE(m.resolved);
    CHECK(m.matched[0] == 99.0);
    CHECK_FALSE(m.matched[1].has_value());

    // Equidistant estimate goes to the smaller truth.
    m = match_estimates({150.0}, truths, 100.0);
    CHECK(m.matched[0] == 150.0);
    CHECK_FALSE(m.matched[1].has_value());

    // Two estimates equally close to one truth: the smaller is kept.
    m = match_estimates({98.0, 102.0, 200.0}, truths, 5.0);
    CHECK_FALSE(m.resolved);
    CHECK(m.matched[0] == 98.0);

    m = match_estimates({}, truths, 5.0);
    CHECK_FALSE(m.resolved);
    m = match_estimates({1.0}, {}, 5.0);
    CHECK_FALSE(m.resolved);
}

TEST_CASE("harness - gate is monotone") {
    const std::vector<double> truths{0.0, 10.0};
    const std::vector<double> estimates{0.7, 9.1};
    bool seen = false;
    for (double gate = 0.1; gate < 5.0; gate += 0.1) {
        const bool now = match_estimates(estimates, truths, gate).resolved;
        CHECK((now || !seen));
        seen = seen || now;
    }
    CHECK(seen);
}

TEST_CASE("harness - seeds") {
    CHECK(trial_seed(1, 0) == trial_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {0ULL, 1ULL, 2ULL}) {
        for (int t = 0; t < 100; ++t) {
            seen.insert(trial_seed(base, t));
        }
    }
    CHECK(seen.size() == 300);
}

TEST_CASE("harness - summarize") {
    const std::vector<double> truth{12000.0};
    auto rows = summarize({record(0, {12010.0}, truth), record(1, {11990.0}, truth)}, 50.0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].bias == doctest::Approx(0.0));
    CHECK(rows[0].rmse == doctest::Approx(10.0));
    CHECK(rows[0].resolution_prob == 1.0);
    CHECK(rows[0].n_trials == 2);
    CHECK(rows[0].truth == 12000.0);

    rows = summarize({record(0, {12000.0}, truth), record(1, {12000.0}, truth)}, 1.0);
    CHECK(rows[0].bias == 0.0);
    CHECK(rows[0].rmse == 0.0);
    CHECK(rows[0].resolution_prob == 1.0);

    std::vector<TrialRecord> same;
    for (int t = 0; t < 7; ++t) {
        same.push_back(record(t, {12000.1}, truth));
    }
    rows = summarize(same, 1.0);
    CHECK(rows[0].rmse >= std::abs(rows[0].bias));
    CHECK(rows[0].bias == doctest::Approx(0.1));

    // Unresolved and failed trials count against the probability only.
    auto failed = record(2, {}, truth);
    failed.failed = true;
    failed.error = "boom";
    rows = summarize({record(0, {12003.0}, truth), record(1, {12500.0}, truth), failed}, 50.0);
    CHECK(rows[0].bias == doctest::Approx(3.0));
    CHECK(rows[0].resolution_prob == doctest::Approx(1.0 / 3.0));
    CHECK(rows[0].n_trials == 3);

    rows = summarize({record(0, {12500.0}, truth)}, 50.0);
    CHECK(std::isnan(rows[0].bias));
    CHECK(std::isnan(rows[0].rmse));
    CHECK(rows[0].resolution_prob == 0.0);

    // Rows are grouped per method and per target.
    rows = summarize({record(0, {1.0, 2.0}, {1.0, 2.0}, CpMethod::MethodI),
                      record(0, {1.0, 2.0}, {1.0, 2.0}, CpMethod::MethodII)},
                     0.1);
    CHECK(rows.size() == 4);
}

TEST_CASE("harness - trials are deterministic") {
    const auto s = small_scenario();
    const auto a = run_trial(s, 20.0, 1, {true, false});
    const auto b = run_trial(s, 20.0, 1, {true, false});
    REQUIRE(a.records.size() == 9);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].estimates == b.records[i].estimates);
        CHECK_FALSE(a.records[i].failed);
        CHECK(a.records[i].wall_ms == 0.0);
        CHECK(a.records[i].truths == s.truths());
    }
    CHECK(a.spectra.size() == 6);

    const auto other = run_trial(s, 20.0, 2);
    CHECK(other.records[0].seed != a.records[0].seed);

    const auto m1 = trial_matrix(s, 20.0, 17);
    const auto m2 = trial_matrix(s, 20.0, 17);
    CHECK(m1.data == m2.data);
    CHECK(m1.data.rows() == 48);
    CHECK(m1.data.cols() == 112);
}

TEST_CASE("harness - estimator failure is recorded") {
    auto s = small_scenario();
    s.n_symbols = 2;
    s.algorithms = {Algorithm::Esprit};
    s.methods = {CpMethod::MethodI};
    const auto result = run_trial(s, 20.0, 0);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].failed);
    CHECK_FALSE(result.records[0].error.empty());
    CHECK_FALSE(result.records[0].resolved);
}

TEST_CASE("outputs - number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(method_label(std::nullopt) == "none");
    CHECK(method_label(CpMethod::MethodII) == "II");
}

TEST_CASE("outputs - simulate writes a reproducible set") {
    const auto s = small_scenario();
    const auto a = scratch("nrsense_outputs_a");
    const auto b = scratch("nrsense_outputs_b");
    const auto records = simulate(s, a);
    simulate(s, b);
    CHECK(records.size() == 27);

    for (const char* name : {"metrics.csv", "trials.csv", "manifest.json"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(a / name));
    }
    CHECK(first_line(a / "metrics.csv") == kMetricsHeader);
    CHECK(first_line(a / "trials.csv") == kTrialsHeader);
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    CHECK(slurp(a / "trials.csv") == slurp(b / "trials.csv"));

    int spectra = 0;
    for (const auto& entry : fs::directory_iterator(a / "spectra")) {
        ++spectra;
        CHECK(first_line(entry.path()) == kSpectrumHeader);
        CHECK(slurp(entry.path()) == slurp(b / "spectra" / entry.path().filename()));
    }
    CHECK(spectra == 6);
    CHECK(fs::exists(a / "spectra" / "music_III_doppler.csv"));

    const auto manifest = slurp(a / "manifest.json");
    CHECK(manifest.find("\"trial_seeds\"") != std::string::npos);
    CHECK(manifest.find("\"code_version\"") != std::string::npos);

    // trials.csv has one row per record and target.
    std::ifstream in(a / "trials.csv");
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) {
        ++rows;
    }
    CHECK(rows == 54);

    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("outputs - several snr values") {
    auto s = small_scenario();
    s.snr_db = {10.0, std::nullopt};
    s.trials = 1;
    s.algorithms = {Algorithm::Esprit};
    const auto dir = scratch("nrsense_outputs_snr");
    simulate(s, dir);
    CHECK(fs::exists(dir / "metrics.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "snr_10" / "trials.csv"));
    CHECK(fs::exists(dir / "snr_inf" / "trials.csv"));
    fs::remove_all(dir);
}

TEST_CASE("outputs - spectrum round trip") {
    Spectrum s;
    s.kind = Axis::Delay;
    for (int i = 0; i < 50; ++i) {
        s.axis.push_back(1e-9 * i / 3.0);
        s.values.push_back(std::exp(-0.37 * i) * (1.0 + 1.0 / 7.0));
    }
    const auto dir = scratch("nrsense_spectrum");
    fs::create_directories(dir);
    const auto path = dir / "s.csv";
    write_spectrum_csv(path, s);
    const auto back = read_spectrum_csv(path);
    CHECK(back.axis == s.axis);
    CHECK(back.values == s.values);
    fs::remove_all(dir);

    NamedSpectrum named{Algorithm::Periodogram, std::nullopt, s};
    CHECK(spectrum_filename(named) == "periodogram_none_delay.csv");
}
