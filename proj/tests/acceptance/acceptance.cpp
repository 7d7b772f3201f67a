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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with a criterion name as the
// argument only that one runs. Exit status is non-zero when any selected criterion fails.

#include "nrsense/echo_channel.hpp"
#include "nrsense/harness.hpp"
#include "nrsense/outputs.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace nrsense;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Scenario load(const char* file) {
    return parse_scenario(fs::path(NRSENSE_SCENARIO_DIR) / file);
}

std::vector<TrialRecord> run_all(const Scenario& s) {
    std::vector<TrialRecord> out;
    for (int t = 0; t < s.trials; ++t) {
        auto result = run_trial(s, s.snr_db.front(), t);
        out.insert(out.end(), result.records.begin(), result.records.end());
    }
    return out;
}

std::vector<const TrialRecord*> select(const std::vector<TrialRecord>& records, Algorithm a,
                                       std::optional<CpMethod> m) {
    std::vector<const TrialRecord*> out;
    for (const auto& r : records) {
        if (r.algorithm == a && r.method == m) {
            out.push_back(&r);
        }
    }
    return out;
}

int count_resolved(const std::vector<const TrialRecord*>& records, double gate) {
    int n = 0;
    for (const auto* r : records) {
        n += !r->failed && match_estimates(r->estimates, r->truths, gate).resolved;
    }
    return n;
}

std::string label(Algorithm a, std::optional<CpMethod> m) {
    return std::string(to_string(a)) + "-" + method_label(m);
}

// ---------------------------------------------------------------------------

Outcome frame_timing() {
    const auto start = Clock::now();
    const Numerology num;
    bool exact = true;
    int long_cps = 0;
    std::int64_t brute = 0;
    for (int l = 0; l < num.n_symb(); ++l) {
        exact = exact && num.start_samples(l) == brute &&
                num.cumulative_time(l, CpMethod::MethodIII) == static_cast<double>(brute) * num.t_c();
        long_cps += num.symbol_samples(l) > num.normal_symbol_samples();
        brute += num.symbol_samples(l);
    }
    const double ms = static_cast<double>(num.frame_samples()) * num.t_c() * 1e3;
    const double elapsed = seconds_since(start);
    const bool pass = exact && num.n_symb() == 1120 && brute == 19'660'800 &&
                      num.frame_samples() == 19'660'800 && std::abs(ms - 10.0) < 1e-12 &&
                      long_cps == 20 && elapsed < 1.0;
    return {pass, fmt("frame %lld samples = %.15g ms, %d long CPs, cumulative times %s, %.3f s",
                      static_cast<long long>(num.frame_samples()), ms, long_cps,
                      exact ? "exact" : "MISMATCH", elapsed)};
}

// Direct per-entry evaluation of alpha e^{-j2pi k tau df} e^{j2pi f t_l}.
CMatrix closed_form(const Numerology& num, const Target& t, int k_count, int l_count) {
    CMatrix out(k_count, l_count);
    for (int l = 0; l < l_count; ++l) {
        const double doppler_cycles = t.doppler * num.cumulative_time(l, CpMethod::MethodIII);
        for (int k = 0; k < k_count; ++k) {
            out(k, l) = t.alpha * std::polar(1.0, 2.0 * std::numbers::pi *
                                                      (doppler_cycles - k * t.tau * num.delta_f()));
        }
    }
    return out;
}

double cross_path_deviation(const Numerology& num, double doppler) {
    const int k = 240;
    const int l = 112;
    const auto grid = generate_payload(2024, k, l);
    const Target target{1.0, 300 * num.t_c(), doppler};
    const auto echo = apply_time_domain(modulate_frame(grid, num), TargetSet{{target}}, num);
    const auto radar = build_radar_matrix(demodulate_frame(echo.stream, num, k), grid, num);
    const CMatrix oracle = closed_form(num, target, k, l);
    return ((radar.data - oracle).cwiseAbs().array() / oracle.cwiseAbs().array()).maxCoeff();
}

Outcome cross_path() {
    const auto start = Clock::now();
    const Numerology num(3, 20);
    const double still = cross_path_deviation(num, 0.0);
    const double moving = cross_path_deviation(num, 12e3);
    const double elapsed = seconds_since(start);
    return {still <= 1e-9 && moving <= 1e-2 && elapsed < 30.0,
            fmt("f=0: %.3g (limit 1e-9), f=12 kHz: %.3g (limit 1e-2), %.1f s", still, moving,
                elapsed)};
}

Outcome excess_phase_bound() {
    const Numerology num;
    const double phase = num.excess_phase(num.delta_f() / 10.0, num.n_symb() - 1);
    const double err = std::abs(phase - std::numbers::pi / 4.0);
    return {err <= 1e-12, fmt("excess phase %.17g, |error| %.3g", phase, err)};
}

// Doppler a uniform-spacing (method I) estimator reads off the true phase staircase: the
// least-squares slope of the true symbol starts against l * T.
double method1_factor(const Numerology& num) {
    const int n = num.n_symb();
    double mean_l = 0.0;
    double mean_t = 0.0;
    for (int l = 0; l < n; ++l) {
        mean_l += l;
        mean_t += static_cast<double>(num.start_samples(l));
    }
    mean_l /= n;
    mean_t /= n;
    double cov = 0.0;
    double var = 0.0;
    for (int l = 0; l < n; ++l) {
        cov += (l - mean_l) * (static_cast<double>(num.start_samples(l)) - mean_t);
        var += (l - mean_l) * (l - mean_l);
    }
    return cov / var / static_cast<double>(num.normal_symbol_samples());
}

Outcome method1_doppler_bias() {
    const auto start = Clock::now();
    const auto s = load("method1_bias.scn");
    const double f = s.targets[0].doppler_hz;
    const double predicted = f * method1_factor(s.numerology());
    const double music_step = s.music_step_hz > 0.0 ? s.music_step_hz : 1.0;
    const auto result = run_trial(s, std::nullopt, 0);
    bool pass = true;
    std::ostringstream detail;
    detail << fmt("prediction %.3f Hz (factor-1 = %.4g);", predicted, predicted / f - 1.0);
    for (const auto& r : result.records) {
        const bool biased = r.method == CpMethod::MethodI;
        const double target = biased ? predicted : f;
        const double tol = biased ? 3.0 : (r.algorithm == Algorithm::Music ? music_step : 1.0);
        const bool ok = !r.failed && r.estimates.size() == 1 &&
                        std::abs(r.estimates[0] - target) <= tol;
        pass = pass && ok;
        detail << ' ' << label(r.algorithm, r.method) << ' '
               << (r.estimates.empty() ? std::string("none")
                                       : fmt("%+.3f", r.estimates[0] - f));
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 300.0;
    detail << fmt("; %.1f s", elapsed);
    return {pass, detail.str()};
}

Outcome doppler_super_resolution() {
    const auto s = load("doppler_music.scn");
    const auto records = run_all(s);
    const double gate = 2.0;
    const int n = s.trials;
    const int music3 = count_resolved(select(records, Algorithm::Music, CpMethod::MethodIII), gate);
    const int music1 = count_resolved(select(records, Algorithm::Music, CpMethod::MethodI), gate);
    int periodogram = 0;
    for (auto m : s.methods) {
        periodogram = std::max(periodogram,
                               count_resolved(select(records, Algorithm::Periodogram, m), gate));
    }
    const bool pass = music3 >= 0.8 * n && n - music1 >= 0.8 * n && n - periodogram >= 0.95 * n;
    return {pass, fmt("of %d trials at +/-2 Hz: MUSIC-III resolved %d (need >= 80%%), "
                      "MUSIC-I failed %d (need >= 80%%), periodogram unresolved >= %d (need >= 95%%)",
                      n, music3, n - music1, n - periodogram)};
}

struct Stats {
    int count = 0;
    double mean_error = 0.0;
    double std = 0.0;
    double rmse = 0.0;
};

// Per-target statistics of the estimates matched to each truth.
std::vector<Stats> per_target(const std::vector<const TrialRecord*>& records, double gate) {
    const std::size_t n_targets = records.front()->truths.size();
    std::vector<std::vector<double>> errors(n_targets);
    for (const auto* r : records) {
        const auto match = match_estimates(r->estimates, r->truths, gate);
        for (std::size_t i = 0; i < n_targets; ++i) {
            if (match.matched[i]) {
                errors[i].push_back(*match.matched[i] - r->truths[i]);
            }
        }
    }
    std::vector<Stats> out(n_targets);
    for (std::size_t i = 0; i < n_targets; ++i) {
        const auto& e = errors[i];
        Stats& st = out[i];
        st.count = static_cast<int>(e.size());
        if (e.size() < 2) {
            st.mean_error = st.std = st.rmse = std::nan("");
            continue;
        }
        double sum = 0.0;
        double sq = 0.0;
        for (double x : e) {
            sum += x;
            sq += x * x;
        }
        st.mean_error = sum / st.count;
        st.rmse = std::sqrt(sq / st.count);
        double var = 0.0;
        for (double x : e) {
            var += (x - st.mean_error) * (x - st.mean_error);
        }
        st.std = std::sqrt(var / (st.count - 1));
    }
    return out;
}

Outcome esprit_method_comparison() {
    const auto s = load("esprit_methods.scn");
    const auto records = run_all(s);
    const double gate = s.effective_gate();
    const auto m1 = per_target(select(records, Algorithm::Esprit, CpMethod::MethodI), gate);
    const auto m2 = per_target(select(records, Algorithm::Esprit, CpMethod::MethodII), gate);
    const auto m3 = per_target(select(records, Algorithm::Esprit, CpMethod::MethodIII), gate);
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        pass = pass && m1[i].mean_error > 5.0 && m2[i].rmse < 10.0 &&
               std::abs(m3[i].mean_error) <= 2.0 && m3[i].std > m2[i].std;
        detail << fmt("%starget %zu: I bias %+.2f, II rmse %.3f std %.3f, III bias %+.3f std %.3f "
                      "(matched %d/%d/%d)",
                      i == 0 ? "" : "; ", i, m1[i].mean_error, m2[i].rmse, m2[i].std,
                      m3[i].mean_error, m3[i].std, m1[i].count, m2[i].count, m3[i].count);
    }
    return {pass, detail.str()};
}

Outcome delay_resolution() {
    const auto s = load("delay_resolution.scn");
    const auto records = run_all(s);
    const double gate = s.numerology().distance_to_delay(0.1);
    const int n = s.trials;
    const int periodogram =
        count_resolved(select(records, Algorithm::Periodogram, std::nullopt), gate);
    const int music = count_resolved(select(records, Algorithm::Music, std::nullopt), gate);
    const int esprit = count_resolved(select(records, Algorithm::Esprit, std::nullopt), gate);
    const bool pass = n - periodogram >= 0.8 * n && music >= 0.8 * n && esprit >= 0.8 * n;
    return {pass, fmt("of %d trials at +/-0.1 m: periodogram unresolved %d (need >= 80%%), "
                      "MUSIC resolved %d, ESPRIT resolved %d (need >= 80%%)",
                      n, n - periodogram, music, esprit)};
}

Outcome velocity_scale() {
    const auto s = load("velocity_scale.scn");
    const auto records = run_all(s);
    const double gate = s.effective_gate();
    const int n = s.trials;
    int periodogram = 0;
    for (auto m : s.methods) {
        periodogram = std::max(periodogram,
                               count_resolved(select(records, Algorithm::Periodogram, m), gate));
    }
    const int music = count_resolved(select(records, Algorithm::Music, CpMethod::MethodIII), gate);
    const int esprit = count_resolved(select(records, Algorithm::Esprit, CpMethod::MethodII), gate);
    const bool pass = n - periodogram >= 0.95 * n && music >= 0.6 * n && esprit >= 0.6 * n;
    return {pass, fmt("of %d trials at +/-%.2f Hz: periodogram unresolved >= %d (need >= 95%%), "
                      "MUSIC-III resolved %d, ESPRIT-II resolved %d (need >= 60%%)",
                      n, gate, n - periodogram, music, esprit)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto s = load("desk_all.scn");
    const auto root = fs::temp_directory_path() / "nrsense_acceptance_determinism";
    fs::remove_all(root);
    simulate(s, root / "a");
    simulate(s, root / "b");
    bool pass = true;
    std::ostringstream detail;
    for (const char* name : {"trials.csv", "metrics.csv"}) {
        const auto a = slurp(root / "a" / name);
        const bool same = !a.empty() && a == slurp(root / "b" / name);
        pass = pass && same;
        detail << (detail.tellp() > 0 ? "; " : "") << name << (same ? " identical" : " DIFFERS")
               << fmt(" (%zu bytes)", a.size());
    }
    fs::remove_all(root);
    return {pass, detail.str()};
}

Outcome performance() {
    TrialOptions timed;
    timed.measure_time = true;
    auto desk = load("desk_all.scn");
    auto start = Clock::now();
    run_trial(desk, desk.snr_db.front(), 0, timed);
    const double desk_s = seconds_since(start);

    auto full = load("doppler_music.scn");
    full.algorithms = {Algorithm::Music};
    full.methods = {CpMethod::MethodIII};
    start = Clock::now();
    run_trial(full, full.snr_db.front(), 0, timed);
    const double full_s = seconds_since(start);
    return {desk_s < 10.0 && full_s < 60.0,
            fmt("desk trial (3 algorithms x 3 methods) %.2f s (limit 10 s), full-size MUSIC-III "
                "Doppler trial %.2f s (limit 60 s)",
                desk_s, full_s)};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"frame_timing", frame_timing},
        {"cross_path", cross_path},
        {"excess_phase_bound", excess_phase_bound},
        {"method1_doppler_bias", method1_doppler_bias},
        {"doppler_super_resolution", doppler_super_resolution},
        {"esprit_method_comparison", esprit_method_comparison},
        {"delay_resolution", delay_resolution},
        {"velocity_scale", velocity_scale},
        {"determinism", determinism},
        {"performance", performance},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria()) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) {
            continue;
        }
        ++ran;
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += !outcome.pass;
        std::cout << (outcome.pass ? "PASS " : "FAIL ") << c.name << ": " << outcome.detail
                  << std::endl;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
