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

#include "nrsense/harness.hpp"

#include "nrsense/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace nrsense {

Match match_estimates(const std::vector<double>& estimates, const std::vector<double>& truths,
                      double gate) {
    Match match;
    match.matched.assign(truths.size(), std::nullopt);
    if (truths.empty()) {
        return match;
    }
    std::vector<int> assigned_count(truths.size(), 0);
    for (double e : estimates) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < truths.size(); ++i) {
            const double d = std::abs(e - truths[i]);
            const double d_best = std::abs(e - truths[best]);
            if (d < d_best || (d == d_best && truths[i] < truths[best])) {
                best = i;
            }
        }
        ++assigned_count[best];
        auto& slot = match.matched[best];
        const double d = std::abs(e - truths[best]);
        if (!slot || d < std::abs(*slot - truths[best]) ||
            (d == std::abs(*slot - truths[best]) && e < *slot)) {
            slot = e;
        }
    }
    match.resolved = estimates.size() == truths.size();
    for (std::size_t i = 0; i < truths.size() && match.resolved; ++i) {
        match.resolved = assigned_count[i] == 1 && std::abs(*match.matched[i] - truths[i]) <= gate;
    }
    return match;
}

std::uint64_t trial_seed(std::uint64_t base, int trial) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RadarDataMatrix trial_matrix(const Scenario& scenario, std::optional<double> snr_db,
                             std::uint64_t seed) {
    const Numerology num = scenario.numerology();
    const int k = scenario.subcarriers();
    TargetSet set = scenario.target_set();
    for (auto& t : set.targets) {
        t.alpha *= unit_phasor(0.5 * (k - 1) * t.tau * num.delta_f());
    }
    RadarDataMatrix radar = synthesize_symbol_domain(num, set, k, scenario.n_symbols);
    if (!snr_db) {
        return radar;
    }
    return add_awgn(radar, NoiseSpec{snr_db, seed}, set);
}

EigenSplit scenario_split(const Scenario& scenario, const RadarDataMatrix& radar) {
    const int p = static_cast<int>(scenario.targets.size());
    if (scenario.axis == Axis::Doppler) {
        return eig_split(covariance(radar), p);
    }
    return eig_split(covariance(mssp(radar, scenario.rho, p), scenario.forward_backward), p);
}

namespace {

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

using CoarseCache = std::map<int, Spectrum>;

const Spectrum& coarse_spectrum(const Scenario& s, const RadarDataMatrix& radar,
                                std::optional<CpMethod> method, CoarseCache& cache) {
    const int key = method ? static_cast<int>(*method) : -1;
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache
                 .emplace(key, s.axis == Axis::Doppler
                                   ? doppler_periodogram(radar, *method, s.doppler_fft)
                                   : delay_periodogram(radar, s.delay_fft))
                 .first;
    }
    return it->second;
}

SpectrumEvaluator periodogram_evaluator(const Scenario& s, const RadarDataMatrix& radar,
                                        std::optional<CpMethod> method) {
    if (s.axis == Axis::Doppler) {
        return [&radar, m = *method](std::span<const double> f) {
            return doppler_periodogram_at(radar, m, f);
        };
    }
    return [&radar](std::span<const double> tau) { return delay_periodogram_at(radar, tau); };
}

std::vector<double> periodogram_estimates(const Scenario& s, const RadarDataMatrix& radar,
                                          std::optional<CpMethod> method, CoarseCache& cache,
                                          std::vector<NamedSpectrum>* spectra) {
    const Spectrum& spec = coarse_spectrum(s, radar, method, cache);
    const auto peaks = find_peaks(spec, static_cast<int>(s.targets.size()));
    const double bin = spec.axis[1] - spec.axis[0];
    const auto evaluate = periodogram_evaluator(s, radar, method);
    std::vector<double> out;
    for (const auto& peak : peaks.peaks) {
        out.push_back(refine_peak(evaluate, peak.position, bin));
    }
    if (spectra) {
        spectra->push_back({Algorithm::Periodogram, method, spec});
    }
    return sorted(out);
}

struct Window {
    double lo;
    double hi;
};

std::vector<double> music_estimates(const Scenario& s, const RadarDataMatrix& radar,
                                    std::optional<CpMethod> method, const EigenSplit& split,
                                    CoarseCache& cache, std::vector<NamedSpectrum>* spectra) {
    const Numerology& num = radar.numerology;
    const int p = static_cast<int>(s.targets.size());
    double step = 0.0;
    double half = 0.0;
    if (s.axis == Axis::Doppler) {
        const double rayleigh = 1.0 / (radar.symbols() * num.symbol_period(*method));
        step = s.music_step_hz > 0.0 ? s.music_step_hz : 1.0;
        half = s.music_window_hz > 0.0 ? s.music_window_hz : 2.0 * rayleigh;
    } else {
        const double rayleigh = 1.0 / (radar.subcarriers() * num.delta_f());
        step = s.music_step_s > 0.0 ? s.music_step_s : rayleigh / 100.0;
        half = s.music_window_s > 0.0 ? s.music_window_s : 2.0 * rayleigh;
    }

    const Spectrum& coarse = coarse_spectrum(s, radar, method, cache);
    const auto seeds = find_peaks(coarse, p);
    std::vector<Window> windows;
    for (const auto& peak : seeds.peaks) {
        windows.push_back({peak.position - half, peak.position + half});
    }
    std::sort(windows.begin(), windows.end(),
              [](const Window& a, const Window& b) { return a.lo < b.lo; });
    std::vector<Window> merged;
    for (const auto& w : windows) {
        if (!merged.empty() && w.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, w.hi);
        } else {
            merged.push_back(w);
        }
    }

    // Interior local maxima of every window, then the P highest overall.
    std::vector<Peak> candidates;
    Spectrum dump;
    dump.kind = s.axis;
    dump.method = method;
    for (const auto& w : merged) {
        const auto n = static_cast<std::size_t>(std::floor((w.hi - w.lo) / step)) + 1;
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i) {
            grid[i] = w.lo + static_cast<double>(i) * step;
        }
        const Spectrum part = music_spectrum(split, method, grid);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double v = part.values[i];
            if (v > part.values[i - 1] && v > part.values[i + 1]) {
                candidates.push_back({part.axis[i], v, i});
            }
        }
        if (spectra) {
            dump.axis.insert(dump.axis.end(), part.axis.begin(), part.axis.end());
            dump.values.insert(dump.values.end(), part.values.begin(), part.values.end());
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Peak& a, const Peak& b) { return a.height > b.height; });
    if (candidates.size() > static_cast<std::size_t>(p)) {
        candidates.resize(static_cast<std::size_t>(p));
    }

    const SpectrumEvaluator evaluate = [&split, method](std::span<const double> grid) {
        return music_spectrum(split, method, grid).values;
    };
    std::vector<double> out;
    for (const auto& c : candidates) {
        out.push_back(refine_peak(evaluate, c.position, step, 10, 2));
    }
    if (spectra) {
        spectra->push_back({Algorithm::Music, method, std::move(dump)});
    }
    return sorted(out);
}

std::vector<double> estimate_cached(const Scenario& scenario, const RadarDataMatrix& radar,
                                    Algorithm algorithm, std::optional<CpMethod> method,
                                    const EigenSplit* split, CoarseCache& cache,
                                    std::vector<NamedSpectrum>* spectra) {
    if ((scenario.axis == Axis::Doppler) != method.has_value()) {
        throw std::invalid_argument("CP method must be given exactly on the Doppler axis");
    }
    if (algorithm == Algorithm::Periodogram) {
        return periodogram_estimates(scenario, radar, method, cache, spectra);
    }
    std::optional<EigenSplit> local;
    if (!split) {
        local = scenario_split(scenario, radar);
        split = &*local;
    }
    if (algorithm == Algorithm::Music) {
        return music_estimates(scenario, radar, method, *split, cache, spectra);
    }
    return sorted(esprit(*split, method).parameters);
}

} // namespace

std::vector<double> estimate(const Scenario& scenario, const RadarDataMatrix& radar,
                             Algorithm algorithm, std::optional<CpMethod> method,
                             const EigenSplit* split, std::vector<NamedSpectrum>* spectra) {
    CoarseCache cache;
    return estimate_cached(scenario, radar, algorithm, method, split, cache, spectra);
}

TrialResult run_trial(const Scenario& scenario, std::optional<double> snr_db, int trial,
                      const TrialOptions& options) {
    using Clock = std::chrono::steady_clock;
    TrialResult result;
    const std::uint64_t seed = trial_seed(scenario.seed, trial);
    const RadarDataMatrix radar = trial_matrix(scenario, snr_db, seed);
    const double gate = scenario.effective_gate();
    const auto truths = scenario.truths();

    std::vector<std::optional<CpMethod>> methods;
    if (scenario.axis == Axis::Doppler) {
        methods.assign(scenario.methods.begin(), scenario.methods.end());
    } else {
        methods.emplace_back(std::nullopt);
    }

    std::optional<EigenSplit> split;
    CoarseCache cache;
    std::string split_error;
    bool split_tried = false;

    for (Algorithm algorithm : scenario.algorithms) {
        for (const auto& method : methods) {
            TrialRecord rec;
            rec.scenario = scenario.name;
            rec.trial = trial;
            rec.seed = seed;
            rec.algorithm = algorithm;
            rec.method = method;
            rec.snr_db = snr_db;
            rec.axis = scenario.axis;
            rec.truths = truths;
            const auto start = Clock::now();
            try {
                if (algorithm != Algorithm::Periodogram && !split_tried) {
                    split_tried = true;
                    try {
                        split = scenario_split(scenario, radar);
                    } catch (const std::exception& e) {
                        split_error = e.what();
                    }
                }
                if (algorithm != Algorithm::Periodogram && !split) {
                    throw DegenerateSubspace(split_error);
                }
                rec.estimates = estimate_cached(scenario, radar, algorithm, method,
                                                split ? &*split : nullptr, cache,
                                                options.keep_spectra ? &result.spectra : nullptr);
                rec.resolved = match_estimates(rec.estimates, truths, gate).resolved;
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
                rec.estimates.clear();
            }
            if (options.measure_time) {
                rec.wall_ms =
                    std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            }
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::vector<MetricRow> summarize(const std::vector<TrialRecord>& records, double gate) {
    if (records.empty()) {
        throw std::invalid_argument("summarize needs at least one record");
    }
    using Key = std::tuple<std::string, int, int, bool, double>;
    std::vector<Key> order;
    std::map<Key, std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) {
        Key key{r.scenario, static_cast<int>(r.algorithm),
                r.method ? static_cast<int>(*r.method) : -1, r.snr_db.has_value(),
                r.snr_db.value_or(0.0)};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        it->second.push_back(&r);
    }

    std::vector<MetricRow> rows;
    for (const auto& key : order) {
        const auto& group = groups.at(key);
        const TrialRecord& first = *group.front();
        const std::size_t p = first.truths.size();
        std::vector<double> sum(p, 0.0);
        std::vector<double> sum_sq(p, 0.0);
        int resolved = 0;
        for (const auto* r : group) {
            if (r->failed) {
                continue;
            }
            const Match m = match_estimates(r->estimates, r->truths, gate);
            if (!m.resolved) {
                continue;
            }
            ++resolved;
            for (std::size_t i = 0; i < p; ++i) {
                const double err = *m.matched[i] - r->truths[i];
                sum[i] += err;
                sum_sq[i] += err * err;
            }
        }
        for (std::size_t i = 0; i < p; ++i) {
            MetricRow row;
            row.scenario = first.scenario;
            row.algorithm = first.algorithm;
            row.method = first.method;
            row.snr_db = first.snr_db;
            row.target_idx = static_cast<int>(i);
            row.truth = first.truths[i];
            row.n_trials = static_cast<int>(group.size());
            row.resolution_prob = static_cast<double>(resolved) / row.n_trials;
            if (resolved > 0) {
                row.bias = sum[i] / resolved;
                row.rmse = std::max(std::sqrt(sum_sq[i] / resolved), std::abs(row.bias));
            } else {
                row.bias = std::numeric_limits<double>::quiet_NaN();
                row.rmse = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace nrsense
