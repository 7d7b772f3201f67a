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

#pragma once

#include "nrsense/scenario.hpp"
#include "nrsense/subspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nrsense {

/// Outcome of one algorithm x method on one trial.
struct TrialRecord {
    std::string scenario;
    int trial = 0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::Periodogram;
    /// Empty on the delay axis.
    std::optional<CpMethod> method;
    std::optional<double> snr_db;
    Axis axis = Axis::Doppler;
    /// Raw estimates in axis units (Hz or s), ascending.
    std::vector<double> estimates;
    /// Ground truth in scenario target order.
    std::vector<double> truths;
    bool resolved = false;
    bool failed = false;
    std::string error;
    double wall_ms = 0.0;
};

/// Per-truth assignment of estimates.
struct Match {
    /// matched[i] is the estimate assigned to truth i.
    std::vector<std::optional<double>> matched;
    bool resolved = false;
};

/// Each estimate goes to its nearest truth (ties toward the smaller truth); each truth
/// keeps its nearest assigned estimate. Resolved means exactly one estimate per truth,
/// as many estimates as truths, and every error within `gate`.
Match match_estimates(const std::vector<double>& estimates, const std::vector<double>& truths,
                      double gate);

/// splitmix64 of (base seed, trial index).
std::uint64_t trial_seed(std::uint64_t base, int trial);

/// Radar matrix of one trial: exact echoes plus AWGN seeded by `seed`.
RadarDataMatrix trial_matrix(const Scenario& scenario, std::optional<double> snr_db,
                             std::uint64_t seed);

/// Spectra produced while estimating, keyed like the output file names.
struct NamedSpectrum {
    Algorithm algorithm = Algorithm::Periodogram;
    std::optional<CpMethod> method;
    Spectrum spectrum;
};

struct TrialResult {
    std::vector<TrialRecord> records;
    std::vector<NamedSpectrum> spectra;
};

struct TrialOptions {
    bool keep_spectra = false;
    bool measure_time = false;
};

/// Every requested algorithm x method on one trial. Estimator errors are caught and
/// recorded as failed records.
TrialResult run_trial(const Scenario& scenario, std::optional<double> snr_db, int trial,
                      const TrialOptions& options = {});

/// Estimates for one algorithm on an existing matrix; `split` is reused when given.
std::vector<double> estimate(const Scenario& scenario, const RadarDataMatrix& radar,
                             Algorithm algorithm, std::optional<CpMethod> method,
                             const EigenSplit* split = nullptr,
                             std::vector<NamedSpectrum>* spectra = nullptr);

/// Subspace split used by MUSIC and ESPRIT for the scenario axis.
EigenSplit scenario_split(const Scenario& scenario, const RadarDataMatrix& radar);

struct MetricRow {
    std::string scenario;
    Algorithm algorithm = Algorithm::Periodogram;
    std::optional<CpMethod> method;
    std::optional<double> snr_db;
    int target_idx = 0;
    double truth = 0.0;
    /// NaN when no trial resolved.
    double bias = 0.0;
    double rmse = 0.0;
    double resolution_prob = 0.0;
    int n_trials = 0;
};

/// Bias and RMSE over resolved trials, resolution probability over all trials, per
/// (algorithm, method, snr, target). Rows follow first appearance in `records`.
std::vector<MetricRow> summarize(const std::vector<TrialRecord>& records, double gate);

} // namespace nrsense
