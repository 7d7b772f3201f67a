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

#include "nrsense/harness.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace nrsense {

inline constexpr std::string_view kMetricsHeader =
    "scenario,algorithm,method,snr_db,target_idx,truth,bias,rmse,resolution_prob,n_trials";
inline constexpr std::string_view kTrialsHeader =
    "scenario,trial,seed,algorithm,method,target_idx,estimate,truth,resolved,wall_ms";
inline constexpr std::string_view kSpectrumHeader = "axis,value";

/// 17 significant digits; "nan" and "inf" for non-finite values.
std::string format_number(double value);

/// "I", "II", "III", or "none" on the delay axis.
std::string method_label(const std::optional<CpMethod>& method);

/// One row per (record, target) with the estimate matched to that target.
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records,
                      double gate);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricRow>& rows);

/// {algorithm}_{method}_{axis}.csv
std::string spectrum_filename(const NamedSpectrum& spectrum);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
/// Reads back the two columns written by write_spectrum_csv.
Spectrum read_spectrum_csv(const std::filesystem::path& path);

struct RunInfo {
    std::vector<std::optional<double>> snr_db;
    int trials = 0;
    /// Trial whose spectra were written.
    int spectra_trial = 0;
};

/// Scenario, seeds, code version and a timestamp.
void write_manifest(const std::filesystem::path& path, const Scenario& scenario,
                    const RunInfo& info);

/// metrics.csv, trials.csv, spectra/*.csv and manifest.json under `dir`.
void write_outputs(const std::filesystem::path& dir, const Scenario& scenario,
                   const std::vector<TrialRecord>& records,
                   const std::vector<NamedSpectrum>& spectra, const RunInfo& info);

struct RunOptions {
    /// Record real wall times; otherwise wall_ms is written as 0 so reruns are byte-identical.
    bool measure_time = false;
    int spectra_trial = 0;
    /// Receives one line per failed record.
    std::ostream* log = nullptr;
};

/// Runs every trial at every SNR and writes the output set under `dir`. With several SNRs
/// each gets its own `snr_<value>` subdirectory and `dir` holds the combined metrics.csv.
std::vector<TrialRecord> simulate(const Scenario& scenario, const std::filesystem::path& dir,
                                  const RunOptions& options = {});

} // namespace nrsense
