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

#include "nrsense/echo_channel.hpp"
#include "nrsense/numerology.hpp"
#include "nrsense/periodogram.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nrsense {

enum class Algorithm { Periodogram, Music, Esprit };

std::string_view to_string(Algorithm algorithm);
/// "periodogram", "music" or "esprit" (case-insensitive).
Algorithm parse_algorithm(std::string_view text);

/// Target as written in a scenario file, with both physical and signal-level units filled.
struct ScenarioTarget {
    double distance_m = 0.0;
    double delay_s = 0.0;
    double velocity_mps = 0.0;
    double doppler_hz = 0.0;
    /// Complex gain referenced to the centre of the occupied band.
    std::complex<double> alpha{1.0, 0.0};
};

/// One Monte Carlo experiment.
///
/// The numerology defaults to the desk-scale grid (20 RBs, 112 symbols);
/// `full_size` switches to 264 RBs and a whole frame.
struct Scenario {
    std::string name = "scenario";
    int mu = 3;
    int n_rb = 20;
    int n_symbols = 112;
    double carrier_hz = Numerology::kDefaultCarrier;
    double c0 = Numerology::kDefaultSpeedOfLight;
    bool long_cp = true;
    bool full_size = false;

    Axis axis = Axis::Doppler;
    std::vector<ScenarioTarget> targets;
    /// nullopt entries run noiseless.
    std::vector<std::optional<double>> snr_db{15.0};
    std::vector<Algorithm> algorithms{Algorithm::Periodogram, Algorithm::Music,
                                      Algorithm::Esprit};
    std::vector<CpMethod> methods{kAllCpMethods.begin(), kAllCpMethods.end()};
    int trials = 1;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";

    double rho = 0.4;
    bool forward_backward = false;
    /// Resolution gate in axis units (Hz or s); unset means half the smallest separation.
    std::optional<double> gate;
    std::size_t doppler_fft = 0;
    std::size_t delay_fft = 0;
    /// MUSIC Doppler search: grid step and half-width around each coarse peak (Hz).
    /// Zero picks 1 Hz and two Rayleigh cells.
    double music_step_hz = 0.0;
    double music_window_hz = 0.0;
    /// MUSIC delay search (s); zero picks 1/100 and two Rayleigh cells.
    double music_step_s = 0.0;
    double music_window_s = 0.0;

    Numerology numerology() const;
    int subcarriers() const { return 12 * n_rb; }
    TargetSet target_set() const;
    /// Truth values along `axis` in target order (Hz or s).
    std::vector<double> truths() const;
    double effective_gate() const;
};

/// Parses the flat `key = value` format with `[target]` sections.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text);

/// 264 RBs and all symbols of one frame.
void apply_full_size(Scenario& scenario);

/// Throws ScenarioError unless the scenario can run: targets present, units
/// consistent, trials >= 1 and the numerology valid.
void validate(const Scenario& scenario);

} // namespace nrsense
