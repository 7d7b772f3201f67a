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

#include "nrsense/ofdm_waveform.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace nrsense {

enum class Axis { Doppler, Delay };

std::string_view to_string(Axis axis);
Axis parse_axis(std::string_view text);

/// Non-negative spectrum over a strictly increasing physical axis (Hz or s).
struct Spectrum {
    std::vector<double> axis;
    std::vector<double> values;
    Axis kind = Axis::Doppler;
    std::optional<CpMethod> method;

    std::size_t size() const { return values.size(); }
};

/// Next power of two >= 4 * n.
std::size_t default_fft_size(int n);

/// Slow-time periodogram averaged over subcarriers, scaled by 1 / (K L).
///
/// Methods I and II use an n_fft-point DFT of each subcarrier row with bin spacing
/// 1 / (n_fft T), T the method's symbol period. Method III replaces the DFT with the
/// matched filter F(n, m) = exp(-j 2 pi n T_sum,m / (n_fft T_normal)). Bins run over
/// n = -n_fft/2 .. n_fft/2 - 1 so the axis is increasing. `n_fft == 0` picks the default.
Spectrum doppler_periodogram(const RadarDataMatrix& radar, CpMethod method, std::size_t n_fft = 0);

/// Same functional evaluated at arbitrary Doppler frequencies.
std::vector<double> doppler_periodogram_at(const RadarDataMatrix& radar, CpMethod method,
                                           std::span<const double> doppler_hz);

/// Dense n_fft x L matched-filter operator for `method` (rows n = -n_fft/2 ..).
/// For Methods I/II this is the DFT matrix.
CMatrix matched_filter_operator(const Numerology& num, CpMethod method, int symbols,
                                std::size_t n_fft);

/// Fast-time periodogram: n_fft-point inverse DFT down each symbol column, averaged over
/// symbols and scaled by 1 / (K L); bin n maps to tau = n / (n_fft df).
Spectrum delay_periodogram(const RadarDataMatrix& radar, std::size_t n_fft = 0);

std::vector<double> delay_periodogram_at(const RadarDataMatrix& radar,
                                         std::span<const double> delays);

struct Peak {
    double position = 0.0;
    double height = 0.0;
    std::size_t index = 0;
};

struct PeakList {
    std::vector<Peak> peaks;
    bool shortfall = false;
};

/// Up to `count` largest local maxima, highest first.
///
/// A local maximum is a run of equal values strictly above both neighbours (a missing
/// neighbour at either end counts as lower); the run reports its lowest index.
/// `shortfall` is set when fewer than `count` maxima exist.
PeakList find_peaks(const Spectrum& spectrum, int count);

using SpectrumEvaluator = std::function<std::vector<double>(std::span<const double>)>;

/// Iterative grid zoom on a continuous spectrum around `center`.
///
/// Each pass samples 2 * points + 1 positions over center +/- half_width, recentres on the
/// maximum and shrinks the half-width to one step.
double refine_peak(const SpectrumEvaluator& evaluate, double center, double half_width,
                   int points = 32, int passes = 2);

} // namespace nrsense
