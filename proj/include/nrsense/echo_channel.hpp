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

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace nrsense {

/// One point reflector: complex gain, round-trip delay (s) and Doppler (Hz).
struct Target {
    std::complex<double> alpha{1.0, 0.0};
    double tau = 0.0;
    double doppler = 0.0;
};

struct TargetSet {
    std::vector<Target> targets;

    std::size_t size() const { return targets.size(); }
    double distance(std::size_t i, const Numerology& num) const;
    double velocity(std::size_t i, const Numerology& num) const;
    /// sum_p |alpha_p|^2
    double total_power() const;
    /// Throws ModelViolation unless P >= 1, 0 <= tau < min CP and |alpha| > 0.
    void validate(const Numerology& num) const;
};

/// Per-resource-element SNR |alpha|^2 / sigma^2; `snr_db == nullopt` means noiseless.
struct NoiseSpec {
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    static NoiseSpec noiseless() { return {}; }
    bool is_noiseless() const { return !snr_db.has_value(); }
};

/// Exact evaluation of sum_p alpha_p e^{-j2 pi k tau_p df} e^{j2 pi f_p T_sum,l}
/// with T_sum,l the true (long-CP aware) symbol start. Fractional delays allowed.
RadarDataMatrix synthesize_symbol_domain(const Numerology& num, const TargetSet& targets,
                                         int subcarriers, int symbols);

struct QuantizationNotice {
    std::size_t target = 0;
    double requested_tau = 0.0;
    double applied_tau = 0.0;
};

struct TimeDomainEcho {
    SampleStream stream;
    std::vector<QuantizationNotice> notices;
};

/// y[n] = sum_p alpha_p s[n - d_p] e^{j2 pi f_p n t_c}, d_p = round(tau_p / t_c).
/// Delays off the T_C grid are rounded and reported in `notices`.
TimeDomainEcho apply_time_domain(const SampleStream& stream, const TargetSet& targets,
                                 const Numerology& num);

/// Adds CN(0, sigma^2) with sigma^2 = signal_power / 10^(snr_db / 10).
RadarDataMatrix add_awgn(const RadarDataMatrix& matrix, const NoiseSpec& noise,
                         double signal_power);
RadarDataMatrix add_awgn(const RadarDataMatrix& matrix, const NoiseSpec& noise,
                         const TargetSet& targets);

} // namespace nrsense
