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

#include "nrsense/echo_channel.hpp"

#include "nrsense/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace nrsense {

double TargetSet::distance(std::size_t i, const Numerology& num) const {
    return num.delay_to_distance(targets.at(i).tau);
}

double TargetSet::velocity(std::size_t i, const Numerology& num) const {
    return num.doppler_to_velocity(targets.at(i).doppler);
}

double TargetSet::total_power() const {
    double power = 0.0;
    for (const auto& t : targets) {
        power += std::norm(t.alpha);
    }
    return power;
}

void TargetSet::validate(const Numerology& num) const {
    if (targets.empty()) {
        throw ModelViolation("target set is empty");
    }
    const double max_tau = num.min_cp_duration();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& t = targets[i];
        if (!std::isfinite(t.tau) || !std::isfinite(t.doppler) || !std::isfinite(t.alpha.real()) ||
            !std::isfinite(t.alpha.imag())) {
            throw ModelViolation("target " + std::to_string(i) + " has non-finite parameters");
        }
        if (t.tau < 0.0 || t.tau >= max_tau) {
            throw ModelViolation("target " + std::to_string(i) + " delay " + std::to_string(t.tau) +
                                 " s outside [0, CP = " + std::to_string(max_tau) + " s)");
        }
        if (std::abs(t.alpha) == 0.0) {
            throw ModelViolation("target " + std::to_string(i) + " has zero reflection");
        }
    }
}

RadarDataMatrix synthesize_symbol_domain(const Numerology& num, const TargetSet& targets,
                                         int subcarriers, int symbols) {
    if (subcarriers < 1 || subcarriers > num.n_sc() || symbols < 1 || symbols > num.n_symb()) {
        throw std::invalid_argument("grid " + std::to_string(subcarriers) + "x" +
                                    std::to_string(symbols) + " outside the numerology");
    }
    targets.validate(num);
    const double df = num.delta_f();
    const double tc = num.t_c();
    CMatrix out = CMatrix::Zero(subcarriers, symbols);
    CVector delay(subcarriers);
    CVector doppler(symbols);
    for (const auto& t : targets.targets) {
        for (int k = 0; k < subcarriers; ++k) {
            delay(k) = t.alpha * unit_phasor(-static_cast<double>(k) * t.tau * df);
        }
        for (int l = 0; l < symbols; ++l) {
            // f * T_sum,l in cycles, kept as integer samples times t_c until the last step.
            const double start = static_cast<double>(num.start_samples(l));
            doppler(l) = unit_phasor(t.doppler * start * tc);
        }
        out.noalias() += delay * doppler.transpose();
    }
    return RadarDataMatrix{std::move(out), num};
}

TimeDomainEcho apply_time_domain(const SampleStream& stream, const TargetSet& targets,
                                 const Numerology& num) {
    targets.validate(num);
    const double tc = num.t_c();
    TimeDomainEcho echo;
    echo.stream.symbols = stream.symbols;
    echo.stream.samples.assign(stream.length(), std::complex<double>{});
    const auto n = static_cast<std::int64_t>(stream.length());
    for (std::size_t p = 0; p < targets.size(); ++p) {
        const auto& t = targets.targets[p];
        const double exact = t.tau / tc;
        const auto shift = static_cast<std::int64_t>(std::llround(exact));
        if (std::abs(exact - static_cast<double>(shift)) > 1e-6) {
            echo.notices.push_back({p, t.tau, static_cast<double>(shift) * tc});
        }
        for (std::int64_t i = shift; i < n; ++i) {
            const auto rot = unit_phasor(t.doppler * static_cast<double>(i) * tc);
            echo.stream.samples[static_cast<std::size_t>(i)] +=
                t.alpha * stream.samples[static_cast<std::size_t>(i - shift)] * rot;
        }
    }
    return echo;
}

RadarDataMatrix add_awgn(const RadarDataMatrix& matrix, const NoiseSpec& noise,
                         double signal_power) {
    if (!matrix.data.allFinite()) {
        throw std::invalid_argument("radar matrix holds non-finite entries");
    }
    if (noise.is_noiseless()) {
        return matrix;
    }
    if (!std::isfinite(*noise.snr_db)) {
        throw std::invalid_argument("SNR must be finite (use the noiseless sentinel instead)");
    }
    const double variance = signal_power / std::pow(10.0, *noise.snr_db / 10.0);
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    RadarDataMatrix out = matrix;
    auto* data = out.data.data();
    for (Eigen::Index i = 0; i < out.data.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        data[i] += std::complex<double>(re, im);
    }
    return out;
}

RadarDataMatrix add_awgn(const RadarDataMatrix& matrix, const NoiseSpec& noise,
                         const TargetSet& targets) {
    return add_awgn(matrix, noise, targets.total_power());
}

} // namespace nrsense
