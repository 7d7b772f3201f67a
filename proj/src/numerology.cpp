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

#include "nrsense/numerology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nrsense {

std::string_view to_string(CpMethod method) {
    switch (method) {
    case CpMethod::MethodI:
        return "I";
    case CpMethod::MethodII:
        return "II";
    case CpMethod::MethodIII:
        return "III";
    }
    return "?";
}

CpMethod parse_cp_method(std::string_view text) {
    if (text.starts_with("Method")) {
        text.remove_prefix(6);
    }
    if (text == "I" || text == "1") {
        return CpMethod::MethodI;
    }
    if (text == "II" || text == "2") {
        return CpMethod::MethodII;
    }
    if (text == "III" || text == "3") {
        return CpMethod::MethodIII;
    }
    throw std::invalid_argument("unknown CP method '" + std::string(text) + "'");
}

Numerology::Numerology(int mu, int n_rb, double carrier_hz, bool long_cp, double c0)
    : mu_(mu), n_rb_(n_rb), carrier_hz_(carrier_hz), long_cp_(long_cp), c0_(c0) {
    // 144 * kappa * 2^-mu stays integral up to mu = 6.
    if (mu < 0 || mu > 6) {
        throw std::invalid_argument("numerology mu must lie in [0, 6], got " + std::to_string(mu));
    }
    if (n_rb < 1) {
        throw std::invalid_argument("numerology needs at least one resource block");
    }
    if (!(carrier_hz > 0.0) || !(c0 > 0.0)) {
        throw std::invalid_argument("carrier frequency and speed of light must be positive");
    }
    n_u_ = (2048 * kKappa) >> mu;
    normal_cp_ = (144 * kKappa) >> mu;
    eta_ = 7 << mu;
    n_symb_ = 14 * (10 << mu);
}

double Numerology::delta_f() const { return 15e3 * static_cast<double>(1 << mu_); }

double Numerology::t_c() const { return 1.0 / (kMaxSubcarrierSpacing * kMaxFftSize); }

void Numerology::check_symbol(int l) const {
    if (l < 0 || l >= n_symb_) {
        throw std::out_of_range("symbol index " + std::to_string(l) + " outside [0, " +
                                std::to_string(n_symb_) + ")");
    }
}

bool Numerology::is_long_cp(int l) const {
    check_symbol(l);
    return long_cp_ && l % eta_ == 0;
}

std::int64_t Numerology::cp_samples(int l) const {
    return normal_cp_ + (is_long_cp(l) ? 16 * kKappa : 0);
}

std::int64_t Numerology::symbol_samples(int l) const { return n_u_ + cp_samples(l); }

std::int64_t Numerology::long_cps_before(int l) const {
    check_symbol(l);
    if (!long_cp_) {
        return 0;
    }
    return (l + eta_ - 1) / eta_;
}

std::int64_t Numerology::start_samples(int l) const {
    return normal_symbol_samples() * l + long_cp_extra_samples() * long_cps_before(l);
}

std::int64_t Numerology::frame_samples() const {
    const int last = n_symb_ - 1;
    return start_samples(last) + symbol_samples(last);
}

double Numerology::cp_length(int l) const { return static_cast<double>(cp_samples(l)) * t_c(); }

double Numerology::symbol_duration(int l) const {
    return static_cast<double>(symbol_samples(l)) * t_c();
}

double Numerology::t_frame() const { return static_cast<double>(frame_samples()) * t_c(); }

double Numerology::min_cp_duration() const { return static_cast<double>(normal_cp_) * t_c(); }

double Numerology::cumulative_time(int l, CpMethod method) const {
    check_symbol(l);
    switch (method) {
    case CpMethod::MethodI:
        return static_cast<double>(normal_symbol_samples() * l) * t_c();
    case CpMethod::MethodII:
        return static_cast<double>(frame_samples() * l) / n_symb_ * t_c();
    case CpMethod::MethodIII:
        return static_cast<double>(start_samples(l)) * t_c();
    }
    throw std::invalid_argument("invalid CP method");
}

double Numerology::symbol_period(CpMethod method) const {
    if (method == CpMethod::MethodII) {
        return static_cast<double>(frame_samples()) / n_symb_ * t_c();
    }
    return static_cast<double>(normal_symbol_samples()) * t_c();
}

double Numerology::excess_phase(double doppler_hz, int l) const {
    const auto extra = long_cp_extra_samples() * long_cps_before(l);
    return 2.0 * std::numbers::pi * doppler_hz * (static_cast<double>(extra) * t_c());
}

} // namespace nrsense
