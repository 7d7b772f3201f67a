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

#include <array>
#include <cstdint>
#include <string_view>

namespace nrsense {

/// How the symbol-domain phase is mapped to time when estimating Doppler.
///   MethodI   - every symbol assumed to carry a normal CP
///   MethodII  - every symbol assumed to last the frame-average duration
///   MethodIII - exact non-uniform start times including long CPs
enum class CpMethod { MethodI, MethodII, MethodIII };

inline constexpr std::array<CpMethod, 3> kAllCpMethods{CpMethod::MethodI, CpMethod::MethodII,
                                                       CpMethod::MethodIII};

std::string_view to_string(CpMethod method);

/// Accepts "I", "II", "III" (also "1", "2", "3" and "MethodI" etc.).
CpMethod parse_cp_method(std::string_view text);

/// 5G NR timing for one numerology.
///
/// All symbol and CP lengths are kept as integer counts of the NR basic time unit
/// t_c = 1 / (480 kHz * 4096); conversion to seconds happens only in the accessors
/// that return `double` seconds. A long CP (16 * kappa extra samples) sits on every
/// symbol with l mod eta == 0, eta = 7 * 2^mu.
class Numerology {
  public:
    static constexpr int kKappa = 64;
    static constexpr double kMaxSubcarrierSpacing = 480e3;
    static constexpr int kMaxFftSize = 4096;
    static constexpr double kDefaultCarrier = 28e9;
    static constexpr double kDefaultSpeedOfLight = 3.0e8;

    /// `long_cp = false` gives every symbol a normal CP; used to isolate long-CP effects.
    explicit Numerology(int mu = 3, int n_rb = 264, double carrier_hz = kDefaultCarrier,
                        bool long_cp = true, double c0 = kDefaultSpeedOfLight);

    /// mu = 3, 264 RBs, 28 GHz carrier.
    static Numerology table_one() { return Numerology{}; }

    int mu() const { return mu_; }
    int n_rb() const { return n_rb_; }
    int kappa() const { return kKappa; }
    double delta_f() const;
    double t_c() const;
    std::int64_t n_u() const { return n_u_; }
    int eta() const { return eta_; }
    int n_symb() const { return n_symb_; }
    int n_sc() const { return 12 * n_rb_; }
    double f_c() const { return carrier_hz_; }
    double c0() const { return c0_; }
    bool long_cp_enabled() const { return long_cp_; }

    std::int64_t normal_cp_samples() const { return normal_cp_; }
    std::int64_t long_cp_extra_samples() const { return long_cp_ ? 16 * kKappa : 0; }
    std::int64_t normal_symbol_samples() const { return n_u_ + normal_cp_; }

    bool is_long_cp(int l) const;
    std::int64_t cp_samples(int l) const;
    std::int64_t symbol_samples(int l) const;
    /// Start of symbol l (CP included) relative to the frame start.
    std::int64_t start_samples(int l) const;
    /// Number of long-CP symbols strictly before symbol l, i.e. ceil(l / eta).
    std::int64_t long_cps_before(int l) const;
    std::int64_t frame_samples() const;

    double cp_length(int l) const;
    double symbol_duration(int l) const;
    double t_frame() const;
    double min_cp_duration() const;

    /// T_sum,l under the given convention (seconds).
    double cumulative_time(int l, CpMethod method) const;
    /// Uniform symbol spacing implied by a method: normal-CP symbol for I and III,
    /// frame average for II.
    double symbol_period(CpMethod method) const;

    /// Extra Doppler phase from the long CPs preceding symbol l (radians).
    double excess_phase(double doppler_hz, int l) const;

    double delay_to_distance(double tau) const { return c0_ * tau / 2.0; }
    double distance_to_delay(double d) const { return 2.0 * d / c0_; }
    double doppler_to_velocity(double f) const { return f * c0_ / (2.0 * carrier_hz_); }
    double velocity_to_doppler(double v) const { return 2.0 * v * carrier_hz_ / c0_; }

    friend bool operator==(const Numerology&, const Numerology&) = default;

  private:
    void check_symbol(int l) const;

    int mu_;
    int n_rb_;
    double carrier_hz_;
    bool long_cp_;
    double c0_;
    std::int64_t n_u_;
    std::int64_t normal_cp_;
    int eta_;
    int n_symb_;
};

} // namespace nrsense
