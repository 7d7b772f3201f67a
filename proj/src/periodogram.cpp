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

#include "nrsense/periodogram.hpp"

#include "nrsense/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace nrsense {

std::string_view to_string(Axis axis) { return axis == Axis::Doppler ? "doppler" : "delay"; }

Axis parse_axis(std::string_view text) {
    if (text == "doppler") {
        return Axis::Doppler;
    }
    if (text == "delay") {
        return Axis::Delay;
    }
    throw std::invalid_argument("unknown axis '" + std::string(text) + "'");
}

std::size_t default_fft_size(int n) { return next_pow2(4 * static_cast<std::size_t>(n)); }

namespace {

std::int64_t signed_bin(std::size_t i, std::size_t n_fft) {
    return static_cast<std::int64_t>(i) - static_cast<std::int64_t>(n_fft / 2);
}

std::size_t wrapped_bin(std::int64_t n, std::size_t n_fft) {
    const auto size = static_cast<std::int64_t>(n_fft);
    return static_cast<std::size_t>(((n % size) + size) % size);
}

// Symbol timing of `method` in units of the axis period, i.e. T_m / T_axis.
std::vector<double> normalised_times(const Numerology& num, CpMethod method, int symbols) {
    std::vector<double> t(static_cast<std::size_t>(symbols));
    const auto normal = static_cast<double>(num.normal_symbol_samples());
    for (int m = 0; m < symbols; ++m) {
        t[static_cast<std::size_t>(m)] =
            method == CpMethod::MethodIII ? static_cast<double>(num.start_samples(m)) / normal
                                          : static_cast<double>(m);
    }
    return t;
}

void check_radar(const RadarDataMatrix& radar) {
    if (radar.data.size() == 0) {
        throw std::invalid_argument("radar matrix is empty");
    }
}

// sum_k |FFT_N(row_k)|^2 indexed by unwrapped bin.
std::vector<double> uniform_row_power(const CMatrix& data, std::size_t n_fft) {
    FftPlan fft(n_fft, FftPlan::Direction::Forward);
    std::vector<std::complex<double>> row(static_cast<std::size_t>(data.cols()));
    std::vector<std::complex<double>> bins(n_fft);
    std::vector<double> power(n_fft, 0.0);
    for (Eigen::Index k = 0; k < data.rows(); ++k) {
        for (Eigen::Index l = 0; l < data.cols(); ++l) {
            row[static_cast<std::size_t>(l)] = data(k, l);
        }
        fft.execute(row, bins);
        for (std::size_t u = 0; u < n_fft; ++u) {
            power[u] += std::norm(bins[u]);
        }
    }
    return power;
}

// Non-uniform matched filter. With A = sum_k y_k y_k^H over subcarrier rows y_k,
// sum_k |(F y_k)(n)|^2 = sum_{m,m'} A(m,m') exp(-j2 pi n (t_m - t_m') / N). Writing
// t_m = m + o_m with few distinct offsets o_m, each pair of offset groups contributes
// one N-point FFT of A summed along its lags.
// Returned power is indexed by signed bin order (i = n + N/2).
std::vector<double> grouped_matched_power(const CMatrix& data, const std::vector<double>& times,
                                          std::size_t n_fft) {
    const auto symbols = static_cast<Eigen::Index>(times.size());
    std::map<double, std::vector<Eigen::Index>> groups;
    for (Eigen::Index m = 0; m < symbols; ++m) {
        const auto i = static_cast<std::size_t>(m);
        groups[times[i] - static_cast<double>(m)].push_back(m);
    }

    // (Y^H Y)^* = sum_k y_k y_k^H
    const CMatrix a = gram_cols(data).conjugate();

    FftPlan fft(n_fft, FftPlan::Direction::Forward);
    const auto size = static_cast<std::int64_t>(n_fft);
    std::vector<std::complex<double>> lags(n_fft);
    std::vector<std::complex<double>> bins(n_fft);
    std::vector<std::complex<double>> acc(n_fft);
    for (const auto& [o_row, rows] : groups) {
        for (const auto& [o_col, cols] : groups) {
            std::fill(lags.begin(), lags.end(), std::complex<double>{});
            for (auto m : rows) {
                for (auto mp : cols) {
                    const std::int64_t lag = ((m - mp) % size + size) % size;
                    lags[static_cast<std::size_t>(lag)] += a(m, mp);
                }
            }
            fft.execute(lags, bins);
            const double shift = (o_row - o_col) / static_cast<double>(n_fft);
            for (std::size_t u = 0; u < n_fft; ++u) {
                std::int64_t n = static_cast<std::int64_t>(u);
                if (u >= n_fft / 2) {
                    n -= size;
                }
                acc[u] += unit_phasor(-static_cast<double>(n) * shift) * bins[u];
            }
        }
    }
    std::vector<double> ordered(n_fft);
    for (std::size_t i = 0; i < n_fft; ++i) {
        ordered[i] = std::max(0.0, acc[wrapped_bin(signed_bin(i, n_fft), n_fft)].real());
    }
    return ordered;
}

} // namespace

CMatrix matched_filter_operator(const Numerology& num, CpMethod method, int symbols,
                                std::size_t n_fft) {
    const auto times = normalised_times(num, method, symbols);
    CMatrix op(static_cast<Eigen::Index>(n_fft), symbols);
    for (std::size_t i = 0; i < n_fft; ++i) {
        const auto n = static_cast<double>(signed_bin(i, n_fft));
        for (int m = 0; m < symbols; ++m) {
            op(static_cast<Eigen::Index>(i), m) =
                unit_phasor(-n * times[static_cast<std::size_t>(m)] / static_cast<double>(n_fft));
        }
    }
    return op;
}

Spectrum doppler_periodogram(const RadarDataMatrix& radar, CpMethod method, std::size_t n_fft) {
    check_radar(radar);
    const int symbols = radar.symbols();
    if (n_fft == 0) {
        n_fft = default_fft_size(symbols);
    }
    if (n_fft < static_cast<std::size_t>(symbols)) {
        throw std::invalid_argument("Doppler FFT size " + std::to_string(n_fft) +
                                    " is shorter than the " + std::to_string(symbols) +
                                    " symbols");
    }
    const auto& num = radar.numerology;
    const double period = num.symbol_period(method);
    const double scale = 1.0 / (static_cast<double>(radar.subcarriers()) * symbols);

    Spectrum spec;
    spec.kind = Axis::Doppler;
    spec.method = method;
    spec.axis.resize(n_fft);
    spec.values.resize(n_fft);
    for (std::size_t i = 0; i < n_fft; ++i) {
        spec.axis[i] =
            static_cast<double>(signed_bin(i, n_fft)) / (static_cast<double>(n_fft) * period);
    }

    const auto times = normalised_times(num, method, symbols);
    bool uniform = true;
    std::size_t distinct = 0;
    {
        std::map<double, int> offsets;
        for (std::size_t m = 0; m < times.size(); ++m) {
            offsets[times[m] - static_cast<double>(m)] = 1;
        }
        distinct = offsets.size();
        uniform = distinct == 1 && offsets.begin()->first == 0.0;
    }

    if (uniform) {
        const auto power = uniform_row_power(radar.data, n_fft);
        for (std::size_t i = 0; i < n_fft; ++i) {
            spec.values[i] = power[wrapped_bin(signed_bin(i, n_fft), n_fft)] * scale;
        }
    } else if (distinct * distinct <= times.size()) {
        const auto power = grouped_matched_power(radar.data, times, n_fft);
        for (std::size_t i = 0; i < n_fft; ++i) {
            spec.values[i] = power[i] * scale;
        }
    } else {
        const CMatrix op = matched_filter_operator(num, method, symbols, n_fft);
        const CMatrix filtered = op * radar.data.transpose();
        for (std::size_t i = 0; i < n_fft; ++i) {
            spec.values[i] = filtered.row(static_cast<Eigen::Index>(i)).squaredNorm() * scale;
        }
    }
    return spec;
}

std::vector<double> doppler_periodogram_at(const RadarDataMatrix& radar, CpMethod method,
                                           std::span<const double> doppler_hz) {
    check_radar(radar);
    const int symbols = radar.symbols();
    const auto g = static_cast<Eigen::Index>(doppler_hz.size());
    CMatrix steer(symbols, g);
    for (int l = 0; l < symbols; ++l) {
        const double t = radar.numerology.cumulative_time(l, method);
        for (Eigen::Index j = 0; j < g; ++j) {
            steer(l, j) = unit_phasor(-doppler_hz[static_cast<std::size_t>(j)] * t);
        }
    }
    const CMatrix filtered = radar.data * steer;
    const double scale = 1.0 / (static_cast<double>(radar.subcarriers()) * symbols);
    std::vector<double> out(doppler_hz.size());
    for (Eigen::Index j = 0; j < g; ++j) {
        out[static_cast<std::size_t>(j)] = filtered.col(j).squaredNorm() * scale;
    }
    return out;
}

Spectrum delay_periodogram(const RadarDataMatrix& radar, std::size_t n_fft) {
    check_radar(radar);
    const int subcarriers = radar.subcarriers();
    if (n_fft == 0) {
        n_fft = default_fft_size(subcarriers);
    }
    if (n_fft < static_cast<std::size_t>(subcarriers)) {
        throw std::invalid_argument("delay FFT size " + std::to_string(n_fft) +
                                    " is shorter than the " + std::to_string(subcarriers) +
                                    " subcarriers");
    }
    FftPlan ifft(n_fft, FftPlan::Direction::Inverse);
    std::vector<std::complex<double>> column(static_cast<std::size_t>(subcarriers));
    std::vector<std::complex<double>> bins(n_fft);
    std::vector<double> power(n_fft, 0.0);
    for (Eigen::Index l = 0; l < radar.data.cols(); ++l) {
        for (Eigen::Index k = 0; k < subcarriers; ++k) {
            column[static_cast<std::size_t>(k)] = radar.data(k, l);
        }
        ifft.execute(column, bins);
        for (std::size_t u = 0; u < n_fft; ++u) {
            power[u] += std::norm(bins[u]);
        }
    }
    const double scale = 1.0 / (static_cast<double>(subcarriers) * radar.symbols());
    const double df = radar.numerology.delta_f();
    Spectrum spec;
    spec.kind = Axis::Delay;
    spec.axis.resize(n_fft);
    spec.values.resize(n_fft);
    for (std::size_t u = 0; u < n_fft; ++u) {
        spec.axis[u] = static_cast<double>(u) / (static_cast<double>(n_fft) * df);
        spec.values[u] = power[u] * scale;
    }
    return spec;
}

std::vector<double> delay_periodogram_at(const RadarDataMatrix& radar,
                                         std::span<const double> delays) {
    check_radar(radar);
    const int subcarriers = radar.subcarriers();
    const double df = radar.numerology.delta_f();
    const auto g = static_cast<Eigen::Index>(delays.size());
    CMatrix steer(subcarriers, g);
    for (int k = 0; k < subcarriers; ++k) {
        for (Eigen::Index j = 0; j < g; ++j) {
            steer(k, j) = unit_phasor(static_cast<double>(k) * delays[static_cast<std::size_t>(j)] * df);
        }
    }
    const CMatrix filtered = radar.data.transpose() * steer;
    const double scale = 1.0 / (static_cast<double>(subcarriers) * radar.symbols());
    std::vector<double> out(delays.size());
    for (Eigen::Index j = 0; j < g; ++j) {
        out[static_cast<std::size_t>(j)] = filtered.col(j).squaredNorm() * scale;
    }
    return out;
}

PeakList find_peaks(const Spectrum& spectrum, int count) {
    if (spectrum.values.empty()) {
        throw std::invalid_argument("cannot search an empty spectrum");
    }
    if (count < 1) {
        throw std::invalid_argument("peak count must be at least 1");
    }
    const auto& v = spectrum.values;
    const std::size_t n = v.size();
    std::vector<Peak> found;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i]) {
            ++j;
        }
        const bool left_lower = i == 0 || v[i - 1] < v[i];
        const bool right_lower = j + 1 == n || v[j + 1] < v[i];
        if (left_lower && right_lower) {
            found.push_back({spectrum.axis[i], v[i], i});
        }
        i = j + 1;
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Peak& a, const Peak& b) { return a.height > b.height; });
    PeakList out;
    out.shortfall = found.size() < static_cast<std::size_t>(count);
    if (!out.shortfall) {
        found.resize(static_cast<std::size_t>(count));
    }
    out.peaks = std::move(found);
    return out;
}

double refine_peak(const SpectrumEvaluator& evaluate, double center, double half_width, int points,
                   int passes) {
    if (points < 1 || passes < 1 || !(half_width > 0.0)) {
        throw std::invalid_argument("refine_peak needs positive points, passes and width");
    }
    std::vector<double> grid(static_cast<std::size_t>(2 * points + 1));
    for (int pass = 0; pass < passes; ++pass) {
        const double step = half_width / points;
        for (int i = -points; i <= points; ++i) {
            grid[static_cast<std::size_t>(i + points)] = center + i * step;
        }
        const auto values = evaluate(grid);
        const auto best = std::max_element(values.begin(), values.end());
        center = grid[static_cast<std::size_t>(best - values.begin())];
        half_width = step;
    }
    return center;
}

} // namespace nrsense
