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

#include "nrsense/ofdm_waveform.hpp"

#include "nrsense/fft.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace nrsense {

namespace {

std::complex<double> qpsk_point(unsigned bits) {
    const double a = 1.0 / std::sqrt(2.0);
    return {(bits & 1U) ? -a : a, (bits & 2U) ? -a : a};
}

std::complex<double> qam16_point(unsigned bits) {
    static constexpr std::array<double, 4> levels{-3.0, -1.0, 1.0, 3.0};
    const double scale = 1.0 / std::sqrt(10.0);
    return {levels[bits & 3U] * scale, levels[(bits >> 2) & 3U] * scale};
}

void check_grid_fits(const ResourceGrid& grid, const Numerology& num) {
    if (grid.subcarriers() < 1 || grid.symbols() < 1) {
        throw std::invalid_argument("resource grid is empty");
    }
    if (grid.subcarriers() > num.n_sc() || grid.symbols() > num.n_symb()) {
        throw std::invalid_argument("resource grid " + std::to_string(grid.subcarriers()) + "x" +
                                    std::to_string(grid.symbols()) + " exceeds numerology " +
                                    std::to_string(num.n_sc()) + "x" +
                                    std::to_string(num.n_symb()));
    }
}

} // namespace

ResourceGrid generate_payload(std::uint64_t seed, int subcarriers, int symbols,
                              Constellation constellation) {
    if (subcarriers < 1 || symbols < 1) {
        throw std::invalid_argument("payload dimensions must be positive");
    }
    std::mt19937_64 rng(seed);
    ResourceGrid grid{CMatrix(subcarriers, symbols), constellation, seed};
    for (int l = 0; l < symbols; ++l) {
        for (int k = 0; k < subcarriers; ++k) {
            const auto bits = static_cast<unsigned>(rng() >> 60);
            grid.data(k, l) =
                constellation == Constellation::QPSK ? qpsk_point(bits) : qam16_point(bits);
        }
    }
    return grid;
}

std::int64_t stream_length(const Numerology& num, int symbols) {
    if (symbols < 1 || symbols > num.n_symb()) {
        throw std::invalid_argument("symbol count outside the frame");
    }
    return num.start_samples(symbols - 1) + num.symbol_samples(symbols - 1);
}

SampleStream modulate_frame(const ResourceGrid& grid, const Numerology& num) {
    check_grid_fits(grid, num);
    const auto n_u = static_cast<std::size_t>(num.n_u());
    const int symbols = grid.symbols();
    SampleStream stream;
    stream.symbols = symbols;
    stream.samples.resize(static_cast<std::size_t>(stream_length(num, symbols)));

    FftPlan ifft(n_u, FftPlan::Direction::Inverse);
    std::vector<std::complex<double>> spectrum(n_u);
    std::vector<std::complex<double>> body(n_u);
    for (int l = 0; l < symbols; ++l) {
        std::fill(spectrum.begin(), spectrum.end(), std::complex<double>{});
        for (int k = 0; k < grid.subcarriers(); ++k) {
            spectrum[static_cast<std::size_t>(k)] = grid.data(k, l);
        }
        ifft.execute(spectrum, body);
        const auto cp = static_cast<std::size_t>(num.cp_samples(l));
        auto out = stream.samples.begin() + num.start_samples(l);
        out = std::copy(body.end() - static_cast<std::ptrdiff_t>(cp), body.end(), out);
        std::copy(body.begin(), body.end(), out);
    }
    return stream;
}

CMatrix demodulate_frame(const SampleStream& stream, const Numerology& num, int subcarriers) {
    if (subcarriers < 1 || subcarriers > num.n_u()) {
        throw std::invalid_argument("subcarrier count outside the FFT size");
    }
    if (stream.symbols < 1 ||
        static_cast<std::int64_t>(stream.length()) != stream_length(num, stream.symbols)) {
        throw std::invalid_argument("sample stream length does not match the frame timing");
    }
    const auto n_u = static_cast<std::size_t>(num.n_u());
    const double scale = 1.0 / static_cast<double>(n_u);
    FftPlan fft(n_u, FftPlan::Direction::Forward);
    std::vector<std::complex<double>> bins(n_u);
    CMatrix out(subcarriers, stream.symbols);
    for (int l = 0; l < stream.symbols; ++l) {
        const auto begin = static_cast<std::size_t>(num.start_samples(l) + num.cp_samples(l));
        fft.execute(std::span(stream.samples).subspan(begin, n_u), bins);
        for (int k = 0; k < subcarriers; ++k) {
            out(k, l) = bins[static_cast<std::size_t>(k)] * scale;
        }
    }
    return out;
}

RadarDataMatrix build_radar_matrix(const CMatrix& received, const ResourceGrid& grid,
                                   const Numerology& num) {
    if (received.rows() != grid.data.rows() || received.cols() != grid.data.cols()) {
        throw std::invalid_argument("received grid and payload dimensions differ");
    }
    if ((grid.data.array() == std::complex<double>{}).any()) {
        throw std::invalid_argument("payload contains a zero symbol; cannot divide it out");
    }
    return RadarDataMatrix{received.cwiseQuotient(grid.data), num};
}

void write_iq_f32le(const SampleStream& stream, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    auto put = [&os](float value) {
        auto word = std::bit_cast<std::uint32_t>(value);
        std::array<char, 4> bytes{};
        for (auto& b : bytes) {
            b = static_cast<char>(word & 0xFFU);
            word >>= 8;
        }
        os.write(bytes.data(), bytes.size());
    };
    for (const auto& s : stream.samples) {
        put(static_cast<float>(s.real()));
        put(static_cast<float>(s.imag()));
    }
    if (!os) {
        throw std::runtime_error("write to " + path.string() + " failed");
    }
}

std::vector<std::complex<float>> read_iq_f32le(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path.string());
    }
    auto get = [&is](float& value) {
        std::array<unsigned char, 4> bytes{};
        if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
            return false;
        }
        std::uint32_t word = 0;
        for (int i = 3; i >= 0; --i) {
            word = (word << 8) | bytes[static_cast<std::size_t>(i)];
        }
        value = std::bit_cast<float>(word);
        return true;
    };
    std::vector<std::complex<float>> out;
    float re = 0.0F;
    float im = 0.0F;
    while (get(re)) {
        if (!get(im)) {
            throw std::runtime_error(path.string() + " holds an odd number of floats");
        }
        out.emplace_back(re, im);
    }
    return out;
}

} // namespace nrsense
