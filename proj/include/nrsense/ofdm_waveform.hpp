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

#include "nrsense/linalg.hpp"
#include "nrsense/numerology.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace nrsense {

enum class Constellation { QPSK, QAM16 };

/// Payload b_{k,l}: subcarriers along rows, OFDM symbols along columns.
///
/// QPSK points have unit modulus, so dividing them out leaves white noise white.
/// QAM16 is normalised to unit average power but its uneven magnitudes colour the
/// noise after division.
struct ResourceGrid {
    CMatrix data;
    Constellation constellation = Constellation::QPSK;
    std::uint64_t seed = 0;

    int subcarriers() const { return static_cast<int>(data.rows()); }
    int symbols() const { return static_cast<int>(data.cols()); }
};

/// Time-domain samples at rate 1/t_c covering symbols [0, symbols).
struct SampleStream {
    std::vector<std::complex<double>> samples;
    int symbols = 0;

    std::size_t length() const { return samples.size(); }
};

/// Post-FFT grid with the payload divided out; rows are subcarriers, columns symbols.
struct RadarDataMatrix {
    CMatrix data;
    Numerology numerology;

    int subcarriers() const { return static_cast<int>(data.rows()); }
    int symbols() const { return static_cast<int>(data.cols()); }
};

ResourceGrid generate_payload(std::uint64_t seed, int subcarriers, int symbols,
                              Constellation constellation = Constellation::QPSK);

/// Number of T_C samples spanned by the first `symbols` symbols of a frame.
std::int64_t stream_length(const Numerology& num, int symbols);

/// IDFT each payload column onto N_u samples (no normalisation) and prefix its CP.
SampleStream modulate_frame(const ResourceGrid& grid, const Numerology& num);

/// Drop each CP, N_u-point DFT scaled by 1/N_u, keep the first `subcarriers` bins.
CMatrix demodulate_frame(const SampleStream& stream, const Numerology& num, int subcarriers);

/// Y / b element-wise.
RadarDataMatrix build_radar_matrix(const CMatrix& received, const ResourceGrid& grid,
                                   const Numerology& num);

/// Interleaved little-endian float32 I/Q pairs.
void write_iq_f32le(const SampleStream& stream, const std::filesystem::path& path);
std::vector<std::complex<float>> read_iq_f32le(const std::filesystem::path& path);

} // namespace nrsense
