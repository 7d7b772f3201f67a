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

#include "nrsense/periodogram.hpp"

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nrsense {

/// Hankel-stacked subcarrier windows of a radar matrix (forward spatial smoothing).
///
/// Row i, column j * L + m of the smoothed matrix is source(i + j, m): `window` rows,
/// `n_sub = K - window + 1` blocks of the L symbol columns. The matrix is never stored;
/// entries are read from the source on demand. The symbol dimension is left untouched.
class SmoothedMatrix {
  public:
    SmoothedMatrix(RadarDataMatrix source, int window, double rho);

    int window() const { return window_; }
    int n_sub() const { return static_cast<int>(source_.data.rows()) - window_ + 1; }
    int n_symb() const { return static_cast<int>(source_.data.cols()); }
    double rho() const { return rho_; }
    Eigen::Index rows() const { return window_; }
    Eigen::Index cols() const { return static_cast<Eigen::Index>(n_sub()) * n_symb(); }

    std::complex<double> operator()(Eigen::Index row, Eigen::Index col) const;
    /// Dense copy; window x (n_sub * L) entries, so only for small inputs.
    CMatrix materialize() const;

    const RadarDataMatrix& source() const { return source_; }

  private:
    RadarDataMatrix source_;
    int window_;
    double rho_;
};

/// Window length floor(rho * K); requires 0 < rho < 1 and window > n_targets.
SmoothedMatrix mssp(const RadarDataMatrix& radar, double rho, int n_targets);

struct Covariance {
    CMatrix matrix;
    Axis axis = Axis::Doppler;
    Numerology numerology;
};

/// (1 / K) sum_k y_k y_k^H over subcarrier rows y_k (L x L).
Covariance covariance(const RadarDataMatrix& radar);

/// Y_hat Y_hat^H / (n_sub L) (window x window), optionally forward-backward averaged.
Covariance covariance(const SmoothedMatrix& smoothed, bool forward_backward = false);

/// Signal/noise subspaces of a covariance: top `n_targets` eigenvectors and the rest.
struct EigenSplit {
    CMatrix signal_basis;
    CMatrix noise_basis;
    RVector eigenvalues;
    Axis axis = Axis::Doppler;
    Numerology numerology;

    int n_targets() const { return static_cast<int>(signal_basis.cols()); }
    int dimension() const { return static_cast<int>(signal_basis.rows()); }
};

EigenSplit eig_split(const Covariance& cov, int n_targets);

/// x_l = exp(j 2 pi f T_l), T_l = cumulative_time(l, method).
CVector doppler_steering(const Numerology& num, CpMethod method, double doppler_hz, int symbols);
/// x_k = exp(-j 2 pi k tau df).
CVector delay_steering(const Numerology& num, double tau, int length);

/// 1 / (x^H E_n E_n^H x) at each grid point (ascending). `method` selects the Doppler
/// timing convention and must be empty for the delay axis.
Spectrum music_spectrum(const EigenSplit& split, std::optional<CpMethod> method,
                        std::span<const double> grid);

struct EspritResult {
    /// Delays (s) or Doppler shifts (Hz), ascending.
    std::vector<double> parameters;
    std::vector<std::complex<double>> eigenvalues;
    std::size_t rows_used = 0;
};

/// Row pairs (earlier, later) of the signal basis used for the rotation estimate.
/// Method III keeps only pairs one normal-CP symbol apart, dropping every hop that
/// spans a long CP.
std::vector<std::pair<int, int>> esprit_row_pairs(const Numerology& num, CpMethod method,
                                                  int symbols);

/// Least-squares rotation Phi = (J2^H J2)^-1 J2^H J1 and its eigenvalues.
/// Doppler: f = -arg(lambda) / (2 pi T); delay: tau = arg(lambda) / (2 pi df).
EspritResult esprit(const EigenSplit& split, std::optional<CpMethod> method);

} // namespace nrsense
