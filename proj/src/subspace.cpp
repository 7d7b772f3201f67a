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

#include "nrsense/subspace.hpp"

#include "nrsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nrsense {

SmoothedMatrix::SmoothedMatrix(RadarDataMatrix source, int window, double rho)
    : source_(std::move(source)), window_(window), rho_(rho) {
    if (window < 1 || window > source_.data.rows()) {
        throw std::invalid_argument("smoothing window " + std::to_string(window) +
                                    " outside [1, " + std::to_string(source_.data.rows()) + "]");
    }
}

std::complex<double> SmoothedMatrix::operator()(Eigen::Index row, Eigen::Index col) const {
    const Eigen::Index block = col / n_symb();
    const Eigen::Index symbol = col % n_symb();
    return source_.data(row + block, symbol);
}

CMatrix SmoothedMatrix::materialize() const {
    CMatrix out(rows(), cols());
    for (int j = 0; j < n_sub(); ++j) {
        out.middleCols(static_cast<Eigen::Index>(j) * n_symb(), n_symb()) =
            source_.data.middleRows(j, window_);
    }
    return out;
}

SmoothedMatrix mssp(const RadarDataMatrix& radar, double rho, int n_targets) {
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("smoothing constant must lie in (0, 1)");
    }
    const int window = static_cast<int>(std::floor(rho * radar.subcarriers()));
    if (window <= n_targets) {
        throw std::invalid_argument("smoothing window " + std::to_string(window) +
                                    " must exceed the target count " + std::to_string(n_targets));
    }
    return SmoothedMatrix(radar, window, rho);
}

Covariance covariance(const RadarDataMatrix& radar) {
    if (radar.data.size() == 0) {
        throw std::invalid_argument("covariance of an empty matrix");
    }
    CMatrix full =
        gram_cols(radar.data, 1.0 / static_cast<double>(radar.data.rows())).conjugate();
    return Covariance{std::move(full), Axis::Doppler, radar.numerology};
}

Covariance covariance(const SmoothedMatrix& smoothed, bool forward_backward) {
    const CMatrix& y = smoothed.source().data;
    if (y.size() == 0) {
        throw std::invalid_argument("covariance of an empty matrix");
    }
    // Gram matrix of subcarrier rows; each covariance entry is a sliding sum of n_sub
    // consecutive entries along one Gram diagonal.
    const CMatrix gram = gram_rows(y);

    const int w = smoothed.window();
    const int n_sub = smoothed.n_sub();
    CMatrix r(w, w);
    for (int d = 0; d < w; ++d) {
        std::complex<double> acc{};
        for (int s = 0; s < n_sub; ++s) {
            acc += gram(d + s, s);
        }
        r(d, 0) = acc;
        for (int j = 1; j + d < w; ++j) {
            acc += gram(d + j + n_sub - 1, j + n_sub - 1) - gram(d + j - 1, j - 1);
            r(d + j, j) = acc;
        }
    }
    const double scale = 1.0 / (static_cast<double>(n_sub) * smoothed.n_symb());
    CMatrix full = r.selfadjointView<Eigen::Lower>();
    full *= scale;
    full.diagonal() = full.diagonal().real().cast<std::complex<double>>();
    if (forward_backward) {
        const CMatrix flipped = full.conjugate().reverse();
        full = 0.5 * (full + flipped);
    }
    return Covariance{std::move(full), Axis::Delay, smoothed.source().numerology};
}

EigenSplit eig_split(const Covariance& cov, int n_targets) {
    const auto& r = cov.matrix;
    if (r.rows() != r.cols() || r.rows() == 0) {
        throw std::invalid_argument("covariance must be a non-empty square matrix");
    }
    if (n_targets < 1 || n_targets >= r.rows()) {
        throw std::invalid_argument("target count " + std::to_string(n_targets) +
                                    " must lie in [1, " + std::to_string(r.rows() - 1) + "]");
    }
    const double tol = 1e-10 * std::max(1.0, max_abs(r));
    if (hermitian_defect(r) > tol) {
        throw std::invalid_argument("covariance is not Hermitian");
    }
    auto eig = hermitian_eig(r);
    EigenSplit split;
    split.signal_basis = eig.vectors.leftCols(n_targets);
    split.noise_basis = eig.vectors.rightCols(r.rows() - n_targets);
    split.eigenvalues = std::move(eig.values);
    split.axis = cov.axis;
    split.numerology = cov.numerology;
    return split;
}

CVector doppler_steering(const Numerology& num, CpMethod method, double doppler_hz, int symbols) {
    CVector x(symbols);
    for (int l = 0; l < symbols; ++l) {
        x(l) = unit_phasor(doppler_hz * num.cumulative_time(l, method));
    }
    return x;
}

CVector delay_steering(const Numerology& num, double tau, int length) {
    CVector x(length);
    const double df = num.delta_f();
    for (int k = 0; k < length; ++k) {
        x(k) = unit_phasor(-static_cast<double>(k) * tau * df);
    }
    return x;
}

Spectrum music_spectrum(const EigenSplit& split, std::optional<CpMethod> method,
                        std::span<const double> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("MUSIC grid is empty");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("MUSIC grid must be strictly increasing");
    }
    if ((split.axis == Axis::Doppler) != method.has_value()) {
        throw std::invalid_argument(split.axis == Axis::Doppler
                                        ? "Doppler MUSIC needs a CP method"
                                        : "delay MUSIC takes no CP method");
    }
    const int n = split.dimension();
    const auto g = static_cast<Eigen::Index>(grid.size());
    CMatrix steer(n, g);
    for (Eigen::Index j = 0; j < g; ++j) {
        const double theta = grid[static_cast<std::size_t>(j)];
        steer.col(j) = split.axis == Axis::Doppler
                           ? doppler_steering(split.numerology, *method, theta, n)
                           : delay_steering(split.numerology, theta, n);
    }
    const CMatrix projected = split.noise_basis.adjoint() * steer;
    Spectrum spec;
    spec.kind = split.axis;
    spec.method = method;
    spec.axis.assign(grid.begin(), grid.end());
    spec.values.resize(grid.size());
    for (Eigen::Index j = 0; j < g; ++j) {
        const double den = projected.col(j).squaredNorm();
        spec.values[static_cast<std::size_t>(j)] =
            den > 0.0 ? 1.0 / den : std::numeric_limits<double>::max();
    }
    return spec;
}

std::vector<std::pair<int, int>> esprit_row_pairs(const Numerology& num, CpMethod method,
                                                  int symbols) {
    std::vector<std::pair<int, int>> pairs;
    for (int l = 0; l + 1 < symbols; ++l) {
        if (method == CpMethod::MethodIII &&
            num.start_samples(l + 1) - num.start_samples(l) != num.normal_symbol_samples()) {
            continue;
        }
        pairs.emplace_back(l, l + 1);
    }
    return pairs;
}

EspritResult esprit(const EigenSplit& split, std::optional<CpMethod> method) {
    if ((split.axis == Axis::Doppler) != method.has_value()) {
        throw std::invalid_argument(split.axis == Axis::Doppler
                                        ? "Doppler ESPRIT needs a CP method"
                                        : "delay ESPRIT takes no CP method");
    }
    const int p = split.n_targets();
    const int n = split.dimension();
    if (n < p + 1) {
        throw std::invalid_argument("signal basis needs at least P + 1 rows");
    }
    const auto pairs = split.axis == Axis::Doppler
                           ? esprit_row_pairs(split.numerology, *method, n)
                           : esprit_row_pairs(split.numerology, CpMethod::MethodI, n);
    if (pairs.size() < static_cast<std::size_t>(p)) {
        throw DegenerateSubspace("too few shift-invariant row pairs for " + std::to_string(p) +
                                 " targets");
    }
    const auto rows = static_cast<Eigen::Index>(pairs.size());
    CMatrix j1(rows, p);
    CMatrix j2(rows, p);
    for (Eigen::Index i = 0; i < rows; ++i) {
        j1.row(i) = split.signal_basis.row(pairs[static_cast<std::size_t>(i)].first);
        j2.row(i) = split.signal_basis.row(pairs[static_cast<std::size_t>(i)].second);
    }
    const CMatrix normal = j2.adjoint() * j2;
    const Eigen::SelfAdjointEigenSolver<CMatrix> conditioning(normal, Eigen::EigenvaluesOnly);
    const auto& ev = conditioning.eigenvalues();
    if (!(ev(0) > 1e-12 * ev(ev.size() - 1))) {
        throw DegenerateSubspace("rotation normal equations are rank deficient");
    }
    const CMatrix phi = normal.ldlt().solve(j2.adjoint() * j1);
    const Eigen::ComplexEigenSolver<CMatrix> rotation(phi, false);
    if (rotation.info() != Eigen::Success) {
        throw DegenerateSubspace("eigenvalues of the rotation operator did not converge");
    }

    std::vector<std::pair<double, std::complex<double>>> out;
    for (Eigen::Index i = 0; i < p; ++i) {
        const auto lambda = rotation.eigenvalues()(i);
        const double angle = std::arg(lambda);
        const double value =
            split.axis == Axis::Doppler
                ? -angle / (2.0 * std::numbers::pi * split.numerology.symbol_period(*method))
                : angle / (2.0 * std::numbers::pi * split.numerology.delta_f());
        out.emplace_back(value, lambda);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    EspritResult result;
    result.rows_used = pairs.size();
    for (const auto& [value, lambda] : out) {
        result.parameters.push_back(value);
        result.eigenvalues.push_back(lambda);
    }
    return result;
}

} // namespace nrsense
