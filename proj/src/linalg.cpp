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

#include "nrsense/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nrsense {

HermitianEig hermitian_eig(const CMatrix& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
        throw std::invalid_argument("eigendecomposition needs a non-empty square matrix");
    }
    const auto n = static_cast<lapack_int>(matrix.rows());
    CMatrix a = matrix;
    RVector w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                           reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                           w.data());
    if (info != 0) {
        throw std::runtime_error("zheevd failed with info = " + std::to_string(info));
    }
    // LAPACK returns ascending order.
    HermitianEig out;
    out.values = w.reverse();
    out.vectors = a.rowwise().reverse();
    return out;
}

namespace {

CMatrix herk(const CMatrix& x, bool conj_trans, double scale) {
    const auto n = static_cast<int>(conj_trans ? x.cols() : x.rows());
    const auto k = static_cast<int>(conj_trans ? x.rows() : x.cols());
    CMatrix c = CMatrix::Zero(n, n);
    if (n == 0 || k == 0) {
        return c;
    }
    cblas_zherk(CblasColMajor, CblasLower, conj_trans ? CblasConjTrans : CblasNoTrans, n, k,
                scale, x.data(), static_cast<int>(x.rows()), 0.0, c.data(), n);
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            c(i, j) = std::conj(c(j, i));
        }
    }
    return c;
}

} // namespace

CMatrix gram_rows(const CMatrix& x, double scale) { return herk(x, false, scale); }

CMatrix gram_cols(const CMatrix& x, double scale) {
    const CMatrix xh = x.adjoint();
    return herk(xh, false, scale);
}

double hermitian_defect(const CMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("matrix is not square");
    }
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const CMatrix& matrix) {
    return matrix.size() == 0 ? 0.0 : matrix.cwiseAbs().maxCoeff();
}

std::complex<double> unit_phasor(double cycles) {
    const double frac = cycles - std::round(cycles);
    const double angle = 2.0 * std::numbers::pi * frac;
    return {std::cos(angle), std::sin(angle)};
}

} // namespace nrsense
