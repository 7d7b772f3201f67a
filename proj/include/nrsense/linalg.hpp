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

#include <Eigen/Dense>

#include <complex>

namespace nrsense {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
struct HermitianEig {
    RVector values;
    CMatrix vectors;
};

/// Full self-adjoint eigendecomposition (LAPACK divide and conquer).
/// Reads only the lower triangle of `matrix`.
HermitianEig hermitian_eig(const CMatrix& matrix);

/// scale * X X^H, both triangles filled (BLAS herk).
CMatrix gram_rows(const CMatrix& x, double scale = 1.0);
/// scale * X^H X.
CMatrix gram_cols(const CMatrix& x, double scale = 1.0);

/// max |A(i,j) - conj(A(j,i))|.
double hermitian_defect(const CMatrix& matrix);

/// Largest entry magnitude.
double max_abs(const CMatrix& matrix);

/// e^{j 2 pi cycles}, reducing `cycles` modulo 1 first so large arguments keep precision.
std::complex<double> unit_phasor(double cycles);

} // namespace nrsense
