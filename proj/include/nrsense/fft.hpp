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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace nrsense {

/// Owning wrapper around a one-dimensional complex FFTW plan.
///
/// Forward computes sum_n x[n] e^{-j 2 pi k n / N}, Inverse the same with +j.
/// Neither direction is normalised.
class FftPlan {
  public:
    enum class Direction { Forward, Inverse };

    FftPlan(std::size_t n, Direction direction);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const { return n_; }

    /// `in` may be shorter than size(); the remainder is zero-padded.
    void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

  private:
    struct Impl;
    std::size_t n_;
    std::unique_ptr<Impl> impl_;
};

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

} // namespace nrsense
