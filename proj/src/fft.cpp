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

#include "nrsense/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <stdexcept>

namespace nrsense {

struct FftPlan::Impl {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;

    ~Impl() {
        if (plan != nullptr) {
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
};

FftPlan::FftPlan(std::size_t n, Direction direction) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n == 0) {
        throw std::invalid_argument("FFT size must be positive");
    }
    impl_->in = fftw_alloc_complex(n);
    impl_->out = fftw_alloc_complex(n);
    if (impl_->in == nullptr || impl_->out == nullptr) {
        throw std::bad_alloc();
    }
    const int sign = direction == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->in, impl_->out, sign, FFTW_ESTIMATE);
    if (impl_->plan == nullptr) {
        throw std::runtime_error("FFTW failed to create a plan");
    }
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::execute(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) {
    if (in.size() > n_ || out.size() < n_) {
        throw std::invalid_argument("FFT buffer size mismatch");
    }
    auto* buf = reinterpret_cast<std::complex<double>*>(impl_->in);
    std::copy(in.begin(), in.end(), buf);
    std::fill(buf + in.size(), buf + n_, std::complex<double>{});
    fftw_execute(impl_->plan);
    const auto* res = reinterpret_cast<const std::complex<double>*>(impl_->out);
    std::copy(res, res + n_, out.begin());
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

} // namespace nrsense
