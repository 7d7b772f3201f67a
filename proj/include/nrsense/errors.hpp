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

#include <stdexcept>
#include <string>

namespace nrsense {

// Echo parameters that break the CP-bounded delay model (tau >= CP, |alpha| == 0, ...).
class ModelViolation : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Subspace too poorly conditioned for the rotation least-squares solve.
class DegenerateSubspace : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent scenario input.
class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace nrsense
