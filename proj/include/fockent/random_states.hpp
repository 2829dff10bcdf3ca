// Copyright 2026 The fockent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "fockent/fock.hpp"

namespace fockent {

using Rng = std::mt19937_64;

/// Complex amplitude with independent standard normal parts.
Amplitude random_gaussian_amplitude(Rng& rng);

/// Random normalized state over the full basis of `layout`.
PureState random_state(Rng& rng, const ModeLayout& layout, std::size_t limit = 1 << 16);

/// Random normalized state with exactly `n` particles in the field modes and
/// empty registers.
PureState random_fixed_number_state(Rng& rng, const ModeLayout& layout, int n);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Eigen::MatrixXcd random_unitary(Rng& rng, int dim);

/// Field modes "A" and "B", one per site, both of capacity s.
ModeLayout two_mode_layout(int s);

struct PhysicalSample {
  PureState state;
  /// Draws rejected for weight above s - sqrt(s) before this one was accepted.
  int resampled = 0;
};

/// Random two-mode state on two_mode_layout(s) whose support lies below
/// s - sqrt(s). Mixes Gaussian-random, phase-ramped and coherent-like
/// amplitude profiles; `product` selects uncorrelated modes.
PhysicalSample random_physical_two_mode(Rng& rng, int s, bool product);

}  // namespace fockent
