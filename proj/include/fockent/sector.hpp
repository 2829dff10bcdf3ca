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

#include <vector>

#include "fockent/fock.hpp"

namespace fockent {

/// Particles in the field modes of `site`; register modes never count.
int local_particle_number(const ModeLayout& layout, const BasisLabel& label, Site site);

struct Sector {
  int n = 0;                ///< particles in A field modes
  double probability = 0;   ///< P_n
  PureState state;          ///< normalized projection, largest amplitude real-positive
  Amplitude phase{1.0, 0};  ///< input = sum_n sqrt(P_n) * phase_n * state_n
};

struct SectorDecomposition {
  std::vector<Sector> sectors;  ///< ascending n, sectors with P_n < 1e-14 dropped

  const Sector* find(int n) const;
};

SectorDecomposition sector_decompose(const PureState& state);

struct SectorEntanglement {
  int n = 0;
  double probability = 0;
  double entanglement = 0;  ///< bits
};

/// (n, P_n, E(Psi_n)) per sector.
std::vector<SectorEntanglement> sector_entanglements(const PureState& state);

/// E_P = sum_n P_n E(Psi_n), in bits.
double particle_entanglement(const PureState& state);

}  // namespace fockent
