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

#include "fockent/sector.hpp"

#include <cmath>

#include "fockent/errors.hpp"

namespace fockent {

namespace {

constexpr double kMinSectorWeight = 1e-14;

void require_both_sites(const ModeLayout& layout) {
  if (!layout.has_site(Site::A) || !layout.has_site(Site::B)) {
    throw LayoutError("particle entanglement needs modes at both sites");
  }
}

// Phase that makes the largest-magnitude amplitude real-positive. Ties keep
// the first label in lexicographic order.
Amplitude leading_phase(const AmplitudeMap& amps) {
  double best = -1.0;
  Amplitude lead{1.0, 0.0};
  for (const auto& [label, amp] : amps) {
    if (std::abs(amp) > best + 1e-12) {
      best = std::abs(amp);
      lead = amp;
    }
  }
  return lead / std::abs(lead);
}

}  // namespace

int local_particle_number(const ModeLayout& layout, const BasisLabel& label, Site site) {
  int n = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].site == site && layout[i].kind == ModeKind::Field) n += label[i];
  }
  return n;
}

const Sector* SectorDecomposition::find(int n) const {
  for (const auto& s : sectors) {
    if (s.n == n) return &s;
  }
  return nullptr;
}

SectorDecomposition sector_decompose(const PureState& state) {
  std::map<int, AmplitudeMap> buckets;
  for (const auto& [label, amp] : state.amplitudes()) {
    buckets[local_particle_number(state.layout(), label, Site::A)].emplace(label, amp);
  }
  SectorDecomposition out;
  for (auto& [n, amps] : buckets) {
    const double p = squared_norm(amps);
    if (p < kMinSectorWeight) continue;
    const Amplitude phase = leading_phase(amps);
    const double scale = std::sqrt(p);
    for (auto& [label, amp] : amps) amp /= scale * phase;
    out.sectors.push_back(Sector{n, p, PureState::normalized(state.layout(), std::move(amps)), phase});
  }
  return out;
}

std::vector<SectorEntanglement> sector_entanglements(const PureState& state) {
  require_both_sites(state.layout());
  std::vector<SectorEntanglement> out;
  for (const auto& s : sector_decompose(state).sectors) {
    out.push_back({s.n, s.probability, entropy_of_entanglement(s.state)});
  }
  return out;
}

double particle_entanglement(const PureState& state) {
  double ep = 0.0;
  for (const auto& s : sector_entanglements(state)) ep += s.probability * s.entanglement;
  return ep;
}

}  // namespace fockent
