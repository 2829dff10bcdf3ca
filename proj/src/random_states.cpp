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

#include "fockent/random_states.hpp"

#include <cmath>
#include <numbers>

#include "fockent/errors.hpp"

namespace fockent {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Single-mode amplitude profile on occupations [lo, hi].
std::vector<Amplitude> profile(Rng& rng, int lo, int hi) {
  const int width = hi - lo + 1;
  std::vector<Amplitude> c(static_cast<std::size_t>(width));
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      for (auto& v : c) v = random_gaussian_amplitude(rng);
      break;
    case 1: {
      const double ramp = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
      for (int k = 0; k < width; ++k) {
        c[static_cast<std::size_t>(k)] = std::polar(std::abs(random_gaussian_amplitude(rng)), ramp * k);
      }
      break;
    }
    default: {
      const double centre = uniform_real(rng, lo, hi);
      const double sigma = uniform_real(rng, 0.3, std::max(0.5, std::sqrt(centre + 1.0)));
      const double ramp = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
      for (int k = 0; k < width; ++k) {
        const double d = (lo + k - centre) / sigma;
        c[static_cast<std::size_t>(k)] =
            std::polar(std::exp(-0.25 * d * d), ramp * k) + 1e-3 * random_gaussian_amplitude(rng);
      }
      break;
    }
  }
  return c;
}

std::pair<int, int> window(Rng& rng, int s) {
  const int hi = uniform_int(rng, 0, s);
  const int lo = uniform_int(rng, std::max(0, hi - 40), hi);
  return {lo, hi};
}

}  // namespace

Amplitude random_gaussian_amplitude(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

PureState random_state(Rng& rng, const ModeLayout& layout, std::size_t limit) {
  AmplitudeMap amps;
  for (auto& label : enumerate_basis(layout, limit)) amps.emplace(std::move(label), random_gaussian_amplitude(rng));
  return PureState::normalized(layout, std::move(amps));
}

PureState random_fixed_number_state(Rng& rng, const ModeLayout& layout, int n) {
  const auto fields = layout.indices_where(ModeKind::Field);
  AmplitudeMap amps;
  for (auto& label : enumerate_basis(layout)) {
    int total = 0;
    int regs = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      (layout[i].kind == ModeKind::Field ? total : regs) += label[i];
    }
    if (total == n && regs == 0) amps.emplace(std::move(label), random_gaussian_amplitude(rng));
  }
  if (amps.empty() || fields.empty()) {
    throw CapacityError("layout cannot hold " + std::to_string(n) + " particles");
  }
  return PureState::normalized(layout, std::move(amps));
}

Eigen::MatrixXcd random_unitary(Rng& rng, int dim) {
  Eigen::MatrixXcd z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = random_gaussian_amplitude(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ModeLayout two_mode_layout(int s) {
  return ModeLayout({{"A", Site::A, ModeKind::Field, s}, {"B", Site::B, ModeKind::Field, s}});
}

PhysicalSample random_physical_two_mode(Rng& rng, int s, bool product) {
  if (s < 2) throw DomainError("truncation s must be >= 2");
  const double cut = s - std::sqrt(static_cast<double>(s));
  int rejected = 0;
  for (;;) {
    const auto [loa, hia] = window(rng, s);
    const auto [lob, hib] = window(rng, s);
    if (hia > cut || hib > cut) {
      ++rejected;
      continue;
    }
    AmplitudeMap amps;
    const auto u = profile(rng, loa, hia);
    const auto v = profile(rng, lob, hib);
    if (product) {
      for (int a = loa; a <= hia; ++a) {
        for (int b = lob; b <= hib; ++b) {
          amps.emplace(BasisLabel{a, b},
                       u[static_cast<std::size_t>(a - loa)] * v[static_cast<std::size_t>(b - lob)]);
        }
      }
    } else {
      const auto u2 = profile(rng, loa, hia);
      const auto v2 = profile(rng, lob, hib);
      const Amplitude w = random_gaussian_amplitude(rng);
      for (int a = loa; a <= hia; ++a) {
        for (int b = lob; b <= hib; ++b) {
          const auto i = static_cast<std::size_t>(a - loa);
          const auto j = static_cast<std::size_t>(b - lob);
          amps.emplace(BasisLabel{a, b}, u[i] * v[j] + w * u2[i] * v2[j]);
        }
      }
    }
    if (squared_norm(amps) == 0.0) {
      ++rejected;
      continue;
    }
    return {PureState::normalized(two_mode_layout(s), std::move(amps)), rejected};
  }
}

}  // namespace fockent
