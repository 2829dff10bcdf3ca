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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fockent/fock.hpp"

namespace fockent {

/// Truncated single-mode space |0>..|s> with Pegg-Barnett phase states
/// theta_m = theta0 + 2 pi m / (s + 1).
struct PhaseOperatorSpace {
  int s = 256;
  double theta0 = 0.0;

  int dimension() const { return s + 1; }
  double phase(int m) const;
  /// |theta_m> = (s+1)^{-1/2} sum_n e^{i n theta_m} |n>.
  Eigen::VectorXcd phase_state(int m) const;
  Eigen::MatrixXcd number_operator() const;
};

/// sum_m e^{i theta_m} |theta_m><theta_m|, built from the phase-state projectors.
Eigen::MatrixXcd pegg_barnett_exponential(int s, double theta0 = 0.0);

struct PhaseDifferenceTrig {
  Eigen::MatrixXcd cos;
  Eigen::MatrixXcd sin;
};

/// cos and sin of phi_A - phi_B on the (s+1)^2 product space, mode A most significant.
/// Dense; meant for small s.
PhaseDifferenceTrig phase_difference_trig(const PhaseOperatorSpace& space);

/// `lhs >= rhs` is the inequality being tested; slack = lhs - rhs.
struct Inequality {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
};

struct UncertaintyReport {
  int s = 0;
  double mean_na = 0;
  double mean_nb = 0;
  double var_na = 0;
  double var_nb = 0;
  double var_diff = 0;
  double mean_cos = 0;
  double mean_sin = 0;
  double var_cos = 0;
  double var_sin = 0;
  /// |<e^{i(phi_A - phi_B)}>|^2
  double c2 = 0;
  double tail_mass_a = 0;
  double tail_mass_b = 0;
  bool product = false;
  std::vector<Inequality> inequalities;
  std::vector<std::string> diagnostics;

  const Inequality* find(const std::string& name) const;
  double min_slack() const;
  int violations(double tolerance = 1e-9) const;
};

struct UncertaintyOptions {
  int s = 256;
  double theta0 = 0.0;
};

/// Probability weight on occupations above s - sqrt(s), per mode.
std::pair<double, double> tail_masses(const PureState& state, int s);

/// (dcos), (dsin) for N_A - N_B and the single-site (dcos2), (dsin2) for each site.
/// The state must have one field mode per site; throws NonPhysicalStateError
/// when either tail mass reaches 1e-10.
UncertaintyReport robertson_checks(const PureState& state, const UncertaintyOptions& opts = {});

/// (C1) on product states, (C2) for each site. (C1) is skipped with a
/// diagnostic on correlated input.
UncertaintyReport visibility_bound_check(const PureState& state,
                                         const UncertaintyOptions& opts = {});

/// varB >= 3 varA, with A the transported mode.
bool optimum_condition(double var_a, double var_b);

/// <[N_A, cos(phi_A - phi_B)]>, computed exactly on the truncated space.
Amplitude number_cos_commutator(const PureState& state, const UncertaintyOptions& opts = {});

/// Product of two coherent windows on field modes "A" and "B" of capacity s.
PureState coherent_pair(double nbar_a, double nbar_b, int s);

}  // namespace fockent
