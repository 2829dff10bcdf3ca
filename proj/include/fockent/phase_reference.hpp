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

#include "fockent/fock.hpp"
#include "fockent/transfer.hpp"

namespace fockent {

/// Phase probability density sampled on theta_j = 2 pi j / K, j = 0..K-1.
struct PhaseDistribution {
  int K = 0;
  std::vector<double> values;
  /// moments[k] = integral P(theta) e^{ik theta} d theta by grid quadrature,
  /// k = 0..bandwidth. For a canonical distribution this is sum_n c*_n c_{n+k}.
  std::vector<Amplitude> moments;

  double angle(int j) const;
  /// Grid quadrature of the density.
  double total() const;
};

/// Grid size used for phase quadrature of a spec: max(2 * bandwidth + 3, 257).
int default_phase_grid(const AncillaSpec& spec);

/// P(theta) = |sum_n c_n e^{-in theta}|^2 / 2 pi. Needs K >= 2 * bandwidth + 3.
PhaseDistribution canonical_phase_distribution(const AncillaSpec& spec, int K);

/// Distribution of the phase-difference variable D = phi - theta under the
/// kernel P_varphi(theta, phi) = int P_A(theta - t) P_B(phi - varphi - t) dt / 2 pi,
/// i.e. Q(D) = int P_A(a) P_B(a + D - varphi) da, evaluated by circular correlation.
PhaseDistribution resolution_kernel(const PhaseDistribution& pa, const PhaseDistribution& pb,
                                    double varphi);

/// Circular second moment about the mean direction, on (-pi, pi].
double phase_variance(const PhaseDistribution& pd);

/// sum_n c*_n c_{n+1}.
Amplitude first_phase_moment(const AncillaSpec& spec);

/// C = double integral of P_varphi(theta, phi) e^{i(phi - theta)}, by quadrature
/// of the resolution kernel on the default grid of the wider spec.
Amplitude visibility(const AncillaSpec& spec_a, const AncillaSpec& spec_b, double varphi = 0.0);
Amplitude visibility_on_grid(const AncillaSpec& spec_a, const AncillaSpec& spec_b, double varphi,
                             int K);

/// Closed form e^{i varphi} conj(m_A) m_B with m_Z the first phase moment.
Amplitude visibility_from_moments(const AncillaSpec& spec_a, const AncillaSpec& spec_b,
                                  double varphi = 0.0);

/// Registers "reg:A", "reg:B": 1/2 (|10><10| + C|10><01| + C*|01><10| + |01><01|).
DensityOperator post_measurement_register_state(Amplitude C);

struct PovmResult {
  double density = 0;       ///< probability density of the outcome varphi
  DensityOperator state;    ///< conditional register state
};

/// Applies the ideal phase-difference POVM element Pi(varphi) on the two
/// reference modes of `joint`; everything but the register modes is traced out.
PovmResult apply_phase_difference_povm(const PureState& joint, double varphi,
                                       const std::string& mode_a = reference_id(Site::A),
                                       const std::string& mode_b = reference_id(Site::B));

/// Dense Pi(varphi) on a truncated (cap_a+1)(cap_b+1) space, mode A most significant.
Eigen::MatrixXcd phase_difference_povm_matrix(int cap_a, int cap_b, double varphi);

/// Binary entropy of p = (1 + sqrt(1 - |C|^2)) / 2.
double entanglement_of_formation_x(Amplitude C);

/// Two-qubit concurrence of a 4x4 operator on binary registers.
double concurrence(const DensityOperator& rho);

/// Entanglement of formation from the concurrence.
double concurrence_ef_oracle(const DensityOperator& rho);

/// e^{-1/(4 ntr)}.
double coherent_visibility_model(double ntr);

/// 1 - 1/(4 var ln 2).
double ef_upper_bound(double var_tr);

struct VisibilityReport {
  Amplitude C;
  double varphi = 0;
  double visibility2 = 0;
  double ef = 0;
  double ef_oracle = 0;
  double bound = 0;
  double model_visibility2 = 0;
  double transported_mean = 0;
  double transported_variance = 0;
  int grid = 0;
};

/// Transported coherent ancilla with mean ntr against a local one with mean
/// local_scale * ntr; both stored as coherent windows.
VisibilityReport coherent_visibility_report(double ntr, double local_scale = 10.0,
                                            int min_grid = 0, double varphi = 0.0);

}  // namespace fockent
