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

#include <optional>
#include <string>
#include <vector>

#include "fockent/fock.hpp"
#include "fockent/sector.hpp"

namespace fockent {

/// Ancilla amplitudes c_n on occupations [offset, M]; c_n = 0 below offset.
/// offset = 0 is the ordinary c_0..c_M layout. A nonzero offset lets large
/// coherent amplitudes be stored as a window around their mean.
class AncillaSpec {
 public:
  AncillaSpec(int M, std::vector<Amplitude> coefficients, int offset = 0);

  /// c_0..c_{size-1}, M = size - 1.
  static AncillaSpec from_coefficients(std::vector<Amplitude> coefficients);
  static AncillaSpec number_state(int n, int M);

  int M() const { return M_; }
  int offset() const { return offset_; }
  /// Highest minus lowest stored occupation.
  int bandwidth() const { return M_ - offset_; }
  const std::vector<Amplitude>& coefficients() const { return coefficients_; }
  Amplitude coefficient(int n) const;
  double mean() const;
  double variance() const;

  /// Set when a constructor had to truncate a noticeable tail.
  const std::optional<std::string>& warning() const { return warning_; }
  void set_warning(std::string w) { warning_ = std::move(w); }

 private:
  int M_;
  int offset_;
  std::vector<Amplitude> coefficients_;
  std::optional<std::string> warning_;
};

struct ProtocolConfig {
  PureState input;  ///< field modes only
  AncillaSpec ancilla_a;
  AncillaSpec ancilla_b;
  /// Sink capacity is M + headroom; unset means the input particle number N.
  std::optional<int> sink_headroom;
};

/// Mode ids generated by the protocol.
std::string register_id(const std::string& field_id);
std::string sink_id(Site site);       ///< truncated-phase mode that receives hidden particles
std::string reference_id(Site site);  ///< mode holding c_n, untouched by the protocol

/// sum_n e^{-i(M-n)theta}/sqrt(M+1) |n>, on a single mode of capacity M.
PureState truncated_phase_state(int M, double theta, const std::string& mode_id = "psi",
                                Site site = Site::A);

/// sum_n c_n e^{i n theta} |n>, on a single mode of capacity M.
PureState phase_rotated_ancilla(const AncillaSpec& spec, double theta,
                                const std::string& mode_id = "c", Site site = Site::A);

/// Truncated Poisson amplitudes c_n ~ (nbar^n e^{-nbar}/n!)^{1/2}, renormalized.
/// Sets a warning when M < nbar + 10 sqrt(nbar).
AncillaSpec coherent_coefficients(double nbar, int M);

/// Coherent amplitudes restricted to nbar +- sigmas*sqrt(nbar) (offset window).
AncillaSpec coherent_window(double nbar, double sigmas = 10.0);

/// sum_n c_n |M-n>_sink |n>_ref at `site`. The sink capacity defaults to M.
PureState two_mode_ancilla_state(const AncillaSpec& spec, Site site = Site::A,
                                 std::optional<int> sink_capacity = std::nullopt);

/// |u>_control |r>_target -> |u>_control |(r+u) mod (cap+1)>_target.
PureState occupation_cnot(const PureState& state, const std::string& control,
                          const std::string& target);

/// Register-controlled hiding: control = 0 leaves the term alone, control >= 1
/// maps |x>_sink |y>_source -> |x+y>_sink |0>_source.
PureState hiding_operation(const PureState& state, const std::string& control,
                           const std::string& source, const std::string& sink);

/// Joint pure state after the full protocol (fields, ancillas and registers).
PureState transfer_protocol_state(const ProtocolConfig& config);

/// Register state left by the protocol once all field modes are traced out.
DensityOperator run_transfer(const ProtocolConfig& config);

struct OverlapIntegral {
  Amplitude value;
  bool out_of_range = false;  ///< k > M; value is zero
};

/// sum_{m=k}^{M} |c_m|^2/(M+1) e^{ik theta}.
OverlapIntegral mode_overlap_integral(int k, const AncillaSpec& spec, double theta);

/// Register state from averaging the per-(theta, phi) protocol output over a
/// uniform K x K phase grid. Every grid point uses the truncated phase states
/// |psi(theta)>, |psi(phi)> as sinks and keeps the overflow components that the
/// hiding step pushes above occupation M.
DensityOperator phase_grid_register_state(const ProtocolConfig& config, int K);

/// Sector table of a register operator, grouped by total A-register occupation.
/// Each block must be pure (rank one).
std::vector<SectorEntanglement> register_sector_entanglements(const DensityOperator& rho);
double register_sector_entanglement(const DensityOperator& rho);

struct MeasurementOutcome {
  std::string label;  ///< "equal/equal", "equal/different", ...
  double probability = 0;
  DensityOperator state;
  double entanglement = 0;
};

/// Local equal/different projection on two binary registers per site.
std::vector<MeasurementOutcome> equal_different_measurement(const DensityOperator& rho);

/// Conjugation by exp(i theta N_A,reg) exp(i phi N_B,reg).
DensityOperator reference_phase_shift(const DensityOperator& rho, double theta, double phi);

}  // namespace fockent
