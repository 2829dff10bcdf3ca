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

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fockent {

using Amplitude = std::complex<double>;

enum class Site { A, B };
enum class ModeKind { Field, Register };

std::string to_string(Site site);
std::string to_string(ModeKind kind);

/// Amplitudes smaller than this are not stored.
inline constexpr double kDropThreshold = 1e-15;
/// Eigenvalues below this are treated as zero in entropy sums.
inline constexpr double kEigenClip = 1e-12;

struct ModeDescriptor {
  std::string id;
  Site site = Site::A;
  ModeKind kind = ModeKind::Field;
  int capacity = 0;

  bool operator==(const ModeDescriptor&) const = default;
};

/// Ordered list of modes. The order fixes the position of each occupation
/// in a BasisLabel and the lexicographic enumeration order of the basis.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<ModeDescriptor> modes);

  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  const ModeDescriptor& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<ModeDescriptor>& modes() const { return modes_; }
  auto begin() const { return modes_.begin(); }
  auto end() const { return modes_.end(); }

  std::optional<std::size_t> find(const std::string& id) const;
  /// Index of `id`; throws LayoutError when absent.
  std::size_t index_of(const std::string& id) const;

  bool has_site(Site site) const;
  std::vector<std::size_t> indices_where(Site site) const;
  std::vector<std::size_t> indices_where(ModeKind kind) const;

  ModeLayout select(std::span<const std::size_t> indices) const;

  /// Concatenation; throws LayoutError on a duplicate id.
  static ModeLayout concat(const ModeLayout& a, const ModeLayout& b);

  /// Number of basis states, prod(capacity + 1). Throws LayoutError above `limit`.
  std::size_t dimension(std::size_t limit = std::size_t{1} << 20) const;

  bool operator==(const ModeLayout&) const = default;

 private:
  std::vector<ModeDescriptor> modes_;
};

/// Occupation-number vector aligned with a ModeLayout.
struct BasisLabel {
  std::vector<int> occupations;

  BasisLabel() = default;
  BasisLabel(std::initializer_list<int> occ) : occupations(occ) {}
  explicit BasisLabel(std::vector<int> occ) : occupations(std::move(occ)) {}

  std::size_t size() const { return occupations.size(); }
  int operator[](std::size_t i) const { return occupations[i]; }
  int& operator[](std::size_t i) { return occupations[i]; }
  int total() const;

  auto operator<=>(const BasisLabel&) const = default;
  bool operator==(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& label);

/// All labels of `layout` in lexicographic order.
std::vector<BasisLabel> enumerate_basis(const ModeLayout& layout,
                                        std::size_t limit = std::size_t{1} << 16);

/// Position of `label` in enumerate_basis(layout) (mixed radix, first mode most significant).
std::size_t basis_index(const ModeLayout& layout, const BasisLabel& label);

using AmplitudeMap = std::map<BasisLabel, Amplitude>;

/// Sparse normalized pure state over an occupation basis.
class PureState {
 public:
  /// Validates labels against the layout, drops entries below kDropThreshold
  /// and requires unit norm within 1e-10.
  PureState(ModeLayout layout, AmplitudeMap amplitudes);

  /// Same as the constructor but rescales to unit norm first.
  static PureState normalized(ModeLayout layout, AmplitudeMap amplitudes);
  static PureState basis_state(ModeLayout layout, BasisLabel label);

  const ModeLayout& layout() const { return layout_; }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }
  Amplitude amplitude(const BasisLabel& label) const;
  std::size_t size() const { return amplitudes_.size(); }
  double norm() const;
  /// Largest total occupation over field modes in any stored label.
  int max_field_particles() const;

 private:
  struct Unchecked {};
  PureState(Unchecked, ModeLayout layout, AmplitudeMap amplitudes);

  ModeLayout layout_;
  AmplitudeMap amplitudes_;
};

double squared_norm(const AmplitudeMap& amplitudes);

/// Density operator on an explicit ordered basis of a layout.
class DensityOperator {
 public:
  DensityOperator(ModeLayout layout, std::vector<BasisLabel> basis, Eigen::MatrixXcd matrix);

  const ModeLayout& layout() const { return layout_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::size_t dimension() const { return basis_.size(); }

  std::optional<std::size_t> index_of(const BasisLabel& label) const;
  Amplitude element(const BasisLabel& row, const BasisLabel& col) const;

  /// Throws ValidationError unless Hermitian (1e-12), PSD (-1e-10) and unit trace (1e-10).
  void validate() const;
  bool same_basis(const DensityOperator& other) const;

 private:
  ModeLayout layout_;
  std::vector<BasisLabel> basis_;
  Eigen::MatrixXcd matrix_;
};

/// |psi><psi| on the full enumerated basis of the state's layout.
DensityOperator projector(const PureState& state);

/// Sum of weighted projectors; all states must share one layout.
DensityOperator mixture(const std::vector<std::pair<double, PureState>>& terms);

PureState tensor_product(const PureState& a, const PureState& b);

/// Reduced operator over the modes in `keep`, on the full lexicographic basis
/// of the kept modes (kept modes stay in layout order).
DensityOperator partial_trace(const PureState& state, const std::vector<std::string>& keep);

/// Binary von Neumann entropy in bits.
double von_neumann_entropy(const DensityOperator& rho);

/// Entropy in bits of an explicit spectrum, with kEigenClip clipping.
double entropy_bits(const Eigen::VectorXd& eigenvalues);

/// Entropy of the A-site reduction (all A modes, field and register).
double entropy_of_entanglement(const PureState& state);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace fockent
