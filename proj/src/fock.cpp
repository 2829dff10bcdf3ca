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

#include "fockent/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "fockent/errors.hpp"

namespace fockent {

std::string to_string(Site site) { return site == Site::A ? "A" : "B"; }

std::string to_string(ModeKind kind) { return kind == ModeKind::Field ? "field" : "register"; }

// ---------------------------------------------------------------------------
// ModeLayout

ModeLayout::ModeLayout(std::vector<ModeDescriptor> modes) : modes_(std::move(modes)) {
  std::set<std::string> seen;
  for (const auto& m : modes_) {
    if (m.capacity < 0) {
      throw LayoutError("mode '" + m.id + "' has negative capacity");
    }
    if (!seen.insert(m.id).second) {
      throw LayoutError("duplicate mode id '" + m.id + "'");
    }
  }
}

std::optional<std::size_t> ModeLayout::find(const std::string& id) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t ModeLayout::index_of(const std::string& id) const {
  if (auto i = find(id)) return *i;
  throw LayoutError("unknown mode id '" + id + "'");
}

bool ModeLayout::has_site(Site site) const {
  return std::any_of(modes_.begin(), modes_.end(), [&](const auto& m) { return m.site == site; });
}

std::vector<std::size_t> ModeLayout::indices_where(Site site) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].site == site) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ModeLayout::indices_where(ModeKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].kind == kind) out.push_back(i);
  }
  return out;
}

ModeLayout ModeLayout::select(std::span<const std::size_t> indices) const {
  std::vector<ModeDescriptor> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(modes_.at(i));
  return ModeLayout(std::move(out));
}

ModeLayout ModeLayout::concat(const ModeLayout& a, const ModeLayout& b) {
  std::vector<ModeDescriptor> out = a.modes_;
  out.insert(out.end(), b.modes_.begin(), b.modes_.end());
  return ModeLayout(std::move(out));
}

std::size_t ModeLayout::dimension(std::size_t limit) const {
  std::size_t dim = 1;
  for (const auto& m : modes_) {
    const auto radix = static_cast<std::size_t>(m.capacity) + 1;
    if (dim > limit / radix) {
      throw LayoutError("basis dimension exceeds limit " + std::to_string(limit));
    }
    dim *= radix;
  }
  return dim;
}

// ---------------------------------------------------------------------------
// BasisLabel

int BasisLabel::total() const {
  int t = 0;
  for (int o : occupations) t += o;
  return t;
}

std::string to_string(const BasisLabel& label) {
  std::ostringstream os;
  os << '|';
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) os << ',';
    os << label[i];
  }
  os << '>';
  return os.str();
}

std::vector<BasisLabel> enumerate_basis(const ModeLayout& layout, std::size_t limit) {
  const std::size_t dim = layout.dimension(limit);
  std::vector<BasisLabel> out;
  out.reserve(dim);
  BasisLabel cur(std::vector<int>(layout.size(), 0));
  for (std::size_t k = 0; k < dim; ++k) {
    out.push_back(cur);
    for (std::size_t i = layout.size(); i-- > 0;) {
      if (cur[i] < layout[i].capacity) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
    }
  }
  return out;
}

std::size_t basis_index(const ModeLayout& layout, const BasisLabel& label) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    idx = idx * (static_cast<std::size_t>(layout[i].capacity) + 1) +
          static_cast<std::size_t>(label[i]);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// PureState

double squared_norm(const AmplitudeMap& amplitudes) {
  double s = 0.0;
  for (const auto& [label, amp] : amplitudes) s += std::norm(amp);
  return s;
}

namespace {

void check_label(const ModeLayout& layout, const BasisLabel& label) {
  if (label.size() != layout.size()) {
    throw LayoutError("label " + to_string(label) + " has " + std::to_string(label.size()) +
                      " entries, layout has " + std::to_string(layout.size()) + " modes");
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (label[i] < 0 || label[i] > layout[i].capacity) {
      throw CapacityError("occupation " + std::to_string(label[i]) + " of mode '" + layout[i].id +
                          "' outside [0, " + std::to_string(layout[i].capacity) + "]");
    }
  }
}

AmplitudeMap pruned(AmplitudeMap amplitudes) {
  std::erase_if(amplitudes, [](const auto& kv) { return std::abs(kv.second) < kDropThreshold; });
  return amplitudes;
}

}  // namespace

PureState::PureState(Unchecked, ModeLayout layout, AmplitudeMap amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {}

PureState::PureState(ModeLayout layout, AmplitudeMap amplitudes)
    : layout_(std::move(layout)), amplitudes_(pruned(std::move(amplitudes))) {
  for (const auto& [label, amp] : amplitudes_) check_label(layout_, label);
  const double n2 = squared_norm(amplitudes_);
  if (std::abs(n2 - 1.0) > 1e-10) {
    throw ValidationError("state norm^2 = " + std::to_string(n2) + ", expected 1");
  }
}

PureState PureState::normalized(ModeLayout layout, AmplitudeMap amplitudes) {
  const double n = std::sqrt(squared_norm(amplitudes));
  if (n == 0.0) throw ValidationError("cannot normalize a zero vector");
  for (auto& [label, amp] : amplitudes) amp /= n;
  return PureState(std::move(layout), std::move(amplitudes));
}

PureState PureState::basis_state(ModeLayout layout, BasisLabel label) {
  AmplitudeMap amps;
  amps.emplace(std::move(label), 1.0);
  return PureState(std::move(layout), std::move(amps));
}

Amplitude PureState::amplitude(const BasisLabel& label) const {
  auto it = amplitudes_.find(label);
  return it == amplitudes_.end() ? Amplitude{} : it->second;
}

double PureState::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

int PureState::max_field_particles() const {
  const auto fields = layout_.indices_where(ModeKind::Field);
  int best = 0;
  for (const auto& [label, amp] : amplitudes_) {
    int n = 0;
    for (auto i : fields) n += label[i];
    best = std::max(best, n);
  }
  return best;
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(ModeLayout layout, std::vector<BasisLabel> basis,
                                 Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != static_cast<Eigen::Index>(basis_.size()) ||
      matrix_.cols() != static_cast<Eigen::Index>(basis_.size())) {
    throw LayoutError("density matrix shape does not match its basis");
  }
}

std::optional<std::size_t> DensityOperator::index_of(const BasisLabel& label) const {
  auto it = std::lower_bound(basis_.begin(), basis_.end(), label);
  if (it != basis_.end() && *it == label) return static_cast<std::size_t>(it - basis_.begin());
  // Bases are normally sorted; fall back to a scan otherwise.
  auto jt = std::find(basis_.begin(), basis_.end(), label);
  if (jt == basis_.end()) return std::nullopt;
  return static_cast<std::size_t>(jt - basis_.begin());
}

Amplitude DensityOperator::element(const BasisLabel& row, const BasisLabel& col) const {
  auto r = index_of(row);
  auto c = index_of(col);
  if (!r || !c) return {};
  return matrix_(static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(*c));
}

void DensityOperator::validate() const {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw ValidationError("density operator not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw ValidationError("density operator trace = " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ValidationError("density operator has negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

bool DensityOperator::same_basis(const DensityOperator& other) const {
  if (basis_ != other.basis_ || layout_.size() != other.layout_.size()) return false;
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].id != other.layout_[i].id) return false;
  }
  return true;
}

DensityOperator projector(const PureState& state) {
  auto basis = enumerate_basis(state.layout());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [label, amp] : state.amplitudes()) {
    v(static_cast<Eigen::Index>(basis_index(state.layout(), label))) = amp;
  }
  DensityOperator rho(state.layout(), std::move(basis), v * v.adjoint());
  rho.validate();
  return rho;
}

DensityOperator mixture(const std::vector<std::pair<double, PureState>>& terms) {
  if (terms.empty()) throw DomainError("mixture of zero terms");
  const ModeLayout& layout = terms.front().second.layout();
  auto basis = enumerate_basis(layout);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, state] : terms) {
    if (!(state.layout() == layout)) throw LayoutError("mixture terms use different layouts");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (const auto& [label, amp] : state.amplitudes()) {
      v(static_cast<Eigen::Index>(basis_index(layout, label))) = amp;
    }
    m += w * (v * v.adjoint());
  }
  DensityOperator rho(layout, std::move(basis), std::move(m));
  rho.validate();
  return rho;
}

// ---------------------------------------------------------------------------
// Operations

PureState tensor_product(const PureState& a, const PureState& b) {
  ModeLayout layout = ModeLayout::concat(a.layout(), b.layout());
  AmplitudeMap amps;
  for (const auto& [la, xa] : a.amplitudes()) {
    for (const auto& [lb, xb] : b.amplitudes()) {
      std::vector<int> occ = la.occupations;
      occ.insert(occ.end(), lb.occupations.begin(), lb.occupations.end());
      amps.emplace_hint(amps.end(), BasisLabel(std::move(occ)), xa * xb);
    }
  }
  return PureState(std::move(layout), std::move(amps));
}

namespace {

struct Split {
  std::vector<std::size_t> keep;
  std::vector<std::size_t> trace;
};

Split split_modes(const ModeLayout& layout, const std::vector<std::size_t>& keep_idx) {
  Split s;
  std::vector<bool> kept(layout.size(), false);
  for (auto i : keep_idx) kept[i] = true;
  for (std::size_t i = 0; i < layout.size(); ++i) (kept[i] ? s.keep : s.trace).push_back(i);
  return s;
}

BasisLabel project_label(const BasisLabel& label, const std::vector<std::size_t>& idx) {
  std::vector<int> occ;
  occ.reserve(idx.size());
  for (auto i : idx) occ.push_back(label[i]);
  return BasisLabel(std::move(occ));
}

// Accumulates sum_env |v_env><v_env| where v_env collects the amplitudes that
// share a traced-out label. `index` maps a kept label to its row.
template <typename IndexFn>
Eigen::MatrixXcd reduce(const PureState& state, const Split& split, Eigen::Index dim,
                        IndexFn&& index) {
  std::map<BasisLabel, std::vector<std::pair<Eigen::Index, Amplitude>>> groups;
  for (const auto& [label, amp] : state.amplitudes()) {
    groups[project_label(label, split.trace)].emplace_back(
        index(project_label(label, split.keep)), amp);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [env, entries] : groups) {
    for (const auto& [r, ar] : entries) {
      for (const auto& [c, ac] : entries) m(r, c) += ar * std::conj(ac);
    }
  }
  return m;
}

// Reduced operator restricted to the support of the kept marginal; only its
// spectrum is used.
Eigen::MatrixXcd reduced_on_support(const PureState& state, const std::vector<std::size_t>& keep) {
  const Split split = split_modes(state.layout(), keep);
  std::map<BasisLabel, Eigen::Index> support;
  for (const auto& [label, amp] : state.amplitudes()) {
    support.emplace(project_label(label, split.keep), 0);
  }
  Eigen::Index k = 0;
  for (auto& [label, idx] : support) idx = k++;
  return reduce(state, split, k, [&](const BasisLabel& l) { return support.at(l); });
}

}  // namespace

DensityOperator partial_trace(const PureState& state, const std::vector<std::string>& keep) {
  std::vector<std::size_t> keep_idx;
  for (const auto& id : keep) keep_idx.push_back(state.layout().index_of(id));
  std::sort(keep_idx.begin(), keep_idx.end());
  keep_idx.erase(std::unique(keep_idx.begin(), keep_idx.end()), keep_idx.end());

  const Split split = split_modes(state.layout(), keep_idx);
  ModeLayout kept = state.layout().select(split.keep);
  auto basis = enumerate_basis(kept, 4096);
  Eigen::MatrixXcd m =
      reduce(state, split, static_cast<Eigen::Index>(basis.size()), [&](const BasisLabel& l) {
        return static_cast<Eigen::Index>(basis_index(kept, l));
      });
  DensityOperator rho(std::move(kept), std::move(basis), std::move(m));
  rho.validate();
  return rho;
}

double entropy_bits(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > kEigenClip) s -= l * std::log2(l);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityOperator& rho) {
  const auto& m = rho.matrix();
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    throw ValidationError("entropy of a non-Hermitian operator (deviation " +
                          std::to_string(herm) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues());
}

double entropy_of_entanglement(const PureState& state) {
  const auto& layout = state.layout();
  if (!layout.has_site(Site::A) || !layout.has_site(Site::B)) {
    throw LayoutError("entropy of entanglement needs modes at both sites");
  }
  Eigen::MatrixXcd rho = reduced_on_support(state, layout.indices_where(Site::A));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues());
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (!rho.same_basis(sigma)) throw LayoutError("trace distance between different bases");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix() - sigma.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace fockent
