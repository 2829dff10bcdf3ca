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

#include "fockent/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fockent/errors.hpp"

namespace fockent {

namespace {

constexpr double kNormTolerance = 1e-12;

void check_norm_preserved(const PureState& before, const AmplitudeMap& after, const char* what) {
  const double d = std::abs(squared_norm(after) - squared_norm(before.amplitudes()));
  if (d > kNormTolerance) {
    throw ValidationError(std::string(what) + " changed the norm by " + std::to_string(d));
  }
}

const ModeDescriptor& mode_of_kind(const ModeLayout& layout, const std::string& id,
                                   ModeKind kind) {
  const auto& m = layout[layout.index_of(id)];
  if (m.kind != kind) {
    throw LayoutError("mode '" + id + "' must be a " + to_string(kind) + " mode");
  }
  return m;
}

void require_field_only(const PureState& input) {
  for (const auto& m : input.layout()) {
    if (m.kind != ModeKind::Field) {
      throw LayoutError("protocol input may only contain field modes; '" + m.id + "' is a register");
    }
  }
}

// Registers for every input field mode, A site first, vacuum occupied.
PureState register_vacuum(const ModeLayout& input) {
  std::vector<ModeDescriptor> regs;
  for (Site site : {Site::A, Site::B}) {
    for (const auto& m : input) {
      if (m.site == site) regs.push_back({register_id(m.id), site, ModeKind::Register, m.capacity});
    }
  }
  ModeLayout layout(std::move(regs));
  const std::size_t n = layout.size();
  return PureState::basis_state(std::move(layout), BasisLabel(std::vector<int>(n, 0)));
}

std::vector<std::string> register_ids(const ModeLayout& layout) {
  std::vector<std::string> ids;
  for (const auto& m : layout) {
    if (m.kind == ModeKind::Register) ids.push_back(m.id);
  }
  return ids;
}

// CNOT onto the local register, then hide into the local sink, one field mode
// at a time in layout order.
PureState transfer_site(PureState state, const ModeLayout& input, Site site) {
  for (const auto& m : input) {
    if (m.site != site) continue;
    state = occupation_cnot(state, m.id, register_id(m.id));
    state = hiding_operation(state, register_id(m.id), m.id, sink_id(site));
  }
  return state;
}

int resolve_headroom(const ProtocolConfig& config) {
  const int n = config.input.max_field_particles();
  const int headroom = config.sink_headroom.value_or(n);
  if (headroom < 0) throw DomainError("sink headroom must be non-negative");
  return headroom;
}

int register_occupation(const ModeLayout& layout, const BasisLabel& label, Site site) {
  int n = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].kind == ModeKind::Register && layout[i].site == site) n += label[i];
  }
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// AncillaSpec

AncillaSpec::AncillaSpec(int M, std::vector<Amplitude> coefficients, int offset)
    : M_(M), offset_(offset), coefficients_(std::move(coefficients)) {
  if (M_ < 1) throw DomainError("ancilla truncation M must be at least 1");
  if (offset_ < 0 || offset_ > M_) throw DomainError("ancilla offset outside [0, M]");
  if (coefficients_.size() != static_cast<std::size_t>(M_ - offset_ + 1)) {
    throw DomainError("ancilla needs " + std::to_string(M_ - offset_ + 1) + " coefficients, got " +
                      std::to_string(coefficients_.size()));
  }
  double s = 0.0;
  for (const auto& c : coefficients_) s += std::norm(c);
  if (std::abs(s - 1.0) > 1e-10) {
    throw ValidationError("ancilla coefficients have sum |c_n|^2 = " + std::to_string(s));
  }
}

AncillaSpec AncillaSpec::from_coefficients(std::vector<Amplitude> coefficients) {
  const int M = static_cast<int>(coefficients.size()) - 1;
  return AncillaSpec(M, std::move(coefficients));
}

AncillaSpec AncillaSpec::number_state(int n, int M) {
  if (n < 0 || n > M) throw DomainError("number state outside [0, M]");
  std::vector<Amplitude> c(static_cast<std::size_t>(M) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  return AncillaSpec(M, std::move(c));
}

Amplitude AncillaSpec::coefficient(int n) const {
  if (n < offset_ || n > M_) return {};
  return coefficients_[static_cast<std::size_t>(n - offset_)];
}

double AncillaSpec::mean() const {
  double m = 0.0;
  for (int n = offset_; n <= M_; ++n) m += n * std::norm(coefficient(n));
  return m;
}

double AncillaSpec::variance() const {
  const double mu = mean();
  double v = 0.0;
  for (int n = offset_; n <= M_; ++n) v += (n - mu) * (n - mu) * std::norm(coefficient(n));
  return v;
}

// ---------------------------------------------------------------------------
// Ancilla states

std::string register_id(const std::string& field_id) { return "reg:" + field_id; }
std::string sink_id(Site site) { return "anc:" + to_string(site) + ":phase"; }
std::string reference_id(Site site) { return "anc:" + to_string(site) + ":ref"; }

PureState truncated_phase_state(int M, double theta, const std::string& mode_id, Site site) {
  if (M < 0) throw DomainError("truncated phase state needs M >= 0");
  ModeLayout layout({{mode_id, site, ModeKind::Field, M}});
  const double scale = 1.0 / std::sqrt(M + 1.0);
  AmplitudeMap amps;
  for (int n = 0; n <= M; ++n) {
    amps.emplace(BasisLabel{n}, scale * std::polar(1.0, -(M - n) * theta));
  }
  return PureState(std::move(layout), std::move(amps));
}

PureState phase_rotated_ancilla(const AncillaSpec& spec, double theta, const std::string& mode_id,
                                Site site) {
  ModeLayout layout({{mode_id, site, ModeKind::Field, spec.M()}});
  AmplitudeMap amps;
  for (int n = spec.offset(); n <= spec.M(); ++n) {
    amps.emplace(BasisLabel{n}, spec.coefficient(n) * std::polar(1.0, n * theta));
  }
  return PureState(std::move(layout), std::move(amps));
}

namespace {

std::vector<Amplitude> poisson_amplitudes(double nbar, int lo, int hi) {
  std::vector<Amplitude> c;
  c.reserve(static_cast<std::size_t>(hi - lo + 1));
  double s = 0.0;
  for (int n = lo; n <= hi; ++n) {
    double a = 0.0;
    if (nbar == 0.0) {
      a = n == 0 ? 1.0 : 0.0;
    } else {
      a = std::exp(0.5 * (n * std::log(nbar) - nbar - std::lgamma(n + 1.0)));
    }
    c.emplace_back(a, 0.0);
    s += a * a;
  }
  const double scale = 1.0 / std::sqrt(s);
  for (auto& x : c) x *= scale;
  return c;
}

}  // namespace

AncillaSpec coherent_coefficients(double nbar, int M) {
  if (!(nbar >= 0.0)) throw DomainError("coherent amplitude needs nbar >= 0");
  AncillaSpec spec(M, poisson_amplitudes(nbar, 0, M));
  if (M < nbar + 10.0 * std::sqrt(nbar)) {
    spec.set_warning("truncation M = " + std::to_string(M) + " is below nbar + 10 sqrt(nbar) = " +
                     std::to_string(nbar + 10.0 * std::sqrt(nbar)));
  }
  return spec;
}

AncillaSpec coherent_window(double nbar, double sigmas) {
  if (!(nbar >= 0.0)) throw DomainError("coherent amplitude needs nbar >= 0");
  const double width = sigmas * std::sqrt(nbar);
  const int lo = std::max(0, static_cast<int>(std::floor(nbar - width)));
  const int hi = std::max(lo + 1, static_cast<int>(std::ceil(nbar + width)));
  return AncillaSpec(hi, poisson_amplitudes(nbar, lo, hi), lo);
}

PureState two_mode_ancilla_state(const AncillaSpec& spec, Site site,
                                 std::optional<int> sink_capacity) {
  const int M = spec.M();
  const int cap = sink_capacity.value_or(M);
  if (cap < M) throw CapacityError("sink capacity below ancilla truncation M");
  ModeLayout layout({{sink_id(site), site, ModeKind::Field, cap},
                     {reference_id(site), site, ModeKind::Field, M}});
  AmplitudeMap amps;
  for (int n = spec.offset(); n <= M; ++n) amps.emplace(BasisLabel{M - n, n}, spec.coefficient(n));
  return PureState(std::move(layout), std::move(amps));
}

// ---------------------------------------------------------------------------
// Local operations

PureState occupation_cnot(const PureState& state, const std::string& control,
                          const std::string& target) {
  const auto& layout = state.layout();
  const auto& ctl = mode_of_kind(layout, control, ModeKind::Field);
  const auto& tgt = mode_of_kind(layout, target, ModeKind::Register);
  if (tgt.capacity < ctl.capacity) {
    throw CapacityError("register '" + target + "' (capacity " + std::to_string(tgt.capacity) +
                        ") cannot hold occupations of '" + control + "' (capacity " +
                        std::to_string(ctl.capacity) + ")");
  }
  const auto ci = layout.index_of(control);
  const auto ti = layout.index_of(target);
  const int modulus = tgt.capacity + 1;
  AmplitudeMap out;
  for (const auto& [label, amp] : state.amplitudes()) {
    BasisLabel next = label;
    next[ti] = (label[ti] + label[ci]) % modulus;
    out.emplace(std::move(next), amp);
  }
  check_norm_preserved(state, out, "occupation_cnot");
  return PureState(layout, std::move(out));
}

PureState hiding_operation(const PureState& state, const std::string& control,
                           const std::string& source, const std::string& sink) {
  const auto& layout = state.layout();
  mode_of_kind(layout, control, ModeKind::Register);
  mode_of_kind(layout, source, ModeKind::Field);
  const auto& snk = mode_of_kind(layout, sink, ModeKind::Field);
  const auto ci = layout.index_of(control);
  const auto si = layout.index_of(source);
  const auto ki = layout.index_of(sink);
  if (si == ki) throw LayoutError("hiding source and sink must differ");
  AmplitudeMap out;
  for (const auto& [label, amp] : state.amplitudes()) {
    BasisLabel next = label;
    if (label[ci] >= 1) {
      const int moved = label[ki] + label[si];
      if (moved > snk.capacity) {
        throw CapacityError("sink '" + sink + "' overflow: " + std::to_string(moved) +
                            " particles exceed capacity " + std::to_string(snk.capacity));
      }
      next[ki] = moved;
      next[si] = 0;
    }
    if (!out.emplace(std::move(next), amp).second) {
      throw ValidationError("hiding map is not injective on the supplied state");
    }
  }
  check_norm_preserved(state, out, "hiding_operation");
  return PureState(layout, std::move(out));
}

// ---------------------------------------------------------------------------
// Protocol

PureState transfer_protocol_state(const ProtocolConfig& config) {
  require_field_only(config.input);
  const int headroom = resolve_headroom(config);
  const ModeLayout& input = config.input.layout();

  PureState state = tensor_product(config.input, register_vacuum(input));
  state = tensor_product(state, two_mode_ancilla_state(config.ancilla_a, Site::A,
                                                       config.ancilla_a.M() + headroom));
  state = tensor_product(state, two_mode_ancilla_state(config.ancilla_b, Site::B,
                                                       config.ancilla_b.M() + headroom));
  state = transfer_site(std::move(state), input, Site::A);
  return transfer_site(std::move(state), input, Site::B);
}

DensityOperator run_transfer(const ProtocolConfig& config) {
  PureState state = transfer_protocol_state(config);
  return partial_trace(state, register_ids(state.layout()));
}

OverlapIntegral mode_overlap_integral(int k, const AncillaSpec& spec, double theta) {
  if (k < 0) throw DomainError("overlap integral needs k >= 0");
  if (k > spec.M()) return {Amplitude{}, true};
  double w = 0.0;
  for (int m = std::max(k, spec.offset()); m <= spec.M(); ++m) w += std::norm(spec.coefficient(m));
  return {w / (spec.M() + 1.0) * std::polar(1.0, k * theta), false};
}

namespace {

// G[n][n'] = (1/K) sum_j <S^{n'} psi(theta_j) | S^n psi(theta_j)>, where S^n
// is the hiding shift by n particles applied to the truncated phase state.
Eigen::MatrixXcd averaged_sink_overlaps(int M, int max_hidden, int K) {
  const int size = max_hidden + 1;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size, size);
  Eigen::VectorXcd psi(M + 1);
  for (int j = 0; j < K; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / K;
    for (int m = 0; m <= M; ++m) psi(m) = std::polar(1.0 / std::sqrt(M + 1.0), -(M - m) * theta);
    for (int n = 0; n < size; ++n) {
      for (int np = 0; np < size; ++np) {
        // <S^{np} psi | S^n psi> = sum_m conj(psi_{m+n-np}) psi_m
        Amplitude s{};
        for (int m = 0; m <= M; ++m) {
          const int mp = m + n - np;
          if (mp >= 0 && mp <= M) s += std::conj(psi(mp)) * psi(m);
        }
        g(n, np) += s;
      }
    }
  }
  return g / static_cast<double>(K);
}

}  // namespace

DensityOperator phase_grid_register_state(const ProtocolConfig& config, int K) {
  require_field_only(config.input);
  const int m_max = std::max(config.ancilla_a.M(), config.ancilla_b.M());
  if (K < 2 * m_max + 3) {
    throw DomainError("phase grid needs K >= 2M+3 = " + std::to_string(2 * m_max + 3));
  }
  const int headroom = resolve_headroom(config);
  const ModeLayout& input = config.input.layout();
  const int n_max = config.input.max_field_particles();

  // Run the local operations with counting sinks that start empty; at every
  // grid point the actual sink is the shifted truncated phase state, and the
  // reference modes factor out of each grid-point state.
  ModeLayout counters({{sink_id(Site::A), Site::A, ModeKind::Field, n_max},
                       {sink_id(Site::B), Site::B, ModeKind::Field, n_max}});
  PureState state = tensor_product(config.input, register_vacuum(input));
  state = tensor_product(state, PureState::basis_state(counters, BasisLabel{0, 0}));
  state = transfer_site(std::move(state), input, Site::A);
  state = transfer_site(std::move(state), input, Site::B);

  const auto& layout = state.layout();
  const auto ka = layout.index_of(sink_id(Site::A));
  const auto kb = layout.index_of(sink_id(Site::B));
  for (const auto& [label, amp] : state.amplitudes()) {
    if (label[ka] > headroom || label[kb] > headroom) {
      throw CapacityError("sink overflow: hidden particles exceed the sink headroom " +
                          std::to_string(headroom));
    }
  }

  const Eigen::MatrixXcd ga = averaged_sink_overlaps(config.ancilla_a.M(), n_max, K);
  const Eigen::MatrixXcd gb = averaged_sink_overlaps(config.ancilla_b.M(), n_max, K);

  const auto reg_idx = layout.indices_where(ModeKind::Register);
  ModeLayout reg_layout = layout.select(reg_idx);
  auto basis = enumerate_basis(reg_layout, 4096);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  // Group terms by the field modes other than the sinks; only equal groups overlap.
  struct Term {
    Eigen::Index reg;
    int na;
    int nb;
    Amplitude amp;
  };
  std::map<BasisLabel, std::vector<Term>> groups;
  for (const auto& [label, amp] : state.amplitudes()) {
    std::vector<int> env;
    std::vector<int> reg;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (layout[i].kind == ModeKind::Register) {
        reg.push_back(label[i]);
      } else if (i != ka && i != kb) {
        env.push_back(label[i]);
      }
    }
    groups[BasisLabel(std::move(env))].push_back(
        {static_cast<Eigen::Index>(basis_index(reg_layout, BasisLabel(std::move(reg)))), label[ka],
         label[kb], amp});
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [env, terms] : groups) {
    for (const auto& t : terms) {
      for (const auto& u : terms) {
        rho(t.reg, u.reg) += t.amp * std::conj(u.amp) * ga(t.na, u.na) * gb(t.nb, u.nb);
      }
    }
  }
  DensityOperator out(std::move(reg_layout), std::move(basis), std::move(rho));
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Register analysis

std::vector<SectorEntanglement> register_sector_entanglements(const DensityOperator& rho) {
  const auto& layout = rho.layout();
  std::map<int, std::vector<Eigen::Index>> blocks;
  for (std::size_t i = 0; i < rho.basis().size(); ++i) {
    blocks[register_occupation(layout, rho.basis()[i], Site::A)].push_back(
        static_cast<Eigen::Index>(i));
  }
  std::vector<SectorEntanglement> out;
  for (const auto& [n, idx] : blocks) {
    const auto size = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd block(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = 0; c < size; ++c) block(r, c) = rho.matrix()(idx[r], idx[c]);
    }
    const double w = block.trace().real();
    if (w < 1e-14) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block / w);
    const Eigen::Index top = size - 1;
    if (1.0 - es.eigenvalues()(top) > 1e-9) {
      throw DomainError("register sector n = " + std::to_string(n) +
                        " is mixed; sector entanglement needs pure blocks");
    }
    AmplitudeMap amps;
    for (Eigen::Index r = 0; r < size; ++r) {
      amps.emplace(rho.basis()[static_cast<std::size_t>(idx[r])], es.eigenvectors()(r, top));
    }
    out.push_back({n, w, entropy_of_entanglement(PureState::normalized(layout, std::move(amps)))});
  }
  return out;
}

double register_sector_entanglement(const DensityOperator& rho) {
  double e = 0.0;
  for (const auto& s : register_sector_entanglements(rho)) e += s.probability * s.entanglement;
  return e;
}

std::vector<MeasurementOutcome> equal_different_measurement(const DensityOperator& rho) {
  const auto& layout = rho.layout();
  std::vector<std::size_t> regs_a;
  std::vector<std::size_t> regs_b;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& m = layout[i];
    if (m.kind != ModeKind::Register || m.capacity != 1) {
      throw LayoutError("equal/different measurement needs binary register modes only");
    }
    (m.site == Site::A ? regs_a : regs_b).push_back(i);
  }
  if (regs_a.size() != 2 || regs_b.size() != 2) {
    throw LayoutError("equal/different measurement needs two registers per site");
  }

  std::vector<MeasurementOutcome> out;
  for (bool eq_a : {true, false}) {
    for (bool eq_b : {true, false}) {
      Eigen::MatrixXcd m = rho.matrix();
      for (std::size_t i = 0; i < rho.basis().size(); ++i) {
        const auto& l = rho.basis()[i];
        const bool keep = ((l[regs_a[0]] == l[regs_a[1]]) == eq_a) &&
                          ((l[regs_b[0]] == l[regs_b[1]]) == eq_b);
        if (!keep) {
          m.row(static_cast<Eigen::Index>(i)).setZero();
          m.col(static_cast<Eigen::Index>(i)).setZero();
        }
      }
      const double p = m.trace().real();
      if (p < 1e-14) continue;
      DensityOperator cond(layout, rho.basis(), m / p);
      cond.validate();
      const double e = register_sector_entanglement(cond);
      std::string label = std::string(eq_a ? "equal" : "different") + "/" +
                          (eq_b ? "equal" : "different");
      out.push_back({std::move(label), p, std::move(cond), e});
    }
  }
  return out;
}

DensityOperator reference_phase_shift(const DensityOperator& rho, double theta, double phi) {
  const auto& layout = rho.layout();
  const auto dim = static_cast<Eigen::Index>(rho.dimension());
  Eigen::VectorXcd phase(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& l = rho.basis()[static_cast<std::size_t>(i)];
    phase(i) = std::polar(1.0, theta * register_occupation(layout, l, Site::A) +
                                   phi * register_occupation(layout, l, Site::B));
  }
  Eigen::MatrixXcd m = phase.asDiagonal() * rho.matrix() * phase.conjugate().asDiagonal();
  DensityOperator out(layout, rho.basis(), std::move(m));
  out.validate();
  return out;
}

}  // namespace fockent
