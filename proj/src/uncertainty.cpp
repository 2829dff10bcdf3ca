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

#include "fockent/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "fockent/errors.hpp"
#include "fockent/transfer.hpp"

namespace fockent {

namespace {

constexpr double kPhysicalTail = 1e-10;

struct TwoMode {
  int s = 0;
  Amplitude wrap;  // e^{i(s+1) theta0}
  Eigen::MatrixXcd x;  // rows: A occupation, columns: B occupation
};

std::pair<std::size_t, std::size_t> site_modes(const ModeLayout& layout) {
  const auto a = layout.indices_where(Site::A);
  const auto b = layout.indices_where(Site::B);
  if (layout.size() != 2 || a.size() != 1 || b.size() != 1 ||
      layout[a[0]].kind != ModeKind::Field || layout[b[0]].kind != ModeKind::Field) {
    throw LayoutError("phase-operator checks need exactly one field mode per site");
  }
  return {a[0], b[0]};
}

TwoMode load(const PureState& state, const UncertaintyOptions& opts) {
  if (opts.s < 1) throw DomainError("truncation s must be >= 1");
  const auto [ta, tb] = tail_masses(state, opts.s);
  if (ta >= kPhysicalTail || tb >= kPhysicalTail) {
    throw NonPhysicalStateError("state has weight near the truncation boundary (tail mass A " +
                                    std::to_string(ta) + ", B " + std::to_string(tb) + ")",
                                std::max(ta, tb));
  }
  const auto [ia, ib] = site_modes(state.layout());
  TwoMode t;
  t.s = opts.s;
  t.wrap = std::polar(1.0, (opts.s + 1) * opts.theta0);
  t.x = Eigen::MatrixXcd::Zero(opts.s + 1, opts.s + 1);
  for (const auto& [label, amp] : state.amplitudes()) t.x(label[ia], label[ib]) = amp;
  return t;
}

// E|n> = |n-1>, E|0> = wrap |s>
Eigen::MatrixXcd lower_a(const TwoMode& t, const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd y(x.rows(), x.cols());
  y.topRows(t.s) = x.bottomRows(t.s);
  y.row(t.s) = t.wrap * x.row(0);
  return y;
}

Eigen::MatrixXcd raise_a(const TwoMode& t, const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd y(x.rows(), x.cols());
  y.bottomRows(t.s) = x.topRows(t.s);
  y.row(0) = std::conj(t.wrap) * x.row(t.s);
  return y;
}

Eigen::MatrixXcd lower_b(const TwoMode& t, const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd y(x.rows(), x.cols());
  y.leftCols(t.s) = x.rightCols(t.s);
  y.col(t.s) = t.wrap * x.col(0);
  return y;
}

Eigen::MatrixXcd raise_b(const TwoMode& t, const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd y(x.rows(), x.cols());
  y.rightCols(t.s) = x.leftCols(t.s);
  y.col(0) = std::conj(t.wrap) * x.col(t.s);
  return y;
}

Amplitude inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

struct TrigVectors {
  Eigen::MatrixXcd cos;
  Eigen::MatrixXcd sin;
  Amplitude exp_mean;
};

TrigVectors trig(const TwoMode& t) {
  const Eigen::MatrixXcd fwd = lower_a(t, raise_b(t, t.x));  // e^{i(phi_A - phi_B)} psi
  const Eigen::MatrixXcd bwd = raise_a(t, lower_b(t, t.x));
  return {0.5 * (fwd + bwd), (fwd - bwd) / Amplitude(0.0, 2.0), inner(t.x, fwd)};
}

bool is_product(const Eigen::MatrixXcd& x) {
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (x.row(i).squaredNorm() > 0.0) rows.push_back(i);
  }
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (x.col(j).squaredNorm() > 0.0) cols.push_back(j);
  }
  const Eigen::MatrixXcd sub = x(rows, cols);
  const Eigen::MatrixXcd rho = sub * sub.adjoint();
  return 1.0 - rho.squaredNorm() <= 1e-10;
}

UncertaintyReport base_report(const TwoMode& t, const TrigVectors& tv,
                              const std::pair<double, double>& tails) {
  UncertaintyReport r;
  r.s = t.s;
  r.tail_mass_a = tails.first;
  r.tail_mass_b = tails.second;
  // Two passes: means, then centred second moments.
  double ma = 0, mb = 0;
  for (Eigen::Index i = 0; i < t.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.x.cols(); ++j) {
      const double p = std::norm(t.x(i, j));
      ma += p * static_cast<double>(i);
      mb += p * static_cast<double>(j);
    }
  }
  double va = 0, vb = 0, vd = 0;
  for (Eigen::Index i = 0; i < t.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.x.cols(); ++j) {
      const double p = std::norm(t.x(i, j));
      if (p == 0.0) continue;
      const double da = static_cast<double>(i) - ma;
      const double db = static_cast<double>(j) - mb;
      va += p * da * da;
      vb += p * db * db;
      vd += p * (da - db) * (da - db);
    }
  }
  r.mean_na = ma;
  r.mean_nb = mb;
  r.var_na = va;
  r.var_nb = vb;
  r.var_diff = vd;
  r.mean_cos = inner(t.x, tv.cos).real();
  r.mean_sin = inner(t.x, tv.sin).real();
  r.var_cos = tv.cos.squaredNorm() - r.mean_cos * r.mean_cos;
  r.var_sin = tv.sin.squaredNorm() - r.mean_sin * r.mean_sin;
  r.c2 = std::norm(tv.exp_mean);
  r.product = is_product(t.x);
  return r;
}

void add(UncertaintyReport& r, std::string name, double lhs, double rhs) {
  r.inequalities.push_back({std::move(name), lhs, rhs, lhs - rhs});
}

}  // namespace

double PhaseOperatorSpace::phase(int m) const {
  return theta0 + 2.0 * std::numbers::pi * m / (s + 1);
}

Eigen::VectorXcd PhaseOperatorSpace::phase_state(int m) const {
  Eigen::VectorXcd v(dimension());
  const double th = phase(m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dimension()));
  for (int n = 0; n <= s; ++n) v(n) = std::polar(norm, n * th);
  return v;
}

Eigen::MatrixXcd PhaseOperatorSpace::number_operator() const {
  Eigen::VectorXcd d(dimension());
  for (int n = 0; n <= s; ++n) d(n) = static_cast<double>(n);
  return d.asDiagonal();
}

Eigen::MatrixXcd pegg_barnett_exponential(int s, double theta0) {
  if (s < 1) throw DomainError("truncation s must be >= 1");
  const PhaseOperatorSpace space{s, theta0};
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(s + 1, s + 1);
  for (int m = 0; m <= s; ++m) {
    const Eigen::VectorXcd v = space.phase_state(m);
    e += std::polar(1.0, space.phase(m)) * v * v.adjoint();
  }
  return e;
}

PhaseDifferenceTrig phase_difference_trig(const PhaseOperatorSpace& space) {
  const Eigen::MatrixXcd e = pegg_barnett_exponential(space.s, space.theta0);
  const Eigen::MatrixXcd x = Eigen::kroneckerProduct(e, e.adjoint()).eval();
  return {0.5 * (x + x.adjoint()), (x - x.adjoint()) / Amplitude(0.0, 2.0)};
}

const Inequality* UncertaintyReport::find(const std::string& name) const {
  for (const auto& q : inequalities) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

double UncertaintyReport::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& q : inequalities) m = std::min(m, q.slack);
  return m;
}

int UncertaintyReport::violations(double tolerance) const {
  return static_cast<int>(std::count_if(inequalities.begin(), inequalities.end(),
                                        [&](const Inequality& q) { return q.slack < -tolerance; }));
}

std::pair<double, double> tail_masses(const PureState& state, int s) {
  const auto [ia, ib] = site_modes(state.layout());
  const double cut = s - std::sqrt(static_cast<double>(s));
  double ta = 0.0, tb = 0.0;
  for (const auto& [label, amp] : state.amplitudes()) {
    if (label[ia] > cut) ta += std::norm(amp);
    if (label[ib] > cut) tb += std::norm(amp);
  }
  return {ta, tb};
}

UncertaintyReport robertson_checks(const PureState& state, const UncertaintyOptions& opts) {
  const TwoMode t = load(state, opts);
  const TrigVectors tv = trig(t);
  UncertaintyReport r = base_report(t, tv, tail_masses(state, opts.s));
  const double sin2 = r.mean_sin * r.mean_sin;
  const double cos2 = r.mean_cos * r.mean_cos;
  add(r, "dcos", r.var_diff * r.var_cos, sin2);
  add(r, "dsin", r.var_diff * r.var_sin, cos2);
  add(r, "dcos2_A", r.var_na * r.var_cos, 0.25 * sin2);
  add(r, "dcos2_B", r.var_nb * r.var_cos, 0.25 * sin2);
  add(r, "dsin2_A", r.var_na * r.var_sin, 0.25 * cos2);
  add(r, "dsin2_B", r.var_nb * r.var_sin, 0.25 * cos2);
  return r;
}

UncertaintyReport visibility_bound_check(const PureState& state, const UncertaintyOptions& opts) {
  const TwoMode t = load(state, opts);
  const TrigVectors tv = trig(t);
  UncertaintyReport r = base_report(t, tv, tail_masses(state, opts.s));
  if (r.product) {
    const double v = r.var_na + r.var_nb;
    add(r, "C1", v / (1.0 + v), r.c2);
  } else {
    r.diagnostics.push_back("C1 skipped: the two modes are correlated");
  }
  add(r, "C2_A", 4.0 * r.var_na / (1.0 + 4.0 * r.var_na), r.c2);
  add(r, "C2_B", 4.0 * r.var_nb / (1.0 + 4.0 * r.var_nb), r.c2);
  return r;
}

bool optimum_condition(double var_a, double var_b) {
  if (var_a < 0.0 || var_b < 0.0) throw DomainError("variances must be non-negative");
  return var_b >= 3.0 * var_a;
}

Amplitude number_cos_commutator(const PureState& state, const UncertaintyOptions& opts) {
  const TwoMode t = load(state, opts);
  const TrigVectors tv = trig(t);
  Eigen::MatrixXcd nx = t.x;
  for (Eigen::Index i = 0; i < nx.rows(); ++i) nx.row(i) *= static_cast<double>(i);
  return Amplitude(0.0, 2.0 * inner(nx, tv.cos).imag());
}

PureState coherent_pair(double nbar_a, double nbar_b, int s) {
  const AncillaSpec a = coherent_window(nbar_a);
  const AncillaSpec b = coherent_window(nbar_b);
  if (a.M() > s || b.M() > s) {
    throw CapacityError("coherent window exceeds truncation s = " + std::to_string(s));
  }
  ModeLayout layout({{"A", Site::A, ModeKind::Field, s}, {"B", Site::B, ModeKind::Field, s}});
  AmplitudeMap amps;
  for (int n = a.offset(); n <= a.M(); ++n) {
    for (int m = b.offset(); m <= b.M(); ++m) {
      const Amplitude v = a.coefficient(n) * b.coefficient(m);
      if (std::abs(v) > kDropThreshold) amps.emplace(BasisLabel{n, m}, v);
    }
  }
  return PureState::normalized(std::move(layout), std::move(amps));
}

}  // namespace fockent
