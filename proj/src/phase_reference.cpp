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

#include "fockent/phase_reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "fockent/errors.hpp"

namespace fockent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using ComplexVec = std::vector<Amplitude>;

ComplexVec forward(const ComplexVec& x) {
  Eigen::FFT<double> fft;
  ComplexVec out;
  fft.fwd(out, x);
  return out;
}

// (1/K) sum_k X_k e^{+2 pi i jk/K}
ComplexVec inverse(const ComplexVec& x) {
  Eigen::FFT<double> fft;
  ComplexVec out;
  fft.inv(out, x);
  return out;
}

ComplexVec as_complex(const std::vector<double>& v) { return ComplexVec(v.begin(), v.end()); }

// moments[k] = (2 pi / K) sum_j v_j e^{ik theta_j}, k = 0..kmax.
std::vector<Amplitude> quadrature_moments(const std::vector<double>& values, int kmax) {
  const ComplexVec inv = inverse(as_complex(values));
  std::vector<Amplitude> m(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) m[static_cast<std::size_t>(k)] = kTwoPi * inv[static_cast<std::size_t>(k)];
  return m;
}

bool five_smooth(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

void check_magnitude(Amplitude C) {
  if (std::abs(C) > 1.0 + 1e-10) {
    throw DomainError("visibility magnitude " + std::to_string(std::abs(C)) + " exceeds 1");
  }
}

}  // namespace

double PhaseDistribution::angle(int j) const { return kTwoPi * j / K; }

double PhaseDistribution::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * kTwoPi / K;
}

int default_phase_grid(const AncillaSpec& spec) {
  const int k = std::max(2 * spec.bandwidth() + 3, 257);
  if (k <= 4096) return k;
  // Large grids are rounded up to a 5-smooth length for the FFT.
  int n = k;
  while (!five_smooth(n)) ++n;
  return n;
}

PhaseDistribution canonical_phase_distribution(const AncillaSpec& spec, int K) {
  const int w = spec.bandwidth();
  if (K < 2 * w + 3) {
    throw DomainError("phase grid needs K >= " + std::to_string(2 * w + 3));
  }
  ComplexVec x(static_cast<std::size_t>(K));
  for (int t = 0; t <= w; ++t) x[static_cast<std::size_t>(t)] = spec.coefficient(spec.offset() + t);
  const ComplexVec amp = forward(x);

  PhaseDistribution pd;
  pd.K = K;
  pd.values.resize(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    pd.values[static_cast<std::size_t>(j)] = std::norm(amp[static_cast<std::size_t>(j)]) / kTwoPi;
  }
  pd.moments = quadrature_moments(pd.values, w);
  if (std::abs(pd.total() - 1.0) > 1e-10) {
    throw ValidationError("canonical phase distribution does not integrate to 1");
  }
  return pd;
}

PhaseDistribution resolution_kernel(const PhaseDistribution& pa, const PhaseDistribution& pb,
                                    double varphi) {
  if (pa.K != pb.K || pa.values.size() != pb.values.size()) {
    throw DomainError("resolution kernel needs distributions on the same grid");
  }
  const int K = pa.K;
  const ComplexVec fa = forward(as_complex(pa.values));
  const ComplexVec fb = forward(as_complex(pb.values));
  ComplexVec fq(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const int signed_k = k <= K / 2 ? k : k - K;
    const auto i = static_cast<std::size_t>(k);
    fq[i] = (kTwoPi / K) * std::conj(fa[i]) * fb[i] * std::polar(1.0, -signed_k * varphi);
  }
  const ComplexVec q = inverse(fq);

  PhaseDistribution out;
  out.K = K;
  out.values.resize(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) out.values[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(j)].real();
  const int band = static_cast<int>(std::min(pa.moments.size(), pb.moments.size())) - 1;
  out.moments = quadrature_moments(out.values, std::max(band, 0));
  return out;
}

double phase_variance(const PhaseDistribution& pd) {
  Amplitude m1{};
  for (int j = 0; j < pd.K; ++j) m1 += pd.values[static_cast<std::size_t>(j)] * std::polar(1.0, pd.angle(j));
  const double mu = std::abs(m1) > 0.0 ? std::arg(m1) : 0.0;
  double v = 0.0;
  for (int j = 0; j < pd.K; ++j) {
    const double d = std::remainder(pd.angle(j) - mu, kTwoPi);
    v += d * d * pd.values[static_cast<std::size_t>(j)];
  }
  return v * kTwoPi / pd.K;
}

Amplitude first_phase_moment(const AncillaSpec& spec) {
  Amplitude m{};
  for (int n = spec.offset(); n < spec.M(); ++n) m += std::conj(spec.coefficient(n)) * spec.coefficient(n + 1);
  return m;
}

Amplitude visibility_on_grid(const AncillaSpec& spec_a, const AncillaSpec& spec_b, double varphi,
                             int K) {
  const PhaseDistribution q = resolution_kernel(canonical_phase_distribution(spec_a, K),
                                                canonical_phase_distribution(spec_b, K), varphi);
  Amplitude c{};
  for (int j = 0; j < K; ++j) c += q.values[static_cast<std::size_t>(j)] * std::polar(1.0, q.angle(j));
  return c * (kTwoPi / K);
}

Amplitude visibility(const AncillaSpec& spec_a, const AncillaSpec& spec_b, double varphi) {
  const int K = std::max(default_phase_grid(spec_a), default_phase_grid(spec_b));
  return visibility_on_grid(spec_a, spec_b, varphi, K);
}

Amplitude visibility_from_moments(const AncillaSpec& spec_a, const AncillaSpec& spec_b,
                                  double varphi) {
  return std::polar(1.0, varphi) * std::conj(first_phase_moment(spec_a)) * first_phase_moment(spec_b);
}

DensityOperator post_measurement_register_state(Amplitude C) {
  check_magnitude(C);
  ModeLayout layout({{"reg:A", Site::A, ModeKind::Register, 1},
                     {"reg:B", Site::B, ModeKind::Register, 1}});
  auto basis = enumerate_basis(layout);
  // basis: |00>, |01>, |10>, |11>
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(2, 2) = 0.5;
  m(1, 1) = 0.5;
  m(2, 1) = 0.5 * C;
  m(1, 2) = 0.5 * std::conj(C);
  DensityOperator rho(std::move(layout), std::move(basis), std::move(m));
  rho.validate();
  return rho;
}

PovmResult apply_phase_difference_povm(const PureState& joint, double varphi,
                                       const std::string& mode_a, const std::string& mode_b) {
  const auto& layout = joint.layout();
  const auto ia = layout.index_of(mode_a);
  const auto ib = layout.index_of(mode_b);
  if (layout[ia].kind != ModeKind::Field || layout[ib].kind != ModeKind::Field || ia == ib) {
    throw LayoutError("phase-difference POVM acts on two distinct field modes");
  }
  const auto reg_idx = layout.indices_where(ModeKind::Register);
  ModeLayout reg_layout = layout.select(reg_idx);
  auto basis = enumerate_basis(reg_layout, 4096);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  // <k',l'|Pi(varphi)|k,l> = delta(k'+l' = k+l) e^{i(l'-l) varphi} / 2 pi, and
  // all other non-register occupations must agree for the trace.
  struct Term {
    Eigen::Index reg;
    int l;
    Amplitude amp;
  };
  std::map<BasisLabel, std::vector<Term>> groups;
  for (const auto& [label, amp] : joint.amplitudes()) {
    std::vector<int> key;
    std::vector<int> reg;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (layout[i].kind == ModeKind::Register) {
        reg.push_back(label[i]);
      } else if (i != ia && i != ib) {
        key.push_back(label[i]);
      }
    }
    key.push_back(label[ia] + label[ib]);
    groups[BasisLabel(std::move(key))].push_back(
        {static_cast<Eigen::Index>(basis_index(reg_layout, BasisLabel(std::move(reg)))), label[ib],
         amp});
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, terms] : groups) {
    for (const auto& t : terms) {
      for (const auto& u : terms) {
        rho(t.reg, u.reg) += t.amp * std::conj(u.amp) * std::polar(1.0 / kTwoPi, (u.l - t.l) * varphi);
      }
    }
  }
  const double density = rho.trace().real();
  if (density <= 0.0) throw DomainError("phase-difference outcome has zero probability density");
  DensityOperator state(std::move(reg_layout), std::move(basis), rho / density);
  state.validate();
  return {density, std::move(state)};
}

Eigen::MatrixXcd phase_difference_povm_matrix(int cap_a, int cap_b, double varphi) {
  const int db = cap_b + 1;
  const int dim = (cap_a + 1) * db;
  Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k <= cap_a; ++k) {
    for (int l = 0; l <= cap_b; ++l) {
      for (int kp = 0; kp <= cap_a; ++kp) {
        const int lp = k + l - kp;
        if (lp < 0 || lp > cap_b) continue;
        pi(kp * db + lp, k * db + l) = std::polar(1.0 / kTwoPi, (lp - l) * varphi);
      }
    }
  }
  return pi;
}

double entanglement_of_formation_x(Amplitude C) {
  check_magnitude(C);
  const double x = std::max(0.0, 1.0 - std::norm(C));
  return binary_entropy(0.5 * (1.0 + std::sqrt(x)));
}

double concurrence(const DensityOperator& rho) {
  if (rho.dimension() != 4) throw LayoutError("concurrence needs a two-qubit (4x4) operator");
  rho.validate();
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd m = rho.matrix();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  // The lambda_i are the singular values of sqrt(rho) sqrt(rho~), with
  // sqrt(rho~) = yy conj(sqrt(rho)) yy.
  const Eigen::Matrix4cd prod = sqrt_rho * yy * sqrt_rho.conjugate() * yy;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(prod);
  Eigen::Vector4d lambda = svd.singularValues();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

double concurrence_ef_oracle(const DensityOperator& rho) {
  const double c = std::min(1.0, concurrence(rho));
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double coherent_visibility_model(double ntr) {
  if (!(ntr >= 1.0)) throw DomainError("coherent visibility model needs ntr >= 1");
  return std::exp(-1.0 / (4.0 * ntr));
}

double ef_upper_bound(double var_tr) {
  if (!(var_tr >= 1.0)) throw DomainError("entanglement bound needs a variance >= 1");
  return 1.0 - 1.0 / (4.0 * var_tr * std::numbers::ln2);
}

VisibilityReport coherent_visibility_report(double ntr, double local_scale, int min_grid,
                                            double varphi) {
  if (!(local_scale > 0.0)) throw DomainError("local scale must be positive");
  const AncillaSpec transported = coherent_window(ntr);
  const AncillaSpec local = coherent_window(local_scale * ntr);
  const int K = std::max({default_phase_grid(transported), default_phase_grid(local), min_grid});

  VisibilityReport r;
  r.grid = K;
  r.varphi = varphi;
  r.C = visibility_on_grid(transported, local, varphi, K);
  r.visibility2 = std::norm(r.C);
  r.ef = entanglement_of_formation_x(r.C);
  r.ef_oracle = concurrence_ef_oracle(post_measurement_register_state(r.C));
  r.bound = ef_upper_bound(ntr);
  r.model_visibility2 = coherent_visibility_model(ntr);
  r.transported_mean = transported.mean();
  r.transported_variance = transported.variance();
  return r;
}

}  // namespace fockent
