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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fockent/errors.hpp"
#include "fockent/phase_reference.hpp"
#include "fockent/transfer.hpp"
#include "test_support.hpp"

namespace fockent {
namespace {

constexpr double kPi = std::numbers::pi;

double binary_entropy_oracle(long double p) { return testing::entropy_oracle({p, 1.0L - p}); }

TEST(CanonicalPhaseDistribution, NumberStateIsUniform) {
  const auto pd = canonical_phase_distribution(AncillaSpec::number_state(3, 8), 19);
  for (double v : pd.values) EXPECT_NEAR(v, 1.0 / (2 * kPi), 1e-14);
  EXPECT_NEAR(pd.total(), 1.0, 1e-12);
}

TEST(CanonicalPhaseDistribution, MatchesDirectSumAndNormalizes) {
  const auto spec = coherent_coefficients(4.0, 30);
  const int K = 71;
  const auto pd = canonical_phase_distribution(spec, K);
  for (int j = 0; j < K; j += 7) {
    Amplitude s{};
    for (int n = 0; n <= 30; ++n) s += spec.coefficient(n) * std::polar(1.0, -n * pd.angle(j));
    EXPECT_NEAR(pd.values[static_cast<std::size_t>(j)], std::norm(s) / (2 * kPi), 1e-12);
  }
  EXPECT_NEAR(pd.total(), 1.0, 1e-10);
  for (double v : pd.values) EXPECT_GE(v, -1e-12);
  // moments[k] = sum_n c*_n c_{n+k}
  for (int k = 0; k <= 3; ++k) {
    Amplitude m{};
    for (int n = 0; n + k <= 30; ++n) m += std::conj(spec.coefficient(n)) * spec.coefficient(n + k);
    EXPECT_NEAR(std::abs(pd.moments[static_cast<std::size_t>(k)] - m), 0.0, 1e-12);
  }
}

TEST(CanonicalPhaseDistribution, CoherentVariance) {
  const auto spec = coherent_window(25.0);
  const auto pd = canonical_phase_distribution(spec, default_phase_grid(spec));
  EXPECT_NEAR(phase_variance(pd), 1.0 / 100.0, 0.1 / 100.0);
}

TEST(CanonicalPhaseDistribution, SmallGridThrows) {
  EXPECT_THROW(canonical_phase_distribution(coherent_coefficients(1.0, 10), 22), DomainError);
}

TEST(ResolutionKernel, UniformStaysUniform) {
  const auto u = canonical_phase_distribution(AncillaSpec::number_state(2, 5), 31);
  const auto q = resolution_kernel(u, u, 0.4);
  for (double v : q.values) EXPECT_NEAR(v, 1.0 / (2 * kPi), 1e-12);
}

TEST(ResolutionKernel, MatchesDirectCorrelation) {
  const int K = 64;
  const auto pa = canonical_phase_distribution(coherent_coefficients(3.0, 20), K);
  const auto pb = canonical_phase_distribution(AncillaSpec::from_coefficients({{0.6, 0.0}, {0.0, 0.48}, {0.64, 0.0}}), K);
  for (int shift : {0, 5, 41}) {
    const double varphi = 2 * kPi * shift / K;
    const auto q = resolution_kernel(pa, pb, varphi);
    EXPECT_NEAR(q.total(), 1.0, 1e-10);
    for (int j = 0; j < K; ++j) {
      // Q(D_j) = int P_A(a) P_B(a + D_j - varphi) da
      double direct = 0;
      for (int i = 0; i < K; ++i) {
        direct += pa.values[static_cast<std::size_t>(i)] * pb.values[static_cast<std::size_t>(((i + j - shift) % K + K) % K)];
      }
      EXPECT_NEAR(q.values[static_cast<std::size_t>(j)], direct * 2 * kPi / K, 1e-10);
    }
    // Fourier coefficients multiply: m_k(Q) = e^{ik varphi} conj(m_k(A)) m_k(B)
    for (std::size_t k = 0; k < q.moments.size(); ++k) {
      const Amplitude expected = std::polar(1.0, static_cast<double>(k) * varphi) * std::conj(pa.moments[k]) * pb.moments[k];
      EXPECT_NEAR(std::abs(q.moments[k] - expected), 0.0, 1e-10);
    }
  }
}

TEST(ResolutionKernel, GridMismatchThrows) {
  const auto a = canonical_phase_distribution(AncillaSpec::number_state(0, 3), 11);
  const auto b = canonical_phase_distribution(AncillaSpec::number_state(0, 3), 12);
  EXPECT_THROW(resolution_kernel(a, b, 0.0), DomainError);
}

TEST(Visibility, NumberStateKillsIt) {
  EXPECT_NEAR(std::abs(visibility(AncillaSpec::number_state(4, 9), coherent_coefficients(2.0, 20))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(visibility(coherent_coefficients(2.0, 20), AncillaSpec::number_state(0, 1))), 0.0, 1e-12);
}

TEST(Visibility, QuadratureMatchesMomentProduct) {
  auto rng = testing::seeded(61);
  std::vector<std::pair<AncillaSpec, AncillaSpec>> cases{
      {coherent_window(100.0), coherent_window(100.0)},
      {coherent_window(25.0), coherent_window(250.0)},
      {coherent_coefficients(2.0, 12), coherent_coefficients(5.0, 30)}};
  for (int t = 0; t < 5; ++t) {
    std::vector<Amplitude> a(9), b(14);
    for (auto& v : a) v = random_gaussian_amplitude(rng);
    for (auto& v : b) v = random_gaussian_amplitude(rng);
    auto normalize = [](std::vector<Amplitude>& v) {
      double s = 0;
      for (auto x : v) s += std::norm(x);
      for (auto& x : v) x /= std::sqrt(s);
    };
    normalize(a);
    normalize(b);
    cases.emplace_back(AncillaSpec::from_coefficients(a), AncillaSpec::from_coefficients(b));
  }
  for (const auto& [a, b] : cases) {
    for (double varphi : {0.0, 0.8, -2.5}) {
      const Amplitude q = visibility(a, b, varphi);
      EXPECT_NEAR(std::abs(q - visibility_from_moments(a, b, varphi)), 0.0, 1e-9);
      EXPECT_LE(std::abs(q), 1.0 + 1e-10);
    }
  }
  const Amplitude c100 = visibility(coherent_window(100.0), coherent_window(100.0));
  // |C| = |m|^2 with first moment m about 1 - 1/(8 nbar)
  EXPECT_NEAR(std::abs(c100), std::exp(-2.0 / (8 * 100.0)), 1e-4);
  EXPECT_NEAR(std::norm(c100), 0.994987275502, 1e-10);
}

TEST(Visibility, MagnitudeDoesNotDependOnVarphi) {
  const auto a = coherent_window(30.0);
  const auto b = coherent_window(90.0);
  const Amplitude c0 = visibility(a, b, 0.0);
  for (double varphi : {0.5, 1.7, 3.0}) {
    const Amplitude c = visibility(a, b, varphi);
    EXPECT_NEAR(std::abs(c), std::abs(c0), 1e-12);
    EXPECT_NEAR(std::abs(c - std::polar(1.0, varphi) * c0), 0.0, 1e-12);
  }
}

TEST(PostMeasurementState, Examples) {
  const auto mixed = post_measurement_register_state(0.0);
  EXPECT_NEAR(mixed.matrix()(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(mixed.matrix()(2, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(mixed.matrix()(1, 2)), 0.0, 1e-15);
  EXPECT_NEAR(concurrence_ef_oracle(post_measurement_register_state(1.0)), 1.0, 1e-10);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(post_measurement_register_state(0.6).matrix());
  const Eigen::VectorXd ev = es.eigenvalues();
  EXPECT_NEAR(ev(3), 0.8, 1e-12);
  EXPECT_NEAR(ev(2), 0.2, 1e-12);
  EXPECT_NEAR(ev(1), 0.0, 1e-12);
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
}

TEST(PostMeasurementState, RejectsLargeC) {
  EXPECT_THROW(post_measurement_register_state(1.01), DomainError);
  EXPECT_NO_THROW(post_measurement_register_state(Amplitude(0.6, 0.8)));
}

TEST(PostMeasurementState, DependsOnlyOnPhaseDifference) {
  const auto rho = post_measurement_register_state(Amplitude(0.3, -0.5));
  for (double th : {0.2, 1.9, -3.0}) {
    // a common shift of both references leaves the state alone
    EXPECT_LT(trace_distance(reference_phase_shift(rho, th, th), rho), 1e-12);
    // a relative shift rotates C by e^{i(theta_A - theta_B)}
    const auto shifted = reference_phase_shift(rho, th, -th);
    EXPECT_LT(trace_distance(shifted, post_measurement_register_state(std::polar(1.0, 2 * th) * Amplitude(0.3, -0.5))),
              1e-12);
  }
}

TEST(EntanglementOfFormation, Examples) {
  EXPECT_NEAR(entanglement_of_formation_x(1.0), 1.0, 1e-15);
  EXPECT_NEAR(entanglement_of_formation_x(0.0), 0.0, 1e-15);
  EXPECT_NEAR(entanglement_of_formation_x(0.6), binary_entropy_oracle(0.9L), 1e-12);
  EXPECT_NEAR(entanglement_of_formation_x(0.6), 0.468996, 5e-7);
  EXPECT_THROW(entanglement_of_formation_x(1.1), DomainError);
}

TEST(EntanglementOfFormation, MonotoneInMagnitude) {
  double prev = -1;
  for (int i = 0; i <= 100; ++i) {
    const double e = entanglement_of_formation_x(i / 100.0);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(ConcurrenceOracle, Examples) {
  ModeLayout regs({{"reg:A", Site::A, ModeKind::Register, 1}, {"reg:B", Site::B, ModeKind::Register, 1}});
  const double h = 1.0 / std::sqrt(2.0);
  const auto bell = projector(PureState(regs, {{BasisLabel{0, 0}, h}, {BasisLabel{1, 1}, h}}));
  EXPECT_NEAR(concurrence(bell), 1.0, 1e-12);
  EXPECT_NEAR(concurrence_ef_oracle(bell), 1.0, 1e-10);
  const DensityOperator mixed(regs, enumerate_basis(regs), Eigen::MatrixXcd::Identity(4, 4) / 4.0);
  EXPECT_NEAR(concurrence_ef_oracle(mixed), 0.0, 1e-12);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(4, 4);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(concurrence_ef_oracle(DensityOperator(regs, enumerate_basis(regs), bad)), ValidationError);
}

TEST(ConcurrenceOracle, AgreesWithFormulaOnRandomC) {
  auto rng = testing::seeded(62);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Amplitude c = std::polar(std::sqrt(u(rng)), 2 * kPi * u(rng));
    const auto rho = post_measurement_register_state(c);
    EXPECT_NEAR(concurrence(rho), std::abs(c), 1e-10);
    EXPECT_NEAR(concurrence_ef_oracle(rho), entanglement_of_formation_x(c), 1e-10);
  }
}

TEST(Povm, CompletenessOnTruncatedSpace) {
  const int ca = 4, cb = 6;
  const int K = 2 * (ca + cb) + 1;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero((ca + 1) * (cb + 1), (ca + 1) * (cb + 1));
  for (int j = 0; j < K; ++j) sum += phase_difference_povm_matrix(ca, cb, 2 * kPi * j / K) * (2 * kPi / K);
  EXPECT_LT((sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).norm(), 1e-10);
  const Eigen::MatrixXcd p = phase_difference_povm_matrix(ca, cb, 0.7);
  EXPECT_LT((p - p.adjoint()).norm(), 1e-14);
}

ProtocolConfig shared_particle_config(const AncillaSpec& a, const AncillaSpec& b) {
  return {testing::single_particle_bell(), a, b, std::nullopt};
}

TEST(Povm, SparseMatchesDenseMatrix) {
  const auto cfg = shared_particle_config(coherent_coefficients(1.0, 4), coherent_coefficients(2.0, 5));
  const auto joint = transfer_protocol_state(cfg);
  const double varphi = 1.1;
  const auto res = apply_phase_difference_povm(joint, varphi);

  // dense oracle: Tr_nonreg[(Pi (x) 1) |psi><psi|] with the two reference modes
  const auto& layout = joint.layout();
  const auto ra = layout.index_of(reference_id(Site::A));
  const auto rb = layout.index_of(reference_id(Site::B));
  const int ca = layout[ra].capacity;
  const int cb = layout[rb].capacity;
  const Eigen::MatrixXcd pi = phase_difference_povm_matrix(ca, cb, varphi);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(res.state.dimension()),
                                                static_cast<Eigen::Index>(res.state.dimension()));
  const auto regs = layout.indices_where(ModeKind::Register);
  for (const auto& [l1, a1] : joint.amplitudes()) {
    for (const auto& [l2, a2] : joint.amplitudes()) {
      bool same_env = true;
      for (std::size_t i = 0; i < layout.size(); ++i) {
        if (i == ra || i == rb || layout[i].kind == ModeKind::Register) continue;
        same_env = same_env && l1[i] == l2[i];
      }
      if (!same_env) continue;
      std::vector<int> r1, r2;
      for (auto i : regs) {
        r1.push_back(l1[i]);
        r2.push_back(l2[i]);
      }
      const Amplitude elem = pi(l2[ra] * (cb + 1) + l2[rb], l1[ra] * (cb + 1) + l1[rb]);
      rho(static_cast<Eigen::Index>(*res.state.index_of(BasisLabel(r1))),
          static_cast<Eigen::Index>(*res.state.index_of(BasisLabel(r2)))) += a1 * std::conj(a2) * elem;
    }
  }
  EXPECT_NEAR(rho.trace().real(), res.density, 1e-12);
  EXPECT_LT((rho / res.density - res.state.matrix()).norm(), 1e-10);
}

TEST(Povm, FlatDensityAndMixedCState) {
  const auto a = coherent_coefficients(3.0, 24);
  const auto b = coherent_coefficients(6.0, 32);
  const auto joint = transfer_protocol_state(shared_particle_config(a, b));
  double integral = 0;
  const int K = 64;
  for (int j = 0; j < K; ++j) {
    const double varphi = 2 * kPi * j / K;
    const auto res = apply_phase_difference_povm(joint, varphi);
    EXPECT_NEAR(res.density, 1.0 / (2 * kPi), 1e-6);
    integral += res.density * 2 * kPi / K;
    const auto expected = post_measurement_register_state(visibility(a, b, varphi));
    EXPECT_LT((res.state.matrix() - expected.matrix()).norm(), 1e-8) << "varphi " << varphi;
  }
  EXPECT_NEAR(integral, 1.0, 1e-9);
}

TEST(CoherentModel, Examples) {
  EXPECT_NEAR(coherent_visibility_model(100.0), 0.997503, 5e-7);
  EXPECT_NEAR(coherent_visibility_model(100.0), std::exp(-1.0 / 400.0), 1e-15);
  EXPECT_NEAR(coherent_visibility_model(1e6), 1.0, 1e-6);
  EXPECT_THROW(coherent_visibility_model(0.5), DomainError);
}

TEST(CoherentModel, AgreesWithFullQuadrature) {
  for (double ntr : {25.0, 50.0, 100.0}) {
    const auto r = coherent_visibility_report(ntr);
    const double rel = std::abs((1 - r.visibility2) - (1 - r.model_visibility2)) / (1 - r.model_visibility2);
    EXPECT_LE(rel, 0.10) << "ntr " << ntr;
  }
}

TEST(EfUpperBound, Examples) {
  EXPECT_NEAR(ef_upper_bound(25.0), 1.0 - 1.0 / (100.0 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(ef_upper_bound(25.0), 0.985573, 5e-7);
  EXPECT_NEAR(ef_upper_bound(1e12), 1.0, 1e-9);
  EXPECT_THROW(ef_upper_bound(0.5), DomainError);
}

TEST(EfUpperBound, CoherentCaseStaysBelowBound) {
  for (double n : {25.0, 50.0, 100.0, 400.0}) {
    EXPECT_LE(entanglement_of_formation_x(std::sqrt(coherent_visibility_model(n))), ef_upper_bound(n) + 1e-6)
        << "n " << n;
  }
}

TEST(VisibilityReport, FormulaAndOracleAgree) {
  for (double ntr : {1.0, 25.0, 100.0, 1e6}) {
    const auto r = coherent_visibility_report(ntr);
    EXPECT_NEAR(r.ef, r.ef_oracle, 1e-10) << "ntr " << ntr;
    EXPECT_LE(std::abs(r.C), 1.0 + 1e-10);
    EXPECT_GE(r.ef, 0.0);
    EXPECT_LE(r.ef, 1.0);
    EXPECT_NEAR(r.transported_mean, ntr, 1e-6 * ntr);
  }
  EXPECT_NEAR(coherent_visibility_report(1e6).ef, 1.0, 1e-5);
}

}  // namespace
}  // namespace fockent
