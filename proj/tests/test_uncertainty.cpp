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

#include <unsupported/Eigen/KroneckerProduct>

#include "fockent/errors.hpp"
#include "fockent/phase_reference.hpp"
#include "fockent/transfer.hpp"
#include "fockent/uncertainty.hpp"
#include "test_support.hpp"

namespace fockent {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PeggBarnett, UnitaryWithPhaseEigenvalues) {
  for (int s : {1, 4, 12}) {
    const double theta0 = 0.37;
    const Eigen::MatrixXcd e = pegg_barnett_exponential(s, theta0);
    EXPECT_LT((e * e.adjoint() - Eigen::MatrixXcd::Identity(s + 1, s + 1)).norm(), 1e-12);
    const PhaseOperatorSpace space{s, theta0};
    for (int m = 0; m <= s; ++m) {
      const Eigen::VectorXcd v = space.phase_state(m);
      EXPECT_LT((e * v - std::polar(1.0, space.phase(m)) * v).norm(), 1e-12);
      for (int k = 0; k <= s; ++k) {
        EXPECT_NEAR(std::abs(v.dot(space.phase_state(k))), m == k ? 1.0 : 0.0, 1e-12);
      }
    }
  }
}

TEST(PeggBarnett, NumberBasisAction) {
  const int s = 6;
  const double theta0 = -0.9;
  const Eigen::MatrixXcd e = pegg_barnett_exponential(s, theta0);
  for (int n = 0; n <= s; ++n) {
    for (int np = 0; np <= s; ++np) {
      Amplitude expected{};
      if (n >= 1 && np == n - 1) expected = 1.0;
      if (n == 0 && np == s) expected = std::polar(1.0, (s + 1) * theta0);
      EXPECT_NEAR(std::abs(e(np, n) - expected), 0.0, 1e-12);
    }
  }
}

TEST(PhaseDifferenceTrig, HermitianWithProductEigenvalues) {
  const PhaseOperatorSpace space{4, 0.2};
  const auto trig = phase_difference_trig(space);
  EXPECT_LT((trig.cos - trig.cos.adjoint()).norm(), 1e-12);
  EXPECT_LT((trig.sin - trig.sin.adjoint()).norm(), 1e-12);
  for (int m = 0; m <= 4; ++m) {
    for (int k = 0; k <= 4; ++k) {
      const Eigen::VectorXcd v = Eigen::kroneckerProduct(space.phase_state(m), space.phase_state(k)).eval();
      const double d = space.phase(m) - space.phase(k);
      EXPECT_LT((trig.cos * v - std::cos(d) * v).norm(), 1e-12);
      EXPECT_LT((trig.sin * v - std::sin(d) * v).norm(), 1e-12);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(trig.cos * trig.cos + trig.sin * trig.sin);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-10);
}

TEST(PhaseDifferenceTrig, DenseOperatorsMatchReportExpectations) {
  const int s = 9;
  auto rng = testing::seeded(70);
  const auto sample = random_physical_two_mode(rng, s, false);
  const auto trig = phase_difference_trig({s, 0.0});
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero((s + 1) * (s + 1));
  for (const auto& [label, amp] : sample.state.amplitudes()) psi(label[0] * (s + 1) + label[1]) = amp;
  const auto r = robertson_checks(sample.state, {s, 0.0});
  const double mc = psi.dot(trig.cos * psi).real();
  const double ms = psi.dot(trig.sin * psi).real();
  EXPECT_NEAR(r.mean_cos, mc, 1e-12);
  EXPECT_NEAR(r.mean_sin, ms, 1e-12);
  EXPECT_NEAR(r.var_cos, (trig.cos * psi).squaredNorm() - mc * mc, 1e-12);
  EXPECT_NEAR(r.var_sin, (trig.sin * psi).squaredNorm() - ms * ms, 1e-12);
}

TEST(PhaseDifferenceTrig, CommutatorIdentityOnPhysicalStates) {
  auto rng = testing::seeded(71);
  for (int t = 0; t < 20; ++t) {
    const auto sample = random_physical_two_mode(rng, 64, t % 2 == 0);
    const auto r = robertson_checks(sample.state, {64, 0.0});
    const Amplitude comm = number_cos_commutator(sample.state, {64, 0.0});
    EXPECT_NEAR(std::abs(comm - Amplitude(0.0, -r.mean_sin)), 0.0, 1e-8);
  }
}

TEST(RobertsonChecks, NumberStateProduct) {
  const auto s = PureState::basis_state(two_mode_layout(32), BasisLabel{4, 7});
  const auto r = robertson_checks(s, {32, 0.0});
  EXPECT_NEAR(r.mean_sin, 0.0, 1e-15);
  EXPECT_NEAR(r.mean_cos, 0.0, 1e-15);
  EXPECT_EQ(r.inequalities.size(), 6u);
  EXPECT_EQ(r.violations(), 0);
  EXPECT_GE(r.min_slack(), 0.0);
}

TEST(RobertsonChecks, CoherentPair) {
  const auto s = coherent_pair(25.0, 25.0, 256);
  const auto r = robertson_checks(s);
  EXPECT_EQ(r.violations(), 0);
  EXPECT_NEAR(r.var_na, 25.0, 1e-6);
}

TEST(RobertsonChecks, RandomPhysicalStates) {
  auto rng = testing::seeded(72);
  for (int t = 0; t < 100; ++t) {
    const auto sample = random_physical_two_mode(rng, 64, t % 2 == 0);
    const auto r = robertson_checks(sample.state, {64, 0.0});
    EXPECT_EQ(r.violations(1e-9), 0) << "state " << t;
    EXPECT_NEAR(r.var_cos + r.var_sin, 1.0 - r.c2, 1e-9);
  }
}

TEST(RobertsonChecks, NonPhysicalStateRejected) {
  const auto s = PureState::basis_state(two_mode_layout(16), BasisLabel{2, 15});
  try {
    robertson_checks(s, {16, 0.0});
    FAIL() << "expected rejection";
  } catch (const NonPhysicalStateError& e) {
    EXPECT_NEAR(e.tail_mass(), 1.0, 1e-12);
  }
}

TEST(RobertsonChecks, NeedsOneFieldModePerSite) {
  ModeLayout layout({{"a", Site::A, ModeKind::Field, 8}, {"b", Site::A, ModeKind::Field, 8}});
  EXPECT_THROW(robertson_checks(PureState::basis_state(layout, BasisLabel{1, 1}), {8, 0.0}), LayoutError);
}

TEST(VisibilityBound, NumberStateProduct) {
  const auto s = PureState::basis_state(two_mode_layout(32), BasisLabel{3, 3});
  const auto r = visibility_bound_check(s, {32, 0.0});
  EXPECT_NEAR(r.c2, 0.0, 1e-15);
  ASSERT_NE(r.find("C1"), nullptr);
  EXPECT_EQ(r.violations(), 0);
}

TEST(VisibilityBound, CoherentPairWithinC2) {
  const auto s = coherent_pair(25.0, 250.0, 512);
  const auto r = visibility_bound_check(s, {512, 0.0});
  const auto* c2a = r.find("C2_A");
  ASSERT_NE(c2a, nullptr);
  EXPECT_NEAR(c2a->lhs, 100.0 / 101.0, 1e-6);
  EXPECT_GE(c2a->slack, -1e-9);
  EXPECT_EQ(r.violations(), 0);
}

TEST(VisibilityBound, CoherentStatesNearlySaturateC2) {
  const auto s = coherent_pair(100.0, 1000.0, 1400);
  const auto r = visibility_bound_check(s, {1400, 0.0});
  const auto* c2a = r.find("C2_A");
  ASSERT_NE(c2a, nullptr);
  EXPECT_GE(c2a->slack, -1e-9);
  EXPECT_LE(c2a->slack / c2a->lhs, 0.30);
}

TEST(VisibilityBound, CorrelatedInputSkipsC1) {
  const double h = 1.0 / std::sqrt(2.0);
  const PureState s(two_mode_layout(32), {{BasisLabel{1, 2}, h}, {BasisLabel{2, 1}, h}});
  const auto r = visibility_bound_check(s, {32, 0.0});
  EXPECT_FALSE(r.product);
  EXPECT_EQ(r.find("C1"), nullptr);
  EXPECT_FALSE(r.diagnostics.empty());
  EXPECT_NE(r.find("C2_A"), nullptr);
}

TEST(VisibilityBound, AgreesWithDistributionVisibility) {
  for (auto [na, nb] : {std::pair{25.0, 250.0}, std::pair{40.0, 60.0}}) {
    const auto r = visibility_bound_check(coherent_pair(na, nb, 512), {512, 0.0});
    EXPECT_NEAR(r.c2, std::norm(visibility(coherent_window(na), coherent_window(nb))), 1e-8);
  }
}

TEST(VisibilityBound, ProductVarianceAdditivity) {
  auto rng = testing::seeded(74);
  for (int t = 0; t < 20; ++t) {
    const auto sample = random_physical_two_mode(rng, 48, true);
    const auto r = robertson_checks(sample.state, {48, 0.0});
    EXPECT_NEAR(r.var_diff, r.var_na + r.var_nb, 1e-10);
  }
}

TEST(VisibilityBound, RandomProductsSatisfyAllBounds) {
  auto rng = testing::seeded(75);
  for (int t = 0; t < 100; ++t) {
    const auto sample = random_physical_two_mode(rng, 64, true);
    const auto r = visibility_bound_check(sample.state, {64, 0.0});
    ASSERT_TRUE(r.product);
    EXPECT_EQ(r.violations(1e-9), 0) << "state " << t;
  }
}

TEST(OptimumCondition, Examples) {
  EXPECT_TRUE(optimum_condition(1.0, 3.0));
  EXPECT_FALSE(optimum_condition(1.0, 2.9));
  EXPECT_TRUE(optimum_condition(0.0, 0.0));
  EXPECT_THROW(optimum_condition(-1.0, 2.0), DomainError);
}

}  // namespace
}  // namespace fockent
