// Copyright 2026 The QEP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "qep/qho.hpp"
#include "test_support.hpp"

namespace qep {
namespace {

using testing::fock_oracle;
using testing::random_qho;

QhoSpec single(double kappa) {
  QhoSpec s;
  s.masses = Vector::Ones(1);
  s.pinning = Vector::Constant(1, kappa);
  s.anchors = Vector::Zero(1);
  return s;
}

TEST(QhoGroundState, TextbookOscillator) {
  const auto g = solve_ground_state(single(1.0));
  EXPECT_NEAR(g.mean[0], 0.0, 1e-15);
  EXPECT_NEAR(g.covariance(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(g.ground_energy, 0.5, 1e-14);
  EXPECT_NEAR(g.frequencies[0], 1.0, 1e-14);
}

TEST(QhoGroundState, StiffnessScaling) {
  const auto g = solve_ground_state(single(4.0));
  EXPECT_NEAR(g.frequencies[0], 2.0, 1e-14);
  EXPECT_NEAR(g.covariance(0, 0), 0.25, 1e-14);
  EXPECT_NEAR(g.ground_energy, 1.0, 1e-14);
}

TEST(QhoGroundState, MeanSolvesStiffnessSystem) {
  CounterRng rng(1);
  const QhoSpec s = random_qho(rng, 4);
  const auto g = solve_ground_state(s);
  const QuadraticPotential v = assemble_potential(s, Vector(), 0.0);
  EXPECT_LE((v.stiffness * g.mean - s.pinning.cwiseProduct(s.anchors)).norm(), 1e-12);
  EXPECT_LE((v.stiffness - v.stiffness.transpose()).norm(), 0.0);
}

TEST(QhoGroundState, CovarianceSymmetricPositiveDefinite) {
  CounterRng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = solve_ground_state(random_qho(rng, 2 + trial % 4));
    EXPECT_LE((g.covariance - g.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(g.covariance).eigenvalues().minCoeff(),
              0.0);
  }
}

TEST(QhoGroundState, EnergyIsZeroPointPlusPotentialAtMean) {
  CounterRng rng(3);
  const QhoSpec s = random_qho(rng, 3);
  const auto g = solve_ground_state(s);
  const QuadraticPotential v = assemble_potential(s, Vector(), 0.0);
  const double vmean = 0.5 * g.mean.dot(v.stiffness * g.mean) - v.linear.dot(g.mean) + v.constant;
  EXPECT_NEAR(g.ground_energy, 0.5 * s.hbar * g.frequencies.sum() + vmean, 1e-12);
}

TEST(QhoGroundState, MatchesTruncatedFockOracle) {
  CounterRng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    QhoSpec s = random_qho(rng, 2);
    s.anchors.setZero();
    const QuadraticPotential v = assemble_potential(s, Vector(), 0.0);
    const auto g = solve_ground_state(s.masses, v, s.hbar);
    const auto f = fock_oracle(s.masses, v, s.hbar, 40);
    EXPECT_NEAR(g.ground_energy, f.energy, 1e-6);
    EXPECT_LE((g.covariance - f.covariance).cwiseAbs().maxCoeff(), 1e-6);
    const double d = qho_derivative_expectation(g, 0, 1);
    const double fd = 0.5 * (f.covariance(0, 0) + f.covariance(1, 1) - 2 * f.covariance(0, 1) +
                             std::pow(f.mean[0] - f.mean[1], 2));
    EXPECT_NEAR(d, fd, 1e-6);
  }
}

TEST(QhoGroundState, NoPinningIsModelError) {
  QhoSpec s;
  s.masses = Vector::Ones(2);
  s.pinning = Vector::Zero(2);
  s.anchors = Vector::Zero(2);
  s.springs = {{0, 1, 1.0}};
  try {
    solve_ground_state(s);
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("pinning"), std::string::npos);
  }
}

TEST(QhoDerivative, SymmetricPairHasEqualMeans) {
  QhoSpec s;
  s.masses = Vector::Ones(2);
  s.pinning = Vector::Ones(2);
  s.anchors = Vector::Constant(2, 0.3);
  s.springs = {{0, 1, 0.7}};
  const auto g = solve_ground_state(s);
  EXPECT_NEAR(g.mean[0], g.mean[1], 1e-15);
  EXPECT_NEAR(qho_derivative_expectation(g, 0, 1),
              0.5 * (2 * g.covariance(0, 0) - 2 * g.covariance(0, 1)), 1e-15);
}

TEST(QhoDerivative, AnchorMomentIdentity) {
  QhoSpec s = single(2.0);
  s.anchors[0] = 0.4;
  const auto g = solve_ground_state(s);
  const double a = -0.3;
  EXPECT_NEAR(qho_anchor_moment(g, 0, a),
              0.5 * (g.covariance(0, 0) + std::pow(g.mean[0] - a, 2)), 1e-15);
}

TEST(QhoDerivative, HellmannFeynmanOnTenSpecs) {
  CounterRng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const QhoSpec s = random_qho(rng, 2 + trial % 4);
    const auto g = solve_ground_state(s);
    const Vector w = s.weights();
    for (Index k = 0; k < w.size(); ++k) {
      Vector wp = w, wm = w;
      wp[k] += 1e-6;
      wm[k] -= 1e-6;
      const double fd = (solve_ground_state(s.with_weights(wp)).ground_energy -
                         solve_ground_state(s.with_weights(wm)).ground_energy) /
                        2e-6;
      const auto& sp = s.springs[static_cast<std::size_t>(k)];
      EXPECT_NEAR(fd, qho_derivative_expectation(g, sp.i, sp.j), 1e-6);
    }
  }
}

TEST(QhoSampling, DiagonalCovarianceStatistics) {
  QhoSpec s;
  s.masses = (Vector(2) << 1.0, 2.0).finished();
  s.pinning = (Vector(2) << 1.0, 3.0).finished();
  s.anchors = (Vector(2) << 0.5, -1.0).finished();
  const auto g = solve_ground_state(s);
  CounterRng rng(6);
  const Index t = 100000;
  const Matrix r = sample_positions(g, t, rng);
  ASSERT_EQ(r.rows(), t);
  ASSERT_EQ(r.cols(), 2);
  const Vector mean = r.colwise().mean().transpose();
  for (Index i = 0; i < 2; ++i) {
    const double var = (r.col(i).array() - mean[i]).square().sum() / (t - 1);
    EXPECT_NEAR(var, g.covariance(i, i), 0.05 * g.covariance(i, i));
    EXPECT_NEAR(mean[i], g.mean[i], 3.0 * std::sqrt(g.covariance(i, i) / t));
  }
}

TEST(QhoSampling, ShotMeanOfDerivativeConverges) {
  CounterRng rng(7);
  const QhoSpec s = random_qho(rng, 3);
  const auto g = solve_ground_state(s);
  const Index t = 20000;
  const Matrix r = sample_positions(g, t, rng);
  const Vector h = 0.5 * (r.col(0) - r.col(2)).array().square().matrix();
  const double m = h.mean();
  const double sd = std::sqrt((h.array() - m).square().sum() / (t - 1));
  EXPECT_NEAR(m, qho_derivative_expectation(g, 0, 2), 3.0 * sd / std::sqrt(t));
}

TEST(QhoSampling, SingleShotShape) {
  CounterRng rng(8);
  const auto g = solve_ground_state(random_qho(rng, 5));
  const Matrix r = sample_positions(g, 1, rng);
  EXPECT_EQ(r.rows(), 1);
  EXPECT_EQ(r.cols(), 5);
}

TEST(QhoCost, ExpectationMatchesSampleMean) {
  CounterRng rng(9);
  QhoSpec s = random_qho(rng, 3);
  s.outputs = {{2, -1}, {0, 1}};
  const Vector y = (Vector(2) << 0.3, -0.2).finished();
  const auto g = solve_ground_state(s);
  const Index t = 50000;
  const Matrix r = sample_positions(g, t, rng);
  Vector c(t);
  for (Index i = 0; i < t; ++i) c[i] = qho_cost_value(s, r.row(i).transpose(), y);
  const double sd = std::sqrt((c.array() - c.mean()).square().sum() / (t - 1));
  EXPECT_NEAR(c.mean(), qho_cost_expectation(s, g, y), 3.0 * sd / std::sqrt(t));
}

TEST(QhoCost, NudgedPotentialAddsCostExactly) {
  CounterRng rng(10);
  QhoSpec s = random_qho(rng, 3);
  s.outputs = {{1, 2}};
  const Vector y = Vector::Constant(1, 0.4);
  const QuadraticPotential v0 = assemble_potential(s, y, 0.0);
  const QuadraticPotential v1 = assemble_potential(s, y, 0.3);
  const Vector r = (Vector(3) << 0.1, -0.7, 1.2).finished();
  const auto eval = [&](const QuadraticPotential& v) {
    return 0.5 * r.dot(v.stiffness * r) - v.linear.dot(r) + v.constant;
  };
  EXPECT_NEAR(eval(v1) - eval(v0), 0.3 * qho_cost_value(s, r, y), 1e-14);
}

TEST(QhoSpec, Validation) {
  QhoSpec s = single(1.0);
  s.springs = {{0, 0, 1.0}};
  EXPECT_THROW(s.validate(), DomainError);
  s = single(-1.0);
  EXPECT_THROW(s.validate(), DomainError);
}

}  // namespace
}  // namespace qep
