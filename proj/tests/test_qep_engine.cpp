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

#include "qep/qep.hpp"
#include "test_support.hpp"

namespace qep {
namespace {

using testing::random_qho;
using testing::random_signs;
using testing::random_tfim;

// Two spins with a single trainable coupling and a cost equal to c times the
// identity, so every nudge shifts all levels by the same amount.
class ConstantCostSystem final : public QuantumSystem {
 public:
  explicit ConstantCostSystem(double c) : c_(c) {
    spec_.n = 2;
    spec_.couplings = {{0, 1, 0.0}};
    spec_.fields = (Vector(2) << 0.8, 1.1).finished();
    derivative_.push_back(derivative_observable(spec_, 0));
    derivative_.push_back(c_ * HermitianOperator::identity(4));
  }
  Index weight_count() const override { return 1; }
  std::vector<std::string> weight_names() const override { return {"J(0,1)"}; }
  std::vector<std::optional<WeightBounds>> weight_bounds() const override {
    return {std::nullopt};
  }
  PrepareResult prepare(const Vector& w, const Vector&, const Vector&, double beta,
                        const QepConfig& cfg) const override {
    TfimSpec s = spec_;
    s.couplings[0].value = w[0];
    const HermitianOperator h = build_hamiltonian(s, Vector()) +
                                beta * c_ * HermitianOperator::identity(4);
    PrepareResult r;
    r.state = std::make_unique<State>(ground_state(h, cfg.eigen), derivative_, c_);
    return r;
  }

 private:
  class State final : public PreparedState {
   public:
    State(EigenSolution sol, const std::vector<HermitianOperator>& ops, double c)
        : sol_(std::move(sol)), ops_(ops), c_(c) {}
    double energy() const override { return sol_.eigenvalue; }
    double cost_expectation() const override { return c_; }
    Vector derivative_expectations() const override {
      return Vector::Constant(1, expectation(ops_[0], sol_.eigenvector));
    }
    double gap() const override { return sol_.gap_to_next; }
    Index family_count() const override { return 1; }
    const std::vector<Index>& family_weights(Index) const override { return ids_; }
    Index cost_family() const override { return 0; }
    void sample_family(Index, Index shots, CounterRng& rng, Matrix& d,
                       Vector& cost) const override {
      const FamilySampler sampler(ops_, sol_.eigenvector);
      d.resize(shots, 1);
      cost.resize(shots);
      for (Index t = 0; t < shots; ++t) {
        const Vector v = sampler.draw_outcomes(rng);
        d(t, 0) = v[0];
        cost[t] = v[1];
      }
    }

   private:
    EigenSolution sol_;
    const std::vector<HermitianOperator>& ops_;
    double c_;
    std::vector<Index> ids_{0};
  };

  TfimSpec spec_;
  std::vector<HermitianOperator> derivative_;
  double c_;
};

QepConfig exact(double beta, NudgeMode mode) {
  QepConfig cfg;
  cfg.beta = beta;
  cfg.nudge = mode;
  return cfg;
}

struct Instance {
  TfimSystem system;
  Vector w, x, y;
};

Instance random_instance(CounterRng& rng, int n) {
  TfimSpec spec = random_tfim(rng, n);
  Vector x(2);
  x << testing::uniform(rng, -0.3, 0.3), testing::uniform(rng, -0.3, 0.3);
  const Vector y = random_signs(rng, spec.label_count());
  const Vector w = spec.weights();
  return {TfimSystem(std::move(spec)), w, x, y};
}

TEST(QepConfig, Validation) {
  QepConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.ramp_steps = 4;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = QepConfig{};
  cfg.beta = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = QepConfig{};
  cfg.shots = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(QepGradient, ExactMatchesOracleWithinOrderBeta) {
  CounterRng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = random_instance(rng, 4);
    const Vector oracle = qep_cost_gradient_oracle(inst.system, inst.w, inst.x, inst.y, 1e-5);
    const double scale = std::max(1.0, oracle.norm());
    const Vector e1 = qep_gradient(inst.system, inst.w, inst.x, inst.y,
                                   exact(1e-3, NudgeMode::kOneSidedPositive))
                          .estimate.values;
    const Vector e2 = qep_gradient(inst.system, inst.w, inst.x, inst.y,
                                   exact(5e-4, NudgeMode::kOneSidedPositive))
                          .estimate.values;
    EXPECT_LE((e1 - oracle).norm(), 1e-1 * scale);
    EXPECT_LT((e2 - oracle).norm(), (e1 - oracle).norm());
  }
}

TEST(QepGradient, NegativeOneSidedAlsoConverges) {
  CounterRng rng(2);
  const auto inst = random_instance(rng, 4);
  const Vector oracle = qep_cost_gradient_oracle(inst.system, inst.w, inst.x, inst.y, 1e-5);
  const Vector e = qep_gradient(inst.system, inst.w, inst.x, inst.y,
                                exact(1e-4, NudgeMode::kOneSidedNegative))
                       .estimate.values;
  EXPECT_LE((e - oracle).norm(), 1e-2 * std::max(1.0, oracle.norm()));
}

TEST(QepGradient, ConstantCostGivesZeroAndLossEqualsConstant) {
  const ConstantCostSystem sys(0.75);
  const Vector w = Vector::Constant(1, 0.6);
  for (NudgeMode mode : {NudgeMode::kOneSidedPositive, NudgeMode::kSymmetric}) {
    const auto g = qep_gradient(sys, w, Vector(), Vector(), exact(0.3, mode));
    EXPECT_NEAR(g.estimate.values[0], 0.0, 1e-12);
  }
  for (double beta : {0.2, -0.2, 0.05}) {
    EXPECT_NEAR(qep_contrastive_loss(sys, w, Vector(), Vector(), beta), 0.75, 1e-12);
  }
}

TEST(QepGradient, SampledWithinThreeStandardErrors) {
  CounterRng rng(3);
  const auto inst = random_instance(rng, 4);
  QepConfig cfg = exact(0.1, NudgeMode::kOneSidedPositive);
  const Vector ex = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg).estimate.values;
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 10000;
  cfg.seed = 99;
  const QepResult s = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg);
  const double span = s.ledger.phases[1].beta - s.ledger.phases[0].beta;
  for (Index k = 0; k < ex.size(); ++k) {
    double var = 0.0;
    for (const auto& phase : s.ledger.phases) {
      const auto col = phase.outcomes.col(k).array();
      var += (col - col.mean()).square().sum() / (cfg.shots - 1) / cfg.shots;
    }
    EXPECT_NEAR(s.estimate.values[k], ex[k], 3.0 * std::sqrt(var) / span + 1e-12) << k;
  }
}

TEST(QepGradient, SampledIsUnbiasedOverRepetitions) {
  CounterRng rng(4);
  const auto inst = random_instance(rng, 3);
  QepConfig cfg = exact(0.2, NudgeMode::kSymmetric);
  const Vector ex = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg).estimate.values;
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 200;
  const int reps = 200;
  Matrix est(reps, ex.size());
  CounterRng stream(5);
  for (int r = 0; r < reps; ++r) {
    CounterRng child = stream.split(static_cast<std::uint64_t>(r));
    est.row(r) = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg, child)
                     .estimate.values.transpose();
  }
  for (Index k = 0; k < ex.size(); ++k) {
    const double mean = est.col(k).mean();
    const double sd = std::sqrt((est.col(k).array() - mean).square().sum() / (reps - 1));
    EXPECT_NEAR(mean, ex[k], 3.0 * sd / std::sqrt(reps) + 1e-12) << k;
  }
}

TEST(QepGradient, SameSeedSameSamples) {
  CounterRng rng(6);
  const auto inst = random_instance(rng, 3);
  QepConfig cfg = exact(0.1, NudgeMode::kOneSidedPositive);
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 50;
  cfg.seed = 12;
  const Vector a = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg).estimate.values;
  const Vector b = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg).estimate.values;
  EXPECT_EQ(a, b);
}

TEST(QepLedger, EconomyAndLocality) {
  CounterRng rng(7);
  const auto inst = random_instance(rng, 4);
  QepConfig cfg = exact(0.1, NudgeMode::kOneSidedPositive);
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 300;
  const QepResult r = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg);
  const ShotLedger& l = r.ledger;
  ASSERT_EQ(l.phases.size(), 2u);
  EXPECT_EQ(l.phases[0].beta, 0.0);
  EXPECT_EQ(l.phases[1].beta, 0.1);
  // Couplings and the cost share one preparation per shot, fields one more.
  ASSERT_EQ(l.preparations_per_family.size(), 2u);
  EXPECT_EQ(l.preparations_per_family[0], 2 * 300);
  EXPECT_EQ(l.preparations_per_family[1], 2 * 300);
  EXPECT_EQ(l.total_preparations(), 4 * 300);
  for (Index k = 0; k < 6; ++k) EXPECT_EQ(l.family_of_weight[k], 0);
  for (Index k = 6; k < 10; ++k) EXPECT_EQ(l.family_of_weight[k], 1);
  for (const auto& p : l.phases) {
    EXPECT_EQ(p.outcomes.rows(), 300);
    EXPECT_EQ(p.cost.size(), 300);
    EXPECT_TRUE(((p.outcomes.array() == 1.0) || (p.outcomes.array() == -1.0)).all());
  }
  for (Index k = 0; k < 10; ++k) {
    const double local =
        (l.phases[1].outcomes.col(k).mean() - l.phases[0].outcomes.col(k).mean()) / 0.1;
    EXPECT_DOUBLE_EQ(r.estimate.values[k], local);
  }
}

TEST(QepLedger, SymmetricModeUsesTwoNudgedPhases) {
  CounterRng rng(8);
  const auto inst = random_instance(rng, 3);
  QepConfig cfg = exact(0.1, NudgeMode::kSymmetric);
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 100;
  const QepResult r = qep_gradient(inst.system, inst.w, inst.x, inst.y, cfg);
  EXPECT_EQ(r.ledger.phases[0].beta, -0.1);
  EXPECT_EQ(r.ledger.phases[1].beta, 0.1);
  EXPECT_EQ(r.ledger.shots_per_phase, 100);
}

TEST(QepContrastive, SandwichAndMonotoneLimit) {
  CounterRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 4);
    const double c = qep_cost(inst.system, inst.w, inst.x, inst.y);
    double last_pos = std::numeric_limits<double>::infinity(), last_neg = last_pos;
    for (double beta : {0.2, 0.1, 0.05}) {
      const double lo = qep_contrastive_loss(inst.system, inst.w, inst.x, inst.y, beta);
      const double hi = qep_contrastive_loss(inst.system, inst.w, inst.x, inst.y, -beta);
      EXPECT_LE(lo, c);
      EXPECT_GE(hi, c);
      EXPECT_LT(c - lo, last_pos);
      EXPECT_LT(hi - c, last_neg);
      last_pos = c - lo;
      last_neg = hi - c;
    }
  }
}

TEST(QepDegeneracy, PolicyControlsOutcome) {
  TfimSpec spec;
  spec.n = 2;
  spec.couplings = {{0, 1, 1.0}};
  spec.fields = Vector::Zero(2);
  spec.output_spins = {1};
  const TfimSystem sys(spec);
  // The free phase of the one-sided estimator sits on the degenerate
  // classical ground pair.
  QepConfig cfg = exact(0.1, NudgeMode::kOneSidedPositive);
  cfg.degeneracy = DegeneracyPolicy::kError;
  EXPECT_THROW(qep_gradient(sys, spec.weights(), Vector(), Vector::Ones(1), cfg), ModelError);
  cfg.degeneracy = DegeneracyPolicy::kWarn;
  const auto r = qep_gradient(sys, spec.weights(), Vector(), Vector::Ones(1), cfg);
  EXPECT_FALSE(r.warnings.empty());
}

TfimSpec two_spin(double j, double h0, double h1) {
  TfimSpec spec;
  spec.n = 2;
  spec.couplings = {{0, 1, j}};
  spec.fields = (Vector(2) << h0, h1).finished();
  spec.output_pairs = {{0, 1}};
  spec.output_spins = {1};
  return spec;
}

TEST(ExcitedState, IndexZeroReducesToGroundState) {
  const TfimSystem sys(two_spin(0.7, 0.9, 0.4));
  const Vector w = sys.spec().weights(), y = (Vector(2) << 1, -1).finished();
  QepConfig cfg = exact(1e-3, NudgeMode::kSymmetric);
  EXPECT_EQ(excited_state_qep(sys, w, Vector(), y, cfg).estimate.values,
            qep_gradient(sys, w, Vector(), y, cfg).estimate.values);
}

TEST(ExcitedState, FirstExcitedMatchesOracle) {
  const TfimSystem sys(two_spin(0.7, 0.9, 0.4));
  const Vector w = sys.spec().weights(), y = (Vector(2) << 1, -1).finished();
  QepConfig cfg = exact(1e-3, NudgeMode::kOneSidedPositive);
  cfg.eigen_index = 1;
  const Vector oracle = qep_cost_gradient_oracle(sys, w, Vector(), y, 1e-5, cfg);
  ASSERT_GT(oracle.norm(), 1e-3);
  const auto a = excited_state_qep(sys, w, Vector(), y, cfg);
  cfg.beta = 5e-4;
  const auto b = excited_state_qep(sys, w, Vector(), y, cfg);
  const double ea = (a.estimate.values - oracle).norm();
  const double eb = (b.estimate.values - oracle).norm();
  EXPECT_LE(ea, 1e-2 * oracle.norm());
  EXPECT_NEAR(ea / eb, 2.0, 0.4);
  EXPECT_GT(a.min_overlap, 0.9);
  cfg.nudge = NudgeMode::kSymmetric;
  const auto s = excited_state_qep(sys, w, Vector(), y, cfg);
  EXPECT_LE((s.estimate.values - oracle).norm(), 1e-5 * oracle.norm() + 1e-8);
}

TEST(ExcitedState, EngineeredCrossingRaisesTrackingError) {
  // Equal fields make the antisymmetric singlet (energy +J) and the
  // odd-parity triplet state (energy -J) exact eigenstates that the
  // correlator cost shifts by different amounts, so level 1 crosses level 2
  // at beta = 2J.
  TfimSpec spec = two_spin(0.1, 1.0, 1.0);
  spec.output_spins.clear();
  const TfimSystem sys(spec);
  QepConfig cfg = exact(1.0, NudgeMode::kOneSidedPositive);
  cfg.eigen_index = 1;
  try {
    excited_state_qep(sys, spec.weights(), Vector(), Vector::Constant(1, -1.0), cfg);
    FAIL() << "expected TrackingError";
  } catch (const TrackingError& e) {
    EXPECT_LE(e.beta_lo(), 0.2);
    EXPECT_GE(e.beta_hi(), 0.2);
  }
  cfg.beta = 0.1;
  EXPECT_NO_THROW(
      excited_state_qep(sys, spec.weights(), Vector(), Vector::Constant(1, -1.0), cfg));
}

TEST(QepTrain, ZeroGradientSystemKeepsWeights) {
  const ConstantCostSystem sys(0.5);
  const std::vector<Example> data{{Vector(), Vector()}, {Vector(), Vector()}};
  QepConfig cfg = exact(0.1, NudgeMode::kSymmetric);
  const auto r = qep_train(sys, sys.make_weights(Vector::Constant(1, 0.3)), data, cfg, 5);
  ASSERT_EQ(r.trajectory.size(), 6u);
  for (const auto& w : r.trajectory) EXPECT_NEAR(w[0], 0.3, 1e-14);
}

TEST(QepTrain, EpochZeroRowAndShotCounts) {
  CounterRng rng(10);
  const auto inst = random_instance(rng, 3);
  const std::vector<Example> data{{inst.x, inst.y}};
  QepConfig cfg = exact(0.1, NudgeMode::kOneSidedPositive);
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 20;
  const auto r = qep_train(inst.system, inst.system.make_weights(inst.w), data, cfg, 2);
  ASSERT_EQ(r.metrics.size(), 3u);
  EXPECT_EQ(r.metrics[0].epoch, 0);
  EXPECT_EQ(r.metrics[0].shots, 0);
  EXPECT_EQ(r.metrics[1].shots, 4 * 20);
}

TEST(QhoQep, ExactMatchesOracle) {
  CounterRng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    QhoSpec spec = random_qho(rng, 3);
    spec.input_particles = {0};
    spec.outputs = {{2, -1}, {1, 2}};
    const QhoSystem sys(spec);
    const Vector w = spec.weights(), x = Vector::Constant(1, 0.4);
    const Vector y = (Vector(2) << 0.2, -0.3).finished();
    const Vector oracle = qep_cost_gradient_oracle(sys, w, x, y, 1e-5);
    const Vector est =
        qep_gradient(sys, w, x, y, exact(1e-3, NudgeMode::kSymmetric)).estimate.values;
    for (Index k = 0; k < w.size(); ++k) {
      EXPECT_NEAR(est[k], oracle[k], 1e-3 * std::max(std::abs(oracle[k]), 1e-3)) << k;
    }
  }
}

TEST(QhoQep, SampledWithinThreeStandardErrors) {
  CounterRng rng(12);
  QhoSpec spec = random_qho(rng, 3);
  spec.outputs = {{2, -1}};
  const QhoSystem sys(spec);
  const Vector w = spec.weights(), y = Vector::Constant(1, 0.5);
  QepConfig cfg = exact(0.2, NudgeMode::kSymmetric);
  const Vector ex = qep_gradient(sys, w, Vector(), y, cfg).estimate.values;
  cfg.estimator = QepEstimator::kSampled;
  cfg.shots = 20000;
  const auto s = qep_gradient(sys, w, Vector(), y, cfg);
  EXPECT_EQ(s.ledger.preparations_per_family.size(), 1u);
  for (Index k = 0; k < w.size(); ++k) {
    double var = 0.0;
    for (const auto& phase : s.ledger.phases) {
      const auto col = phase.outcomes.col(k).array();
      var += (col - col.mean()).square().sum() / (cfg.shots - 1) / cfg.shots;
    }
    EXPECT_NEAR(s.estimate.values[k], ex[k], 3.0 * std::sqrt(var) / 0.4) << k;
  }
}

TEST(QhoQep, ExcitedStatesUnsupported) {
  CounterRng rng(13);
  const QhoSpec spec = random_qho(rng, 2);
  const QhoSystem sys(spec);
  QepConfig cfg;
  cfg.eigen_index = 1;
  EXPECT_THROW(excited_state_qep(sys, spec.weights(), Vector(), Vector::Zero(1), cfg),
               CapacityError);
}

}  // namespace
}  // namespace qep
