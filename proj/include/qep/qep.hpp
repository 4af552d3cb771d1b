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

#ifndef QEP_QEP_HPP_
#define QEP_QEP_HPP_

#include <memory>
#include <string>
#include <vector>

#include "qep/ep.hpp"
#include "qep/hilbert.hpp"
#include "qep/qho.hpp"
#include "qep/rng.hpp"
#include "qep/tfim.hpp"

namespace qep {

enum class QepEstimator { kSampled, kExactExpectation };
enum class DegeneracyPolicy { kError, kWarn };

struct QepConfig {
  double beta = 0.1;
  Index shots = 1000;
  QepEstimator estimator = QepEstimator::kExactExpectation;
  NudgeMode nudge = NudgeMode::kOneSidedPositive;
  /// Target eigenstate: 0 is the ground state.
  Index eigen_index = 0;
  double eta = 0.05;
  std::uint64_t seed = 0;
  DegeneracyPolicy degeneracy = DegeneracyPolicy::kError;
  /// Gap below which the target eigenstate counts as degenerate.
  double gap_tolerance = 1e-8;
  /// Substeps of the nudge ramp used to follow an excited state.
  int ramp_steps = 16;
  /// Overlap below which the followed state is flagged as lost.
  double min_overlap = 0.9;
  EigenOptions eigen;

  void validate() const;
};

/// Eigenstate of a nudged Hamiltonian, prepared as often as needed.
///
/// The derivative observables of the system's weights are grouped into
/// commuting families; the cost observable belongs to family
/// `cost_family()`. A shot of family f is one preparation followed by one
/// joint collapse of every observable in f.
class PreparedState {
 public:
  virtual ~PreparedState() = default;

  /// Eigenvalue of H + beta C at this state.
  virtual double energy() const = 0;
  virtual double cost_expectation() const = 0;
  /// <dH/dw_k> for every weight.
  virtual Vector derivative_expectations() const = 0;
  /// Gap to the nearest other level.
  virtual double gap() const = 0;

  virtual Index family_count() const = 0;
  virtual const std::vector<Index>& family_weights(Index f) const = 0;
  virtual Index cost_family() const = 0;
  /// T shots of family f. Row t of `derivatives` holds the outcomes of the
  /// family's weights (family_weights order); `cost` holds the cost outcome
  /// of each shot when f is the cost family.
  virtual void sample_family(Index f, Index shots, CounterRng& rng,
                             Matrix& derivatives, Vector& cost) const = 0;
};

struct PrepareResult {
  std::unique_ptr<PreparedState> state;
  /// Smallest overlap between consecutive states of an excited-state ramp
  /// (1 for the ground state).
  double min_overlap = 1.0;
  std::vector<std::string> warnings;
};

/// A quantum model with trainable weights.
class QuantumSystem {
 public:
  virtual ~QuantumSystem() = default;

  virtual Index weight_count() const = 0;
  virtual std::vector<std::string> weight_names() const = 0;
  virtual std::vector<std::optional<WeightBounds>> weight_bounds() const = 0;

  /// Eigenstate `cfg.eigen_index` of H(w, x) + beta C(y), with the
  /// degeneracy policy of `cfg` applied.
  virtual PrepareResult prepare(const Vector& w, const Vector& x,
                                const Vector& y, double beta,
                                const QepConfig& cfg) const = 0;

  WeightVector make_weights(Vector values) const;
};

class TfimSystem final : public QuantumSystem {
 public:
  explicit TfimSystem(TfimSpec spec);

  const TfimSpec& spec() const { return spec_; }
  Index weight_count() const override { return spec_.weight_count(); }
  std::vector<std::string> weight_names() const override {
    return spec_.weight_names();
  }
  std::vector<std::optional<WeightBounds>> weight_bounds() const override {
    return spec_.weight_bounds();
  }
  PrepareResult prepare(const Vector& w, const Vector& x, const Vector& y,
                        double beta, const QepConfig& cfg) const override;

  /// H(w, x) + beta C(y).
  HermitianOperator nudged_hamiltonian(const Vector& w, const Vector& x,
                                       const Vector& y, double beta) const;

 private:
  TfimSpec spec_;
  std::vector<HermitianOperator> derivatives_;
  CommutingFamilies families_;
};

class QhoSystem final : public QuantumSystem {
 public:
  explicit QhoSystem(QhoSpec spec);

  const QhoSpec& spec() const { return spec_; }
  Index weight_count() const override { return spec_.weight_count(); }
  std::vector<std::string> weight_names() const override {
    return spec_.weight_names();
  }
  std::vector<std::optional<WeightBounds>> weight_bounds() const override;
  /// Ground state only; eigen_index > 0 raises CapacityError.
  PrepareResult prepare(const Vector& w, const Vector& x, const Vector& y,
                        double beta, const QepConfig& cfg) const override;

 private:
  QhoSpec spec_;
};

/// Eigenstate k of h0 + beta c, followed from beta = 0 by maximal-overlap
/// continuation over `steps` substeps. Throws TrackingError when the
/// followed level changes rank or meets a neighbour closer than `gap_tol`.
struct TrackedEigenstate {
  EigenSolution solution;
  double min_overlap = 1.0;
};
TrackedEigenstate track_eigenstate(const HermitianOperator& h0,
                                   const HermitianOperator& c, double beta,
                                   Index k, int steps, double gap_tol);

/// Measurement outcomes behind one gradient estimate.
struct ShotPhase {
  double beta = 0.0;
  /// T x M derivative outcomes, column k for weight k.
  Matrix outcomes;
  /// Cost outcome of each shot of the cost family.
  Vector cost;
};

struct ShotLedger {
  Index shots_per_phase = 0;
  std::vector<std::string> weight_names;
  std::vector<Index> family_of_weight;
  /// Free phase first, then the nudged phase(s).
  std::vector<ShotPhase> phases;
  /// Preparations consumed per family, summed over phases.
  std::vector<long> preparations_per_family;

  long total_preparations() const;
};

struct QepResult {
  GradientEstimate estimate;
  ShotLedger ledger;  // empty in exact-expectation mode
  std::vector<std::string> warnings;
  double min_overlap = 1.0;
};

/// Quantum EP estimate of d<C>/dw at eigenstate cfg.eigen_index.
///
/// One-sided: (1/b)[<dH/dw>_b - <dH/dw>_0]; symmetric:
/// (1/2beta)[<dH/dw>_beta - <dH/dw>_-beta]. In sampled mode each bracket is
/// a mean over cfg.shots outcomes per phase; every shot of every family
/// re-prepares the state. The update is w <- w - eta * estimate.
QepResult qep_gradient(const QuantumSystem& system, const Vector& w,
                       const Vector& x, const Vector& y, const QepConfig& cfg,
                       CounterRng& rng);
QepResult qep_gradient(const QuantumSystem& system, const Vector& w,
                       const Vector& x, const Vector& y, const QepConfig& cfg);

/// Same estimator on an excited state (cfg.eigen_index > 0 allowed).
QepResult excited_state_qep(const QuantumSystem& system, const Vector& w,
                            const Vector& x, const Vector& y,
                            const QepConfig& cfg);

/// (1/beta)[E^beta - E^0] at the target eigenstate.
double qep_contrastive_loss(const QuantumSystem& system, const Vector& w,
                            const Vector& x, const Vector& y, double beta,
                            const QepConfig& cfg = {});

/// <C(y)> at the free target eigenstate.
double qep_cost(const QuantumSystem& system, const Vector& w, const Vector& x,
                const Vector& y, const QepConfig& cfg = {});

/// Central finite difference of w -> qep_cost, re-solving at each step.
Vector qep_cost_gradient_oracle(const QuantumSystem& system, const Vector& w,
                                const Vector& x, const Vector& y,
                                double fd_step, const QepConfig& cfg = {});

double qep_mean_cost(const QuantumSystem& system, const Vector& w,
                     const std::vector<Example>& data, const QepConfig& cfg);

/// Sequential per-example training with the monitoring cost evaluated
/// exactly. Row 0 holds the initial cost; model, convergence and tracking
/// errors abort with a partial record.
TrainResult qep_train(const QuantumSystem& system, WeightVector w,
                      const std::vector<Example>& data, const QepConfig& cfg,
                      long epochs, const EpochCallback& on_epoch = {});

}  // namespace qep

#endif  // QEP_QEP_HPP_
