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

#include "qep/qep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

namespace qep {

void QepConfig::validate() const {
  if (!std::isfinite(beta) || beta == 0.0) {
    throw DomainError("beta must be finite and nonzero");
  }
  if (shots < 1) throw DomainError("shots must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("eta must be > 0");
  if (eigen_index < 0) throw DomainError("eigen_index must be >= 0");
  if (!(gap_tolerance >= 0.0)) throw DomainError("gap_tolerance must be >= 0");
  if (ramp_steps < 8) throw DomainError("ramp_steps must be >= 8");
  if (!(min_overlap > 0.0 && min_overlap <= 1.0)) {
    throw DomainError("min_overlap must lie in (0, 1]");
  }
}

WeightVector QuantumSystem::make_weights(Vector values) const {
  require_size(values.size(), weight_count(), "weights");
  return WeightVector{std::move(values), weight_names(), weight_bounds()};
}

long ShotLedger::total_preparations() const {
  long total = 0;
  for (long p : preparations_per_family) total += p;
  return total;
}

// ---------------------------------------------------------- continuation

TrackedEigenstate track_eigenstate(const HermitianOperator& h0,
                                   const HermitianOperator& c, double beta,
                                   Index k, int steps, double gap_tol) {
  if (steps < 1) throw DomainError("ramp needs at least one step");
  const Index d = h0.dimension();
  const auto check_gap = [&](const Vector& values, double lo, double hi) {
    const double below = k > 0 ? values[k] - values[k - 1]
                               : std::numeric_limits<double>::infinity();
    const double above = k + 1 < d ? values[k + 1] - values[k]
                                   : std::numeric_limits<double>::infinity();
    if (std::min(below, above) < gap_tol) {
      throw TrackingError("level " + std::to_string(k) +
                              " meets a neighbour between beta = " +
                              std::to_string(lo) + " and " + std::to_string(hi),
                          lo, hi);
    }
  };

  TrackedEigenstate out;
  Spectrum current = full_spectrum(h0);
  if (k >= d) throw DomainError("eigenstate index out of range");
  check_gap(current.values, 0.0, 0.0);
  CVector followed = current.vectors.col(k);
  double prev = 0.0;
  for (int m = 1; m <= steps; ++m) {
    const double b = beta * static_cast<double>(m) / steps;
    current = full_spectrum(h0 + b * c);
    const Vector overlaps = (current.vectors.adjoint() * followed).cwiseAbs();
    Index best = 0;
    overlaps.maxCoeff(&best);
    if (best != k) {
      throw TrackingError("level " + std::to_string(k) + " crosses level " +
                              std::to_string(best) + " between beta = " +
                              std::to_string(prev) + " and " + std::to_string(b),
                          prev, b);
    }
    check_gap(current.values, prev, b);
    out.min_overlap = std::min(out.min_overlap, overlaps[k]);
    followed = current.vectors.col(k);
    prev = b;
  }
  out.solution = eigenstate_k(h0 + beta * c, k,
                              EigenOptions{.dense_limit = d});
  return out;
}

// ------------------------------------------------------------------ TFIM

namespace {

void apply_degeneracy_policy(double gap, const QepConfig& cfg, double beta,
                             std::vector<std::string>& warnings) {
  if (gap >= cfg.gap_tolerance) return;
  const std::string msg = "target eigenstate " + std::to_string(cfg.eigen_index) +
                          " is degenerate at beta = " + std::to_string(beta) +
                          " (gap " + std::to_string(gap) + ")";
  if (cfg.degeneracy == DegeneracyPolicy::kError) throw ModelError(msg);
  warnings.push_back(msg);
}

class TfimState final : public PreparedState {
 public:
  TfimState(StateVector psi, double energy, double gap,
            const std::vector<HermitianOperator>& derivatives,
            const CommutingFamilies& families,
            std::optional<HermitianOperator> cost)
      : psi_(std::move(psi)),
        energy_(energy),
        gap_(gap),
        derivatives_(derivatives),
        cost_(std::move(cost)) {
    weights_ = {families.zz, families.x};
  }

  double energy() const override { return energy_; }
  double cost_expectation() const override {
    if (!cost_) throw DomainError("no cost observable (empty target)");
    return expectation(*cost_, psi_);
  }
  Vector derivative_expectations() const override {
    Vector out(static_cast<Index>(derivatives_.size()));
    for (Index k = 0; k < out.size(); ++k) {
      out[k] = expectation(derivatives_[static_cast<std::size_t>(k)], psi_);
    }
    return out;
  }
  double gap() const override { return gap_; }
  Index family_count() const override { return 2; }
  const std::vector<Index>& family_weights(Index f) const override {
    return weights_.at(static_cast<std::size_t>(f));
  }
  Index cost_family() const override { return 0; }

  void sample_family(Index f, Index shots, CounterRng& rng, Matrix& derivatives,
                     Vector& cost) const override {
    const auto& ids = family_weights(f);
    std::vector<HermitianOperator> ops;
    for (Index id : ids) ops.push_back(derivatives_[static_cast<std::size_t>(id)]);
    const bool with_cost = f == cost_family() && cost_.has_value();
    if (with_cost) ops.push_back(*cost_);
    const Index m = static_cast<Index>(ids.size());
    derivatives.resize(shots, m);
    cost.resize(with_cost ? shots : 0);
    if (ops.empty()) return;
    const FamilySampler sampler(ops, psi_);
    for (Index t = 0; t < shots; ++t) {
      const Vector v = sampler.draw_outcomes(rng);
      derivatives.row(t) = v.head(m).transpose();
      if (with_cost) cost[t] = v[m];
    }
  }

 private:
  StateVector psi_;
  double energy_;
  double gap_;
  const std::vector<HermitianOperator>& derivatives_;
  std::optional<HermitianOperator> cost_;
  std::vector<std::vector<Index>> weights_;
};

}  // namespace

TfimSystem::TfimSystem(TfimSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (Index id = 0; id < spec_.weight_count(); ++id) {
    derivatives_.push_back(derivative_observable(spec_, id));
  }
  families_ = commuting_families(spec_);
}

HermitianOperator TfimSystem::nudged_hamiltonian(const Vector& w,
                                                 const Vector& x,
                                                 const Vector& y,
                                                 double beta) const {
  HermitianOperator h = build_hamiltonian(spec_.with_weights(w), x);
  if (beta == 0.0) return h;
  return h + beta * cost_observable(spec_, y);
}

PrepareResult TfimSystem::prepare(const Vector& w, const Vector& x,
                                  const Vector& y, double beta,
                                  const QepConfig& cfg) const {
  const HermitianOperator h0 = build_hamiltonian(spec_.with_weights(w), x);
  std::optional<HermitianOperator> cost;
  if (spec_.label_count() > 0 && y.size() > 0) cost = cost_observable(spec_, y);
  if (beta != 0.0 && !cost) throw DomainError("nudging needs a target");

  PrepareResult result;
  const Index k = cfg.eigen_index;
  EigenSolution sol;
  if (k == 0) {
    sol = ground_state(beta == 0.0 ? h0 : h0 + beta * *cost, cfg.eigen);
  } else if (beta == 0.0) {
    sol = eigenstate_k(h0, k, cfg.eigen);
  } else {
    if (h0.dimension() > cfg.eigen.dense_limit) {
      throw CapacityError("excited-state tracking needs the dense path");
    }
    TrackedEigenstate tracked =
        track_eigenstate(h0, *cost, beta, k, cfg.ramp_steps, cfg.gap_tolerance);
    sol = std::move(tracked.solution);
    result.min_overlap = tracked.min_overlap;
    if (tracked.min_overlap < cfg.min_overlap) {
      result.warnings.push_back("eigenstate track lost (overlap " +
                                std::to_string(tracked.min_overlap) + ")");
    }
  }
  const bool top = sol.index + 1 >= h0.dimension();
  const double gap = std::min(
      top ? std::numeric_limits<double>::infinity() : sol.gap_to_next,
      sol.gap_to_previous);
  apply_degeneracy_policy(gap, cfg, beta, result.warnings);
  result.state = std::make_unique<TfimState>(sol.eigenvector, sol.eigenvalue,
                                             gap, derivatives_, families_,
                                             std::move(cost));
  return result;
}

// ------------------------------------------------------------------- QHO

namespace {

class QhoState final : public PreparedState {
 public:
  QhoState(const QhoSpec& spec, GaussianGroundState g, Vector y)
      : spec_(spec), g_(std::move(g)), y_(std::move(y)) {
    all_.resize(static_cast<std::size_t>(spec_.weight_count()));
    for (std::size_t b = 0; b < all_.size(); ++b) all_[b] = static_cast<Index>(b);
  }

  double energy() const override { return g_.ground_energy; }
  double cost_expectation() const override {
    return qho_cost_expectation(spec_, g_, y_);
  }
  Vector derivative_expectations() const override {
    Vector out(spec_.weight_count());
    for (Index b = 0; b < out.size(); ++b) {
      const auto& s = spec_.springs[static_cast<std::size_t>(b)];
      out[b] = qho_derivative_expectation(g_, s.i, s.j);
    }
    return out;
  }
  double gap() const override { return spec_.hbar * g_.frequencies.minCoeff(); }
  Index family_count() const override { return 1; }
  const std::vector<Index>& family_weights(Index f) const override {
    if (f != 0) throw DomainError("qho has a single measurement family");
    return all_;
  }
  Index cost_family() const override { return 0; }

  void sample_family(Index f, Index shots, CounterRng& rng, Matrix& derivatives,
                     Vector& cost) const override {
    family_weights(f);
    const Matrix r = sample_positions(g_, shots, rng);
    derivatives.resize(shots, spec_.weight_count());
    const bool with_cost = y_.size() == static_cast<Index>(spec_.outputs.size()) &&
                           !spec_.outputs.empty();
    cost.resize(with_cost ? shots : 0);
    for (Index t = 0; t < shots; ++t) {
      for (Index b = 0; b < derivatives.cols(); ++b) {
        const auto& s = spec_.springs[static_cast<std::size_t>(b)];
        const double dr = r(t, s.i) - r(t, s.j);
        derivatives(t, b) = 0.5 * dr * dr;
      }
      if (with_cost) cost[t] = qho_cost_value(spec_, r.row(t).transpose(), y_);
    }
  }

 private:
  QhoSpec spec_;
  GaussianGroundState g_;
  Vector y_;
  std::vector<Index> all_;
};

}  // namespace

QhoSystem::QhoSystem(QhoSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<std::optional<WeightBounds>> QhoSystem::weight_bounds() const {
  return std::vector<std::optional<WeightBounds>>(
      static_cast<std::size_t>(spec_.weight_count()),
      WeightBounds{0.0, std::numeric_limits<double>::infinity()});
}

PrepareResult QhoSystem::prepare(const Vector& w, const Vector& x,
                                 const Vector& y, double beta,
                                 const QepConfig& cfg) const {
  if (cfg.eigen_index != 0) {
    throw CapacityError("qho supports the ground state only");
  }
  const QhoSpec spec = spec_.with_weights(w).with_inputs(x);
  PrepareResult result;
  result.state = std::make_unique<QhoState>(
      spec, solve_ground_state(spec.masses, assemble_potential(spec, y, beta),
                               spec.hbar),
      y);
  return result;
}

// -------------------------------------------------------------- estimator

QepResult qep_gradient(const QuantumSystem& system, const Vector& w,
                       const Vector& x, const Vector& y, const QepConfig& cfg,
                       CounterRng& rng) {
  cfg.validate();
  require_size(w.size(), system.weight_count(), "weights");
  const bool symmetric = cfg.nudge == NudgeMode::kSymmetric;
  const double b = cfg.nudge == NudgeMode::kOneSidedNegative ? -std::abs(cfg.beta)
                                                             : std::abs(cfg.beta);
  // Reference phase first, nudged phase second.
  const double betas[2] = {symmetric ? -b : 0.0, b};

  QepResult out;
  out.estimate.kind = symmetric ? EstimatorKind::kSymmetric : EstimatorKind::kOneSided;
  out.estimate.beta_used = b;
  PrepareResult prepared[2];
  for (int p = 0; p < 2; ++p) {
    prepared[p] = system.prepare(w, x, y, betas[p], cfg);
    out.min_overlap = std::min(out.min_overlap, prepared[p].min_overlap);
    for (auto& msg : prepared[p].warnings) out.warnings.push_back(std::move(msg));
  }
  const double span = betas[1] - betas[0];

  if (cfg.estimator == QepEstimator::kExactExpectation) {
    out.estimate.values = (prepared[1].state->derivative_expectations() -
                           prepared[0].state->derivative_expectations()) /
                          span;
    return out;
  }

  const Index m = system.weight_count();
  ShotLedger& ledger = out.ledger;
  ledger.shots_per_phase = cfg.shots;
  ledger.weight_names = system.weight_names();
  ledger.family_of_weight.assign(static_cast<std::size_t>(m), -1);
  const PreparedState& first = *prepared[0].state;
  ledger.preparations_per_family.assign(
      static_cast<std::size_t>(first.family_count()), 0);
  for (Index f = 0; f < first.family_count(); ++f) {
    for (Index id : first.family_weights(f)) {
      ledger.family_of_weight[static_cast<std::size_t>(id)] = f;
    }
  }
  Vector means[2];
  for (int p = 0; p < 2; ++p) {
    const PreparedState& state = *prepared[p].state;
    ShotPhase phase;
    phase.beta = betas[p];
    phase.outcomes.resize(cfg.shots, m);
    for (Index f = 0; f < state.family_count(); ++f) {
      Matrix block;
      Vector cost;
      state.sample_family(f, cfg.shots, rng, block, cost);
      const auto& ids = state.family_weights(f);
      for (std::size_t c = 0; c < ids.size(); ++c) {
        phase.outcomes.col(ids[c]) = block.col(static_cast<Index>(c));
      }
      if (f == state.cost_family()) phase.cost = cost;
      if (!ids.empty() || cost.size() > 0) {
        ledger.preparations_per_family[static_cast<std::size_t>(f)] += cfg.shots;
      }
    }
    means[p] = phase.outcomes.colwise().mean().transpose();
    ledger.phases.push_back(std::move(phase));
  }
  out.estimate.values = (means[1] - means[0]) / span;
  return out;
}

QepResult qep_gradient(const QuantumSystem& system, const Vector& w,
                       const Vector& x, const Vector& y, const QepConfig& cfg) {
  CounterRng rng(cfg.seed);
  return qep_gradient(system, w, x, y, cfg, rng);
}

QepResult excited_state_qep(const QuantumSystem& system, const Vector& w,
                            const Vector& x, const Vector& y,
                            const QepConfig& cfg) {
  return qep_gradient(system, w, x, y, cfg);
}

double qep_contrastive_loss(const QuantumSystem& system, const Vector& w,
                            const Vector& x, const Vector& y, double beta,
                            const QepConfig& cfg) {
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw DomainError("contrastive loss needs a nonzero beta");
  }
  const double e0 = system.prepare(w, x, y, 0.0, cfg).state->energy();
  const double eb = system.prepare(w, x, y, beta, cfg).state->energy();
  return (eb - e0) / beta;
}

double qep_cost(const QuantumSystem& system, const Vector& w, const Vector& x,
                const Vector& y, const QepConfig& cfg) {
  return system.prepare(w, x, y, 0.0, cfg).state->cost_expectation();
}

Vector qep_cost_gradient_oracle(const QuantumSystem& system, const Vector& w,
                                const Vector& x, const Vector& y,
                                double fd_step, const QepConfig& cfg) {
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be > 0");
  Vector g(w.size());
  Vector probe = w;
  for (Index k = 0; k < w.size(); ++k) {
    probe[k] = w[k] + fd_step;
    const double up = qep_cost(system, probe, x, y, cfg);
    probe[k] = w[k] - fd_step;
    const double down = qep_cost(system, probe, x, y, cfg);
    probe[k] = w[k];
    g[k] = (up - down) / (2.0 * fd_step);
  }
  return g;
}

double qep_mean_cost(const QuantumSystem& system, const Vector& w,
                     const std::vector<Example>& data, const QepConfig& cfg) {
  if (data.empty()) throw DomainError("dataset is empty");
  double total = 0.0;
  for (const auto& ex : data) total += qep_cost(system, w, ex.x, ex.y, cfg);
  return total / static_cast<double>(data.size());
}

TrainResult qep_train(const QuantumSystem& system, WeightVector w,
                      const std::vector<Example>& data, const QepConfig& cfg,
                      long epochs, const EpochCallback& on_epoch) {
  using Clock = std::chrono::steady_clock;
  cfg.validate();
  if (data.empty()) throw DomainError("dataset is empty");
  if (epochs < 0) throw DomainError("epochs must be >= 0");
  TrainResult result;
  const auto emit = [&](const EpochMetrics& m) {
    result.metrics.push_back(m);
    result.trajectory.push_back(w.values);
    if (on_epoch) on_epoch(m);
  };
  const CounterRng base(cfg.seed);
  std::uint64_t step = 0;
  try {
    const auto t0 = Clock::now();
    EpochMetrics initial;
    initial.mean_cost = qep_mean_cost(system, w.values, data, cfg);
    initial.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    emit(initial);
    for (long epoch = 1; epoch <= epochs; ++epoch) {
      const auto start = Clock::now();
      EpochMetrics m;
      m.epoch = epoch;
      double norm_sum = 0.0;
      for (const auto& ex : data) {
        CounterRng rng = base.split(step++);
        const QepResult g = qep_gradient(system, w.values, ex.x, ex.y, cfg, rng);
        norm_sum += g.estimate.values.norm();
        m.shots += g.ledger.total_preparations();
        w.values -= cfg.eta * g.estimate.values;
        w.clamp();
      }
      m.grad_norm = norm_sum / static_cast<double>(data.size());
      m.mean_cost = qep_mean_cost(system, w.values, data, cfg);
      m.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
      emit(m);
    }
  } catch (const ModelError& e) {
    result.aborted = true;
    result.error = e.what();
  } catch (const ConvergenceError& e) {
    result.aborted = true;
    result.error = e.what();
  } catch (const TrackingError& e) {
    result.aborted = true;
    result.error = e.what();
  }
  result.final_weights = std::move(w);
  return result;
}

}  // namespace qep
