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

#include "qep/ep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace qep {

void WeightVector::clamp() {
  for (Index i = 0; i < values.size(); ++i) {
    if (i < static_cast<Index>(bounds.size()) && bounds[i]) {
      values[i] = std::clamp(values[i], bounds[i]->lo, bounds[i]->hi);
    }
  }
}

bool WeightVector::within_bounds() const {
  for (Index i = 0; i < values.size(); ++i) {
    if (i < static_cast<Index>(bounds.size()) && bounds[i] &&
        (values[i] < bounds[i]->lo || values[i] > bounds[i]->hi)) {
      return false;
    }
  }
  return true;
}

void WeightVector::validate() const {
  if (!names.empty()) require_size(names.size(), values.size(), "weight names");
  if (!bounds.empty()) {
    require_size(bounds.size(), values.size(), "weight bounds");
  }
}

double NudgeConfig::signed_beta() const {
  return mode == NudgeMode::kOneSidedNegative ? -std::abs(beta)
                                              : std::abs(beta);
}

void NudgeConfig::validate() const {
  if (!(beta != 0.0) || !std::isfinite(beta)) {
    throw DomainError("nudge beta must be finite and nonzero");
  }
}

WeightVector EnergyModel::make_weights(Vector values) const {
  require_size(values.size(), weight_count(), "weights");
  WeightVector w{std::move(values), weight_names(), weight_bounds()};
  return w;
}

double total_energy(const EnergyModel& model, const Vector& w, const Vector& x,
                    const Vector& s, const Vector& y, double beta) {
  require_size(s.size(), model.state_size(), "state");
  const double e = model.energy(w, x, s);
  return beta == 0.0 ? e : e + beta * model.cost(s, y);
}

namespace {

Equilibrium settle(const EnergyModel& model, const Vector& w, const Vector& x,
                   const Vector& y, double beta,
                   const std::optional<Vector>& warm) {
  return model.equilibrate(w, x, y, beta, warm);
}

}  // namespace

GradientEstimate ep_gradient(const EnergyModel& model, const Vector& w,
                             const Vector& x, const Vector& y,
                             const NudgeConfig& nudge) {
  nudge.validate();
  require_size(w.size(), model.weight_count(), "weights");
  const Equilibrium free = settle(model, w, x, y, 0.0, std::nullopt);

  GradientEstimate out;
  if (nudge.mode == NudgeMode::kSymmetric) {
    const double b = std::abs(nudge.beta);
    const Equilibrium plus = settle(model, w, x, y, b, free.state);
    const Equilibrium minus = settle(model, w, x, y, -b, free.state);
    // The cost does not depend on w, so dE^beta/dw = dE/dw.
    out.values = (model.energy_weight_gradient(w, x, plus.state) -
                  model.energy_weight_gradient(w, x, minus.state)) /
                 (2.0 * b);
    out.kind = EstimatorKind::kSymmetric;
    out.beta_used = b;
  } else {
    const double b = nudge.signed_beta();
    const Equilibrium nudged = settle(model, w, x, y, b, free.state);
    out.values = (model.energy_weight_gradient(w, x, nudged.state) -
                  model.energy_weight_gradient(w, x, free.state)) /
                 b;
    out.kind = EstimatorKind::kOneSided;
    out.beta_used = b;
  }
  return out;
}

double contrastive_loss(const EnergyModel& model, const Vector& w,
                        const Vector& x, const Vector& y, double beta) {
  if (!(beta != 0.0)) throw DomainError("contrastive_loss: beta must be nonzero");
  const Equilibrium free = settle(model, w, x, y, 0.0, std::nullopt);
  const Equilibrium nudged = settle(model, w, x, y, beta, free.state);
  // (E(s_b) - E(s_0)) / b + C(s_b) is the same quantity, but stays exact
  // when the nudge leaves the state unchanged (common for discrete models).
  const double de = model.energy(w, x, nudged.state) - model.energy(w, x, free.state);
  return de / beta + model.cost(nudged.state, y);
}

double free_cost(const EnergyModel& model, const Vector& w, const Vector& x,
                 const Vector& y) {
  return model.cost(settle(model, w, x, y, 0.0, std::nullopt).state, y);
}

GradientEstimate exact_cost_gradient_oracle(const EnergyModel& model,
                                            const Vector& w, const Vector& x,
                                            const Vector& y, double fd_step) {
  if (!(fd_step > 0.0)) throw DomainError("fd_step must be positive");
  require_size(w.size(), model.weight_count(), "weights");
  const Equilibrium free = settle(model, w, x, y, 0.0, std::nullopt);

  GradientEstimate out;
  out.kind = EstimatorKind::kExactOracle;
  out.values.resize(w.size());
  Vector probe = w;
  for (Index k = 0; k < w.size(); ++k) {
    probe[k] = w[k] + fd_step;
    const double up =
        model.cost(settle(model, probe, x, y, 0.0, free.state).state, y);
    probe[k] = w[k] - fd_step;
    const double down =
        model.cost(settle(model, probe, x, y, 0.0, free.state).state, y);
    probe[k] = w[k];
    out.values[k] = (up - down) / (2.0 * fd_step);
  }
  return out;
}

WeightVector train_step(const EnergyModel& model, const WeightVector& w,
                        const Vector& x, const Vector& y,
                        const NudgeConfig& nudge, double eta) {
  if (!(eta > 0.0)) throw DomainError("learning rate must be positive");
  w.validate();
  WeightVector next = w;
  next.values -= eta * ep_gradient(model, w.values, x, y, nudge).values;
  next.clamp();
  return next;
}

double mean_cost(const EnergyModel& model, const Vector& w,
                 const std::vector<Example>& data) {
  if (data.empty()) throw DomainError("dataset is empty");
  double total = 0.0;
  for (const auto& ex : data) total += free_cost(model, w, ex.x, ex.y);
  return total / static_cast<double>(data.size());
}

TrainResult ep_train(const EnergyModel& model, WeightVector w,
                     const std::vector<Example>& data, const NudgeConfig& nudge,
                     double eta, long epochs, const EpochCallback& on_epoch) {
  using Clock = std::chrono::steady_clock;
  TrainResult result;
  const auto emit = [&](const EpochMetrics& m) {
    result.metrics.push_back(m);
    result.trajectory.push_back(w.values);
    if (on_epoch) on_epoch(m);
  };

  try {
    const auto t0 = Clock::now();
    EpochMetrics initial;
    initial.mean_cost = mean_cost(model, w.values, data);
    initial.wall_seconds =
        std::chrono::duration<double>(Clock::now() - t0).count();
    emit(initial);

    for (long epoch = 1; epoch <= epochs; ++epoch) {
      const auto start = Clock::now();
      double norm_sum = 0.0;
      for (const auto& ex : data) {
        const GradientEstimate g = ep_gradient(model, w.values, ex.x, ex.y, nudge);
        norm_sum += g.values.norm();
        w.values -= eta * g.values;
        w.clamp();
      }
      EpochMetrics m;
      m.epoch = epoch;
      m.grad_norm = norm_sum / static_cast<double>(data.size());
      m.mean_cost = mean_cost(model, w.values, data);
      m.wall_seconds =
          std::chrono::duration<double>(Clock::now() - start).count();
      emit(m);
    }
  } catch (const ModelError& e) {
    result.aborted = true;
    result.error = e.what();
  } catch (const ConvergenceError& e) {
    result.aborted = true;
    result.error = e.what();
  }
  result.final_weights = std::move(w);
  return result;
}

}  // namespace qep
