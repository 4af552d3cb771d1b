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

#ifndef QEP_EP_HPP_
#define QEP_EP_HPP_

#include <functional>
#include <vector>

#include "qep/energy_model.hpp"

namespace qep {

/// E(w,x,s) + beta * C(s,y).
double total_energy(const EnergyModel& model, const Vector& w, const Vector& x,
                    const Vector& s, const Vector& y, double beta);

/// Equilibrium propagation estimate of grad_w C(s(w,x), y).
///
/// One-sided modes return (1/b)[dE/dw(s_b) - dE/dw(s_0)] with b = +beta or
/// -beta; symmetric mode returns (1/2beta)[dE/dw(s_beta) - dE/dw(s_-beta)].
/// Nudged equilibria are warm-started from the free state. The training
/// update is w <- w - eta * estimate.
GradientEstimate ep_gradient(const EnergyModel& model, const Vector& w,
                             const Vector& x, const Vector& y,
                             const NudgeConfig& nudge);

/// (1/beta)[E^beta(s_beta) - E^0(s_0)]; a lower bound on the cost for
/// beta > 0 and an upper bound for beta < 0.
double contrastive_loss(const EnergyModel& model, const Vector& w,
                        const Vector& x, const Vector& y, double beta);

/// Cost at the free equilibrium, C(s(w,x), y).
double free_cost(const EnergyModel& model, const Vector& w, const Vector& x,
                 const Vector& y);

/// Central finite difference of w -> C(s(w,x), y), re-equilibrating at every
/// perturbed weight (warm-started from the unperturbed free state).
GradientEstimate exact_cost_gradient_oracle(const EnergyModel& model,
                                            const Vector& w, const Vector& x,
                                            const Vector& y, double fd_step);

/// w - eta * ep_gradient(...), clamped to the weight bounds.
WeightVector train_step(const EnergyModel& model, const WeightVector& w,
                        const Vector& x, const Vector& y,
                        const NudgeConfig& nudge, double eta);

struct Example {
  Vector x;
  Vector y;
};

struct EpochMetrics {
  long epoch = 0;
  double mean_cost = 0.0;
  /// Mean over the epoch's examples of the gradient-estimate 2-norm; zero
  /// for the epoch-0 row, which is evaluated before any update.
  double grad_norm = 0.0;
  /// Simulated state preparations spent during the epoch (quantum runs).
  long shots = 0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochMetrics> metrics;
  std::vector<Vector> trajectory;
  WeightVector final_weights;
  bool aborted = false;
  std::string error;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Mean free-state cost over a dataset.
double mean_cost(const EnergyModel& model, const Vector& w,
                 const std::vector<Example>& data);

/// Sequential per-example EP training. Row 0 of the metrics holds the
/// initial cost; a ModelError/ConvergenceError aborts with a partial record.
TrainResult ep_train(const EnergyModel& model, WeightVector w,
                     const std::vector<Example>& data, const NudgeConfig& nudge,
                     double eta, long epochs,
                     const EpochCallback& on_epoch = {});

}  // namespace qep

#endif  // QEP_EP_HPP_
