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

#ifndef QEP_ENERGY_MODEL_HPP_
#define QEP_ENERGY_MODEL_HPP_

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qep/common.hpp"

namespace qep {

struct WeightBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Trainable parameters with their names and optional box constraints.
struct WeightVector {
  Vector values;
  std::vector<std::string> names;
  std::vector<std::optional<WeightBounds>> bounds;

  Index size() const { return values.size(); }

  /// Projects values onto the bounds in place.
  void clamp();
  bool within_bounds() const;
  /// Throws ShapeError unless names/bounds are empty or match values.
  void validate() const;
};

enum class NudgeMode { kOneSidedPositive, kOneSidedNegative, kSymmetric };

struct NudgeConfig {
  double beta = 0.1;
  NudgeMode mode = NudgeMode::kSymmetric;

  /// Signed nudge used by the one-sided modes.
  double signed_beta() const;
  void validate() const;
};

enum class EstimatorKind { kOneSided, kSymmetric, kExactOracle };

struct GradientEstimate {
  Vector values;
  EstimatorKind kind = EstimatorKind::kOneSided;
  double beta_used = 0.0;
};

/// Result of settling a classical system.
struct Equilibrium {
  Vector state;
  /// Inf-norm of the free-coordinate energy gradient (continuous models) or
  /// the largest energy decrease available from a single flip (discrete).
  double residual = 0.0;
  long iterations = 0;
  /// More than one minimizer was found (discrete exhaustive search).
  bool degenerate = false;
  /// A coincident spring pair was met while evaluating state gradients.
  bool singular = false;
};

/// Energy-based system with trainable weights w, input x and state s.
///
/// Implementations must keep energy and cost finite on valid arguments and
/// return equilibria that pass their own stationarity test.
class EnergyModel {
 public:
  virtual ~EnergyModel() = default;

  virtual Index weight_count() const = 0;
  virtual Index state_size() const = 0;
  virtual std::vector<std::string> weight_names() const = 0;
  virtual std::vector<std::optional<WeightBounds>> weight_bounds() const {
    return std::vector<std::optional<WeightBounds>>(weight_count());
  }

  virtual double energy(const Vector& w, const Vector& x,
                        const Vector& s) const = 0;
  virtual Vector energy_weight_gradient(const Vector& w, const Vector& x,
                                        const Vector& s) const = 0;
  virtual double cost(const Vector& s, const Vector& y) const = 0;
  virtual Vector cost_state_gradient(const Vector& s,
                                     const Vector& y) const = 0;

  /// Settles E + beta * C. The nudge phases of EP pass the free state as
  /// `warm_start` so the solver stays on the same stationary branch.
  virtual Equilibrium equilibrate(
      const Vector& w, const Vector& x, const Vector& y, double beta,
      const std::optional<Vector>& warm_start = std::nullopt) const = 0;

  /// Same measure as Equilibrium::residual, evaluated at an arbitrary state.
  virtual double stationarity_residual(const Vector& w, const Vector& x,
                                       const Vector& y, double beta,
                                       const Vector& s) const = 0;

  /// Named weight vector wrapping `values`, with this model's names/bounds.
  WeightVector make_weights(Vector values) const;
};

}  // namespace qep

#endif  // QEP_ENERGY_MODEL_HPP_
