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

#ifndef QEP_QHO_HPP_
#define QEP_QHO_HPP_

#include <string>
#include <vector>

#include "qep/energy_model.hpp"
#include "qep/rng.hpp"

namespace qep {

/// Harmonic network of N particles on a line,
///
///   H = sum_i p_i^2 / (2 m_i) + sum_springs k_ij (r_i - r_j)^2 / 2
///       + sum_i kappa_i (r_i - a_i)^2 / 2.
///
/// Each spring is an unordered pair counted once. The pinning springs
/// kappa_i remove the translational zero mode; the anchors of
/// `input_particles` are the inputs. Trainable weights are the spring
/// constants, in `springs` order, bounded below by zero.
///
/// Cost: C(y) = sum_o (u_o . r - y_o)^2 / 2 where u_o . r is r_i - r_j for a
/// pair output and r_i for an absolute output (j < 0).
struct QhoSpring {
  int i = 0;
  int j = 1;
  double k = 0.0;
};

struct QhoOutput {
  int i = 0;
  int j = -1;  // negative: absolute position of particle i
};

struct QhoSpec {
  Vector masses;
  std::vector<QhoSpring> springs;
  Vector pinning;  // kappa_i >= 0
  Vector anchors;  // a_i
  std::vector<int> input_particles;
  std::vector<QhoOutput> outputs;
  double hbar = 1.0;

  Index size() const { return masses.size(); }
  Index weight_count() const { return static_cast<Index>(springs.size()); }
  void validate() const;
  std::vector<std::string> weight_names() const;
  Vector weights() const;
  QhoSpec with_weights(const Vector& w) const;
  /// Copy whose input anchors are replaced by x.
  QhoSpec with_inputs(const Vector& x) const;
};

/// Potential V(r) = r'Kr/2 - b'r + c of a (possibly nudged) network.
struct QuadraticPotential {
  Matrix stiffness;
  Vector linear;
  double constant = 0.0;
};

/// Potential of `spec` plus beta * C(y). y may be empty when beta == 0.
QuadraticPotential assemble_potential(const QhoSpec& spec, const Vector& y,
                                      double beta);

struct GaussianGroundState {
  Vector mean;
  Matrix covariance;  // position-position
  Vector frequencies; // normal-mode omegas, ascending
  double ground_energy = 0.0;
};

/// Exact ground state of the quadratic Hamiltonian with masses and the
/// given potential. Throws ModelError when the stiffness is not positive
/// definite.
GaussianGroundState solve_ground_state(const Vector& masses,
                                       const QuadraticPotential& potential,
                                       double hbar);
GaussianGroundState solve_ground_state(const QhoSpec& spec);
/// Nudged ground state at input x.
GaussianGroundState solve_ground_state(const QhoSpec& spec, const Vector& x,
                                       const Vector& y, double beta);

/// <(r_i - r_j)^2 / 2>, the expectation of dH/dk_ij.
double qho_derivative_expectation(const GaussianGroundState& state, int i,
                                  int j);
/// <(r_i - a)^2 / 2>, the anchor moment of a pinning spring.
double qho_anchor_moment(const GaussianGroundState& state, int i, double a);
/// <C(y)> on the state.
double qho_cost_expectation(const QhoSpec& spec,
                            const GaussianGroundState& state, const Vector& y);
/// C(y) evaluated at a sampled position vector.
double qho_cost_value(const QhoSpec& spec, const Vector& r, const Vector& y);

/// T joint position samples (rows) from the ground-state distribution.
Matrix sample_positions(const GaussianGroundState& state, Index shots,
                        CounterRng& rng);

}  // namespace qep

#endif  // QEP_QHO_HPP_
