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

#include "qep/qho.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <set>

namespace qep {

namespace {

void check_particle(Index n, int i, const char* what) {
  if (i < 0 || i >= n) {
    throw DomainError(std::string(what) + " index " + std::to_string(i) +
                      " out of range");
  }
}

Vector output_direction(Index n, const QhoOutput& o) {
  Vector u = Vector::Zero(n);
  u[o.i] += 1.0;
  if (o.j >= 0) u[o.j] -= 1.0;
  return u;
}

}  // namespace

void QhoSpec::validate() const {
  const Index n = size();
  if (n < 1) throw DomainError("qho needs at least one particle");
  require_size(pinning.size(), n, "qho pinning");
  require_size(anchors.size(), n, "qho anchors");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be > 0");
  for (Index i = 0; i < n; ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) {
      throw DomainError("masses must be positive");
    }
    if (!(pinning[i] >= 0.0) || !std::isfinite(pinning[i])) {
      throw DomainError("pinning springs must be >= 0");
    }
  }
  if (!anchors.allFinite()) throw DomainError("anchors must be finite");
  std::set<std::pair<int, int>> seen;
  for (const auto& s : springs) {
    check_particle(n, s.i, "spring");
    check_particle(n, s.j, "spring");
    if (s.i == s.j) throw DomainError("spring needs two distinct particles");
    if (!(s.k >= 0.0) || !std::isfinite(s.k)) {
      throw DomainError("spring constants must be >= 0");
    }
    if (!seen.insert(std::minmax(s.i, s.j)).second) {
      throw DomainError("duplicate spring");
    }
  }
  std::set<int> inputs;
  for (int i : input_particles) {
    check_particle(n, i, "input particle");
    if (!inputs.insert(i).second) throw DomainError("duplicate input particle");
  }
  for (const auto& o : outputs) {
    check_particle(n, o.i, "output");
    if (o.j >= 0) {
      check_particle(n, o.j, "output");
      if (o.i == o.j) throw DomainError("output pair needs distinct particles");
    }
  }
}

std::vector<std::string> QhoSpec::weight_names() const {
  std::vector<std::string> names;
  for (const auto& s : springs) {
    names.push_back("k(" + std::to_string(s.i) + "," + std::to_string(s.j) + ")");
  }
  return names;
}

Vector QhoSpec::weights() const {
  Vector w(weight_count());
  for (Index b = 0; b < w.size(); ++b) w[b] = springs[static_cast<std::size_t>(b)].k;
  return w;
}

QhoSpec QhoSpec::with_weights(const Vector& w) const {
  require_size(w.size(), weight_count(), "qho weights");
  QhoSpec out = *this;
  for (Index b = 0; b < w.size(); ++b) out.springs[static_cast<std::size_t>(b)].k = w[b];
  return out;
}

QhoSpec QhoSpec::with_inputs(const Vector& x) const {
  require_size(x.size(), static_cast<Index>(input_particles.size()), "qho input");
  QhoSpec out = *this;
  for (std::size_t i = 0; i < input_particles.size(); ++i) {
    out.anchors[input_particles[i]] = x[static_cast<Index>(i)];
  }
  return out;
}

QuadraticPotential assemble_potential(const QhoSpec& spec, const Vector& y,
                                      double beta) {
  spec.validate();
  const Index n = spec.size();
  QuadraticPotential v;
  v.stiffness = spec.pinning.asDiagonal();
  for (const auto& s : spec.springs) {
    v.stiffness(s.i, s.i) += s.k;
    v.stiffness(s.j, s.j) += s.k;
    v.stiffness(s.i, s.j) -= s.k;
    v.stiffness(s.j, s.i) -= s.k;
  }
  v.linear = spec.pinning.cwiseProduct(spec.anchors);
  v.constant = 0.5 * spec.pinning.dot(spec.anchors.cwiseProduct(spec.anchors));
  if (beta != 0.0) {
    if (spec.outputs.empty()) throw DomainError("qho cost needs outputs");
    require_size(y.size(), static_cast<Index>(spec.outputs.size()), "qho target");
    for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
      const Vector u = output_direction(n, spec.outputs[o]);
      const double d = y[static_cast<Index>(o)];
      v.stiffness += beta * u * u.transpose();
      v.linear += beta * d * u;
      v.constant += 0.5 * beta * d * d;
    }
  }
  return v;
}

GaussianGroundState solve_ground_state(const Vector& masses,
                                       const QuadraticPotential& potential,
                                       double hbar) {
  const Index n = masses.size();
  require_size(potential.stiffness.rows(), n, "stiffness");
  require_size(potential.linear.size(), n, "linear term");
  const Vector inv_sqrt_m = masses.cwiseSqrt().cwiseInverse();
  const Matrix scaled =
      inv_sqrt_m.asDiagonal() * potential.stiffness * inv_sqrt_m.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scaled);
  const Vector& lambda = eig.eigenvalues();
  const double floor = 1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (eig.info() != Eigen::Success || lambda.minCoeff() <= floor) {
    throw ModelError(
        "stiffness matrix is not positive definite (smallest mass-weighted "
        "eigenvalue " +
        std::to_string(lambda.minCoeff()) +
        "); add pinning springs to every connected component or reduce a "
        "negative nudge");
  }
  GaussianGroundState out;
  out.frequencies = lambda.cwiseSqrt();
  out.mean = potential.stiffness.ldlt().solve(potential.linear);
  const Matrix& u = eig.eigenvectors();
  const Matrix inv_omega = u * out.frequencies.cwiseInverse().asDiagonal() * u.transpose();
  out.covariance = 0.5 * hbar * inv_sqrt_m.asDiagonal() * inv_omega *
                   inv_sqrt_m.asDiagonal();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.ground_energy = 0.5 * hbar * out.frequencies.sum() + potential.constant -
                      0.5 * potential.linear.dot(out.mean);
  return out;
}

GaussianGroundState solve_ground_state(const QhoSpec& spec) {
  return solve_ground_state(spec.masses, assemble_potential(spec, Vector(), 0.0),
                            spec.hbar);
}

GaussianGroundState solve_ground_state(const QhoSpec& spec, const Vector& x,
                                       const Vector& y, double beta) {
  const QhoSpec in = spec.with_inputs(x);
  return solve_ground_state(in.masses, assemble_potential(in, y, beta), in.hbar);
}

double qho_derivative_expectation(const GaussianGroundState& state, int i,
                                  int j) {
  const Index n = state.mean.size();
  check_particle(n, i, "pair");
  check_particle(n, j, "pair");
  if (i == j) throw DomainError("pair needs two distinct particles");
  const double dm = state.mean[i] - state.mean[j];
  const auto& s = state.covariance;
  return 0.5 * (dm * dm + s(i, i) + s(j, j) - 2.0 * s(i, j));
}

double qho_anchor_moment(const GaussianGroundState& state, int i, double a) {
  check_particle(state.mean.size(), i, "particle");
  const double dm = state.mean[i] - a;
  return 0.5 * (state.covariance(i, i) + dm * dm);
}

double qho_cost_expectation(const QhoSpec& spec,
                            const GaussianGroundState& state, const Vector& y) {
  require_size(y.size(), static_cast<Index>(spec.outputs.size()), "qho target");
  double c = 0.0;
  for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
    const Vector u = output_direction(state.mean.size(), spec.outputs[o]);
    const double r = u.dot(state.mean) - y[static_cast<Index>(o)];
    c += 0.5 * (r * r + u.dot(state.covariance * u));
  }
  return c;
}

double qho_cost_value(const QhoSpec& spec, const Vector& r, const Vector& y) {
  require_size(y.size(), static_cast<Index>(spec.outputs.size()), "qho target");
  require_size(r.size(), spec.size(), "positions");
  double c = 0.0;
  for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
    const auto& out = spec.outputs[o];
    const double proj = r[out.i] - (out.j >= 0 ? r[out.j] : 0.0);
    const double e = proj - y[static_cast<Index>(o)];
    c += 0.5 * e * e;
  }
  return c;
}

Matrix sample_positions(const GaussianGroundState& state, Index shots,
                        CounterRng& rng) {
  if (shots < 1) throw DomainError("shot count must be >= 1");
  Eigen::LLT<Matrix> llt(state.covariance);
  if (llt.info() != Eigen::Success) {
    throw ConvergenceError("covariance factorization failed", 0.0, 0);
  }
  const Matrix l = llt.matrixL();
  const Index n = state.mean.size();
  Matrix out(shots, n);
  Vector z(n);
  for (Index t = 0; t < shots; ++t) {
    for (Index i = 0; i < n; ++i) z[i] = rng.normal();
    out.row(t) = (state.mean + l * z).transpose();
  }
  return out;
}

}  // namespace qep
