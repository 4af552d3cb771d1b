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

#include "qep/elastic.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace qep {

ElasticNetworkModel::ElasticNetworkModel(int n_nodes, int dim,
                                         std::vector<Bond> springs,
                                         std::vector<int> clamped_nodes,
                                         std::vector<int> output_nodes,
                                         Vector reference_positions,
                                         Options options)
    : n_(n_nodes),
      dim_(dim),
      springs_(std::move(springs)),
      clamped_(std::move(clamped_nodes)),
      outputs_(std::move(output_nodes)),
      reference_(std::move(reference_positions)),
      options_(options) {
  if (n_ < 1) throw DomainError("elastic network needs at least one node");
  if (dim_ < 1 || dim_ > 3) throw DomainError("spatial dimension must be 1, 2 or 3");
  require_size(reference_.size(), state_size(), "reference positions");
  if (!reference_.allFinite()) throw DomainError("reference positions must be finite");
  const auto in_range = [&](int i) { return i >= 0 && i < n_; };

  std::vector<std::vector<int>> adjacency(n_);
  std::set<std::pair<int, int>> seen;
  for (auto& s : springs_) {
    if (!in_range(s.j) || !in_range(s.k)) throw DomainError("spring index out of range");
    if (s.j == s.k) throw DomainError("a spring must join two distinct nodes");
    if (s.j > s.k) std::swap(s.j, s.k);
    if (!seen.insert({s.j, s.k}).second) throw DomainError("duplicate spring");
    adjacency[s.j].push_back(s.k);
    adjacency[s.k].push_back(s.j);
  }

  std::vector<bool> clamped(n_, false);
  for (int c : clamped_) {
    if (!in_range(c)) throw DomainError("clamped node out of range");
    if (clamped[c]) throw DomainError("duplicate clamped node");
    clamped[c] = true;
  }
  is_output_.assign(n_, false);
  for (int o : outputs_) {
    if (!in_range(o)) throw DomainError("output node out of range");
    if (clamped[o]) throw DomainError("output node is clamped");
    is_output_[o] = true;
  }

  // Every free node must hang off a clamped node.
  std::vector<bool> reached = clamped;
  std::deque<int> queue(clamped_.begin(), clamped_.end());
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : adjacency[v]) {
      if (!reached[u]) {
        reached[u] = true;
        queue.push_back(u);
      }
    }
  }
  for (int i = 0; i < n_; ++i) {
    if (!reached[i]) {
      throw ModelError("node " + std::to_string(i) +
                       " is not connected to any clamped node");
    }
    if (!clamped[i]) {
      for (int d = 0; d < dim_; ++d) free_coords_.push_back(i * dim_ + d);
    }
  }
}

Index ElasticNetworkModel::weight_count() const {
  return 2 * static_cast<Index>(springs_.size());
}

std::vector<std::string> ElasticNetworkModel::weight_names() const {
  std::vector<std::string> names;
  for (const auto& s : springs_) {
    names.push_back("k(" + std::to_string(s.j) + "," + std::to_string(s.k) + ")");
  }
  for (const auto& s : springs_) {
    names.push_back("l(" + std::to_string(s.j) + "," + std::to_string(s.k) + ")");
  }
  return names;
}

std::vector<std::optional<WeightBounds>> ElasticNetworkModel::weight_bounds()
    const {
  return std::vector<std::optional<WeightBounds>>(
      weight_count(), WeightBounds{0.0, std::numeric_limits<double>::infinity()});
}

double elastic_energy(const ElasticNetworkModel& model, const Vector& w,
                      const Vector& positions) {
  require_size(w.size(), model.weight_count(), "elastic weights");
  require_size(positions.size(), model.state_size(), "elastic state");
  const int dim = model.dim();
  const auto& springs = model.springs();
  const Index ns = static_cast<Index>(springs.size());
  double e = 0.0;
  for (Index s = 0; s < ns; ++s) {
    const double len = (positions.segment(springs[s].j * dim, dim) -
                        positions.segment(springs[s].k * dim, dim))
                           .norm();
    const double stretch = len - w[ns + s];
    e += 0.5 * w[s] * stretch * stretch;
  }
  return e;
}

Vector elastic_weight_gradient(const ElasticNetworkModel& model,
                               const Vector& w, const Vector& positions) {
  require_size(w.size(), model.weight_count(), "elastic weights");
  require_size(positions.size(), model.state_size(), "elastic state");
  const int dim = model.dim();
  const auto& springs = model.springs();
  const Index ns = static_cast<Index>(springs.size());
  Vector g(2 * ns);
  for (Index s = 0; s < ns; ++s) {
    const double len = (positions.segment(springs[s].j * dim, dim) -
                        positions.segment(springs[s].k * dim, dim))
                           .norm();
    const double stretch = len - w[ns + s];
    g[s] = 0.5 * stretch * stretch;
    g[ns + s] = -w[s] * stretch;
  }
  return g;
}

Vector ElasticNetworkModel::with_clamps(Vector s, const Vector& x) const {
  require_size(x.size(), static_cast<Index>(clamped_.size()) * dim_,
               "elastic input");
  for (std::size_t c = 0; c < clamped_.size(); ++c) {
    s.segment(clamped_[c] * dim_, dim_) =
        x.segment(static_cast<Index>(c) * dim_, dim_);
  }
  return s;
}

double ElasticNetworkModel::energy(const Vector& w, const Vector& x,
                                   const Vector& s) const {
  require_size(s.size(), state_size(), "elastic state");
  require_size(x.size(), static_cast<Index>(clamped_.size()) * dim_,
               "elastic input");
  if (!s.allFinite()) throw DomainError("positions must be finite");
  for (std::size_t c = 0; c < clamped_.size(); ++c) {
    if (s.segment(clamped_[c] * dim_, dim_) !=
        x.segment(static_cast<Index>(c) * dim_, dim_)) {
      throw DomainError("clamped node " + std::to_string(clamped_[c]) +
                        " differs from its input position");
    }
  }
  return elastic_energy(*this, w, s);
}

Vector ElasticNetworkModel::energy_weight_gradient(const Vector& w,
                                                   const Vector& x,
                                                   const Vector& s) const {
  require_size(x.size(), static_cast<Index>(clamped_.size()) * dim_,
               "elastic input");
  return elastic_weight_gradient(*this, w, s);
}

double ElasticNetworkModel::cost(const Vector& s, const Vector& y) const {
  require_size(s.size(), state_size(), "elastic state");
  require_size(y.size(), static_cast<Index>(outputs_.size()) * dim_,
               "elastic target");
  double c = 0.0;
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    c += 0.5 * (s.segment(outputs_[o] * dim_, dim_) -
                y.segment(static_cast<Index>(o) * dim_, dim_))
                   .squaredNorm();
  }
  return c;
}

Vector ElasticNetworkModel::cost_state_gradient(const Vector& s,
                                                const Vector& y) const {
  require_size(s.size(), state_size(), "elastic state");
  require_size(y.size(), static_cast<Index>(outputs_.size()) * dim_,
               "elastic target");
  Vector g = Vector::Zero(state_size());
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    g.segment(outputs_[o] * dim_, dim_) =
        s.segment(outputs_[o] * dim_, dim_) -
        y.segment(static_cast<Index>(o) * dim_, dim_);
  }
  return g;
}

Vector ElasticNetworkModel::state_gradient(const Vector& w, const Vector& s,
                                           const Vector& y, double beta,
                                           bool* singular) const {
  const Index ns = static_cast<Index>(springs_.size());
  Vector g = Vector::Zero(state_size());
  bool hit = false;
  for (Index e = 0; e < ns; ++e) {
    const int i = springs_[e].j;
    const int j = springs_[e].k;
    const Vector delta = s.segment(i * dim_, dim_) - s.segment(j * dim_, dim_);
    const double len = delta.norm();
    if (len < options_.coincidence_eps) {
      hit = true;
      continue;
    }
    const Vector force = w[e] * (len - w[ns + e]) / len * delta;
    g.segment(i * dim_, dim_) += force;
    g.segment(j * dim_, dim_) -= force;
  }
  if (beta != 0.0) g += beta * cost_state_gradient(s, y);
  if (singular) *singular = hit;
  return g;
}

Matrix ElasticNetworkModel::free_hessian(const Vector& w, const Vector& s,
                                         double beta) const {
  const Index n = state_size();
  const Index ns = static_cast<Index>(springs_.size());
  Matrix full = Matrix::Zero(n, n);
  for (Index e = 0; e < ns; ++e) {
    const int i = springs_[e].j;
    const int j = springs_[e].k;
    const Vector delta = s.segment(i * dim_, dim_) - s.segment(j * dim_, dim_);
    const double len = delta.norm();
    if (len < options_.coincidence_eps) continue;
    const Vector u = delta / len;
    const double rest = w[ns + e];
    const Matrix block =
        w[e] * ((1.0 - rest / len) * Matrix::Identity(dim_, dim_) +
                (rest / len) * u * u.transpose());
    full.block(i * dim_, i * dim_, dim_, dim_) += block;
    full.block(j * dim_, j * dim_, dim_, dim_) += block;
    full.block(i * dim_, j * dim_, dim_, dim_) -= block;
    full.block(j * dim_, i * dim_, dim_, dim_) -= block;
  }
  if (beta != 0.0) {
    for (int o : outputs_) {
      for (int d = 0; d < dim_; ++d) full(o * dim_ + d, o * dim_ + d) += beta;
    }
  }
  const Index nf = static_cast<Index>(free_coords_.size());
  Matrix h(nf, nf);
  for (Index a = 0; a < nf; ++a) {
    for (Index b = 0; b < nf; ++b) h(a, b) = full(free_coords_[a], free_coords_[b]);
  }
  return h;
}

double ElasticNetworkModel::stationarity_residual(const Vector& w,
                                                  const Vector& x,
                                                  const Vector& y, double beta,
                                                  const Vector& s) const {
  energy(w, x, s);  // validates
  const Vector g = state_gradient(w, s, y, beta);
  double worst = 0.0;
  for (int c : free_coords_) worst = std::max(worst, std::abs(g[c]));
  return worst;
}

Equilibrium ElasticNetworkModel::equilibrate(
    const Vector& w, const Vector& x, const Vector& y, double beta,
    const std::optional<Vector>& warm_start) const {
  require_size(w.size(), weight_count(), "elastic weights");
  if (beta != 0.0) {
    require_size(y.size(), static_cast<Index>(outputs_.size()) * dim_,
                 "elastic target");
  }
  Vector s = warm_start ? *warm_start : reference_;
  require_size(s.size(), state_size(), "warm start");
  s = with_clamps(std::move(s), x);

  const Index nf = static_cast<Index>(free_coords_.size());
  const auto total = [&](const Vector& state) {
    double e = elastic_energy(*this, w, state);
    if (beta != 0.0) e += beta * cost(state, y);
    return e;
  };
  const auto free_part = [&](const Vector& full) {
    Vector out(nf);
    for (Index a = 0; a < nf; ++a) out[a] = full[free_coords_[a]];
    return out;
  };
  const auto step_to = [&](const Vector& base, const Vector& dir, double alpha) {
    Vector out = base;
    for (Index a = 0; a < nf; ++a) out[free_coords_[a]] += alpha * dir[a];
    return out;
  };

  bool singular = false;
  Vector g = free_part(state_gradient(w, s, y, beta, &singular));
  double residual = nf > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
  double e = total(s);
  long iter = 0;
  bool polished = false;

  // Damped Newton with a gradient-descent fallback when the free Hessian
  // is not positive definite. One extra Newton step polishes the solution
  // once the tolerance is met.
  while (nf > 0 && (residual > options_.tolerance || !polished)) {
    if (residual <= options_.tolerance) polished = true;
    if (iter >= options_.max_iterations) {
      throw ConvergenceError("elastic equilibration did not converge", residual,
                             iter);
    }
    ++iter;
    const Matrix h = free_hessian(w, s, beta);
    Vector dir;
    bool newton = false;
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() == Eigen::Success) {
      dir = -llt.solve(g);
      newton = dir.allFinite() && g.dot(dir) < 0.0;
    }
    double alpha = 1.0;
    if (!newton) {
      dir = -g;
      const double curvature = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
      alpha = 1.0 / curvature;
    }

    const double slope = g.dot(dir);
    bool accepted = false;
    Vector trial;
    double trial_e = e;
    for (int bt = 0; bt < 60; ++bt) {
      trial = step_to(s, dir, alpha);
      trial_e = total(trial);
      if (trial_e <= e + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      if (newton && bt == 0) {
        // Near convergence the energy decrease is below rounding; accept a
        // full Newton step that still shrinks the gradient.
        const Vector tg = free_part(state_gradient(w, trial, y, beta));
        if (tg.cwiseAbs().maxCoeff() < 0.5 * residual) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (residual <= options_.tolerance) break;
      throw ConvergenceError("elastic line search stalled", residual, iter);
    }
    const Vector tg = free_part(state_gradient(w, trial, y, beta, &singular));
    const double trial_residual = tg.cwiseAbs().maxCoeff();
    if (polished && trial_residual >= residual) break;
    s = std::move(trial);
    e = trial_e;
    g = tg;
    residual = trial_residual;
  }

  Equilibrium eq;
  eq.state = std::move(s);
  eq.residual = residual;
  eq.iterations = iter;
  eq.singular = singular;
  return eq;
}

}  // namespace qep
