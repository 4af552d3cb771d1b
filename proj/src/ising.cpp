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

#include "qep/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qep/rng.hpp"

namespace qep {

namespace {

void check_spins(const Vector& s) {
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] != 1.0 && s[i] != -1.0) {
      throw DomainError("spin " + std::to_string(i) + " is not +-1");
    }
  }
}

void check_labels(const Vector& y, Index want) {
  require_size(y.size(), want, "ising target");
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) {
      throw DomainError("ising target labels must be +-1");
    }
  }
}

}  // namespace

ClassicalIsingModel::ClassicalIsingModel(int n_spins, std::vector<Bond> bonds,
                                         std::vector<int> input_spins,
                                         std::vector<int> output_spins,
                                         Options options)
    : n_(n_spins),
      bonds_(std::move(bonds)),
      inputs_(std::move(input_spins)),
      outputs_(std::move(output_spins)),
      adjacency_(n_spins > 0 ? n_spins : 0),
      options_(options) {
  if (n_ < 1) throw DomainError("ising model needs at least one spin");
  const auto in_range = [&](int i) { return i >= 0 && i < n_; };
  std::set<std::pair<int, int>> seen;
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    auto& bond = bonds_[b];
    if (!in_range(bond.j) || !in_range(bond.k)) {
      throw DomainError("bond index out of range");
    }
    if (bond.j == bond.k) throw DomainError("self-coupling is not allowed");
    if (bond.j > bond.k) std::swap(bond.j, bond.k);
    if (!seen.insert({bond.j, bond.k}).second) {
      throw DomainError("duplicate bond");
    }
    adjacency_[bond.j].emplace_back(bond.k, static_cast<int>(b));
    adjacency_[bond.k].emplace_back(bond.j, static_cast<int>(b));
  }
  std::vector<bool> clamped(n_, false);
  for (int i : inputs_) {
    if (!in_range(i)) throw DomainError("input spin out of range");
    if (clamped[i]) throw DomainError("duplicate input spin");
    clamped[i] = true;
  }
  for (int o : outputs_) {
    if (!in_range(o)) throw DomainError("output spin out of range");
    if (clamped[o]) {
      throw DomainError("output spin " + std::to_string(o) +
                        " is also clamped as an input");
    }
  }
  for (int i = 0; i < n_; ++i) {
    if (!clamped[i]) free_.push_back(i);
  }
  if (options_.anneal_sweeps < 1) throw DomainError("anneal_sweeps must be >= 1");
}

Index ClassicalIsingModel::weight_count() const {
  return static_cast<Index>(bonds_.size()) + n_;
}

std::vector<std::string> ClassicalIsingModel::weight_names() const {
  std::vector<std::string> names;
  names.reserve(weight_count());
  for (const auto& b : bonds_) {
    names.push_back("J(" + std::to_string(b.j) + "," + std::to_string(b.k) + ")");
  }
  for (int k = 0; k < n_; ++k) names.push_back("h(" + std::to_string(k) + ")");
  return names;
}

double ising_energy(const ClassicalIsingModel& model, const Vector& w,
                    const Vector& s) {
  require_size(w.size(), model.weight_count(), "ising weights");
  require_size(s.size(), model.n_spins(), "ising state");
  check_spins(s);
  const auto& bonds = model.bonds();
  const Index nb = static_cast<Index>(bonds.size());
  double e = 0.0;
  for (Index b = 0; b < nb; ++b) e -= w[b] * s[bonds[b].j] * s[bonds[b].k];
  e -= w.tail(model.n_spins()).dot(s);
  return e;
}

Vector ising_weight_gradient(const ClassicalIsingModel& model, const Vector& s) {
  require_size(s.size(), model.n_spins(), "ising state");
  check_spins(s);
  const auto& bonds = model.bonds();
  const Index nb = static_cast<Index>(bonds.size());
  Vector g(model.weight_count());
  for (Index b = 0; b < nb; ++b) g[b] = -s[bonds[b].j] * s[bonds[b].k];
  g.tail(model.n_spins()) = -s;
  return g;
}

double ClassicalIsingModel::energy(const Vector& w, const Vector& x,
                                   const Vector& s) const {
  require_size(x.size(), static_cast<Index>(inputs_.size()), "ising input");
  require_size(s.size(), n_, "ising state");
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (s[inputs_[i]] != x[static_cast<Index>(i)]) {
      throw DomainError("clamped spin " + std::to_string(inputs_[i]) +
                        " differs from its input");
    }
  }
  return ising_energy(*this, w, s);
}

Vector ClassicalIsingModel::energy_weight_gradient(const Vector& w,
                                                   const Vector& x,
                                                   const Vector& s) const {
  require_size(w.size(), weight_count(), "ising weights");
  require_size(x.size(), static_cast<Index>(inputs_.size()), "ising input");
  return ising_weight_gradient(*this, s);
}

double ClassicalIsingModel::cost(const Vector& s, const Vector& y) const {
  require_size(s.size(), n_, "ising state");
  check_labels(y, static_cast<Index>(outputs_.size()));
  double c = 0.0;
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    c += 0.5 * (1.0 - y[static_cast<Index>(i)] * s[outputs_[i]]);
  }
  return c;
}

Vector ClassicalIsingModel::cost_state_gradient(const Vector& s,
                                                const Vector& y) const {
  require_size(s.size(), n_, "ising state");
  check_labels(y, static_cast<Index>(outputs_.size()));
  Vector g = Vector::Zero(n_);
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    g[outputs_[i]] = -0.5 * y[static_cast<Index>(i)];
  }
  return g;
}

Vector ClassicalIsingModel::effective_field(const Vector& w, const Vector& y,
                                            double beta) const {
  require_size(w.size(), weight_count(), "ising weights");
  Vector field = w.tail(n_);
  if (beta != 0.0) {
    check_labels(y, static_cast<Index>(outputs_.size()));
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      field[outputs_[i]] += 0.5 * beta * y[static_cast<Index>(i)];
    }
  }
  return field;
}

double ClassicalIsingModel::flip_delta(const Vector& w, const Vector& field,
                                       const Vector& s, int i) const {
  double local = field[i];
  for (const auto& [nb, b] : adjacency_[i]) local += w[b] * s[nb];
  return 2.0 * s[i] * local;
}

Vector ClassicalIsingModel::clamped_start(
    const Vector& x, const std::optional<Vector>& warm) const {
  require_size(x.size(), static_cast<Index>(inputs_.size()), "ising input");
  check_spins(x);
  Vector s = Vector::Ones(n_);
  if (warm) {
    require_size(warm->size(), n_, "warm start");
    check_spins(*warm);
    s = *warm;
  }
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    s[inputs_[i]] = x[static_cast<Index>(i)];
  }
  return s;
}

double ClassicalIsingModel::stationarity_residual(const Vector& w,
                                                  const Vector& x,
                                                  const Vector& y, double beta,
                                                  const Vector& s) const {
  energy(w, x, s);  // validates shape, spins and clamps
  const Vector field = effective_field(w, y, beta);
  double worst = 0.0;
  for (int i : free_) worst = std::max(worst, -flip_delta(w, field, s, i));
  return worst;
}

Equilibrium ClassicalIsingModel::equilibrate(
    const Vector& w, const Vector& x, const Vector& y, double beta,
    const std::optional<Vector>& warm_start) const {
  if (options_.solver == IsingSolver::kAnnealing) {
    return anneal(w, x, y, beta, warm_start);
  }
  if (static_cast<int>(free_.size()) > kMaxExhaustiveFree) {
    throw CapacityError("exhaustive equilibration supports at most " +
                        std::to_string(kMaxExhaustiveFree) +
                        " free spins; use the annealing solver");
  }
  return exhaustive(w, x, y, beta, warm_start);
}

Equilibrium ClassicalIsingModel::exhaustive(
    const Vector& w, const Vector& x, const Vector& y, double beta,
    const std::optional<Vector>& warm) const {
  const Vector field = effective_field(w, y, beta);
  Vector s = clamped_start(x, warm);
  // Gray-code walk starting at the warm start, so the warm start wins ties.
  double e = ising_energy(*this, w, s) -
             (field - w.tail(n_)).dot(s);  // E^beta up to a constant
  const double scale =
      1.0 + w.cwiseAbs().sum() + std::abs(beta) * static_cast<double>(outputs_.size());
  const double tie_tol = 1e-10 * scale;

  Vector best = s;
  double best_e = e;
  long ties = 0;
  const std::uint64_t count = std::uint64_t{1} << free_.size();
  for (std::uint64_t step = 1; step < count; ++step) {
    const int bit = std::countr_zero(step);
    const int i = free_[bit];
    e += flip_delta(w, field, s, i);
    s[i] = -s[i];
    if (e < best_e - tie_tol) {
      best_e = e;
      best = s;
      ties = 0;
    } else if (e <= best_e + tie_tol) {
      ++ties;
    }
  }

  Equilibrium eq;
  eq.state = std::move(best);
  eq.iterations = static_cast<long>(count);
  eq.degenerate = ties > 0;
  eq.residual = stationarity_residual(w, x, y, beta, eq.state);
  return eq;
}

Equilibrium ClassicalIsingModel::anneal(const Vector& w, const Vector& x,
                                        const Vector& y, double beta,
                                        const std::optional<Vector>& warm) const {
  const Vector field = effective_field(w, y, beta);
  Vector s = clamped_start(x, warm);
  CounterRng rng(options_.anneal_seed);
  const long sweeps = options_.anneal_sweeps;
  const double ratio = options_.anneal_t_end / options_.anneal_t_start;
  for (long sweep = 0; sweep < sweeps; ++sweep) {
    const double frac =
        sweeps > 1 ? static_cast<double>(sweep) / static_cast<double>(sweeps - 1)
                   : 1.0;
    const double temperature = options_.anneal_t_start * std::pow(ratio, frac);
    for (int i : free_) {
      const double delta = flip_delta(w, field, s, i);
      if (delta <= 0.0 || rng.uniform() < std::exp(-delta / temperature)) {
        s[i] = -s[i];
      }
    }
  }
  // Greedy quench to a flip-stable state.
  long iterations = sweeps;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i : free_) {
      if (flip_delta(w, field, s, i) < 0.0) {
        s[i] = -s[i];
        improved = true;
      }
    }
    ++iterations;
  }
  Equilibrium eq;
  eq.state = std::move(s);
  eq.iterations = iterations;
  eq.residual = stationarity_residual(w, x, y, beta, eq.state);
  return eq;
}

}  // namespace qep
