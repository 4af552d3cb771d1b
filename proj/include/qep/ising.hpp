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

#ifndef QEP_ISING_HPP_
#define QEP_ISING_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "qep/energy_model.hpp"

namespace qep {

struct Bond {
  int j = 0;
  int k = 0;
};

enum class IsingSolver { kExhaustive, kAnnealing };

/// Classical Ising network E = -sum_{j<k} J_jk s_j s_k - sum_k h_k s_k.
///
/// Weight layout: one coupling per bond (in bond order), then one bias per
/// spin. Inputs clamp `input_spins` to the +-1 values in x; the cost reads
/// `output_spins`, C(s, y) = sum_out (1 - y_k s_k) / 2.
class ClassicalIsingModel final : public EnergyModel {
 public:
  static constexpr int kMaxExhaustiveFree = 20;

  struct Options {
    IsingSolver solver = IsingSolver::kExhaustive;
    long anneal_sweeps = 10000;
    double anneal_t_start = 1.0;
    double anneal_t_end = 1e-3;
    std::uint64_t anneal_seed = 0;
  };

  ClassicalIsingModel(int n_spins, std::vector<Bond> bonds,
                      std::vector<int> input_spins,
                      std::vector<int> output_spins, Options options);
  ClassicalIsingModel(int n_spins, std::vector<Bond> bonds,
                      std::vector<int> input_spins,
                      std::vector<int> output_spins)
      : ClassicalIsingModel(n_spins, std::move(bonds), std::move(input_spins),
                            std::move(output_spins), Options{}) {}

  int n_spins() const { return n_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<int>& input_spins() const { return inputs_; }
  const std::vector<int>& output_spins() const { return outputs_; }
  const Options& options() const { return options_; }

  Index weight_count() const override;
  Index state_size() const override { return n_; }
  std::vector<std::string> weight_names() const override;

  double energy(const Vector& w, const Vector& x,
                const Vector& s) const override;
  Vector energy_weight_gradient(const Vector& w, const Vector& x,
                                const Vector& s) const override;
  double cost(const Vector& s, const Vector& y) const override;
  Vector cost_state_gradient(const Vector& s, const Vector& y) const override;
  Equilibrium equilibrate(
      const Vector& w, const Vector& x, const Vector& y, double beta,
      const std::optional<Vector>& warm_start = std::nullopt) const override;
  double stationarity_residual(const Vector& w, const Vector& x,
                               const Vector& y, double beta,
                               const Vector& s) const override;

 private:
  // Effective per-spin field of E^beta (bias plus cost pull) and the
  // energy change of flipping spin i.
  Vector effective_field(const Vector& w, const Vector& y, double beta) const;
  double flip_delta(const Vector& w, const Vector& field, const Vector& s,
                    int i) const;
  Vector clamped_start(const Vector& x,
                       const std::optional<Vector>& warm) const;
  Equilibrium exhaustive(const Vector& w, const Vector& x, const Vector& y,
                         double beta, const std::optional<Vector>& warm) const;
  Equilibrium anneal(const Vector& w, const Vector& x, const Vector& y,
                     double beta, const std::optional<Vector>& warm) const;

  int n_;
  std::vector<Bond> bonds_;
  std::vector<int> inputs_;
  std::vector<int> outputs_;
  std::vector<int> free_;
  // Per-spin list of (neighbour, bond index).
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  Options options_;
};

/// -sum J_jk s_j s_k - sum h_k s_k for the model's bond layout. Entries of s
/// must be exactly +-1.
double ising_energy(const ClassicalIsingModel& model, const Vector& w,
                    const Vector& s);

/// dE/dJ_jk = -s_j s_k and dE/dh_k = -s_k, in weight layout order.
Vector ising_weight_gradient(const ClassicalIsingModel& model, const Vector& s);

}  // namespace qep

#endif  // QEP_ISING_HPP_
