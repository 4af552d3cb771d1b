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

#ifndef QEP_ELASTIC_HPP_
#define QEP_ELASTIC_HPP_

#include <vector>

#include "qep/energy_model.hpp"
#include "qep/ising.hpp"

namespace qep {

/// Network of N nodes in D dimensions joined by springs,
/// E = sum_springs k (|r_i - r_j| - l)^2 / 2.
///
/// Weight layout: all spring constants (spring order), then all rest
/// lengths; both are bounded below by zero. State: node positions,
/// node-major (node i occupies entries [i*D, i*D + D)). Input x holds the
/// positions of `clamped_nodes`; target y the desired positions of
/// `output_nodes`, with C = sum_out |r_k - y_k|^2 / 2.
class ElasticNetworkModel final : public EnergyModel {
 public:
  struct Options {
    double tolerance = 1e-8;
    long max_iterations = 10000;
    // Springs shorter than this have no defined direction; their state
    // gradient is zeroed and the equilibrium is flagged as singular.
    double coincidence_eps = 1e-12;
  };

  ElasticNetworkModel(int n_nodes, int dim, std::vector<Bond> springs,
                      std::vector<int> clamped_nodes,
                      std::vector<int> output_nodes, Vector reference_positions,
                      Options options);
  ElasticNetworkModel(int n_nodes, int dim, std::vector<Bond> springs,
                      std::vector<int> clamped_nodes,
                      std::vector<int> output_nodes, Vector reference_positions)
      : ElasticNetworkModel(n_nodes, dim, std::move(springs),
                            std::move(clamped_nodes), std::move(output_nodes),
                            std::move(reference_positions), Options{}) {}

  int n_nodes() const { return n_; }
  int dim() const { return dim_; }
  const std::vector<Bond>& springs() const { return springs_; }
  const std::vector<int>& clamped_nodes() const { return clamped_; }
  const std::vector<int>& output_nodes() const { return outputs_; }
  const Vector& reference_positions() const { return reference_; }
  const Options& options() const { return options_; }
  void set_options(const Options& options) { options_ = options; }

  Index weight_count() const override;
  Index state_size() const override { return Index{n_} * dim_; }
  std::vector<std::string> weight_names() const override;
  std::vector<std::optional<WeightBounds>> weight_bounds() const override;

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

  /// dE^beta/ds over all coordinates; `singular` is set when a coincident
  /// spring was met.
  Vector state_gradient(const Vector& w, const Vector& s, const Vector& y,
                        double beta, bool* singular = nullptr) const;

 private:
  Matrix free_hessian(const Vector& w, const Vector& s, double beta) const;
  Vector with_clamps(Vector s, const Vector& x) const;

  int n_;
  int dim_;
  std::vector<Bond> springs_;
  std::vector<int> clamped_;
  std::vector<int> outputs_;
  std::vector<int> free_coords_;
  std::vector<bool> is_output_;
  Vector reference_;
  Options options_;
};

/// sum k (|r_i - r_j| - l)^2 / 2 over the model's springs.
double elastic_energy(const ElasticNetworkModel& model, const Vector& w,
                      const Vector& positions);

/// dE/dk = (|dr| - l)^2 / 2 and dE/dl = k (l - |dr|), in weight layout order.
Vector elastic_weight_gradient(const ElasticNetworkModel& model,
                               const Vector& w, const Vector& positions);

}  // namespace qep

#endif  // QEP_ELASTIC_HPP_
