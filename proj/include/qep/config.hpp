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

#ifndef QEP_CONFIG_HPP_
#define QEP_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qep/ep.hpp"
#include "qep/ising.hpp"
#include "qep/qep.hpp"
#include "qep/qho.hpp"

namespace qep {

using Json = nlohmann::ordered_json;

/// Invalid experiment configuration; `path` is a JSON pointer to the field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error("config error at " + (path.empty() ? std::string("/") : path) +
              ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct IsingSection {
  int n = 0;
  std::vector<Bond> bonds;
  std::vector<int> inputs;
  std::vector<int> outputs;
  std::optional<Vector> weights;
  double init_scale = 0.5;
  IsingSolver solver = IsingSolver::kExhaustive;
  long anneal_sweeps = 10000;
};

struct ElasticSection {
  int n = 0;
  int dim = 2;
  std::vector<Bond> springs;
  std::vector<int> clamped;
  std::vector<int> outputs;
  Vector reference;  // node-major
  std::optional<Vector> weights;
  Range init_k{0.5, 1.5};
  double tolerance = 1e-8;
  long max_iterations = 10000;
};

struct TfimSection {
  int n = 0;
  std::vector<Bond> couplings;
  std::vector<int> inputs;
  std::vector<int> outputs;
  std::vector<std::pair<int, int>> output_pairs;
  std::optional<Vector> weights;
  Range init_coupling{-1.0, 1.0};
  Range init_field{0.1, 1.1};
  std::optional<WeightBounds> coupling_bounds;
  std::optional<WeightBounds> field_bounds;
};

struct QhoSection {
  Vector masses;
  std::vector<Bond> springs;
  Vector pinning;
  Vector anchors;
  std::vector<int> inputs;
  std::vector<QhoOutput> outputs;
  double hbar = 1.0;
  std::optional<Vector> weights;
  Range init_k{0.5, 1.5};
};

using ModelSection =
    std::variant<IsingSection, ElasticSection, TfimSection, QhoSection>;

enum class TaskGenerator { kInline, kXor, kParity, kDisplacement };

struct TaskSection {
  TaskGenerator generator = TaskGenerator::kInline;
  int bits = 2;
  /// Field offset per set bit (TFIM inputs).
  double input_scale = 1.0;
  /// Displacement tasks: number of examples and input amplitude.
  long size = 8;
  double amplitude = 0.5;
  std::vector<Example> examples;
};

struct EstimatorSection {
  double beta = 0.1;
  NudgeMode nudge = NudgeMode::kSymmetric;
  double eta = 0.05;
  // Quantum models only.
  Index shots = 1000;
  QepEstimator mode = QepEstimator::kExactExpectation;
  Index eigen_index = 0;
  DegeneracyPolicy degeneracy = DegeneracyPolicy::kWarn;
  double gap_tolerance = 1e-8;
  int ramp_steps = 16;
  double min_overlap = 0.9;
};

struct RunSection {
  long epochs = 0;
  std::uint64_t seed = 0;
  std::string output;
  long emit_every = 1;
};

struct GradcheckSection {
  double fd_step = 1e-5;
  double tolerance = 1e-3;
  /// Relative errors divide by max(|oracle|, floor).
  double floor = 1e-8;
  Index example = 0;
};

struct ExperimentConfig {
  ModelSection model;
  TaskSection task;
  EstimatorSection estimator;
  RunSection run;
  GradcheckSection gradcheck;

  bool is_quantum() const {
    return std::holds_alternative<TfimSection>(model) ||
           std::holds_alternative<QhoSection>(model);
  }
  std::string model_kind() const;
};

/// Strict parse: unknown keys, missing mandatory fields and out-of-domain
/// values raise ConfigError naming the field.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);
/// Canonical document; parse_config(to_json(c)) reproduces c.
Json to_json(const ExperimentConfig& config);

NudgeConfig nudge_config(const EstimatorSection& e);
QepConfig qep_config(const EstimatorSection& e, std::uint64_t seed);

}  // namespace qep

#endif  // QEP_CONFIG_HPP_
