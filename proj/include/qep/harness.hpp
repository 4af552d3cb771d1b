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

#ifndef QEP_HARNESS_HPP_
#define QEP_HARNESS_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qep/config.hpp"

namespace qep {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// A configured experiment: one model, its initial weights and a dataset.
/// Weights absent from the config are drawn from the run seed.
struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const EnergyModel> classical;
  std::shared_ptr<const QuantumSystem> quantum;
  WeightVector initial;
  std::vector<Example> data;
  NudgeConfig nudge;
  QepConfig qep;
};

Experiment build_experiment(const ExperimentConfig& config);

/// One metrics row: fixed field order, no wall time, so that identical runs
/// produce identical lines.
std::string metrics_line(const EpochMetrics& m);

struct TrainOutput {
  std::vector<std::string> metrics;  // newline-delimited records
  Json summary;
  bool aborted = false;
  std::string error;
};
TrainOutput run_training(const Experiment& experiment);

struct GradcheckOutput {
  Json report;
  bool passed = true;
};
GradcheckOutput run_gradcheck(const Experiment& experiment);

/// Lowest `count` levels of the free Hamiltonian at the given example's
/// input (zero input offsets when no example is given).
Json run_spectrum(const Experiment& experiment, Index count,
                  std::optional<Index> example = std::nullopt);

/// Histogram of `shots` joint measurements of the listed observables on the
/// free ground state, with the exact Born probabilities and their total
/// variation distance. TFIM ids: Z<k>, X<k>, Z<j>Z<k>, C (cost of the
/// example's labels). QHO ids: r<i> (binned).
Json run_sample(const Experiment& experiment,
                const std::vector<std::string>& observables, Index shots,
                std::optional<Index> example = std::nullopt);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace qep

#endif  // QEP_HARNESS_HPP_
