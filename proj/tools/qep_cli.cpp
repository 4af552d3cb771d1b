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

// qep: command-line front end for training, gradient checks, spectra and
// measurement sampling. Exit codes: 0 ok, 1 gradcheck tolerance exceeded,
// 2 invalid configuration or arguments, 3 runtime model failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qep/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kToleranceExceeded = 1;
constexpr int kConfigError = 2;
constexpr int kModelError = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long> shots;
  std::optional<double> beta;
  std::optional<long> example;
  long count = 4;
  std::vector<std::string> observables;
};

int thread_cap() {
  const char* env = std::getenv("QEP_NUM_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    throw qep::ConfigError("$QEP_NUM_THREADS", "must be a positive integer");
  }
  Eigen::setNbThreads(static_cast<int>(n));
  return static_cast<int>(n);
}

qep::Experiment load(const Options& opt) {
  qep::ExperimentConfig cfg = qep::load_config(opt.config);
  if (opt.seed) cfg.run.seed = *opt.seed;
  if (opt.shots) cfg.estimator.shots = *opt.shots;
  if (opt.beta) cfg.estimator.beta = *opt.beta;
  // Re-validate with the overrides applied.
  cfg = qep::parse_config(qep::to_json(cfg));
  return qep::build_experiment(cfg);
}

std::string out_dir(const Options& opt, const qep::Experiment& ex) {
  return opt.out.empty() ? ex.config.run.output : opt.out;
}

void emit(const std::string& dir, const std::string& name, const qep::Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (dir.empty()) {
    std::cout << text;
  } else {
    qep::write_file(dir + "/" + name, text);
  }
}

int cmd_train(const Options& opt) {
  const qep::Experiment ex = load(opt);
  const qep::TrainOutput run = qep::run_training(ex);
  const std::string dir = out_dir(opt, ex);
  std::string lines;
  for (const auto& l : run.metrics) lines += l + "\n";
  if (dir.empty()) {
    std::cout << lines;
  } else {
    qep::write_file(dir + "/metrics.ndjson", lines);
  }
  emit(dir, "summary.json", run.summary);
  std::cerr << "initial cost " << run.summary["initial_mean_cost"] << ", final cost "
            << run.summary["final_mean_cost"] << "\n";
  if (run.aborted) {
    std::cerr << "training aborted: " << run.error << "\n";
    return kModelError;
  }
  return kOk;
}

int cmd_gradcheck(const Options& opt) {
  const qep::Experiment ex = load(opt);
  const qep::GradcheckOutput check = qep::run_gradcheck(ex);
  for (const auto& row : check.report["weights"]) {
    std::cerr << row["weight"].get<std::string>() << "  estimate " << row["estimate"]
              << "  oracle " << row["oracle"] << "  rel " << row["rel_error"]
              << (row["ok"].get<bool>() ? "" : "  FAIL") << "\n";
  }
  emit(out_dir(opt, ex), "gradcheck.json", check.report);
  return check.passed ? kOk : kToleranceExceeded;
}

int cmd_spectrum(const Options& opt) {
  const qep::Experiment ex = load(opt);
  std::optional<qep::Index> example;
  if (opt.example) example = *opt.example;
  emit(out_dir(opt, ex), "spectrum.json", qep::run_spectrum(ex, opt.count, example));
  return kOk;
}

int cmd_sample(const Options& opt) {
  const qep::Experiment ex = load(opt);
  std::optional<qep::Index> example;
  if (opt.example) example = *opt.example;
  const qep::Index shots = ex.config.estimator.shots;
  emit(out_dir(opt, ex), "sample.json",
       qep::run_sample(ex, opt.observables, shots, example));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical equilibrium propagation experiments"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", opt.out, "Output directory (defaults to run.output)");
    sub->add_option("--seed", opt.seed, "Override run.seed");
    sub->add_option("--shots", opt.shots, "Override estimator.shots");
    sub->add_option("--beta", opt.beta, "Override estimator.beta");
  };
  CLI::App* train = app.add_subcommand("train", "Run the configured training loop");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Compare estimator and oracle gradients");
  CLI::App* spectrum = app.add_subcommand("spectrum", "List the lowest energy levels");
  CLI::App* sample = app.add_subcommand("sample", "Histogram of measurement outcomes");
  for (CLI::App* sub : {train, gradcheck, spectrum, sample}) common(sub);
  spectrum->add_option("--count", opt.count, "Number of levels")->check(CLI::PositiveNumber);
  for (CLI::App* sub : {spectrum, sample}) {
    sub->add_option("--example", opt.example, "Dataset example supplying the input");
  }
  sample->add_option("--observable", opt.observables,
                     "Observable id(s), e.g. Z0, X1, Z0Z1, C, r0; repeat or comma-separate "
                     "for a commuting family")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    thread_cap();
    if (*train) return cmd_train(opt);
    if (*gradcheck) return cmd_gradcheck(opt);
    if (*spectrum) return cmd_spectrum(opt);
    return cmd_sample(opt);
  } catch (const qep::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const qep::Error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kModelError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModelError;
  }
}
