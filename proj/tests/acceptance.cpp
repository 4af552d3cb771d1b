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


// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qep/harness.hpp"
#include "test_support.hpp"

namespace qep {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string config_path(const std::string& name) {
  return std::string(QEP_CONFIG_DIR) + "/" + name;
}

// Largest per-weight relative error |e - o| / max(|o|, floor).
double max_rel_error(const Vector& est, const Vector& oracle, double floor) {
  double worst = 0.0;
  for (Index k = 0; k < est.size(); ++k) {
    worst = std::max(worst, std::abs(est[k] - oracle[k]) / std::max(std::abs(oracle[k]), floor));
  }
  return worst;
}

// 1. Classical estimator vs finite-difference oracle.
Outcome classical_gradient() {
  const auto t0 = Clock::now();
  CounterRng rng(2026, 1);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto inst = testing::random_ising(rng);
    const Vector o = exact_cost_gradient_oracle(inst.model, inst.w, inst.x, inst.y, 1e-5).values;
    const Vector e =
        ep_gradient(inst.model, inst.w, inst.x, inst.y, {1e-3, NudgeMode::kSymmetric}).values;
    worst = std::max(worst, max_rel_error(e, o, 1e-8));
  }
  for (int i = 0; i < 10; ++i) {
    const auto inst = testing::random_elastic(rng);
    const Vector o = exact_cost_gradient_oracle(inst.model, inst.w, inst.x, inst.y, 1e-5).values;
    const Vector e =
        ep_gradient(inst.model, inst.w, inst.x, inst.y, {1e-3, NudgeMode::kSymmetric}).values;
    worst = std::max(worst, max_rel_error(e, o, 1e-8));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-3 && t < 10.0, fmt("max rel error %.2e, %.2f s", worst, t)};
}

// 2. Quantum estimator error ratios under beta halving.
Outcome quantum_ratios() {
  const auto t0 = Clock::now();
  CounterRng rng(2026, 2);
  double one_lo = 1e9, one_hi = 0.0, sym_lo = 1e9, sym_hi = 0.0;
  for (int i = 0; i < 10; ++i) {
    const TfimSpec spec = testing::random_tfim(rng, 4);
    const TfimSystem sys(spec);
    const Vector x = (Vector(2) << testing::uniform(rng, -0.3, 0.3),
                      testing::uniform(rng, -0.3, 0.3)).finished();
    const Vector y = testing::random_signs(rng, spec.label_count());
    const Vector w = spec.weights();
    QepConfig cfg;
    const Vector o = qep_cost_gradient_oracle(sys, w, x, y, 1e-5, cfg);
    const auto err = [&](double beta, NudgeMode mode) {
      cfg.beta = beta;
      cfg.nudge = mode;
      return (qep_gradient(sys, w, x, y, cfg).estimate.values - o).norm();
    };
    const double r1 = err(1e-2, NudgeMode::kOneSidedPositive) /
                      err(5e-3, NudgeMode::kOneSidedPositive);
    const double r2 = err(1e-2, NudgeMode::kSymmetric) / err(5e-3, NudgeMode::kSymmetric);
    one_lo = std::min(one_lo, r1);
    one_hi = std::max(one_hi, r1);
    sym_lo = std::min(sym_lo, r2);
    sym_hi = std::max(sym_hi, r2);
  }
  const double t = seconds_since(t0);
  const bool ok = one_lo >= 1.6 && one_hi <= 2.4 && sym_lo >= 3.2 && sym_hi <= 4.8 && t < 30.0;
  return {ok, fmt("one-sided ratios [%.3f, %.3f], ", one_lo, one_hi) +
                  fmt("symmetric [%.3f, %.3f], %.2f s", sym_lo, sym_hi, t)};
}

// 3. Contrastive losses bracket the cost.
Outcome sandwich() {
  CounterRng rng(2026, 3);
  long checks = 0, violations = 0;
  const auto check = [&](double lo, double c, double hi) {
    checks += 2;
    violations += !(lo <= c) + !(c <= hi);
  };
  const double betas[] = {0.05, 0.1, 0.2};
  for (int i = 0; i < 20; ++i) {
    const auto inst = testing::random_ising(rng);
    const double c = free_cost(inst.model, inst.w, inst.x, inst.y);
    for (double b : betas) {
      check(contrastive_loss(inst.model, inst.w, inst.x, inst.y, b), c,
            contrastive_loss(inst.model, inst.w, inst.x, inst.y, -b));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const auto inst = testing::random_elastic(rng);
    const double c = free_cost(inst.model, inst.w, inst.x, inst.y);
    for (double b : betas) {
      check(contrastive_loss(inst.model, inst.w, inst.x, inst.y, b), c,
            contrastive_loss(inst.model, inst.w, inst.x, inst.y, -b));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const TfimSpec spec = testing::random_tfim(rng, 4);
    const TfimSystem sys(spec);
    const Vector x = Vector::Zero(2), y = testing::random_signs(rng, spec.label_count());
    const double c = qep_cost(sys, spec.weights(), x, y);
    for (double b : betas) {
      check(qep_contrastive_loss(sys, spec.weights(), x, y, b), c,
            qep_contrastive_loss(sys, spec.weights(), x, y, -b));
    }
  }
  for (int i = 0; i < 20; ++i) {
    QhoSpec spec = testing::random_qho(rng, 3);
    spec.input_particles = {0};
    const QhoSystem sys(spec);
    const Vector x = Vector::Constant(1, testing::uniform(rng, -1, 1));
    const Vector y = Vector::Constant(1, testing::uniform(rng, -1, 1));
    const double c = qep_cost(sys, spec.weights(), x, y);
    for (double b : betas) {
      check(qep_contrastive_loss(sys, spec.weights(), x, y, b), c,
            qep_contrastive_loss(sys, spec.weights(), x, y, -b));
    }
  }
  return {violations == 0,
          std::to_string(checks) + " inequalities, " + std::to_string(violations) + " violations"};
}

// 4. Variational bound and eigenbasis orthonormality.
Outcome variational() {
  CounterRng rng(2026, 4);
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_gram = 0.0;
  int hamiltonians = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const TfimSpec spec = testing::random_tfim(rng, n, 0.0, 1.5);
      const HermitianOperator h =
          build_hamiltonian(spec, Vector::Zero(static_cast<Index>(spec.input_spins.size())));
      const Spectrum s = full_spectrum(h);
      const double e0 = ground_state(h).eigenvalue;
      for (int k = 0; k < 100; ++k) {
        const StateVector phi(testing::random_state(rng, h.dimension()));
        worst_gap = std::min(worst_gap, expectation(h, phi) - e0);
      }
      const Index d = h.dimension();
      worst_gram = std::max(
          worst_gram,
          (s.vectors.adjoint() * s.vectors - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
      ++hamiltonians;
    }
  }
  return {worst_gap >= -1e-9 && worst_gram <= 1e-10,
          std::to_string(hamiltonians) + " Hamiltonians, " +
              fmt("min <H> - E0 = %.3e, Gram deviation %.2e", worst_gap, worst_gram)};
}

// 5. Born-rule statistics, joint histograms and repeated-measurement
// idempotence.
Outcome born_rule() {
  CounterRng rng(2026, 5);
  const HermitianOperator z = HermitianOperator::diagonal((Vector(2) << 1, -1).finished(), "Z");
  const StateVector plus(CVector::Constant(2, 1.0 / std::sqrt(2.0)));
  const long shots = 100000;
  long ups = 0;
  bool idempotent = true;
  for (long t = 0; t < shots; ++t) {
    const auto a = measure(z, plus, rng);
    const auto b = measure(z, a.post_state, rng);
    idempotent = idempotent && a.outcome == b.outcome;
    ups += a.outcome > 0;
  }
  const double freq = static_cast<double>(ups) / shots;

  // Joint histogram of the ZZ family on a TFIM ground state.
  const TfimSpec spec = testing::random_tfim(rng, 3);
  const StateVector psi = ground_state(build_hamiltonian(spec, Vector::Zero(2))).eigenvector;
  std::vector<HermitianOperator> family;
  for (Index id : commuting_families(spec).zz) family.push_back(derivative_observable(spec, id));
  std::map<std::vector<double>, long> hist;
  for (long t = 0; t < shots; ++t) {
    const auto rec = measure_commuting_family(family, psi, rng);
    std::vector<double> key;
    for (const auto& r : rec) key.push_back(r.outcome);
    ++hist[key];
    const auto again = measure_commuting_family(family, rec.front().post_state, rng);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      idempotent = idempotent && again[i].outcome == rec[i].outcome;
    }
  }
  // Exact joint probabilities from the basis amplitudes.
  std::map<std::vector<double>, double> exact;
  for (Index b = 0; b < psi.dimension(); ++b) {
    std::vector<double> key;
    for (const auto& op : family) key.push_back(op.frame_diagonal()[b]);
    exact[key] += std::norm(psi[b]);
  }
  double tv = 0.0;
  for (const auto& [key, p] : exact) {
    tv += std::abs(p - static_cast<double>(hist[key]) / shots);
  }
  tv *= 0.5;
  const bool ok = freq >= 0.494 && freq <= 0.506 && tv < 0.01 && idempotent;
  return {ok, fmt("+1 frequency %.5f, joint TV %.4f, ", freq, tv) +
                  (idempotent ? "idempotent on every shot" : "idempotence violated")};
}

// 6. Sampled-gradient standard deviation scales as 1/sqrt(T).
Outcome shot_noise() {
  CounterRng rng(2026, 6);
  const TfimSpec spec = testing::random_tfim(rng, 4);
  const TfimSystem sys(spec);
  const Vector x = Vector::Zero(2), y = testing::random_signs(rng, spec.label_count());
  QepConfig cfg;
  cfg.estimator = QepEstimator::kSampled;
  cfg.beta = 0.1;
  const int reps = 200;
  const auto spread = [&](Index shots, std::uint64_t stream) {
    cfg.shots = shots;
    Matrix est(reps, spec.weight_count());
    const CounterRng base(2026, stream);
    for (int r = 0; r < reps; ++r) {
      CounterRng child = base.split(static_cast<std::uint64_t>(r));
      est.row(r) = qep_gradient(sys, spec.weights(), x, y, cfg, child).estimate.values.transpose();
    }
    Vector sd(est.cols());
    for (Index k = 0; k < est.cols(); ++k) {
      const double m = est.col(k).mean();
      sd[k] = std::sqrt((est.col(k).array() - m).square().sum() / (reps - 1));
    }
    return sd;
  };
  const Vector small = spread(100, 60), large = spread(10000, 61);
  const Vector ratio = large.cwiseQuotient(small);
  const bool ok = ratio.minCoeff() >= 0.05 && ratio.maxCoeff() <= 0.2;
  return {ok, fmt("std ratio T=1e4 / T=1e2 in [%.4f, %.4f]", ratio.minCoeff(), ratio.maxCoeff())};
}

// 7. Gaussian ground state vs truncated Fock diagonalization, and the
// Hellmann-Feynman identity.
Outcome qho_oracle() {
  CounterRng rng(2026, 7);
  double energy_err = 0.0, cov_err = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    QhoSpec spec = testing::random_qho(rng, 2);
    spec.anchors.setZero();
    const QuadraticPotential v = assemble_potential(spec, Vector(), 0.0);
    const auto g = solve_ground_state(spec.masses, v, spec.hbar);
    const auto f = testing::fock_oracle(spec.masses, v, spec.hbar, 40);
    energy_err = std::max(energy_err, std::abs(g.ground_energy - f.energy));
    cov_err = std::max(cov_err, (g.covariance - f.covariance).cwiseAbs().maxCoeff());
  }
  double hf_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const QhoSpec spec = testing::random_qho(rng, 2 + trial % 4);
    const auto g = solve_ground_state(spec);
    const Vector w = spec.weights();
    for (Index k = 0; k < w.size(); ++k) {
      Vector wp = w, wm = w;
      wp[k] += 1e-6;
      wm[k] -= 1e-6;
      const double fd = (solve_ground_state(spec.with_weights(wp)).ground_energy -
                         solve_ground_state(spec.with_weights(wm)).ground_energy) / 2e-6;
      const auto& s = spec.springs[static_cast<std::size_t>(k)];
      hf_err = std::max(hf_err, std::abs(fd - qho_derivative_expectation(g, s.i, s.j)));
    }
  }
  const bool ok = energy_err <= 1e-6 && cov_err <= 1e-6 && hf_err <= 1e-6;
  return {ok, fmt("energy err %.2e, covariance err %.2e, Hellmann-Feynman err %.2e", energy_err,
                  cov_err, hf_err)};
}

// 8. End-to-end training on the shipped configs.
Outcome training() {
  std::string detail;
  bool ok = true;
  const std::pair<const char*, double> runs[] = {
      {"tfim_parity.json", 0.2}, {"ising_xor.json", 0.2}, {"tfim_parity_sampled.json", 0.5}};
  for (const auto& [name, bound] : runs) {
    const auto t0 = Clock::now();
    const ExperimentConfig c = load_config(config_path(name));
    const TrainOutput out = run_training(build_experiment(c));
    const double t = seconds_since(t0);
    const double c0 = out.summary["initial_mean_cost"].get<double>();
    const double c1 = out.summary["final_mean_cost"].get<double>();
    const bool pass = !out.aborted && c.run.epochs <= 500 && c1 < bound * c0 && t < 60.0;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += std::string(name) + fmt(" %.4f -> %.4f in %.2f s", c0, c1, t);
  }
  return {ok, detail};
}

// 9. Repeated exact runs write byte-identical metric files.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("qep_accept_" + std::to_string(::getpid()));
  bool ok = true;
  int files = 0;
  for (const char* name : {"tfim_parity.json", "qho_displacement.json", "elastic_displacement.json",
                           "ising_xor.json"}) {
    const ExperimentConfig c = load_config(config_path(name));
    std::string text[2];
    for (int r = 0; r < 2; ++r) {
      const TrainOutput out = run_training(build_experiment(c));
      std::string lines;
      for (const auto& l : out.metrics) lines += l + "\n";
      const fs::path p = dir / std::to_string(r) / (std::string(name) + ".ndjson");
      write_file(p.string(), lines);
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      text[r] = ss.str();
    }
    ok = ok && !text[0].empty() && text[0] == text[1];
    ++files;
  }
  fs::remove_all(dir);
  return {ok, std::to_string(files) + " configs, metric files " +
                  (ok ? "byte-identical" : "differ")};
}

}  // namespace
}  // namespace qep

int main() {
  using qep::Outcome;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"classical EP gradient matches finite-difference oracle", qep::classical_gradient},
      {"quantum EP error ratios under beta halving", qep::quantum_ratios},
      {"contrastive losses bracket the cost", qep::sandwich},
      {"variational bound and eigenbasis orthonormality", qep::variational},
      {"Born-rule fidelity", qep::born_rule},
      {"shot-noise scaling", qep::shot_noise},
      {"QHO oracle equivalence", qep::qho_oracle},
      {"end-to-end training", qep::training},
      {"determinism of exact runs", qep::determinism},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d acceptance criteria passed\n", 9 - failures, 9);
  return failures == 0 ? 0 : 1;
}
