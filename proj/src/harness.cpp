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

#include "qep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>
#include <regex>
#include <set>

#include "qep/elastic.hpp"

namespace qep {

namespace {

double uniform_in(CounterRng& rng, const Range& r) {
  return r.lo + (r.hi - r.lo) * rng.uniform();
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json weights_json(const WeightVector& w) {
  Json out;
  for (std::size_t i = 0; i < w.names.size(); ++i) {
    out[w.names[i]] = w.values[static_cast<Index>(i)];
  }
  return out;
}

// Inputs and labels of every pattern of `bits` bits; the label is +1 for odd
// parity and is repeated over `labels` outputs.
std::vector<Example> parity_task(int bits, Index labels, bool spin_inputs,
                                 double scale) {
  std::vector<Example> out;
  for (int pattern = 0; pattern < (1 << bits); ++pattern) {
    Example e;
    e.x.resize(bits);
    int ones = 0;
    for (int b = 0; b < bits; ++b) {
      const int bit = (pattern >> b) & 1;
      ones += bit;
      e.x[b] = spin_inputs ? 2.0 * bit - 1.0 : scale * bit;
    }
    e.y = Vector::Constant(labels, ones % 2 == 1 ? 1.0 : -1.0);
    out.push_back(std::move(e));
  }
  return out;
}

Vector reference_lengths(const ElasticSection& s) {
  Vector l(static_cast<Index>(s.springs.size()));
  for (std::size_t b = 0; b < s.springs.size(); ++b) {
    const auto& sp = s.springs[b];
    l[static_cast<Index>(b)] =
        (s.reference.segment(Index{sp.j} * s.dim, s.dim) -
         s.reference.segment(Index{sp.k} * s.dim, s.dim))
            .norm();
  }
  return l;
}

void check_example_sizes(const std::vector<Example>& data, Index nx, Index ny) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string path = "/task/examples/" + std::to_string(i);
    if (data[i].x.size() != nx) {
      throw ConfigError(path + "/x", "expected " + std::to_string(nx) + " inputs");
    }
    if (data[i].y.size() != ny) {
      throw ConfigError(path + "/y", "expected " + std::to_string(ny) + " labels");
    }
  }
}

QhoSpec qho_spec(const QhoSection& s) {
  QhoSpec spec;
  spec.masses = s.masses;
  for (const auto& b : s.springs) spec.springs.push_back({b.j, b.k, 0.0});
  spec.pinning = s.pinning;
  spec.anchors = s.anchors;
  spec.input_particles = s.inputs;
  spec.outputs = s.outputs;
  spec.hbar = s.hbar;
  return spec;
}

TfimSpec tfim_spec(const TfimSection& s) {
  TfimSpec spec;
  spec.n = s.n;
  for (const auto& b : s.couplings) spec.couplings.push_back({b.j, b.k, 0.0});
  spec.fields = Vector::Zero(s.n);
  spec.input_spins = s.inputs;
  spec.output_spins = s.outputs;
  spec.output_pairs = s.output_pairs;
  spec.coupling_bounds = s.coupling_bounds;
  spec.field_bounds = s.field_bounds;
  return spec;
}

const Example* pick_example(const Experiment& ex, std::optional<Index> which) {
  if (!which) return nullptr;
  if (*which < 0 || *which >= static_cast<Index>(ex.data.size())) {
    throw ConfigError("/task", "example " + std::to_string(*which) +
                                   " does not exist (dataset has " +
                                   std::to_string(ex.data.size()) + ")");
  }
  return &ex.data[static_cast<std::size_t>(*which)];
}

}  // namespace

Experiment build_experiment(const ExperimentConfig& config) {
  Experiment ex;
  ex.config = config;
  ex.nudge = nudge_config(config.estimator);
  ex.qep = qep_config(config.estimator, config.run.seed);
  CounterRng init(config.run.seed, 1);
  CounterRng task(config.run.seed, 2);
  const TaskSection& t = config.task;
  if (t.generator == TaskGenerator::kInline) ex.data = t.examples;

  try {
    if (const auto* s = std::get_if<IsingSection>(&config.model)) {
      ClassicalIsingModel::Options opts;
      opts.solver = s->solver;
      opts.anneal_sweeps = s->anneal_sweeps;
      opts.anneal_seed = config.run.seed;
      auto model = std::make_shared<ClassicalIsingModel>(s->n, s->bonds, s->inputs,
                                                         s->outputs, opts);
      Vector w(model->weight_count());
      if (s->weights) {
        w = *s->weights;
      } else {
        for (Index i = 0; i < w.size(); ++i) {
          w[i] = uniform_in(init, {-s->init_scale, s->init_scale});
        }
      }
      ex.initial = model->make_weights(w);
      if (t.generator == TaskGenerator::kXor || t.generator == TaskGenerator::kParity) {
        if (static_cast<int>(s->inputs.size()) != t.bits) {
          throw ConfigError("/task/bits", "must equal the number of input spins");
        }
        ex.data = parity_task(t.bits, static_cast<Index>(s->outputs.size()), true, 1.0);
      }
      check_example_sizes(ex.data, static_cast<Index>(s->inputs.size()),
                          static_cast<Index>(s->outputs.size()));
      ex.classical = std::move(model);
    } else if (const auto* s = std::get_if<ElasticSection>(&config.model)) {
      ElasticNetworkModel::Options opts;
      opts.tolerance = s->tolerance;
      opts.max_iterations = s->max_iterations;
      auto model = std::make_shared<ElasticNetworkModel>(
          s->n, s->dim, s->springs, s->clamped, s->outputs, s->reference, opts);
      const Index nb = static_cast<Index>(s->springs.size());
      const auto draw = [&](CounterRng& rng) {
        Vector w(2 * nb);
        for (Index b = 0; b < nb; ++b) w[b] = uniform_in(rng, s->init_k);
        w.tail(nb) = reference_lengths(*s);
        return w;
      };
      ex.initial = model->make_weights(s->weights ? *s->weights : draw(init));
      const Index nx = static_cast<Index>(s->clamped.size()) * s->dim;
      const Index ny = static_cast<Index>(s->outputs.size()) * s->dim;
      if (t.generator == TaskGenerator::kDisplacement) {
        if (s->outputs.empty()) throw ConfigError("/model/elastic/outputs", "needs outputs");
        const Vector teacher = draw(task);
        for (long e = 0; e < t.size; ++e) {
          Example item;
          item.x.resize(nx);
          for (std::size_t c = 0; c < s->clamped.size(); ++c) {
            for (int d = 0; d < s->dim; ++d) {
              item.x[static_cast<Index>(c) * s->dim + d] =
                  s->reference[Index{s->clamped[c]} * s->dim + d] +
                  uniform_in(task, {-t.amplitude, t.amplitude});
            }
          }
          const Equilibrium eq = model->equilibrate(teacher, item.x, Vector(), 0.0);
          item.y.resize(ny);
          for (std::size_t o = 0; o < s->outputs.size(); ++o) {
            item.y.segment(static_cast<Index>(o) * s->dim, s->dim) =
                eq.state.segment(Index{s->outputs[o]} * s->dim, s->dim);
          }
          ex.data.push_back(std::move(item));
        }
      }
      check_example_sizes(ex.data, nx, ny);
      ex.classical = std::move(model);
    } else if (const auto* s = std::get_if<TfimSection>(&config.model)) {
      const TfimSpec spec = tfim_spec(*s);
      auto system = std::make_shared<TfimSystem>(spec);
      Vector w(spec.weight_count());
      if (s->weights) {
        w = *s->weights;
      } else {
        const Index nb = static_cast<Index>(spec.couplings.size());
        for (Index i = 0; i < nb; ++i) w[i] = uniform_in(init, s->init_coupling);
        for (Index i = nb; i < w.size(); ++i) w[i] = uniform_in(init, s->init_field);
      }
      ex.initial = system->make_weights(w);
      ex.initial.clamp();
      if (t.generator == TaskGenerator::kXor || t.generator == TaskGenerator::kParity) {
        if (static_cast<int>(s->inputs.size()) != t.bits) {
          throw ConfigError("/task/bits", "must equal the number of input spins");
        }
        ex.data = parity_task(t.bits, spec.label_count(), false, t.input_scale);
      }
      check_example_sizes(ex.data, static_cast<Index>(s->inputs.size()),
                          spec.label_count());
      ex.quantum = std::move(system);
    } else {
      const auto& q = std::get<QhoSection>(config.model);
      const QhoSpec spec = qho_spec(q);
      auto system = std::make_shared<QhoSystem>(spec);
      const auto draw = [&](CounterRng& rng) {
        Vector w(spec.weight_count());
        for (Index i = 0; i < w.size(); ++i) w[i] = uniform_in(rng, q.init_k);
        return w;
      };
      ex.initial = system->make_weights(q.weights ? *q.weights : draw(init));
      const Index nx = static_cast<Index>(q.inputs.size());
      const Index ny = static_cast<Index>(q.outputs.size());
      if (t.generator == TaskGenerator::kDisplacement) {
        if (q.outputs.empty()) throw ConfigError("/model/qho/outputs", "needs outputs");
        const QhoSpec teacher = spec.with_weights(draw(task));
        for (long e = 0; e < t.size; ++e) {
          Example item;
          item.x.resize(nx);
          for (Index i = 0; i < nx; ++i) {
            item.x[i] = uniform_in(task, {-t.amplitude, t.amplitude});
          }
          const GaussianGroundState g = solve_ground_state(teacher, item.x, Vector(), 0.0);
          item.y.resize(ny);
          for (Index o = 0; o < ny; ++o) {
            const auto& out = q.outputs[static_cast<std::size_t>(o)];
            item.y[o] = g.mean[out.i] - (out.j >= 0 ? g.mean[out.j] : 0.0);
          }
          ex.data.push_back(std::move(item));
        }
      }
      check_example_sizes(ex.data, nx, ny);
      ex.quantum = std::move(system);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ModelError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError("/model/" + config.model_kind(), e.what());
  } catch (const ShapeError& e) {
    throw ConfigError("/model/" + config.model_kind(), e.what());
  }
  return ex;
}

std::string metrics_line(const EpochMetrics& m) {
  Json row;
  row["epoch"] = m.epoch;
  row["mean_cost"] = m.mean_cost;
  row["grad_norm"] = m.grad_norm;
  row["shots"] = m.shots;
  return row.dump();
}

TrainOutput run_training(const Experiment& ex) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  if (ex.data.empty()) throw ConfigError("/task", "training needs a nonempty dataset");
  const long epochs = ex.config.run.epochs;
  const TrainResult result =
      ex.quantum ? qep_train(*ex.quantum, ex.initial, ex.data, ex.qep, epochs)
                 : ep_train(*ex.classical, ex.initial, ex.data, ex.nudge,
                            ex.config.estimator.eta, epochs);
  TrainOutput out;
  out.aborted = result.aborted;
  out.error = result.error;
  const long every = ex.config.run.emit_every;
  long total_shots = 0;
  for (std::size_t i = 0; i < result.metrics.size(); ++i) {
    const auto& m = result.metrics[i];
    total_shots += m.shots;
    if (m.epoch % every == 0 || i + 1 == result.metrics.size()) {
      out.metrics.push_back(metrics_line(m));
    }
  }
  Json& s = out.summary;
  s["artifact_version"] = kArtifactVersion;
  s["model"] = ex.config.model_kind();
  s["seed"] = ex.config.run.seed;
  s["epochs_completed"] = result.metrics.empty() ? 0 : result.metrics.back().epoch;
  s["initial_mean_cost"] = result.metrics.empty() ? Json(nullptr) : Json(result.metrics.front().mean_cost);
  s["final_mean_cost"] = result.metrics.empty() ? Json(nullptr) : Json(result.metrics.back().mean_cost);
  s["total_shots"] = total_shots;
  s["initial_weights"] = weights_json(ex.initial);
  s["final_weights"] = weights_json(result.final_weights);
  s["aborted"] = result.aborted;
  s["error"] = result.error;
  s["wall_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  s["config"] = to_json(ex.config);
  return out;
}

GradcheckOutput run_gradcheck(const Experiment& ex) {
  const auto& gc = ex.config.gradcheck;
  if (ex.data.empty()) throw ConfigError("/task", "gradcheck needs a dataset");
  const Example* e = pick_example(ex, gc.example);
  const Vector& w = ex.initial.values;

  QepConfig exact = ex.qep;
  exact.estimator = QepEstimator::kExactExpectation;
  const auto estimate = [&](NudgeMode mode, double beta, bool configured) -> Vector {
    if (ex.quantum) {
      QepConfig c = configured ? ex.qep : exact;
      c.nudge = mode;
      c.beta = beta;
      return qep_gradient(*ex.quantum, w, e->x, e->y, c).estimate.values;
    }
    NudgeConfig n = ex.nudge;
    n.mode = mode;
    n.beta = beta;
    return ep_gradient(*ex.classical, w, e->x, e->y, n).values;
  };
  const Vector oracle =
      ex.quantum ? qep_cost_gradient_oracle(*ex.quantum, w, e->x, e->y, gc.fd_step, exact)
                 : exact_cost_gradient_oracle(*ex.classical, w, e->x, e->y, gc.fd_step).values;
  const double beta = std::abs(ex.config.estimator.beta);
  const Vector est = estimate(ex.config.estimator.nudge, beta, true);

  GradcheckOutput out;
  Json rows = Json::array();
  for (Index k = 0; k < w.size(); ++k) {
    const double abs_err = std::abs(est[k] - oracle[k]);
    const double rel_err = abs_err / std::max(std::abs(oracle[k]), gc.floor);
    const bool ok = rel_err <= gc.tolerance;
    out.passed = out.passed && ok;
    Json row;
    row["weight"] = ex.initial.names[static_cast<std::size_t>(k)];
    row["estimate"] = est[k];
    row["oracle"] = oracle[k];
    row["abs_error"] = abs_err;
    row["rel_error"] = rel_err;
    row["ok"] = ok;
    rows.push_back(row);
  }

  Json halving;
  for (const auto& [name, mode] : {std::pair{"one_sided", NudgeMode::kOneSidedPositive},
                                   std::pair{"symmetric", NudgeMode::kSymmetric}}) {
    const double e1 = (estimate(mode, beta, false) - oracle).norm();
    const double e2 = (estimate(mode, beta / 2, false) - oracle).norm();
    Json h;
    h["beta"] = beta;
    h["error_at_beta"] = e1;
    h["error_at_half_beta"] = e2;
    h["ratio"] = e2 > 0.0 ? Json(e1 / e2) : Json(nullptr);
    halving[name] = h;
  }

  Json& r = out.report;
  r["artifact_version"] = kArtifactVersion;
  r["model"] = ex.config.model_kind();
  r["seed"] = ex.config.run.seed;
  r["example"] = gc.example;
  r["beta"] = beta;
  r["fd_step"] = gc.fd_step;
  r["tolerance"] = gc.tolerance;
  r["weights"] = rows;
  r["beta_halving"] = halving;
  r["passed"] = out.passed;
  r["config"] = to_json(ex.config);
  return out;
}

namespace {

// Lowest levels E0 + hbar sum_a n_a w_a by best-first enumeration.
std::vector<double> oscillator_levels(const GaussianGroundState& g, double hbar,
                                      Index count) {
  using Occupation = std::vector<int>;
  const Index modes = g.frequencies.size();
  const auto energy = [&](const Occupation& n) {
    double e = g.ground_energy;
    for (Index a = 0; a < modes; ++a) e += hbar * n[a] * g.frequencies[a];
    return e;
  };
  using Item = std::pair<double, Occupation>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  std::set<Occupation> seen;
  const Occupation zero(static_cast<std::size_t>(modes), 0);
  frontier.push({energy(zero), zero});
  seen.insert(zero);
  std::vector<double> out;
  while (static_cast<Index>(out.size()) < count) {
    auto [e, n] = frontier.top();
    frontier.pop();
    out.push_back(e);
    for (Index a = 0; a < modes; ++a) {
      Occupation next = n;
      ++next[a];
      if (seen.insert(next).second) frontier.push({energy(next), next});
    }
  }
  return out;
}

}  // namespace

Json run_spectrum(const Experiment& ex, Index count, std::optional<Index> which) {
  if (!ex.quantum) throw ConfigError("/model", "spectrum needs a quantum model");
  if (count < 1) throw ConfigError("/count", "must be >= 1");
  const Example* e = pick_example(ex, which);
  const Vector& w = ex.initial.values;
  constexpr double kDegenerate = 1e-8;
  std::vector<double> levels;
  bool next_known = false;
  double next_level = 0.0;
  if (const auto* tfim = dynamic_cast<const TfimSystem*>(ex.quantum.get())) {
    const Vector x = e ? e->x : Vector(Vector::Zero(static_cast<Index>(tfim->spec().input_spins.size())));
    const HermitianOperator h = build_hamiltonian(tfim->spec().with_weights(w), x);
    if (count > h.dimension()) {
      throw ConfigError("/count", "exceeds the Hilbert-space dimension " +
                                      std::to_string(h.dimension()));
    }
    if (h.dimension() > ex.qep.eigen.dense_limit) {
      if (count > 1) throw CapacityError("more than one level needs the dense path");
      const EigenSolution g = ground_state(h, ex.qep.eigen);
      levels.push_back(g.eigenvalue);
      next_known = true;
      next_level = g.eigenvalue + g.gap_to_next;
    } else {
      const Spectrum sp = full_spectrum(h);
      for (Index i = 0; i < count; ++i) levels.push_back(sp.values[i]);
      if (count < h.dimension()) {
        next_known = true;
        next_level = sp.values[count];
      }
    }
  } else {
    const auto& qho = dynamic_cast<const QhoSystem&>(*ex.quantum);
    const QhoSpec spec = qho.spec().with_weights(w);
    const GaussianGroundState g =
        e ? solve_ground_state(spec, e->x, Vector(), 0.0) : solve_ground_state(spec);
    levels = oscillator_levels(g, spec.hbar, count + 1);
    next_known = true;
    next_level = levels.back();
    levels.pop_back();
  }

  Json out;
  out["model"] = ex.config.model_kind();
  out["example"] = which ? Json(*which) : Json(nullptr);
  Json rows = Json::array();
  bool any_degenerate = false;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const bool has_next = i + 1 < levels.size() || next_known;
    const double next = i + 1 < levels.size() ? levels[i + 1] : next_level;
    Json row;
    row["index"] = i;
    row["energy"] = levels[i];
    row["gap_to_next"] = has_next ? Json(next - levels[i]) : Json(nullptr);
    const bool degenerate = has_next && next - levels[i] < kDegenerate;
    row["degenerate"] = degenerate;
    any_degenerate = any_degenerate || degenerate;
    rows.push_back(row);
  }
  out["levels"] = rows;
  out["degeneracy_detected"] = any_degenerate;
  return out;
}

namespace {

HermitianOperator parse_tfim_observable(const TfimSpec& spec, const std::string& id,
                                        const Example* e) {
  static const std::regex z(R"(Z(\d+))"), x(R"(X(\d+))"), zz(R"(Z(\d+)Z(\d+))");
  std::smatch m;
  try {
    if (std::regex_match(id, m, zz)) {
      return pauli_zz(spec.n, std::stoi(m[1]), std::stoi(m[2]));
    }
    if (std::regex_match(id, m, z)) {
      const int k = std::stoi(m[1]);
      return HermitianOperator::diagonal(pauli_z_diagonal(spec.n, k), id);
    }
    if (std::regex_match(id, m, x)) return pauli_x(spec.n, std::stoi(m[1]));
    if (id == "C") {
      if (!e) throw ConfigError("/observable", "cost observable needs --example");
      return cost_observable(spec, e->y);
    }
  } catch (const DomainError& err) {
    throw ConfigError("/observable", err.what());
  }
  throw ConfigError("/observable", "unknown observable '" + id + "'");
}

}  // namespace

Json run_sample(const Experiment& ex, const std::vector<std::string>& observables,
                Index shots, std::optional<Index> which) {
  if (!ex.quantum) throw ConfigError("/model", "sampling needs a quantum model");
  if (observables.empty()) throw ConfigError("/observable", "no observable given");
  if (shots < 1) throw ConfigError("/shots", "must be >= 1");
  const Example* e = pick_example(ex, which);
  const Vector& w = ex.initial.values;
  CounterRng rng(ex.config.run.seed, 3);

  Json out;
  out["model"] = ex.config.model_kind();
  out["observables"] = observables;
  out["shots"] = shots;
  out["seed"] = ex.config.run.seed;
  Json bins = Json::array();
  double tv = 0.0;

  if (const auto* tfim = dynamic_cast<const TfimSystem*>(ex.quantum.get())) {
    const TfimSpec& spec = tfim->spec();
    std::vector<HermitianOperator> ops;
    for (const auto& id : observables) ops.push_back(parse_tfim_observable(spec, id, e));
    const Vector x = e ? e->x : Vector(Vector::Zero(static_cast<Index>(spec.input_spins.size())));
    const HermitianOperator h = build_hamiltonian(spec.with_weights(w), x);
    const EigenSolution state = ex.qep.eigen_index == 0
                                    ? ground_state(h, ex.qep.eigen)
                                    : eigenstate_k(h, ex.qep.eigen_index, ex.qep.eigen);
    FamilySampler sampler = [&] {
      try {
        return FamilySampler(ops, state.eigenvector);
      } catch (const ContractViolation& err) {
        throw ConfigError("/observable", err.what());
      }
    }();
    std::vector<long> counts(sampler.distribution().size(), 0);
    for (Index t = 0; t < shots; ++t) ++counts[static_cast<std::size_t>(sampler.draw_index(rng))];
    for (std::size_t g = 0; g < counts.size(); ++g) {
      const auto& outcome = sampler.distribution()[g];
      const double freq = static_cast<double>(counts[g]) / static_cast<double>(shots);
      tv += 0.5 * std::abs(freq - outcome.probability);
      Json bin;
      bin["values"] = vector_json(outcome.values);
      bin["count"] = counts[g];
      bin["frequency"] = freq;
      bin["probability"] = outcome.probability;
      bins.push_back(bin);
    }
    out["eigen_index"] = ex.qep.eigen_index;
  } else {
    const auto& qho = dynamic_cast<const QhoSystem&>(*ex.quantum);
    if (observables.size() != 1) {
      throw ConfigError("/observable", "qho sampling takes one position observable");
    }
    static const std::regex r(R"(r(\d+))");
    std::smatch m;
    if (!std::regex_match(observables[0], m, r)) {
      throw ConfigError("/observable", "unknown observable '" + observables[0] + "'");
    }
    const int i = std::stoi(m[1]);
    if (i >= qho.spec().size()) throw ConfigError("/observable", "particle out of range");
    const QhoSpec spec = qho.spec().with_weights(w);
    const GaussianGroundState g =
        e ? solve_ground_state(spec, e->x, Vector(), 0.0) : solve_ground_state(spec);
    const double mu = g.mean[i];
    const double sigma = std::sqrt(g.covariance(i, i));
    constexpr int kBins = 24;
    const double lo = mu - 4.0 * sigma;
    const double width = 8.0 * sigma / kBins;
    std::vector<long> counts(kBins + 2, 0);  // two tail bins
    const Matrix samples = sample_positions(g, shots, rng);
    for (Index t = 0; t < shots; ++t) {
      const double v = samples(t, i);
      const int b = v < lo ? 0 : std::min(kBins + 1, 1 + static_cast<int>((v - lo) / width));
      ++counts[static_cast<std::size_t>(b)];
    }
    const auto cdf = [&](double v) {
      return 0.5 * std::erfc(-(v - mu) / (sigma * std::sqrt(2.0)));
    };
    for (int b = 0; b < kBins + 2; ++b) {
      const double a = b == 0 ? -INFINITY : lo + (b - 1) * width;
      const double c = b == kBins + 1 ? INFINITY : lo + b * width;
      const double p = (std::isfinite(c) ? cdf(c) : 1.0) - (std::isfinite(a) ? cdf(a) : 0.0);
      const double freq = static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                          static_cast<double>(shots);
      tv += 0.5 * std::abs(freq - p);
      Json bin;
      bin["lower"] = std::isfinite(a) ? Json(a) : Json(nullptr);
      bin["upper"] = std::isfinite(c) ? Json(c) : Json(nullptr);
      bin["count"] = counts[static_cast<std::size_t>(b)];
      bin["frequency"] = freq;
      bin["probability"] = p;
      bins.push_back(bin);
    }
  }
  out["histogram"] = bins;
  out["total_variation"] = tv;
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace qep
