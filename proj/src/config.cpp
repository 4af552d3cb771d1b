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

#include "qep/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qep/elastic.hpp"

namespace qep {

namespace {

// Read cursor into the config document that remembers its JSON pointer.
class Node {
 public:
  Node(const Json& value, std::string path) : v_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_, msg); }

  bool has(const char* key) const { return v_.is_object() && v_.contains(key); }
  Node at(const char* key) const {
    if (!v_.is_object()) fail("expected an object");
    if (!v_.contains(key)) throw ConfigError(path_ + "/" + key, "missing field");
    return Node(v_.at(key), path_ + "/" + key);
  }
  std::optional<Node> find(const char* key) const {
    if (!has(key) || v_.at(key).is_null()) return std::nullopt;
    return at(key);
  }
  void only(std::initializer_list<const char*> keys) const {
    if (!v_.is_object()) fail("expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : v_.items()) {
      if (!allowed.count(k)) throw ConfigError(path_ + "/" + k, "unknown field");
    }
  }

  double number() const {
    if (!v_.is_number()) fail("expected a number");
    const double d = v_.get<double>();
    if (!std::isfinite(d)) fail("must be finite");
    return d;
  }
  long integer() const {
    if (!v_.is_number_integer()) fail("expected an integer");
    return v_.get<long>();
  }
  std::uint64_t unsigned_integer() const {
    if (!v_.is_number_integer() || (v_.is_number_integer() && !v_.is_number_unsigned() &&
                                    v_.get<long long>() < 0)) {
      fail("expected a non-negative integer");
    }
    return v_.get<std::uint64_t>();
  }
  bool boolean() const {
    if (!v_.is_boolean()) fail("expected a boolean");
    return v_.get<bool>();
  }
  std::string string() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }
  std::size_t size() const {
    if (!v_.is_array()) fail("expected an array");
    return v_.size();
  }
  Node operator[](std::size_t i) const {
    size();
    return Node(v_.at(i), path_ + "/" + std::to_string(i));
  }
  Vector vector() const {
    Vector out(static_cast<Index>(size()));
    for (Index i = 0; i < out.size(); ++i) out[i] = (*this)[static_cast<std::size_t>(i)].number();
    return out;
  }
  std::vector<int> ints() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(static_cast<int>((*this)[i].integer()));
    return out;
  }
  std::pair<int, int> pair() const {
    if (size() != 2) fail("expected a pair [i, j]");
    return {static_cast<int>((*this)[0].integer()), static_cast<int>((*this)[1].integer())};
  }
  std::vector<Bond> bonds() const {
    std::vector<Bond> out;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto [a, b] = (*this)[i].pair();
      out.push_back(Bond{a, b});
    }
    return out;
  }
  Range range() const {
    if (size() != 2) fail("expected a range [lo, hi]");
    Range r{(*this)[0].number(), (*this)[1].number()};
    if (r.lo > r.hi) fail("range needs lo <= hi");
    return r;
  }
  WeightBounds bounds() const {
    if (size() != 2) fail("expected bounds [lo, hi] (null for unbounded)");
    WeightBounds b;
    if (!v_.at(0).is_null()) b.lo = (*this)[0].number();
    if (!v_.at(1).is_null()) b.hi = (*this)[1].number();
    if (b.lo > b.hi) fail("bounds need lo <= hi");
    return b;
  }

 private:
  const Json& v_;
  std::string path_;
};

std::vector<Bond> all_pairs(int n) {
  std::vector<Bond> out;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) out.push_back(Bond{j, k});
  }
  return out;
}

std::vector<Bond> parse_bonds(const Node& m, const char* key, int n) {
  if (m.has("all_pairs") && m.at("all_pairs").boolean()) {
    if (m.has(key)) m.fail(std::string("give either all_pairs or ") + key);
    return all_pairs(n);
  }
  return m.at(key).bonds();
}

template <typename E>
E parse_enum(const Node& node, std::initializer_list<std::pair<const char*, E>> table) {
  const std::string s = node.string();
  std::string options;
  for (const auto& [name, value] : table) {
    if (s == name) return value;
    options += std::string(options.empty() ? "" : ", ") + name;
  }
  node.fail("unknown value '" + s + "' (expected one of " + options + ")");
}

const char* nudge_name(NudgeMode m) {
  switch (m) {
    case NudgeMode::kOneSidedPositive: return "one_sided";
    case NudgeMode::kOneSidedNegative: return "one_sided_negative";
    case NudgeMode::kSymmetric: return "symmetric";
  }
  return "";
}

const char* generator_name(TaskGenerator g) {
  switch (g) {
    case TaskGenerator::kInline: return "inline";
    case TaskGenerator::kXor: return "xor";
    case TaskGenerator::kParity: return "parity";
    case TaskGenerator::kDisplacement: return "displacement";
  }
  return "";
}

std::optional<Vector> parse_weights(const Node& m) {
  if (auto w = m.find("weights")) return w->vector();
  return std::nullopt;
}

// Builds the module objects once so their own invariants are enforced at
// load time; failures are reported against the model section.
void validate_model(const ModelSection& model, const std::string& path) {
  try {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, IsingSection>) {
            ClassicalIsingModel m(s.n, s.bonds, s.inputs, s.outputs);
            if (s.weights) require_size(s.weights->size(), m.weight_count(), "weights");
          } else if constexpr (std::is_same_v<T, ElasticSection>) {
            ElasticNetworkModel m(s.n, s.dim, s.springs, s.clamped, s.outputs,
                                  s.reference);
            if (s.weights) m.make_weights(*s.weights).validate();
          } else if constexpr (std::is_same_v<T, TfimSection>) {
            TfimSpec spec;
            spec.n = s.n;
            for (const auto& b : s.couplings) spec.couplings.push_back({b.j, b.k, 0.0});
            spec.fields = Vector::Zero(std::max(s.n, 0));
            spec.input_spins = s.inputs;
            spec.output_spins = s.outputs;
            spec.output_pairs = s.output_pairs;
            spec.validate();
            if (s.weights) require_size(s.weights->size(), spec.weight_count(), "weights");
          } else {
            QhoSpec spec;
            spec.masses = s.masses;
            for (const auto& b : s.springs) spec.springs.push_back({b.j, b.k, 0.0});
            spec.pinning = s.pinning;
            spec.anchors = s.anchors;
            spec.input_particles = s.inputs;
            spec.outputs = s.outputs;
            spec.hbar = s.hbar;
            if (s.weights) {
              spec = spec.with_weights(*s.weights);
            }
            spec.validate();
          }
        },
        model);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

ModelSection parse_model(const Node& root) {
  const Node model = root.at("model");
  model.only({"classical_ising", "elastic", "tfim", "qho"});
  int count = 0;
  for (const char* k : {"classical_ising", "elastic", "tfim", "qho"}) count += model.has(k);
  if (count != 1) model.fail("exactly one model is required");

  if (model.has("classical_ising")) {
    const Node m = model.at("classical_ising");
    m.only({"n", "bonds", "all_pairs", "inputs", "outputs", "weights",
            "init_scale", "solver", "anneal_sweeps"});
    IsingSection s;
    s.n = static_cast<int>(m.at("n").integer());
    s.bonds = parse_bonds(m, "bonds", s.n);
    s.inputs = m.at("inputs").ints();
    s.outputs = m.at("outputs").ints();
    s.weights = parse_weights(m);
    if (auto v = m.find("init_scale")) s.init_scale = v->number();
    if (auto v = m.find("solver")) {
      s.solver = parse_enum<IsingSolver>(
          *v, {{"exhaustive", IsingSolver::kExhaustive}, {"annealing", IsingSolver::kAnnealing}});
    }
    if (auto v = m.find("anneal_sweeps")) s.anneal_sweeps = v->integer();
    if (s.anneal_sweeps < 1) m.at("anneal_sweeps").fail("must be >= 1");
    return s;
  }
  if (model.has("elastic")) {
    const Node m = model.at("elastic");
    m.only({"n", "dim", "springs", "all_pairs", "clamped", "outputs", "reference",
            "weights", "init_k", "tolerance", "max_iterations"});
    ElasticSection s;
    s.n = static_cast<int>(m.at("n").integer());
    if (auto v = m.find("dim")) s.dim = static_cast<int>(v->integer());
    s.springs = parse_bonds(m, "springs", s.n);
    s.clamped = m.at("clamped").ints();
    s.outputs = m.at("outputs").ints();
    s.reference = m.at("reference").vector();
    s.weights = parse_weights(m);
    if (auto v = m.find("init_k")) s.init_k = v->range();
    if (auto v = m.find("tolerance")) s.tolerance = v->number();
    if (auto v = m.find("max_iterations")) s.max_iterations = v->integer();
    if (!(s.tolerance > 0.0)) m.at("tolerance").fail("must be > 0");
    if (s.max_iterations < 1) m.at("max_iterations").fail("must be >= 1");
    if (s.init_k.lo < 0.0) m.at("init_k").fail("spring constants must be >= 0");
    return s;
  }
  if (model.has("tfim")) {
    const Node m = model.at("tfim");
    m.only({"n", "couplings", "all_pairs", "inputs", "outputs", "output_pairs",
            "weights", "init_coupling", "init_field", "coupling_bounds",
            "field_bounds"});
    TfimSection s;
    s.n = static_cast<int>(m.at("n").integer());
    s.couplings = parse_bonds(m, "couplings", s.n);
    if (auto v = m.find("inputs")) s.inputs = v->ints();
    if (auto v = m.find("outputs")) s.outputs = v->ints();
    if (auto v = m.find("output_pairs")) {
      for (std::size_t i = 0; i < v->size(); ++i) s.output_pairs.push_back((*v)[i].pair());
    }
    s.weights = parse_weights(m);
    if (auto v = m.find("init_coupling")) s.init_coupling = v->range();
    if (auto v = m.find("init_field")) s.init_field = v->range();
    if (auto v = m.find("coupling_bounds")) s.coupling_bounds = v->bounds();
    if (auto v = m.find("field_bounds")) s.field_bounds = v->bounds();
    return s;
  }
  const Node m = model.at("qho");
  m.only({"masses", "springs", "all_pairs", "pinning", "anchors", "inputs",
          "outputs", "hbar", "weights", "init_k"});
  QhoSection s;
  s.masses = m.at("masses").vector();
  s.springs = parse_bonds(m, "springs", static_cast<int>(s.masses.size()));
  s.pinning = m.at("pinning").vector();
  s.anchors = m.has("anchors") ? m.at("anchors").vector()
                               : Vector(Vector::Zero(s.masses.size()));
  if (auto v = m.find("inputs")) s.inputs = v->ints();
  if (auto v = m.find("outputs")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Node o = (*v)[i];
      if (o.size() == 1) {
        s.outputs.push_back({static_cast<int>(o[0].integer()), -1});
      } else {
        const auto [a, b] = o.pair();
        s.outputs.push_back({a, b});
      }
    }
  }
  if (auto v = m.find("hbar")) s.hbar = v->number();
  s.weights = parse_weights(m);
  if (auto v = m.find("init_k")) s.init_k = v->range();
  if (s.init_k.lo < 0.0) m.at("init_k").fail("spring constants must be >= 0");
  return s;
}

TaskSection parse_task(const Node& root) {
  TaskSection t;
  if (!root.has("task")) return t;
  const Node n = root.at("task");
  n.only({"generator", "bits", "input_scale", "size", "amplitude", "examples"});
  if (auto v = n.find("generator")) {
    t.generator = parse_enum<TaskGenerator>(
        *v, {{"inline", TaskGenerator::kInline},
             {"xor", TaskGenerator::kXor},
             {"parity", TaskGenerator::kParity},
             {"displacement", TaskGenerator::kDisplacement}});
  }
  if (auto v = n.find("bits")) t.bits = static_cast<int>(v->integer());
  if (auto v = n.find("input_scale")) t.input_scale = v->number();
  if (auto v = n.find("size")) t.size = v->integer();
  if (auto v = n.find("amplitude")) t.amplitude = v->number();
  if (t.bits < 1 || t.bits > 16) n.at("bits").fail("must lie in [1, 16]");
  if (t.size < 1) n.at("size").fail("must be >= 1");
  if (t.generator == TaskGenerator::kXor && t.bits != 2) n.at("bits").fail("xor uses 2 bits");
  if (auto v = n.find("examples")) {
    if (t.generator != TaskGenerator::kInline) v->fail("examples need generator 'inline'");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Node e = (*v)[i];
      e.only({"x", "y"});
      t.examples.push_back(Example{e.at("x").vector(), e.at("y").vector()});
    }
  }
  return t;
}

EstimatorSection parse_estimator(const Node& root) {
  EstimatorSection e;
  if (!root.has("estimator")) return e;
  const Node n = root.at("estimator");
  n.only({"beta", "nudge", "eta", "shots", "mode", "eigen_index", "degeneracy",
          "gap_tolerance", "ramp_steps", "min_overlap"});
  if (auto v = n.find("beta")) e.beta = v->number();
  if (auto v = n.find("nudge")) {
    e.nudge = parse_enum<NudgeMode>(*v, {{"one_sided", NudgeMode::kOneSidedPositive},
                                         {"one_sided_negative", NudgeMode::kOneSidedNegative},
                                         {"symmetric", NudgeMode::kSymmetric}});
  }
  if (auto v = n.find("eta")) e.eta = v->number();
  if (auto v = n.find("shots")) e.shots = v->integer();
  if (auto v = n.find("mode")) {
    e.mode = parse_enum<QepEstimator>(*v, {{"sampled", QepEstimator::kSampled},
                                           {"exact_expectation", QepEstimator::kExactExpectation}});
  }
  if (auto v = n.find("eigen_index")) e.eigen_index = v->integer();
  if (auto v = n.find("degeneracy")) {
    e.degeneracy = parse_enum<DegeneracyPolicy>(
        *v, {{"error", DegeneracyPolicy::kError}, {"warn", DegeneracyPolicy::kWarn}});
  }
  if (auto v = n.find("gap_tolerance")) e.gap_tolerance = v->number();
  if (auto v = n.find("ramp_steps")) e.ramp_steps = static_cast<int>(v->integer());
  if (auto v = n.find("min_overlap")) e.min_overlap = v->number();
  return e;
}

RunSection parse_run(const Node& root) {
  const Node n = root.at("run");
  n.only({"epochs", "seed", "output", "emit_every"});
  RunSection r;
  r.seed = n.at("seed").unsigned_integer();
  if (auto v = n.find("epochs")) r.epochs = v->integer();
  if (auto v = n.find("output")) r.output = v->string();
  if (auto v = n.find("emit_every")) r.emit_every = v->integer();
  if (r.epochs < 0) n.at("epochs").fail("must be >= 0");
  if (r.emit_every < 1) n.at("emit_every").fail("must be >= 1");
  return r;
}

GradcheckSection parse_gradcheck(const Node& root) {
  GradcheckSection g;
  if (!root.has("gradcheck")) return g;
  const Node n = root.at("gradcheck");
  n.only({"fd_step", "tolerance", "floor", "example"});
  if (auto v = n.find("fd_step")) g.fd_step = v->number();
  if (auto v = n.find("tolerance")) g.tolerance = v->number();
  if (auto v = n.find("floor")) g.floor = v->number();
  if (auto v = n.find("example")) g.example = v->integer();
  if (!(g.fd_step > 0.0)) n.at("fd_step").fail("must be > 0");
  if (!(g.tolerance > 0.0)) n.at("tolerance").fail("must be > 0");
  if (!(g.floor > 0.0)) n.at("floor").fail("must be > 0");
  if (g.example < 0) n.at("example").fail("must be >= 0");
  return g;
}

Json bonds_json(const std::vector<Bond>& bonds) {
  Json out = Json::array();
  for (const auto& b : bonds) out.push_back({b.j, b.k});
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json bound_value(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string ExperimentConfig::model_kind() const {
  static const char* names[] = {"classical_ising", "elastic", "tfim", "qho"};
  return names[model.index()];
}

ExperimentConfig parse_config(const Json& doc) {
  const Node root(doc, "");
  // "license" is an optional free-text notice; it is not part of the config.
  root.only({"license", "model", "task", "estimator", "run", "gradcheck"});
  if (doc.contains("license") && !doc["license"].is_string()) {
    throw ConfigError("/license", "must be a string");
  }
  ExperimentConfig c;
  c.model = parse_model(root);
  validate_model(c.model, "/model/" + c.model_kind());
  c.task = parse_task(root);
  c.estimator = parse_estimator(root);
  c.run = parse_run(root);
  c.gradcheck = parse_gradcheck(root);

  try {
    if (c.is_quantum()) {
      qep_config(c.estimator, c.run.seed).validate();
    } else {
      nudge_config(c.estimator).validate();
      if (!(c.estimator.eta > 0.0)) throw DomainError("eta must be > 0");
    }
  } catch (const DomainError& e) {
    throw ConfigError("/estimator", e.what());
  }
  if (std::holds_alternative<QhoSection>(c.model) && c.estimator.eigen_index != 0) {
    throw ConfigError("/estimator/eigen_index", "qho supports the ground state only");
  }
  const bool discrete = std::holds_alternative<IsingSection>(c.model) ||
                        std::holds_alternative<TfimSection>(c.model);
  if (discrete && c.task.generator == TaskGenerator::kDisplacement) {
    throw ConfigError("/task/generator", "displacement tasks need elastic or qho");
  }
  if (!discrete && (c.task.generator == TaskGenerator::kXor ||
                    c.task.generator == TaskGenerator::kParity)) {
    throw ConfigError("/task/generator", "xor/parity tasks need classical_ising or tfim");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ExperimentConfig& c) {
  Json doc;
  Json model;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        Json m;
        if constexpr (std::is_same_v<T, IsingSection>) {
          m["n"] = s.n;
          m["bonds"] = bonds_json(s.bonds);
          m["inputs"] = s.inputs;
          m["outputs"] = s.outputs;
          if (s.weights) m["weights"] = vector_json(*s.weights);
          m["init_scale"] = s.init_scale;
          m["solver"] = s.solver == IsingSolver::kExhaustive ? "exhaustive" : "annealing";
          m["anneal_sweeps"] = s.anneal_sweeps;
          model["classical_ising"] = m;
        } else if constexpr (std::is_same_v<T, ElasticSection>) {
          m["n"] = s.n;
          m["dim"] = s.dim;
          m["springs"] = bonds_json(s.springs);
          m["clamped"] = s.clamped;
          m["outputs"] = s.outputs;
          m["reference"] = vector_json(s.reference);
          if (s.weights) m["weights"] = vector_json(*s.weights);
          m["init_k"] = {s.init_k.lo, s.init_k.hi};
          m["tolerance"] = s.tolerance;
          m["max_iterations"] = s.max_iterations;
          model["elastic"] = m;
        } else if constexpr (std::is_same_v<T, TfimSection>) {
          m["n"] = s.n;
          m["couplings"] = bonds_json(s.couplings);
          m["inputs"] = s.inputs;
          m["outputs"] = s.outputs;
          Json pairs = Json::array();
          for (const auto& [a, b] : s.output_pairs) pairs.push_back({a, b});
          m["output_pairs"] = pairs;
          if (s.weights) m["weights"] = vector_json(*s.weights);
          m["init_coupling"] = {s.init_coupling.lo, s.init_coupling.hi};
          m["init_field"] = {s.init_field.lo, s.init_field.hi};
          if (s.coupling_bounds) {
            m["coupling_bounds"] = {bound_value(s.coupling_bounds->lo),
                                    bound_value(s.coupling_bounds->hi)};
          }
          if (s.field_bounds) {
            m["field_bounds"] = {bound_value(s.field_bounds->lo),
                                 bound_value(s.field_bounds->hi)};
          }
          model["tfim"] = m;
        } else {
          m["masses"] = vector_json(s.masses);
          m["springs"] = bonds_json(s.springs);
          m["pinning"] = vector_json(s.pinning);
          m["anchors"] = vector_json(s.anchors);
          m["inputs"] = s.inputs;
          Json outs = Json::array();
          for (const auto& o : s.outputs) {
            outs.push_back(o.j >= 0 ? Json{o.i, o.j} : Json::array({o.i}));
          }
          m["outputs"] = outs;
          m["hbar"] = s.hbar;
          if (s.weights) m["weights"] = vector_json(*s.weights);
          m["init_k"] = {s.init_k.lo, s.init_k.hi};
          model["qho"] = m;
        }
      },
      c.model);
  doc["model"] = model;

  Json task;
  task["generator"] = generator_name(c.task.generator);
  task["bits"] = c.task.bits;
  task["input_scale"] = c.task.input_scale;
  task["size"] = c.task.size;
  task["amplitude"] = c.task.amplitude;
  if (c.task.generator == TaskGenerator::kInline) {
    Json ex = Json::array();
    for (const auto& e : c.task.examples) {
      ex.push_back({{"x", vector_json(e.x)}, {"y", vector_json(e.y)}});
    }
    task["examples"] = ex;
  }
  doc["task"] = task;

  const auto& e = c.estimator;
  Json est;
  est["beta"] = e.beta;
  est["nudge"] = nudge_name(e.nudge);
  est["eta"] = e.eta;
  est["shots"] = e.shots;
  est["mode"] = e.mode == QepEstimator::kSampled ? "sampled" : "exact_expectation";
  est["eigen_index"] = e.eigen_index;
  est["degeneracy"] = e.degeneracy == DegeneracyPolicy::kError ? "error" : "warn";
  est["gap_tolerance"] = e.gap_tolerance;
  est["ramp_steps"] = e.ramp_steps;
  est["min_overlap"] = e.min_overlap;
  doc["estimator"] = est;

  Json run;
  run["epochs"] = c.run.epochs;
  run["seed"] = c.run.seed;
  run["output"] = c.run.output;
  run["emit_every"] = c.run.emit_every;
  doc["run"] = run;

  Json gc;
  gc["fd_step"] = c.gradcheck.fd_step;
  gc["tolerance"] = c.gradcheck.tolerance;
  gc["floor"] = c.gradcheck.floor;
  gc["example"] = c.gradcheck.example;
  doc["gradcheck"] = gc;
  return doc;
}

NudgeConfig nudge_config(const EstimatorSection& e) {
  NudgeConfig n;
  n.beta = std::abs(e.beta);
  n.mode = e.nudge;
  return n;
}

QepConfig qep_config(const EstimatorSection& e, std::uint64_t seed) {
  QepConfig q;
  q.beta = std::abs(e.beta);
  q.shots = e.shots;
  q.estimator = e.mode;
  q.nudge = e.nudge;
  q.eigen_index = e.eigen_index;
  q.eta = e.eta;
  q.seed = seed;
  q.degeneracy = e.degeneracy;
  q.gap_tolerance = e.gap_tolerance;
  q.ramp_steps = e.ramp_steps;
  q.min_overlap = e.min_overlap;
  return q;
}

}  // namespace qep
