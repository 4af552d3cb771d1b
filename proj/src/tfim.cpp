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

#include "qep/tfim.hpp"

#include <cmath>
#include <set>

namespace qep {

namespace {

void check_spin(int n, int k, const char* what) {
  if (k < 0 || k >= n) {
    throw DomainError(std::string(what) + " index " + std::to_string(k) +
                      " out of range for " + std::to_string(n) + " spins");
  }
}

double bit_sign(Index i, int k) { return ((i >> k) & 1) ? -1.0 : 1.0; }

}  // namespace

void TfimSpec::validate() const {
  if (n < 1 || n > kMaxSpins) {
    throw DomainError("spin count must lie in [1, " + std::to_string(kMaxSpins) +
                      "], got " + std::to_string(n));
  }
  require_size(fields.size(), n, "tfim fields");
  if (!fields.allFinite()) throw DomainError("tfim fields must be finite");
  std::set<std::pair<int, int>> seen;
  for (const auto& c : couplings) {
    check_spin(n, c.j, "coupling");
    check_spin(n, c.k, "coupling");
    if (c.j >= c.k) throw DomainError("couplings need j < k");
    if (!std::isfinite(c.value)) throw DomainError("coupling must be finite");
    if (!seen.insert({c.j, c.k}).second) throw DomainError("duplicate coupling");
  }
  std::set<int> inputs;
  for (int i : input_spins) {
    check_spin(n, i, "input spin");
    if (!inputs.insert(i).second) throw DomainError("duplicate input spin");
  }
  for (int o : output_spins) check_spin(n, o, "output spin");
  for (const auto& [a, b] : output_pairs) {
    check_spin(n, a, "output pair");
    check_spin(n, b, "output pair");
    if (a == b) throw DomainError("output pair needs two distinct spins");
  }
}

std::vector<std::string> TfimSpec::weight_names() const {
  std::vector<std::string> names;
  for (const auto& c : couplings) {
    names.push_back("J(" + std::to_string(c.j) + "," + std::to_string(c.k) + ")");
  }
  for (int k = 0; k < n; ++k) names.push_back("h(" + std::to_string(k) + ")");
  return names;
}

std::vector<std::optional<WeightBounds>> TfimSpec::weight_bounds() const {
  std::vector<std::optional<WeightBounds>> out(couplings.size(), coupling_bounds);
  out.insert(out.end(), static_cast<std::size_t>(n), field_bounds);
  return out;
}

Vector TfimSpec::weights() const {
  Vector w(weight_count());
  for (std::size_t b = 0; b < couplings.size(); ++b) {
    w[static_cast<Index>(b)] = couplings[b].value;
  }
  w.tail(n) = fields;
  return w;
}

TfimSpec TfimSpec::with_weights(const Vector& w) const {
  require_size(w.size(), weight_count(), "tfim weights");
  TfimSpec out = *this;
  for (std::size_t b = 0; b < couplings.size(); ++b) {
    out.couplings[b].value = w[static_cast<Index>(b)];
  }
  out.fields = w.tail(n);
  return out;
}

Vector TfimSpec::input_fields(const Vector& x) const {
  require_size(x.size(), static_cast<Index>(input_spins.size()), "tfim input");
  Vector h = fields;
  for (std::size_t i = 0; i < input_spins.size(); ++i) {
    h[input_spins[i]] += x[static_cast<Index>(i)];
  }
  return h;
}

Vector pauli_z_diagonal(int n, int k) {
  check_spin(n, k, "Z");
  const Index d = Index{1} << n;
  Vector diag(d);
  for (Index i = 0; i < d; ++i) diag[i] = bit_sign(i, k);
  return diag;
}

Vector pauli_zz_diagonal(int n, int j, int k) {
  check_spin(n, j, "ZZ");
  check_spin(n, k, "ZZ");
  const Index d = Index{1} << n;
  Vector diag(d);
  for (Index i = 0; i < d; ++i) diag[i] = bit_sign(i, j) * bit_sign(i, k);
  return diag;
}

HermitianOperator pauli_zz(int n, int j, int k) {
  return HermitianOperator::diagonal(
      pauli_zz_diagonal(n, j, k),
      "Z" + std::to_string(j) + "Z" + std::to_string(k));
}

HermitianOperator pauli_x(int n, int k) {
  check_spin(n, k, "X");
  const Index d = Index{1} << n;
  const Index mask = Index{1} << k;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) entries.emplace_back(i ^ mask, i, 1.0);
  SparseOperator m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  // In the Hadamard frame bit k = 0 is |+> (eigenvalue +1).
  return HermitianOperator::hadamard_diagonal(std::move(m), pauli_z_diagonal(n, k),
                                              "X" + std::to_string(k));
}

HermitianOperator build_hamiltonian(const TfimSpec& spec, const Vector& x) {
  spec.validate();
  const Vector h = spec.input_fields(x);
  const int n = spec.n;
  const Index d = spec.dimension();
  Vector diag = Vector::Zero(d);
  for (const auto& c : spec.couplings) {
    for (Index i = 0; i < d; ++i) {
      diag[i] -= c.value * bit_sign(i, c.j) * bit_sign(i, c.k);
    }
  }
  int active = 0;
  for (int k = 0; k < n; ++k) active += h[k] != 0.0;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(d) * (active + 1));
  for (Index i = 0; i < d; ++i) {
    if (diag[i] != 0.0) entries.emplace_back(i, i, diag[i]);
    for (int k = 0; k < n; ++k) {
      if (h[k] != 0.0) entries.emplace_back(i ^ (Index{1} << k), i, -h[k]);
    }
  }
  SparseOperator m(d, d);
  m.setFromTriplets(entries.begin(), entries.end());
  return HermitianOperator(std::move(m), "H");
}

HermitianOperator derivative_observable(const TfimSpec& spec, Index id) {
  if (id < 0 || id >= spec.weight_count()) {
    throw DomainError("unknown tfim weight id " + std::to_string(id));
  }
  const auto names = spec.weight_names();
  const Index nb = static_cast<Index>(spec.couplings.size());
  if (id < nb) {
    const auto& c = spec.couplings[static_cast<std::size_t>(id)];
    return (-1.0 * pauli_zz(spec.n, c.j, c.k)).with_label("dH/d" + names[id]);
  }
  return (-1.0 * pauli_x(spec.n, static_cast<int>(id - nb)))
      .with_label("dH/d" + names[id]);
}

CommutingFamilies commuting_families(const TfimSpec& spec) {
  CommutingFamilies out;
  std::vector<HermitianOperator> zz;
  std::vector<HermitianOperator> xs;
  for (Index id = 0; id < spec.weight_count(); ++id) {
    auto op = derivative_observable(spec, id);
    if (op.frame() == Frame::kComputational) {
      out.zz.push_back(id);
      zz.push_back(std::move(op));
    } else {
      out.x.push_back(id);
      xs.push_back(std::move(op));
    }
  }
  for (const auto* family : {&zz, &xs}) {
    for (std::size_t a = 0; a < family->size(); ++a) {
      for (std::size_t b = a + 1; b < family->size(); ++b) {
        if (commutator_norm((*family)[a], (*family)[b]) > 0.0) {
          throw ContractViolation("family members do not commute");
        }
      }
    }
  }
  return out;
}

HermitianOperator cost_observable(const TfimSpec& spec, const Vector& y) {
  spec.validate();
  if (spec.label_count() == 0) {
    throw DomainError("cost observable needs at least one output");
  }
  require_size(y.size(), spec.label_count(), "tfim target");
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] != 1.0 && y[i] != -1.0) {
      throw DomainError("tfim target labels must be +-1");
    }
  }
  Vector diag = Vector::Zero(spec.dimension());
  Index label = 0;
  for (int o : spec.output_spins) {
    diag += 0.5 * (Vector::Ones(diag.size()) - y[label++] * pauli_z_diagonal(spec.n, o));
  }
  for (const auto& [a, b] : spec.output_pairs) {
    diag += 0.5 * (Vector::Ones(diag.size()) -
                   y[label++] * pauli_zz_diagonal(spec.n, a, b));
  }
  return HermitianOperator::diagonal(diag, "C");
}

}  // namespace qep
