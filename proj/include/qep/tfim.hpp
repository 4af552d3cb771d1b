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

#ifndef QEP_TFIM_HPP_
#define QEP_TFIM_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qep/energy_model.hpp"
#include "qep/hilbert.hpp"

namespace qep {

/// Transverse-field Ising model
///
///   H(x) = -sum_{j<k} J_jk Z_j Z_k - sum_k h_k(x) X_k,
///
/// on N qubits. Spin k is bit k of the basis index and spin up is bit 0
/// (Z eigenvalue +1). Inputs enter as offsets to the transverse fields of
/// `input_spins`: h_k(x) = h_k + x_i for k = input_spins[i].
///
/// Weight layout: all couplings (in `couplings` order), then all N fields.
struct TfimCoupling {
  int j = 0;
  int k = 0;
  double value = 0.0;
};

struct TfimSpec {
  static constexpr int kMaxSpins = 20;

  int n = 1;
  std::vector<TfimCoupling> couplings;
  Vector fields;  // h_k, length n
  std::vector<int> input_spins;
  /// Readout spins of the single-spin cost terms 1/2 (1 - y Z_k).
  std::vector<int> output_spins;
  /// Readout pairs of the correlator cost terms 1/2 (1 - y Z_a Z_b).
  std::vector<std::pair<int, int>> output_pairs;
  /// Optional box constraints applied during training.
  std::optional<WeightBounds> coupling_bounds;
  std::optional<WeightBounds> field_bounds;

  /// Throws DomainError on any invariant violation.
  void validate() const;

  Index weight_count() const {
    return static_cast<Index>(couplings.size()) + n;
  }
  Index dimension() const { return Index{1} << n; }
  Index label_count() const {
    return static_cast<Index>(output_spins.size() + output_pairs.size());
  }
  std::vector<std::string> weight_names() const;
  std::vector<std::optional<WeightBounds>> weight_bounds() const;
  Vector weights() const;
  /// Copy with couplings and fields replaced by `w` (weight layout).
  TfimSpec with_weights(const Vector& w) const;
  /// Fields after the input offsets.
  Vector input_fields(const Vector& x) const;
};

/// Diagonal of Z_k in the computational basis.
Vector pauli_z_diagonal(int n, int k);
/// Diagonal of Z_j Z_k in the computational basis.
Vector pauli_zz_diagonal(int n, int j, int k);
/// Z_j Z_k, tagged Z-type.
HermitianOperator pauli_zz(int n, int j, int k);
/// X_k, tagged X-type.
HermitianOperator pauli_x(int n, int k);

/// Sparse Hamiltonian at input x (x has one entry per input spin).
HermitianOperator build_hamiltonian(const TfimSpec& spec, const Vector& x);

/// dH/dw for weight `id`: -Z_j Z_k for couplings, -X_k for fields.
HermitianOperator derivative_observable(const TfimSpec& spec, Index id);

/// Partition of weight ids into the ZZ family and the X family. Each family
/// is verified to commute internally.
struct CommutingFamilies {
  std::vector<Index> zz;
  std::vector<Index> x;
};
CommutingFamilies commuting_families(const TfimSpec& spec);

/// C(y) = sum_out 1/2 (1 - y Z_k) + sum_pairs 1/2 (1 - y Z_a Z_b).
/// Labels are +-1: first the single spins, then the pairs.
HermitianOperator cost_observable(const TfimSpec& spec, const Vector& y);

}  // namespace qep

#endif  // QEP_TFIM_HPP_
