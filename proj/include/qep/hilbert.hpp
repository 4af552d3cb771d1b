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

#ifndef QEP_HILBERT_HPP_
#define QEP_HILBERT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "qep/common.hpp"
#include "qep/rng.hpp"

namespace qep {

using SparseOperator = Eigen::SparseMatrix<Complex>;

/// Normalized pure state in a d-dimensional Hilbert space.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws DomainError unless |amplitudes| = 1 within kNormTolerance.
  explicit StateVector(CVector amplitudes);

  static StateVector normalized(const CVector& v);
  static StateVector basis(Index dimension, Index index);

  Index dimension() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_[i]; }

 private:
  CVector amplitudes_;
};

/// <a|b>
Complex inner(const StateVector& a, const StateVector& b);

/// Basis in which an operator is known to be diagonal.
///   kComputational: diagonal in the bitwise spin basis (Z-type).
///   kHadamard: diagonal after a Hadamard on every qubit (X-type).
///   kGeneric: no structural information.
enum class Frame { kComputational, kHadamard, kGeneric };

/// Sparse self-adjoint operator with an optional structural tag.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  /// Throws DomainError if `matrix` is not square or not self-adjoint.
  explicit HermitianOperator(SparseOperator matrix, std::string label = {});

  /// Z-type operator with the given real diagonal.
  static HermitianOperator diagonal(const Vector& diag, std::string label = {});
  /// X-type operator: `matrix` in the computational basis plus its real
  /// diagonal in the Hadamard basis (index bits = |+>/|-> per qubit).
  static HermitianOperator hadamard_diagonal(SparseOperator matrix,
                                             const Vector& frame_diag,
                                             std::string label = {});
  static HermitianOperator identity(Index dimension, std::string label = "I");

  Index dimension() const { return matrix_.rows(); }
  const SparseOperator& matrix() const { return matrix_; }
  Frame frame() const { return frame_; }
  /// Eigenvalues in the operator's frame order; empty for generic operators.
  const Vector& frame_diagonal() const { return frame_diag_; }
  const std::string& label() const { return label_; }

  HermitianOperator with_label(std::string label) const;
  CVector apply(const CVector& v) const { return matrix_ * v; }
  CMatrix dense() const { return CMatrix(matrix_); }
  /// Max absolute row sum; an upper bound on the spectral norm.
  double norm_bound() const;

  friend HermitianOperator operator+(const HermitianOperator& a,
                                     const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a,
                                     const HermitianOperator& b);
  friend HermitianOperator operator*(double scale, const HermitianOperator& a);

 private:
  HermitianOperator(SparseOperator matrix, Frame frame, Vector frame_diag,
                    std::string label);

  SparseOperator matrix_;
  Frame frame_ = Frame::kGeneric;
  Vector frame_diag_;
  std::string label_;
};

/// <psi|op|psi>. Throws DomainError if the imaginary residue exceeds 1e-10.
double expectation(const HermitianOperator& op, const StateVector& psi);

/// Max-abs entry of AB - BA. Operators tagged with the same diagonal frame
/// commute structurally and return 0 without a product.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

struct EigenSolution {
  double eigenvalue = 0.0;
  StateVector eigenvector = StateVector::basis(1, 0);
  Index index = 0;
  /// E_{k+1} - E_k (0 for the top level).
  double gap_to_next = 0.0;
  /// E_k - E_{k-1} (infinity for k = 0).
  double gap_to_previous = 0.0;
  /// min(gap_to_next, gap_to_previous) below the degeneracy threshold.
  bool near_degenerate = false;
  double residual = 0.0;
  std::string method;
};

struct EigenOptions {
  Index dense_limit = 4096;
  double degeneracy_threshold = 1e-8;
  int lanczos_max_basis = 120;
  int lanczos_max_restarts = 50;
  double lanczos_tolerance = 1e-10;
  std::uint64_t lanczos_seed = 0x5eed;
};

/// Full dense spectrum, ascending, eigenvectors with the phase convention
/// applied (largest-magnitude amplitude real and positive).
struct Spectrum {
  Vector values;
  CMatrix vectors;
};
Spectrum full_spectrum(const HermitianOperator& h);

/// Lowest eigenpair: dense for d <= dense_limit, Lanczos with full
/// reorthogonalization above.
EigenSolution ground_state(const HermitianOperator& h,
                           const EigenOptions& options = {});

/// k-th eigenpair in ascending order (dense path only).
EigenSolution eigenstate_k(const HermitianOperator& h, Index k,
                           const EigenOptions& options = {});

/// Rotates v so its largest-magnitude entry (lowest index among ties) is
/// real and positive.
void apply_phase_convention(Eigen::Ref<CVector> v);

struct MeasurementRecord {
  std::string observable;
  double outcome = 0.0;
  double probability = 0.0;
  StateVector post_state = StateVector::basis(1, 0);
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_counter = 0;
};

/// One joint outcome of a commuting family with its Born probability.
struct JointOutcome {
  Vector values;
  double probability = 0.0;
};

/// Simultaneous-measurement plan for a commuting family on a fixed state.
///
/// Construction verifies pairwise commutation, finds a shared eigenbasis
/// (directly for Z-type or X-type families, by successive restriction
/// otherwise) and groups it into joint eigenspaces. Every draw models one
/// preparation of `psi` followed by one collapse.
class FamilySampler {
 public:
  static constexpr double kCommutatorTolerance = 1e-10;
  static constexpr double kGroupingTolerance = 1e-9;

  FamilySampler(std::span<const HermitianOperator> ops, const StateVector& psi);

  Index family_size() const { return static_cast<Index>(labels_.size()); }
  const std::vector<JointOutcome>& distribution() const { return outcomes_; }

  /// Index into distribution() of one sampled joint outcome.
  Index draw_index(CounterRng& rng) const { return sample_group(rng); }
  /// Outcomes only (one per operator), no post-state.
  Vector draw_outcomes(CounterRng& rng) const;
  /// Full records sharing one post-measurement state.
  std::vector<MeasurementRecord> draw(CounterRng& rng) const;

 private:
  Index sample_group(CounterRng& rng) const;

  std::vector<std::string> labels_;
  Frame frame_ = Frame::kGeneric;
  CMatrix basis_;            // generic frame: columns are joint eigenvectors
  CVector frame_amplitudes_; // psi expressed in the shared eigenbasis
  std::vector<Index> group_of_;  // basis index -> joint outcome group
  std::vector<JointOutcome> outcomes_;
  std::vector<double> cdf_;
};

/// Born-rule measurement with collapse onto the outcome's eigenspace.
MeasurementRecord measure(const HermitianOperator& op, const StateVector& psi,
                          CounterRng& rng);

/// One shared collapse for a commuting family. Throws ContractViolation
/// naming the first non-commuting pair.
std::vector<MeasurementRecord> measure_commuting_family(
    std::span<const HermitianOperator> ops, const StateVector& psi,
    CounterRng& rng);

/// Normalized fast Walsh-Hadamard transform (H on every qubit).
CVector hadamard_transform(const CVector& v);

}  // namespace qep

#endif  // QEP_HILBERT_HPP_
