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

#include "qep/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qep {

// ---------------------------------------------------------------- states

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DomainError("state vector is empty");
  if (!amplitudes_.allFinite()) throw DomainError("state vector is not finite");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw DomainError("state vector is not normalized (norm " +
                      std::to_string(norm) + ")");
  }
}

StateVector StateVector::normalized(const CVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("cannot normalize a zero or non-finite vector");
  }
  return StateVector(v / norm);
}

StateVector StateVector::basis(Index dimension, Index index) {
  if (index < 0 || index >= dimension) throw DomainError("basis index out of range");
  CVector v = CVector::Zero(dimension);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_size(b.dimension(), a.dimension(), "inner product");
  return a.amplitudes().dot(b.amplitudes());
}

// ------------------------------------------------------------- operators

namespace {

double max_abs(const SparseOperator& m) {
  double out = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(m, k); it; ++it) {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

}  // namespace

HermitianOperator::HermitianOperator(SparseOperator matrix, std::string label)
    : HermitianOperator(std::move(matrix), Frame::kGeneric, Vector(),
                        std::move(label)) {}

HermitianOperator::HermitianOperator(SparseOperator matrix, Frame frame,
                                     Vector frame_diag, std::string label)
    : matrix_(std::move(matrix)),
      frame_(frame),
      frame_diag_(std::move(frame_diag)),
      label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DomainError("operator must be square and nonempty");
  }
  matrix_.makeCompressed();
  const SparseOperator skew = matrix_ - SparseOperator(matrix_.adjoint());
  if (max_abs(skew) > kHermiticityTolerance * std::max(1.0, max_abs(matrix_))) {
    throw DomainError("operator '" + label_ + "' is not self-adjoint");
  }
  if (frame_ != Frame::kGeneric) {
    require_size(frame_diag_.size(), matrix_.rows(), "frame diagonal");
  }
}

HermitianOperator HermitianOperator::diagonal(const Vector& diag,
                                              std::string label) {
  SparseOperator m(diag.size(), diag.size());
  m.reserve(Eigen::VectorXi::Constant(diag.size(), 1));
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag[i] != 0.0) m.insert(i, i) = diag[i];
  }
  return HermitianOperator(std::move(m), Frame::kComputational, diag,
                           std::move(label));
}

HermitianOperator HermitianOperator::hadamard_diagonal(SparseOperator matrix,
                                                       const Vector& frame_diag,
                                                       std::string label) {
  return HermitianOperator(std::move(matrix), Frame::kHadamard, frame_diag,
                           std::move(label));
}

HermitianOperator HermitianOperator::identity(Index dimension,
                                              std::string label) {
  return diagonal(Vector::Ones(dimension), std::move(label));
}

HermitianOperator HermitianOperator::with_label(std::string label) const {
  HermitianOperator out = *this;
  out.label_ = std::move(label);
  return out;
}

double HermitianOperator::norm_bound() const {
  Vector rows = Vector::Zero(dimension());
  for (Index k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(matrix_, k); it; ++it) {
      rows[it.row()] += std::abs(it.value());
    }
  }
  return rows.maxCoeff();
}

HermitianOperator operator+(const HermitianOperator& a,
                            const HermitianOperator& b) {
  require_size(b.dimension(), a.dimension(), "operator sum");
  SparseOperator m = a.matrix_ + b.matrix_;
  const std::string label = a.label_ + "+" + b.label_;
  if (a.frame_ == b.frame_ && a.frame_ != Frame::kGeneric) {
    return HermitianOperator(std::move(m), a.frame_,
                             a.frame_diag_ + b.frame_diag_, label);
  }
  return HermitianOperator(std::move(m), label);
}

HermitianOperator operator-(const HermitianOperator& a,
                            const HermitianOperator& b) {
  return a + (-1.0) * b;
}

HermitianOperator operator*(double scale, const HermitianOperator& a) {
  if (!std::isfinite(scale)) throw DomainError("operator scale must be finite");
  SparseOperator m = Complex(scale) * a.matrix_;
  Vector diag = a.frame_ == Frame::kGeneric ? Vector() : Vector(scale * a.frame_diag_);
  return HermitianOperator(std::move(m), a.frame_, std::move(diag), a.label_);
}

double expectation(const HermitianOperator& op, const StateVector& psi) {
  require_size(psi.dimension(), op.dimension(), "expectation");
  const Complex value = psi.amplitudes().dot(op.apply(psi.amplitudes()));
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, op.norm_bound())) {
    throw DomainError("expectation has an imaginary residue");
  }
  return value.real();
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  require_size(b.dimension(), a.dimension(), "commutator");
  if (a.frame() == b.frame() && a.frame() != Frame::kGeneric) return 0.0;
  const SparseOperator ab = a.matrix() * b.matrix();
  const SparseOperator ba = b.matrix() * a.matrix();
  return max_abs(SparseOperator(ab - ba));
}

// ---------------------------------------------------------- eigensolvers

void apply_phase_convention(Eigen::Ref<CVector> v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  Index pivot = 0;
  while (std::abs(v[pivot]) < peak * (1.0 - 1e-9)) ++pivot;
  const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
  v *= phase;
  v[pivot] = Complex(v[pivot].real(), 0.0);
}

Spectrum full_spectrum(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.dense());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense eigensolver failed", 0.0, 0);
  }
  Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
  for (Index k = 0; k < out.vectors.cols(); ++k) {
    apply_phase_convention(out.vectors.col(k));
  }
  return out;
}

namespace {

EigenSolution from_spectrum(const HermitianOperator& h, const Spectrum& spec,
                            Index k, const EigenOptions& options) {
  const Index d = spec.values.size();
  EigenSolution sol;
  sol.index = k;
  sol.eigenvalue = spec.values[k];
  sol.eigenvector = StateVector::normalized(spec.vectors.col(k));
  sol.gap_to_next = k + 1 < d ? spec.values[k + 1] - spec.values[k] : 0.0;
  sol.gap_to_previous = k > 0 ? spec.values[k] - spec.values[k - 1]
                              : std::numeric_limits<double>::infinity();
  const double gap =
      std::min(k + 1 < d ? sol.gap_to_next : std::numeric_limits<double>::infinity(),
               sol.gap_to_previous);
  sol.near_degenerate = gap < options.degeneracy_threshold;
  sol.residual = (h.apply(sol.eigenvector.amplitudes()) -
                  sol.eigenvalue * sol.eigenvector.amplitudes())
                     .norm();
  sol.method = "dense";
  return sol;
}

EigenSolution lanczos_ground_state(const HermitianOperator& h,
                                   const EigenOptions& options) {
  const Index d = h.dimension();
  const int m = static_cast<int>(std::min<Index>(options.lanczos_max_basis, d));
  const double scale = std::max(1.0, h.norm_bound());

  CounterRng rng(options.lanczos_seed);
  CVector start(d);
  for (Index i = 0; i < d; ++i) start[i] = Complex(rng.normal(), rng.normal());
  start.normalize();

  long total_iterations = 0;
  double last_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart <= options.lanczos_max_restarts; ++restart) {
    CMatrix basis(d, m + 1);
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = start;
    Vector ritz;
    double theta = 0.0;
    double second = std::numeric_limits<double>::infinity();
    bool converged = false;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      ++total_iterations;
      CVector w = h.apply(basis.col(j));
      alpha.push_back(basis.col(j).dot(w).real());
      w -= alpha.back() * basis.col(j);
      if (j > 0) w -= beta.back() * basis.col(j - 1);
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass) {
        const CVector overlaps = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * overlaps;
      }
      const double b = w.norm();
      used = j + 1;

      Vector diag = Eigen::Map<Vector>(alpha.data(), used);
      Vector sub = Vector::Zero(std::max(used - 1, 0));
      for (int i = 0; i + 1 < used; ++i) sub[i] = beta[i];
      Eigen::SelfAdjointEigenSolver<Matrix> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()[0];
      second = used > 1 ? tri.eigenvalues()[1] : std::numeric_limits<double>::infinity();
      ritz = tri.eigenvectors().col(0);
      last_residual = b * std::abs(ritz[used - 1]);
      if (last_residual <= options.lanczos_tolerance * scale ||
          b <= 1e-14 * scale) {
        converged = true;
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    CVector vec = basis.leftCols(used) * ritz.cast<Complex>();
    vec.normalize();
    if (converged) {
      apply_phase_convention(vec);
      EigenSolution sol;
      sol.eigenvector = StateVector::normalized(vec);
      sol.eigenvalue = expectation(h, sol.eigenvector);
      sol.index = 0;
      sol.gap_to_next = std::isfinite(second) ? second - theta : 0.0;
      sol.gap_to_previous = std::numeric_limits<double>::infinity();
      sol.near_degenerate = sol.gap_to_next < options.degeneracy_threshold;
      sol.residual = (h.apply(sol.eigenvector.amplitudes()) -
                      sol.eigenvalue * sol.eigenvector.amplitudes())
                         .norm();
      sol.method = "lanczos";
      return sol;
    }
    start = vec;
  }
  throw ConvergenceError("Lanczos did not converge after " +
                             std::to_string(total_iterations) + " iterations",
                         last_residual, total_iterations);
}

}  // namespace

EigenSolution ground_state(const HermitianOperator& h,
                           const EigenOptions& options) {
  if (h.dimension() <= options.dense_limit) {
    return from_spectrum(h, full_spectrum(h), 0, options);
  }
  return lanczos_ground_state(h, options);
}

EigenSolution eigenstate_k(const HermitianOperator& h, Index k,
                           const EigenOptions& options) {
  if (k < 0 || k >= h.dimension()) {
    throw DomainError("eigenstate index " + std::to_string(k) +
                      " out of range for dimension " +
                      std::to_string(h.dimension()));
  }
  if (h.dimension() > options.dense_limit) {
    throw CapacityError("excited eigenstates need the dense path (d <= " +
                        std::to_string(options.dense_limit) + ")");
  }
  return from_spectrum(h, full_spectrum(h), k, options);
}

// ------------------------------------------------------------ measurement

CVector hadamard_transform(const CVector& v) {
  const Index d = v.size();
  if (d == 0 || (d & (d - 1)) != 0) {
    throw DomainError("Hadamard transform needs a power-of-two dimension");
  }
  CVector out = v;
  for (Index len = 1; len < d; len <<= 1) {
    for (Index i = 0; i < d; i += len << 1) {
      for (Index j = i; j < i + len; ++j) {
        const Complex a = out[j];
        const Complex b = out[j + len];
        out[j] = a + b;
        out[j + len] = a - b;
      }
    }
  }
  return out / std::sqrt(static_cast<double>(d));
}

namespace {

// Joint eigenbasis of a commuting generic family by successive restriction:
// each operator splits every current eigenspace of the previous ones.
void simultaneous_eigenbasis(std::span<const HermitianOperator> ops,
                             CMatrix& basis, Matrix& values, double tol) {
  const Index d = ops.front().dimension();
  struct Block {
    CMatrix vectors;
    std::vector<double> values;
  };
  std::vector<Block> blocks{{CMatrix::Identity(d, d), {}}};
  for (const auto& op : ops) {
    const CMatrix a = op.dense();
    const double grouping = tol * std::max(1.0, op.norm_bound());
    std::vector<Block> next;
    for (const auto& block : blocks) {
      const CMatrix restricted = block.vectors.adjoint() * a * block.vectors;
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(restricted);
      const Vector& ev = solver.eigenvalues();
      Index start = 0;
      while (start < ev.size()) {
        Index stop = start + 1;
        while (stop < ev.size() && ev[stop] - ev[start] <= grouping) ++stop;
        Block child;
        child.vectors =
            block.vectors * solver.eigenvectors().middleCols(start, stop - start);
        child.values = block.values;
        child.values.push_back(ev.segment(start, stop - start).mean());
        next.push_back(std::move(child));
        start = stop;
      }
    }
    blocks = std::move(next);
  }
  basis.resize(d, d);
  values.resize(d, static_cast<Index>(ops.size()));
  Index col = 0;
  for (const auto& block : blocks) {
    for (Index c = 0; c < block.vectors.cols(); ++c, ++col) {
      basis.col(col) = block.vectors.col(c);
      for (std::size_t k = 0; k < block.values.size(); ++k) {
        values(col, static_cast<Index>(k)) = block.values[k];
      }
    }
  }
}

}  // namespace

FamilySampler::FamilySampler(std::span<const HermitianOperator> ops,
                             const StateVector& psi) {
  if (ops.empty()) throw DomainError("measurement family is empty");
  const Index d = psi.dimension();
  for (const auto& op : ops) {
    require_size(op.dimension(), d, "measured operator");
    labels_.push_back(op.label());
  }
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      const double scale =
          std::max({1.0, ops[a].norm_bound(), ops[b].norm_bound()});
      if (commutator_norm(ops[a], ops[b]) > kCommutatorTolerance * scale) {
        throw ContractViolation("observables '" + ops[a].label() + "' (#" +
                                std::to_string(a) + ") and '" + ops[b].label() +
                                "' (#" + std::to_string(b) +
                                ") do not commute");
      }
    }
  }

  frame_ = ops.front().frame();
  for (const auto& op : ops) {
    if (op.frame() != frame_) frame_ = Frame::kGeneric;
  }
  const Index n = static_cast<Index>(ops.size());
  Matrix values(d, n);
  switch (frame_) {
    case Frame::kComputational:
      frame_amplitudes_ = psi.amplitudes();
      for (Index k = 0; k < n; ++k) values.col(k) = ops[k].frame_diagonal();
      break;
    case Frame::kHadamard:
      frame_amplitudes_ = hadamard_transform(psi.amplitudes());
      for (Index k = 0; k < n; ++k) values.col(k) = ops[k].frame_diagonal();
      break;
    case Frame::kGeneric:
      simultaneous_eigenbasis(ops, basis_, values, kGroupingTolerance);
      frame_amplitudes_ = basis_.adjoint() * psi.amplitudes();
      break;
  }

  // Group basis vectors sharing a joint outcome.
  std::vector<double> tolerances(n);
  for (Index k = 0; k < n; ++k) {
    tolerances[k] = kGroupingTolerance * std::max(1.0, ops[k].norm_bound());
  }
  std::vector<Index> order(d);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index k = 0; k < n; ++k) {
      if (values(a, k) < values(b, k) - tolerances[k]) return true;
      if (values(b, k) < values(a, k) - tolerances[k]) return false;
    }
    return false;
  });
  group_of_.assign(d, 0);
  Index head = -1;
  for (Index idx : order) {
    bool same = head >= 0;
    for (Index k = 0; same && k < n; ++k) {
      same = std::abs(values(idx, k) - values(head, k)) <= tolerances[k];
    }
    if (!same) {
      head = idx;
      outcomes_.push_back(JointOutcome{values.row(idx).transpose(), 0.0});
    }
    group_of_[idx] = static_cast<Index>(outcomes_.size()) - 1;
    outcomes_.back().probability += std::norm(frame_amplitudes_[idx]);
  }
  double running = 0.0;
  for (const auto& o : outcomes_) {
    running += o.probability;
    cdf_.push_back(running);
  }
}

Index FamilySampler::sample_group(CounterRng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  Index g = it == cdf_.end() ? static_cast<Index>(cdf_.size()) - 1
                             : static_cast<Index>(it - cdf_.begin());
  while (outcomes_[g].probability <= 0.0 && g > 0) --g;
  return g;
}

Vector FamilySampler::draw_outcomes(CounterRng& rng) const {
  return outcomes_[sample_group(rng)].values;
}

std::vector<MeasurementRecord> FamilySampler::draw(CounterRng& rng) const {
  const std::uint64_t counter = rng.counter();
  const Index g = sample_group(rng);
  CVector projected = CVector::Zero(frame_amplitudes_.size());
  for (Index i = 0; i < projected.size(); ++i) {
    if (group_of_[i] == g) projected[i] = frame_amplitudes_[i];
  }
  CVector post;
  switch (frame_) {
    case Frame::kComputational:
      post = projected;
      break;
    case Frame::kHadamard:
      post = hadamard_transform(projected);
      break;
    case Frame::kGeneric:
      post = basis_ * projected;
      break;
  }
  const StateVector post_state = StateVector::normalized(post);
  std::vector<MeasurementRecord> records;
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    MeasurementRecord r;
    r.observable = labels_[k];
    r.outcome = outcomes_[g].values[static_cast<Index>(k)];
    r.probability = outcomes_[g].probability;
    r.post_state = post_state;
    r.rng_seed = rng.seed();
    r.rng_counter = counter;
    records.push_back(std::move(r));
  }
  return records;
}

MeasurementRecord measure(const HermitianOperator& op, const StateVector& psi,
                          CounterRng& rng) {
  return FamilySampler(std::span<const HermitianOperator>(&op, 1), psi)
      .draw(rng)
      .front();
}

std::vector<MeasurementRecord> measure_commuting_family(
    std::span<const HermitianOperator> ops, const StateVector& psi,
    CounterRng& rng) {
  return FamilySampler(ops, psi).draw(rng);
}

}  // namespace qep
