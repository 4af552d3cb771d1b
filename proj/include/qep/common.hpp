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

#ifndef QEP_COMMON_HPP_
#define QEP_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qep {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Base of every error raised by the library. Subclasses name the failure
// class so callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative solve ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, long iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  long iterations() const { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

// Problem too large for the requested exact method.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The physical model is ill-posed (zero modes, non-PD stiffness, degenerate
// target eigenstate under the error policy, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

// A documented precondition between operands does not hold, e.g. a
// measurement family that does not commute.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Eigenstate continuation along a nudge ramp became ambiguous.
class TrackingError : public Error {
 public:
  TrackingError(const std::string& what, double beta_lo, double beta_hi)
      : Error(what), beta_lo_(beta_lo), beta_hi_(beta_hi) {}
  double beta_lo() const { return beta_lo_; }
  double beta_hi() const { return beta_hi_; }

 private:
  double beta_lo_;
  double beta_hi_;
};

inline void require_size(Index got, Index want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + ": expected size " +
                     std::to_string(want) + ", got " + std::to_string(got));
  }
}

}  // namespace qep

#endif  // QEP_COMMON_HPP_
