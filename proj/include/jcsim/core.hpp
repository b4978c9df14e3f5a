// Copyright 2026 The jcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace jcsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: mismatched bases, out-of-range sites, non-Hermitian input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression hit a 0/0 point (e.g. a vanishing square-root gap).
class DegenerateFormulaError : public Error {
 public:
  using Error::Error;
};

/// The spectral CD sum is genuinely singular: a degenerate pair with a
/// nonvanishing transition element.
class DegenerateTransitionError : public Error {
 public:
  using Error::Error;
};

/// An operator-structure ansatz did not fit the exact CD Hamiltonian.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Integrator accuracy contract violated (step doubling, trace drift).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

}  // namespace jcsim
