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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "jcsim/core.hpp"
#include "jcsim/model.hpp"

namespace jcsim {

enum class Parity : int { antisymmetric = -1, none = 0, symmetric = 1 };

inline constexpr double kParityTolerance = 1e-9;
inline constexpr double kGaugeThreshold = 1e-9;
inline constexpr double kTrackingTieTolerance = 1e-6;

/// Eigenpairs of a Hermitian operator. Columns of `states` are unit vectors
/// paired with `energies`; `parities` is filled when the decomposition was
/// symmetry adapted.
struct Spectrum {
  Basis basis;
  RealVector energies;
  Matrix states;
  std::vector<Parity> parities;
  /// Set by track_states when two overlaps were within the tie tolerance.
  bool ambiguous = false;

  int size() const { return static_cast<int>(energies.size()); }
  Vector state(int i) const { return states.col(i); }
};

/// Rotate each column so its first amplitude above the threshold is real
/// and positive.
inline void gauge_fix(Matrix& states) {
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    for (Eigen::Index r = 0; r < states.rows(); ++r) {
      const double mag = std::abs(states(r, c));
      if (mag > kGaugeThreshold) {
        states.col(c) *= std::conj(states(r, c)) / mag;
        states(r, c) = mag;
        break;
      }
    }
  }
}

inline void require_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("operator is not square");
  if (hermiticity_defect(h) >= 1e-10) throw InvalidArgument("operator is not Hermitian");
}

/// Dense Hermitian eigensolve; energies ascending, gauge fixed. Degenerate
/// subspaces are returned as the solver produced them.
inline Spectrum eigendecompose(const HermitianOperator& h) {
  require_hermitian(h.matrix);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix);
  Spectrum s{h.basis, solver.eigenvalues(), solver.eigenvectors(), {}, false};
  gauge_fix(s.states);
  return s;
}

inline Parity classify_parity(const Vector& state, const Matrix& permutation) {
  const Vector moved = permutation * state;
  if ((moved - state).norm() < kParityTolerance) return Parity::symmetric;
  if ((moved + state).norm() < kParityTolerance) return Parity::antisymmetric;
  return Parity::none;
}

namespace detail {

// Orthonormal bases of the +1 and -1 eigenspaces of an involutive
// permutation matrix.
inline std::pair<Matrix, Matrix> parity_projections(const Matrix& p) {
  const Eigen::Index n = p.rows();
  if (max_abs(p * p - Matrix::Identity(n, n)) > 1e-12) {
    throw InvalidArgument("symmetry permutation must be an involution");
  }
  std::vector<Vector> sym, anti;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j = 0;
    p.col(i).cwiseAbs().maxCoeff(&j);
    if (j == i) {
      sym.push_back(Vector::Unit(n, i));
    } else if (j > i) {
      sym.push_back(r * (Vector::Unit(n, i) + Vector::Unit(n, j)));
      anti.push_back(r * (Vector::Unit(n, i) - Vector::Unit(n, j)));
    }
  }
  auto stack = [n](const std::vector<Vector>& cols) {
    Matrix m(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(c) = cols[c];
    return m;
  };
  return {stack(sym), stack(anti)};
}

}  // namespace detail

/// Eigensolve within the +1 and -1 sectors of a symmetry permutation that
/// commutes with `h`. Every returned state has a definite parity, including
/// inside degenerate subspaces. Energies ascending; in exact ties the
/// symmetric state comes first.
inline Spectrum eigendecompose_symmetric(const HermitianOperator& h, const Matrix& permutation) {
  require_hermitian(h.matrix);
  if (max_abs(permutation * h.matrix - h.matrix * permutation) > 1e-10) {
    throw InvalidArgument("permutation does not commute with the operator");
  }
  auto [sym, anti] = detail::parity_projections(permutation);

  struct Pair {
    double energy;
    Parity parity;
    Vector state;
  };
  std::vector<Pair> pairs;
  auto solve_block = [&](const Matrix& q, Parity parity) {
    if (q.cols() == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(q.adjoint() * h.matrix * q);
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
      pairs.push_back({solver.eigenvalues()(i), parity, q * solver.eigenvectors().col(i)});
    }
  };
  solve_block(sym, Parity::symmetric);
  solve_block(anti, Parity::antisymmetric);
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (std::abs(a.energy - b.energy) > 1e-12) return a.energy < b.energy;
    return static_cast<int>(a.parity) > static_cast<int>(b.parity);
  });

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Spectrum s{h.basis, RealVector(n), Matrix(h.matrix.rows(), n), {}, false};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.energies(i) = pairs[i].energy;
    s.states.col(i) = pairs[i].state;
    s.parities.push_back(pairs[i].parity);
  }
  gauge_fix(s.states);
  return s;
}

/// Reorder and rephase `current` to follow `previous` column by column.
/// Greedy maximal-overlap assignment; each matched overlap is made real
/// positive. Near-ties set `ambiguous` and resolve to the lower index.
inline Spectrum track_states(const Spectrum& previous, const Spectrum& current) {
  if (previous.states.rows() != current.states.rows() ||
      previous.states.cols() != current.states.cols()) {
    throw InvalidArgument("track_states: spectra differ in dimension");
  }
  const Eigen::Index n = current.states.cols();
  const Matrix overlaps_c = previous.states.adjoint() * current.states;
  const Eigen::MatrixXd overlaps = overlaps_c.cwiseAbs();

  std::vector<Eigen::Index> match(n, -1);
  std::vector<bool> row_used(n, false), col_used(n, false);
  bool ambiguous = false;
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index bi = -1, bj = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_used[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!col_used[j] && overlaps(i, j) > best) {
          best = overlaps(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (best > kTrackingTieTolerance) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k != bj && !col_used[k] && best - overlaps(bi, k) < kTrackingTieTolerance) ambiguous = true;
        if (k != bi && !row_used[k] && best - overlaps(k, bj) < kTrackingTieTolerance) ambiguous = true;
      }
    }
    match[bi] = bj;
    row_used[bi] = true;
    col_used[bj] = true;
  }

  Spectrum out{current.basis, RealVector(n), Matrix(current.states.rows(), n), {}, ambiguous};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = match[i];
    out.energies(i) = current.energies(j);
    Complex phase = overlaps_c(i, j);
    const double mag = std::abs(phase);
    phase = mag > 0.0 ? std::conj(phase) / mag : Complex{1.0, 0.0};
    out.states.col(i) = current.states.col(j) * phase;
    if (!current.parities.empty()) out.parities.push_back(current.parities[j]);
  }
  return out;
}

/// Rotate exactly degenerate, equal-parity eigenvectors onto the
/// eigenvectors of `direction` restricted to their subspace, ordered by the
/// first-order shift. With direction = +-dH/dlambda this selects the
/// lambda -> lambda0+ limits of the eigenstates.
inline Spectrum resolve_degeneracies(const Spectrum& s, const Matrix& direction,
                                     double tolerance = 1e-9) {
  Spectrum out = s;
  const int n = s.size();
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && s.energies(end) - s.energies(end - 1) < tolerance) ++end;
    for (Parity parity : {Parity::symmetric, Parity::antisymmetric, Parity::none}) {
      std::vector<int> cols;
      for (int i = start; i < end; ++i) {
        const Parity p = s.parities.empty() ? Parity::none : s.parities[i];
        if (p == parity) cols.push_back(i);
      }
      if (cols.size() < 2) continue;
      Matrix q(s.states.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) q.col(c) = s.states.col(cols[c]);
      Eigen::SelfAdjointEigenSolver<Matrix> solver(q.adjoint() * direction * q);
      const Matrix rotated = q * solver.eigenvectors();
      for (std::size_t c = 0; c < cols.size(); ++c) out.states.col(cols[c]) = rotated.col(c);
    }
    start = end;
  }
  gauge_fix(out.states);
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

/// Eigenpairs of the two-site, one-excitation Hamiltonian in the order
/// v1..v4: v1, v2 swap-symmetric; v3, v4 swap-antisymmetric.
struct TwoSiteOneExcitation {
  std::array<double, 4> energies;
  std::array<Vector, 4> states;
  double chi_minus;
  double chi_plus;
};

inline double chi_minus(double g, double J, double delta) {
  return std::hypot(delta - J, 2.0 * g);
}

inline double chi_plus(double g, double J, double delta) {
  return std::hypot(delta + J, 2.0 * g);
}

inline TwoSiteOneExcitation analytic_spectrum_2s1e(double g, double J, double delta) {
  if (g < 0) throw InvalidArgument("analytic 2-site spectrum requires g >= 0");
  const double dm = delta - J;
  const double dp = delta + J;
  const double cm = chi_minus(g, J, delta);
  const double cp = chi_plus(g, J, delta);
  if (cm < 1e-14 || cp < 1e-14) {
    throw DegenerateFormulaError("analytic 2-site spectrum undefined at chi = 0");
  }
  // sqrt((chi -+ d) / chi), avoiding cancellation in chi - |d|.
  auto roots = [g](double d, double chi) {
    const double big = chi + std::abs(d);
    const double small = 4.0 * g * g / big;
    const double minus = d >= 0 ? small : big;  // chi - d
    const double plus = d >= 0 ? big : small;   // chi + d
    return std::pair{std::sqrt(minus / chi), std::sqrt(plus / chi)};
  };
  auto [am, bm] = roots(dm, cm);
  auto [ap, bp] = roots(dp, cp);

  TwoSiteOneExcitation out;
  out.chi_minus = cm;
  out.chi_plus = cp;
  out.energies = {0.5 * (dm - cm), 0.5 * (dm + cm), 0.5 * (dp - cp), 0.5 * (dp + cp)};
  auto vec = [](double x0, double x1, double x2, double x3) {
    Vector v(4);
    v << 0.5 * x0, 0.5 * x1, 0.5 * x2, 0.5 * x3;
    return v;
  };
  out.states = {vec(-am, bm, -am, bm), vec(bm, am, bm, am), vec(ap, -bp, -ap, bp),
                vec(-bp, -ap, bp, ap)};
  return out;
}

/// Two-site, two-excitation energies at zero detuning in the slot order
/// E1..E8 of the closed form (not sorted).
inline std::array<double, 8> analytic_spectrum_2s2e(double g, double J) {
  const double g2 = g * g;
  const double j2 = J * J;
  const double root = std::sqrt(4.0 * g2 * g2 + 60.0 * g2 * j2 + 9.0 * j2 * j2);
  const double e34 = std::sqrt(2.0 * g2 + j2);
  const double e56 = std::sqrt(std::max(0.0, 6.0 * g2 + 5.0 * j2 - root)) / std::sqrt(2.0);
  const double e78 = std::sqrt(6.0 * g2 + 5.0 * j2 + root) / std::sqrt(2.0);
  return {0.0, 0.0, -e34, e34, -e56, e56, -e78, e78};
}

/// Symmetry-adapted eigenpairs reordered into the conventional labels v1..vn.
///
/// Two sites, one excitation: v1 < v2 symmetric, v3 < v4 antisymmetric.
/// Two sites, two excitations: antisymmetric (v3, v2, v4) and symmetric
/// (v7, v5, v1, v6, v8) in ascending energy, matching the closed-form slots.
/// Anything else: ascending energy.
///
/// A nonempty `direction` resolves exact degeneracies as in
/// resolve_degeneracies.
inline Spectrum labeled_eigenstates(const HermitianOperator& h, const Matrix& direction = Matrix{}) {
  const Matrix p = reflection_permutation(h.basis);
  Spectrum s = eigendecompose_symmetric(h, p);
  if (direction.size() != 0) s = resolve_degeneracies(s, direction);
  const auto k = h.basis.n_excitations();
  if (h.basis.n_sites() != 2 || !k || (*k != 1 && *k != 2)) return s;

  std::vector<int> sym, anti;
  for (int i = 0; i < s.size(); ++i) {
    (s.parities[i] == Parity::symmetric ? sym : anti).push_back(i);
  }
  std::vector<int> order;  // order[label] = column of s
  if (*k == 1) {
    order = {sym[0], sym[1], anti[0], anti[1]};
  } else {
    order = {sym[2], anti[1], anti[0], anti[2], sym[1], sym[3], sym[0], sym[4]};
  }
  Spectrum out{s.basis, RealVector(s.size()), Matrix(s.states.rows(), s.size()), {}, false};
  for (int label = 0; label < s.size(); ++label) {
    out.energies(label) = s.energies(order[label]);
    out.states.col(label) = s.states.col(order[label]);
    out.parities.push_back(s.parities[order[label]]);
  }
  return out;
}

}  // namespace jcsim
