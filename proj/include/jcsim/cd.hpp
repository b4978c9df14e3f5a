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

// Counter-diabatic (CD) Hamiltonians and ramp schedules.
//
// exact_cd evaluates the spectral sum
//
//   H_1 = i sum_{m != n} |m><m| dH/dt |n><n| / (E_n - E_m)
//
// for any model. The closed forms below cover the two-site one-excitation
// J and g ramps, the three-site one-excitation J ramp and the two-site
// two-excitation J ramp at zero detuning. Each closed form is checked
// against exact_cd in the tests.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "jcsim/core.hpp"
#include "jcsim/model.hpp"
#include "jcsim/spectra.hpp"

namespace jcsim {

// ---------------------------------------------------------------------------
// Ramp schedules

enum class RampParameter { J, g };
enum class RampShape { linear, quadratic };

struct RampSchedule {
  RampParameter parameter = RampParameter::J;
  RampShape shape = RampShape::linear;
  double start_value = 0.0;
  double target_value = 2.0;
  double total_time = 0.5 * M_PI;

  double value(double t) const {
    const double u = t / total_time;
    const double s = shape == RampShape::linear ? u : u * u;
    return start_value + (target_value - start_value) * s;
  }

  double rate(double t) const {
    const double span = target_value - start_value;
    if (shape == RampShape::linear) return span / total_time;
    return 2.0 * span * t / (total_time * total_time);
  }

  /// Lattice parameters at time t with the ramped coupling substituted.
  LatticeParams at(const LatticeParams& base, double t) const {
    LatticeParams p = base;
    (parameter == RampParameter::J ? p.J : p.g) = value(t);
    return p;
  }
};

enum class CdMode { none, exact, full_analytic, simplified };

struct CdSpec {
  CdMode mode = CdMode::none;
  /// Pairs closer than this are skipped in the spectral sum.
  double gap_tolerance = 1e-9;
};

// ---------------------------------------------------------------------------
// Exact CD

inline constexpr double kSingularNumerator = 1e-9;

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline void require_complete(const Spectrum& s, const Matrix& op) {
  if (s.states.rows() != s.states.cols() || s.states.rows() != op.rows() ||
      op.rows() != op.cols()) {
    throw InvalidArgument("spectrum and operator dimensions disagree");
  }
}

}  // namespace detail

/// Spectral CD sum for instantaneous eigenpairs `spectrum` and
/// dH/dt = `dh_dt`. Near-degenerate pairs are skipped; skipping a pair whose
/// transition element is not negligible raises DegenerateTransitionError.
inline Matrix exact_cd(const Spectrum& spectrum, const Matrix& dh_dt, double gap_tolerance = 1e-9) {
  detail::require_complete(spectrum, dh_dt);
  const Matrix& v = spectrum.states;
  const Matrix elements = v.adjoint() * dh_dt * v;
  const Eigen::Index n = v.cols();
  Matrix k = Matrix::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index l = 0; l < n; ++l) {
      if (m == l) continue;
      const double gap = spectrum.energies(l) - spectrum.energies(m);
      if (std::abs(gap) <= gap_tolerance) {
        if (std::abs(elements(m, l)) > kSingularNumerator) {
          throw DegenerateTransitionError(
              "degenerate pair (" + std::to_string(m) + ", " + std::to_string(l) +
              ") with nonzero transition element");
        }
        continue;
      }
      k(m, l) = elements(m, l) / gap;
    }
  }
  Matrix h1 = kI * (v * k * v.adjoint());
  return 0.5 * (h1 + h1.adjoint());
}

inline HermitianOperator exact_cd(const Spectrum& spectrum, const HermitianOperator& dh_dt,
                                  double gap_tolerance = 1e-9) {
  return {spectrum.basis, exact_cd(spectrum, dh_dt.matrix, gap_tolerance)};
}

/// |<v_m|V|v_n>| for every pair of eigenstates.
inline Eigen::MatrixXd transition_elements(const Spectrum& spectrum, const Matrix& op) {
  detail::require_complete(spectrum, op);
  return (spectrum.states.adjoint() * op * spectrum.states).cwiseAbs();
}

// ---------------------------------------------------------------------------
// Two sites, one excitation

/// Operator structures of the two-site closed forms on a given basis.
///   symmetric     = S+^dag A+ - A+^dag S+
///   antisymmetric = S-^dag A- - A-^dag S-
///   local         = sum_j (a_j s_j+ - a_j^dag s_j-)
/// with A+- = a_1 +- a_2 and S+- = s_1- +- s_2-.
struct TwoSiteStructures {
  Matrix symmetric;
  Matrix antisymmetric;
  Matrix local;

  static TwoSiteStructures on(const Basis& basis) {
    if (basis.n_sites() != 2) throw InvalidArgument("two-site structures need a two-site basis");
    const int n = basis.size();
    TwoSiteStructures s{Matrix::Zero(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n)};
    const double sign[2] = {1.0, -1.0};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const Matrix term = build_operator({{OpKind::sigma_plus, i}, {OpKind::a, j}}, basis) -
                            build_operator({{OpKind::a_dagger, j}, {OpKind::sigma_minus, i}}, basis);
        s.symmetric += term;
        s.antisymmetric += sign[i] * sign[j] * term;
        if (i == j) s.local += term;
      }
    }
    return s;
  }
};

namespace detail {

inline void require_chi(double chi, const char* which) {
  if (chi < 1e-14) {
    throw DegenerateFormulaError(std::string("closed-form CD undefined at ") + which + " = 0");
  }
}

}  // namespace detail

inline Matrix full_cd_2s1e_Jramp(double g, double J, double delta, double dJ_dt,
                                 const TwoSiteStructures& s) {
  const double cm = chi_minus(g, J, delta);
  const double cp = chi_plus(g, J, delta);
  detail::require_chi(cm, "chi-");
  detail::require_chi(cp, "chi+");
  return kI * (g / (2.0 * cm * cm) * dJ_dt) * s.symmetric -
         kI * (g / (2.0 * cp * cp) * dJ_dt) * s.antisymmetric;
}

inline HermitianOperator full_cd_2s1e_Jramp(double g, double J, double delta, double dJ_dt) {
  Basis b = enumerate_basis(2, 1);
  return {b, full_cd_2s1e_Jramp(g, J, delta, dJ_dt, TwoSiteStructures::on(b))};
}

/// Local form: i g' sum_j (a_j s_j+ - a_j^dag s_j-), g' = g / (chi-)^2 dJ/dt.
/// Agrees with the full form on the symmetric (v1, v2) block.
inline Matrix simplified_cd_2s1e_Jramp(double g, double J, double delta, double dJ_dt,
                                       const TwoSiteStructures& s) {
  const double cm = chi_minus(g, J, delta);
  detail::require_chi(cm, "chi-");
  return kI * (g / (cm * cm) * dJ_dt) * s.local;
}

inline HermitianOperator simplified_cd_2s1e_Jramp(double g, double J, double delta, double dJ_dt) {
  Basis b = enumerate_basis(2, 1);
  return {b, simplified_cd_2s1e_Jramp(g, J, delta, dJ_dt, TwoSiteStructures::on(b))};
}

/// g-ramp counterpart. The antisymmetric block enters with a plus sign:
/// that is the sign the spectral sum produces for V_g.
inline Matrix full_cd_2s1e_gramp(double g, double J, double delta, double dg_dt,
                                 const TwoSiteStructures& s) {
  const double cm = chi_minus(g, J, delta);
  const double cp = chi_plus(g, J, delta);
  detail::require_chi(cm, "chi-");
  detail::require_chi(cp, "chi+");
  return kI * ((delta - J) / (2.0 * cm * cm) * dg_dt) * s.symmetric +
         kI * ((delta + J) / (2.0 * cp * cp) * dg_dt) * s.antisymmetric;
}

inline HermitianOperator full_cd_2s1e_gramp(double g, double J, double delta, double dg_dt) {
  Basis b = enumerate_basis(2, 1);
  return {b, full_cd_2s1e_gramp(g, J, delta, dg_dt, TwoSiteStructures::on(b))};
}

/// g' = (delta - J) / (chi-)^2 dg/dt; vanishes on the delta = J trajectory.
inline Matrix simplified_cd_2s1e_gramp(double g, double J, double delta, double dg_dt,
                                       const TwoSiteStructures& s) {
  const double cm = chi_minus(g, J, delta);
  detail::require_chi(cm, "chi-");
  return kI * ((delta - J) / (cm * cm) * dg_dt) * s.local;
}

inline HermitianOperator simplified_cd_2s1e_gramp(double g, double J, double delta, double dg_dt) {
  Basis b = enumerate_basis(2, 1);
  return {b, simplified_cd_2s1e_gramp(g, J, delta, dg_dt, TwoSiteStructures::on(b))};
}

// ---------------------------------------------------------------------------
// Three sites, one excitation (open chain)

/// Hermitian combinations i(X - X^dag) for the three-site structures:
///   nonlocal = (a1^+ + a3^+) s2- + a2^+ (s1- + s3-)
///   pair     = a1^+ s3- + a3^+ s1-  +  a1^+ s1- + 2 a2^+ s2- + a3^+ s3-
/// The pair couplings share one strength in both forms.
struct ThreeSiteStructures {
  Matrix nonlocal;
  Matrix pair;

  static ThreeSiteStructures on(const Basis& basis) {
    if (basis.n_sites() != 3) throw InvalidArgument("three-site structures need a three-site basis");
    auto term = [&](int cav, int qubit) {
      return build_operator({{OpKind::a_dagger, cav}, {OpKind::sigma_minus, qubit}}, basis);
    };
    auto herm = [](const Matrix& x) -> Matrix { return kI * x - kI * x.adjoint(); };
    return {herm(term(0, 1) + term(2, 1) + term(1, 0) + term(1, 2)),
            herm(term(0, 2) + term(2, 0) + term(0, 0) + 2.0 * term(1, 1) + term(2, 2))};
  }
};

struct ThreeSiteCd {
  HermitianOperator op;
  /// Nonlocal strength (zero in the simplified form).
  double g_nonlocal = 0.0;
  /// Strength of the pair structure (g_l in the full form, g' simplified).
  double g_pair = 0.0;
  double residual = 0.0;
};

inline ThreeSiteCd cd_3s1e(double g, double J, double delta, double dJ_dt, bool simplified,
                           const ThreeSiteStructures& s, double gap_tolerance = 1e-9) {
  Basis b = enumerate_basis(3, 1);
  LatticeParams p{3, g, J, delta, Boundary::open};
  const HermitianOperator h = build_hamiltonian(p, b);
  const Matrix mirror = reflection_permutation(b);
  const Spectrum spec = eigendecompose_symmetric(h, mirror);
  const Matrix exact = exact_cd(spec, dJ_dt * hopping_operator(b), gap_tolerance);
  const double scale = std::max(1.0, max_abs(exact));

  if (!simplified) {
    // Least-squares fit exact = g_n * nonlocal + g_l * pair.
    auto dot = [](const Matrix& x, const Matrix& y) { return (x.adjoint() * y).trace().real(); };
    Eigen::Matrix2d gram;
    gram << dot(s.nonlocal, s.nonlocal), dot(s.nonlocal, s.pair), dot(s.pair, s.nonlocal),
        dot(s.pair, s.pair);
    Eigen::Vector2d rhs(dot(s.nonlocal, exact), dot(s.pair, exact));
    const Eigen::Vector2d c = gram.ldlt().solve(rhs);
    const Matrix fit = c(0) * s.nonlocal + c(1) * s.pair;
    const double residual = max_abs(exact - fit);
    // Eigenvector rounding enters the exact operator as ~eps / gap^2 when the
    // lowest levels close in at small J; widen the bound accordingly.
    double min_gap = INFINITY;
    for (int k = 0; k + 1 < spec.size(); ++k) min_gap = std::min(min_gap, spec.energies(k + 1) - spec.energies(k));
    if (residual > std::max(1e-8, 1e-12 / (min_gap * min_gap)) * scale) {
      throw StructureError("three-site CD does not fit the nonlocal/pair form, residual " +
                           detail::sci(residual));
    }
    return {{b, fit}, c(0), c(1), residual};
  }

  // Keep the ground-state block, retune the other one so the nonlocal
  // couplings drop out: only the pair structure survives.
  const Matrix exact_eig = spec.states.adjoint() * exact * spec.states;
  const Matrix pair_eig = spec.states.adjoint() * s.pair * spec.states;
  Eigen::Index partner = 0;
  exact_eig.row(0).cwiseAbs().maxCoeff(&partner);
  const double strength =
      std::abs(pair_eig(0, partner)) < 1e-14 ? 0.0 : (exact_eig(0, partner) / pair_eig(0, partner)).real();
  const Matrix op = strength * s.pair;
  const Matrix op_eig = spec.states.adjoint() * op * spec.states;
  // The ground state may couple to its partner only. Exact elements to other
  // levels are rounding noise amplified by small gaps, so they are not compared.
  double residual = std::abs(op_eig(0, partner) - exact_eig(0, partner));
  for (Eigen::Index n = 0; n < op_eig.cols(); ++n) {
    if (n != partner) residual = std::max(residual, std::abs(op_eig(0, n)));
  }
  if (residual > 1e-8 * scale) {
    throw StructureError("simplified three-site CD changes the ground-state row, residual " +
                         detail::sci(residual));
  }
  return {{b, op}, 0.0, strength, residual};
}

inline ThreeSiteCd cd_3s1e(double g, double J, double delta, double dJ_dt, bool simplified) {
  return cd_3s1e(g, J, delta, dJ_dt, simplified, ThreeSiteStructures::on(enumerate_basis(3, 1)));
}

// ---------------------------------------------------------------------------
// Two sites, two excitations (zero detuning)

/// A2^dag C2 - C2^dag A2 with A2 = a1^2 - a2^2, C2 = a2 s1- - a1 s2-.
inline Matrix two_excitation_structure(const Basis& basis) {
  if (basis.n_sites() != 2) throw InvalidArgument("two-excitation structure needs two sites");
  using K = OpKind;
  const Matrix a2c2 = build_operator({{K::a_dagger, 0}, {K::a_dagger, 0}, {K::a, 1}, {K::sigma_minus, 0}}, basis) -
                      build_operator({{K::a_dagger, 0}, {K::a_dagger, 0}, {K::a, 0}, {K::sigma_minus, 1}}, basis) -
                      build_operator({{K::a_dagger, 1}, {K::a_dagger, 1}, {K::a, 1}, {K::sigma_minus, 0}}, basis) +
                      build_operator({{K::a_dagger, 1}, {K::a_dagger, 1}, {K::a, 0}, {K::sigma_minus, 1}}, basis);
  return a2c2 - a2c2.adjoint();
}

/// Subset CD for the two-excitation J ramp:
///   i g / (2 chi2^2) dJ/dt (A2^dag C2 - C2^dag A2).
/// The overall sign is the one that reproduces exact_cd on the {v2, v3, v4}
/// block (see calibrate_chi2).
inline Matrix simplified_cd_2s2e_Jramp(double g, double dJ_dt, double chi2_squared,
                                       const Matrix& structure) {
  if (!(chi2_squared > 0.0)) throw InvalidArgument("chi2_squared must be positive");
  return kI * (g / (2.0 * chi2_squared) * dJ_dt) * structure;
}

inline HermitianOperator simplified_cd_2s2e_Jramp(double g, double J, double dJ_dt,
                                                  double chi2_squared) {
  (void)J;
  Basis b = enumerate_basis(2, 2);
  return {b, simplified_cd_2s2e_Jramp(g, dJ_dt, chi2_squared, two_excitation_structure(b))};
}

struct Chi2Calibration {
  double chi2_squared;
  /// Sign of the fitted coefficient relative to the form
  /// -i g/(2 chi2^2) dJ/dt (A2^dag C2 - C2^dag A2). Observed: -1.
  int orientation;
  double residual;
  /// 2 g^2 + J^2, the squared gap of the subset levels v3, v4 from v2.
  double gap_hypothesis;
};

/// Fits the scalar 1/chi2^2 so the subset form matches exact_cd (per unit
/// dJ/dt) on the span of {v2, v3, v4}.
inline Chi2Calibration calibrate_chi2(double g, double J, double gap_tolerance = 1e-9) {
  Basis b = enumerate_basis(2, 2);
  const HermitianOperator h = build_hamiltonian({2, g, J, 0.0, Boundary::open}, b);
  const Spectrum labeled = labeled_eigenstates(h);
  const Matrix exact = exact_cd(labeled, hopping_operator(b), gap_tolerance);

  Matrix subset(b.size(), 3);
  subset << labeled.states.col(1), labeled.states.col(2), labeled.states.col(3);
  const Matrix projector = subset * subset.adjoint();
  const Matrix target = projector * exact * projector;

  const Matrix form = -kI * (g / 2.0) * two_excitation_structure(b);
  const double norm = (form.adjoint() * form).trace().real();
  if (norm < 1e-300) throw StructureError("subset CD form vanishes (g = 0)");
  const double c = (form.adjoint() * target).trace().real() / norm;
  const double residual = max_abs(target - c * form);
  if (residual > 1e-8 * std::max(1.0, max_abs(target))) {
    throw StructureError("subset CD form does not match exact CD, residual " + detail::sci(residual));
  }
  if (std::abs(c) < 1e-300) throw StructureError("subset CD coefficient vanishes");
  return {1.0 / std::abs(c), c > 0 ? 1 : -1, residual, 2.0 * g * g + J * J};
}

}  // namespace jcsim
