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

// Time evolution under H_tot(t) = H_r(t) + H_1(t).
//
// Both integrators hold the generator piecewise smooth over a step and apply
// an exact exponential:
//   midpoint  exp(h A(t + h/2))                                 order 2
//   magnus4   exp(h/2 (A1 + A2) + sqrt(3) h^2 / 12 [A2, A1])    order 4
// with A1, A2 sampled at the two Gauss-Legendre nodes. For pure states
// A = -i H and the step is unitary to rounding; for the master equation A is
// the Lindblad superoperator.

#pragma once

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jcsim/cd.hpp"
#include "jcsim/core.hpp"
#include "jcsim/model.hpp"
#include "jcsim/spectra.hpp"

namespace jcsim {

enum class StepRule { midpoint, magnus4 };

inline int step_rule_order(StepRule rule) { return rule == StepRule::midpoint ? 2 : 4; }

struct DecoherenceRates {
  double gamma = 0.0;  // per qubit
  double kappa = 0.0;  // per cavity
};

/// Piecewise-constant offsets added to J and g over equal segments of [0, T].
struct ControlNoise {
  double total_time = 1.0;
  std::vector<double> dJ;
  std::vector<double> dg;

  int segments() const { return static_cast<int>(dJ.size()); }

  int segment(double t) const {
    const int n = segments();
    const int s = static_cast<int>(std::floor(t / total_time * n));
    return std::clamp(s, 0, n - 1);
  }
};

struct InitialState {
  enum class Kind { tracked_ground, named, explicit_vector };
  Kind kind = Kind::tracked_ground;
  /// Zero-based label index for Kind::named (label v1 is 0).
  int label = 0;
  Vector vector;

  static InitialState ground() { return {}; }
  static InitialState named(int one_based) { return {Kind::named, one_based - 1, {}}; }
  static InitialState from_vector(Vector v) { return {Kind::explicit_vector, 0, std::move(v)}; }
};

struct EvolutionConfig {
  LatticeParams lattice;
  int n_excitations = 1;
  RampSchedule ramp;
  CdSpec cd;
  int n_steps = 4000;
  StepRule rule = StepRule::magnus4;
  /// Record every n-th step (the final step is always recorded).
  int record_every = 1;
  InitialState initial;
  /// Re-run with twice the steps and require |F(T) difference| below the tolerance.
  bool check_convergence = false;
  double convergence_tolerance = 1e-10;
  /// Record <s1x s2x> of the state and of the reference eigenstate.
  bool record_sxsx = false;
  bool keep_states = false;
  std::optional<ControlNoise> noise;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> infidelity;
  std::map<std::string, std::vector<double>> observables;
  std::vector<Vector> pure_states;
  std::vector<Matrix> density_matrices;
  /// Largest | ||psi|| - 1 | or | Tr rho - 1 | over recorded steps.
  double max_norm_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool tracking_ambiguous = false;

  double final_fidelity() const { return fidelity.back(); }
  double final_infidelity() const { return infidelity.back(); }
  double max_infidelity() const { return *std::max_element(infidelity.begin(), infidelity.end()); }
};

// ---------------------------------------------------------------------------
// Fidelity and observables

inline double fidelity(const Vector& psi, const Vector& reference) {
  if (psi.size() != reference.size()) throw InvalidArgument("fidelity: dimension mismatch");
  return std::norm(reference.dot(psi));
}

inline double fidelity(const Matrix& rho, const Vector& reference) {
  if (rho.rows() != reference.size() || rho.cols() != reference.size()) {
    throw InvalidArgument("fidelity: dimension mismatch");
  }
  return reference.dot(rho * reference).real();
}

/// 1 - F from the weight outside the reference, normalized by the state's
/// norm (trace). Keeps precision when F is within rounding of one.
inline double infidelity(const Vector& psi, const Vector& reference) {
  if (psi.size() != reference.size()) throw InvalidArgument("infidelity: dimension mismatch");
  const Vector perp = psi - reference * reference.dot(psi);
  return perp.squaredNorm() / psi.squaredNorm();
}

inline double infidelity(const Matrix& rho, const Vector& reference) {
  if (rho.rows() != reference.size()) throw InvalidArgument("infidelity: dimension mismatch");
  const Matrix q = Matrix::Identity(rho.rows(), rho.cols()) - reference * reference.adjoint();
  return (q * rho * q).trace().real() / rho.trace().real();
}

inline Matrix sxsx_operator(const Basis& basis, int site_a = 0, int site_b = 1) {
  return operator_matrix({{OpKind::sigma_x, site_a}, {OpKind::sigma_x, site_b}}, basis, basis);
}

/// <s_ax s_bx>. The operator changes the excitation number, but only its
/// restriction to the state's own support contributes to the expectation.
inline double observable_sxsx(const Vector& psi, const Basis& basis, int site_a = 0, int site_b = 1) {
  return psi.dot(sxsx_operator(basis, site_a, site_b) * psi).real();
}

inline double observable_sxsx(const Matrix& rho, const Basis& basis, int site_a = 0, int site_b = 1) {
  return (sxsx_operator(basis, site_a, site_b) * rho).trace().real();
}

// ---------------------------------------------------------------------------
// Scenario model: H_r(t) and H_1(t) on a (direct sum) basis.

class ScenarioModel {
 public:
  ScenarioModel(const EvolutionConfig& config, Basis basis)
      : config_(config), basis_(std::move(basis)) {
    if (config_.lattice.n_sites != basis_.n_sites()) {
      throw InvalidArgument("lattice and basis differ in site count");
    }
    const int n = config_.lattice.n_sites;
    const int k = config_.n_excitations;
    const bool g_ramp = config_.ramp.parameter == RampParameter::g;
    const CdMode mode = config_.cd.mode;
    if (mode == CdMode::full_analytic || mode == CdMode::simplified) {
      if (n == 2 && k == 1) {
        route_ = Route::two_site;
      } else if (n == 3 && k == 1 && !g_ramp && config_.lattice.boundary == Boundary::open) {
        route_ = Route::three_site;
      } else if (n == 2 && k == 2 && !g_ramp && mode == CdMode::simplified) {
        route_ = Route::two_excitation;
      } else {
        throw InvalidArgument("no closed-form CD for this scenario; use cd.mode = exact");
      }
    }
    for (const auto& b : basis_.blocks()) {
      Block blk;
      blk.offset = b.offset;
      blk.basis = Basis::direct_sum(n, {b.excitations});
      blk.photons = photon_number(blk.basis);
      blk.coupling = coupling_operator(blk.basis);
      blk.hopping = hopping_operator(blk.basis, config_.lattice.boundary);
      blk.mirror = reflection_permutation(blk.basis);
      if (route_ == Route::two_site) blk.two_site = TwoSiteStructures::on(blk.basis);
      if (route_ == Route::three_site) blk.three_site = ThreeSiteStructures::on(blk.basis);
      if (route_ == Route::two_excitation) blk.two_excitation = two_excitation_structure(blk.basis);
      blocks_.push_back(std::move(blk));
    }
  }

  const Basis& basis() const { return basis_; }

  /// Lattice parameters seen by the hardware: ramp plus control noise.
  LatticeParams realized(double t) const {
    LatticeParams p = config_.ramp.at(config_.lattice, t);
    if (config_.noise) {
      const int s = config_.noise->segment(t);
      p.J += config_.noise->dJ[s];
      p.g += config_.noise->dg[s];
    }
    return p;
  }

  /// Parameters entering the CD formula: noisy g, scheduled J.
  LatticeParams cd_params(double t) const {
    LatticeParams p = config_.ramp.at(config_.lattice, t);
    if (config_.noise) p.g += config_.noise->dg[config_.noise->segment(t)];
    return p;
  }

  LatticeParams nominal(double t) const { return config_.ramp.at(config_.lattice, t); }

  Matrix hamiltonian_block(const LatticeParams& p, std::size_t i) const {
    const Block& b = blocks_[i];
    return p.delta * b.photons + p.g * b.coupling + p.J * b.hopping;
  }

  Matrix cd_block(double t, std::size_t i) const {
    const Block& b = blocks_[i];
    const int dim = b.basis.size();
    if (config_.cd.mode == CdMode::none) return Matrix::Zero(dim, dim);
    const LatticeParams p = cd_params(t);
    const double rate = config_.ramp.rate(t);
    const bool g_ramp = config_.ramp.parameter == RampParameter::g;
    const bool simplified = config_.cd.mode == CdMode::simplified;

    if (config_.cd.mode == CdMode::exact) {
      if (dim == 1) return Matrix::Zero(1, 1);
      const Spectrum s = eigendecompose_symmetric({b.basis, hamiltonian_block(p, i)}, b.mirror);
      return exact_cd(s, rate * (g_ramp ? b.coupling : b.hopping), config_.cd.gap_tolerance);
    }
    switch (route_) {
      case Route::two_site:
        if (g_ramp) {
          return simplified ? simplified_cd_2s1e_gramp(p.g, p.J, p.delta, rate, b.two_site)
                            : full_cd_2s1e_gramp(p.g, p.J, p.delta, rate, b.two_site);
        }
        return simplified ? simplified_cd_2s1e_Jramp(p.g, p.J, p.delta, rate, b.two_site)
                          : full_cd_2s1e_Jramp(p.g, p.J, p.delta, rate, b.two_site);
      case Route::three_site: {
        const ThreeSiteCd fit = cd_3s1e(p.g, p.J, p.delta, rate, simplified,
                                        three_site_k1(), config_.cd.gap_tolerance);
        return fit.g_nonlocal * b.three_site.nonlocal + fit.g_pair * b.three_site.pair;
      }
      case Route::two_excitation: {
        if (p.delta != 0.0) throw InvalidArgument("two-excitation subset CD needs zero detuning");
        const Chi2Calibration chi2 = calibrate_chi2(p.g, p.J, config_.cd.gap_tolerance);
        return simplified_cd_2s2e_Jramp(p.g, rate, chi2.chi2_squared, b.two_excitation);
      }
      case Route::none:
        break;
    }
    return Matrix::Zero(dim, dim);
  }

  /// H_r(t) + H_1(t) on the full (direct sum) basis.
  Matrix total_hamiltonian(double t) const {
    const LatticeParams p = realized(t);
    Matrix h = Matrix::Zero(basis_.size(), basis_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const int off = blocks_[i].offset;
      const int dim = blocks_[i].basis.size();
      h.block(off, off, dim, dim) = hamiltonian_block(p, i) + cd_block(t, i);
    }
    return h;
  }

  /// Noise-free H_r(t) on the scenario sector (block 0); the fidelity reference.
  HermitianOperator reference_hamiltonian(double t) const {
    return {blocks_.front().basis, hamiltonian_block(nominal(t), 0)};
  }

  const Basis& sector_basis() const { return blocks_.front().basis; }

  /// dH/dlambda on the scenario sector, signed by the ramp direction.
  Matrix ramp_direction() const {
    const Block& b = blocks_.front();
    const double sign = config_.ramp.target_value >= config_.ramp.start_value ? 1.0 : -1.0;
    return sign * (config_.ramp.parameter == RampParameter::g ? b.coupling : b.hopping);
  }

 private:
  enum class Route { none, two_site, three_site, two_excitation };

  struct Block {
    int offset = 0;
    Basis basis;
    Matrix photons, coupling, hopping, mirror;
    TwoSiteStructures two_site;
    ThreeSiteStructures three_site;
    Matrix two_excitation;
  };

  const ThreeSiteStructures& three_site_k1() const {
    for (const auto& b : blocks_) {
      if (b.basis.n_excitations() == 1) return b.three_site;
    }
    throw InvalidArgument("three-site CD needs the one-excitation sector");
  }

  EvolutionConfig config_;
  Basis basis_;
  Route route_ = Route::none;
  std::vector<Block> blocks_;
};

namespace detail {

inline constexpr double kGaussOffset = 0.28867513459481288225;  // sqrt(3) / 6

inline Matrix unitary_step(const ScenarioModel& model, StepRule rule, double t0, double h) {
  Matrix heff;
  if (rule == StepRule::midpoint) {
    heff = model.total_hamiltonian(t0 + 0.5 * h);
  } else {
    const Matrix h1 = model.total_hamiltonian(t0 + (0.5 - kGaussOffset) * h);
    const Matrix h2 = model.total_hamiltonian(t0 + (0.5 + kGaussOffset) * h);
    heff = 0.5 * (h1 + h2) - kI * (std::sqrt(3.0) * h / 12.0) * (h2 * h1 - h1 * h2);
  }
  heff = 0.5 * (heff + heff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(heff);
  const Vector phases = (-kI * h * solver.eigenvalues().cast<Complex>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// Column-major vectorization: vec(A X B) = (B^T kron A) vec(X).
inline Matrix hamiltonian_superoperator(const Matrix& h) {
  const Matrix id = Matrix::Identity(h.rows(), h.cols());
  return -kI * (Matrix(Eigen::kroneckerProduct(id, h)) - Matrix(Eigen::kroneckerProduct(h.transpose(), id)));
}

inline Matrix dissipator(const std::vector<std::pair<double, Matrix>>& jumps, int dim) {
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix d = Matrix::Zero(dim * dim, dim * dim);
  for (const auto& [rate, l] : jumps) {
    if (rate == 0.0) continue;
    const Matrix ldl = l.adjoint() * l;
    d += rate * (Matrix(Eigen::kroneckerProduct(l.conjugate(), l)) -
                 0.5 * Matrix(Eigen::kroneckerProduct(id, ldl)) -
                 0.5 * Matrix(Eigen::kroneckerProduct(ldl.transpose(), id)));
  }
  return d;
}

inline Matrix lindblad_step(const ScenarioModel& model, const Matrix& dissipator, StepRule rule,
                            double t0, double h) {
  Matrix omega;
  if (rule == StepRule::midpoint) {
    omega = h * (hamiltonian_superoperator(model.total_hamiltonian(t0 + 0.5 * h)) + dissipator);
  } else {
    const Matrix l1 =
        hamiltonian_superoperator(model.total_hamiltonian(t0 + (0.5 - kGaussOffset) * h)) + dissipator;
    const Matrix l2 =
        hamiltonian_superoperator(model.total_hamiltonian(t0 + (0.5 + kGaussOffset) * h)) + dissipator;
    omega = 0.5 * h * (l1 + l2) + (std::sqrt(3.0) * h * h / 12.0) * (l2 * l1 - l1 * l2);
  }
  return omega.exp();
}

inline void validate(const EvolutionConfig& c) {
  if (c.n_steps < 1) throw InvalidArgument("n_steps must be positive");
  if (c.record_every < 1) throw InvalidArgument("record_every must be positive");
  if (!(c.ramp.total_time > 0.0)) throw InvalidArgument("total time must be positive");
  if (c.n_excitations < 0) throw InvalidArgument("negative excitation number");
  if (c.noise && c.noise->segments() < 1) throw InvalidArgument("noise needs at least one segment");
}

// Initial state and the tracked reference spectrum at t = 0.
struct Start {
  Vector psi;
  Spectrum reference;
  int label;
};

inline Start initial_state(const EvolutionConfig& c, const ScenarioModel& model) {
  Spectrum labeled = labeled_eigenstates(model.reference_hamiltonian(0.0), model.ramp_direction());
  const int dim = labeled.size();
  switch (c.initial.kind) {
    case InitialState::Kind::tracked_ground: {
      int label = 0;
      if (c.lattice.n_sites == 2 && c.n_excitations == 2) label = 6;  // v7
      return {labeled.state(label), labeled, label};
    }
    case InitialState::Kind::named: {
      if (c.initial.label < 0 || c.initial.label >= dim) throw InvalidArgument("eigenstate label out of range");
      return {labeled.state(c.initial.label), labeled, c.initial.label};
    }
    case InitialState::Kind::explicit_vector: {
      const Vector& v = c.initial.vector;
      if (v.size() != dim) throw InvalidArgument("initial vector has wrong dimension");
      if (std::abs(v.norm() - 1.0) > 1e-10) throw InvalidArgument("initial vector must be unit norm");
      Eigen::Index label = 0;
      (labeled.states.adjoint() * v).cwiseAbs().maxCoeff(&label);
      return {v, labeled, static_cast<int>(label)};
    }
  }
  throw InvalidArgument("unknown initial state");
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Trajectory evolve_unitary(const EvolutionConfig& config) {
  detail::validate(config);
  const ScenarioModel model(config, enumerate_basis(config.lattice.n_sites, config.n_excitations));
  detail::Start start = detail::initial_state(config, model);
  Vector psi = std::move(start.psi);
  Spectrum reference = std::move(start.reference);
  const int label = start.label;
  const Basis& basis = model.basis();
  const Matrix mirror = reflection_permutation(basis);
  const Matrix sxsx = config.record_sxsx ? sxsx_operator(basis) : Matrix{};

  Trajectory traj;
  auto record = [&](double t) {
    const Vector ref = reference.state(label);
    traj.times.push_back(t);
    traj.fidelity.push_back(fidelity(psi, ref));
    traj.infidelity.push_back(infidelity(psi, ref));
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - 1.0));
    if (config.record_sxsx) {
      traj.observables["sxsx"].push_back(psi.dot(sxsx * psi).real());
      traj.observables["sxsx_reference"].push_back(ref.dot(sxsx * ref).real());
    }
    if (config.keep_states) traj.pure_states.push_back(psi);
  };

  const double T = config.ramp.total_time;
  const double h = T / config.n_steps;
  record(0.0);
  for (int n = 0; n < config.n_steps; ++n) {
    const double t0 = n * h;
    psi = detail::unitary_step(model, config.rule, t0, h) * psi;
    const double t1 = (n + 1 == config.n_steps) ? T : (n + 1) * h;
    reference = track_states(reference, eigendecompose_symmetric(model.reference_hamiltonian(t1), mirror));
    traj.tracking_ambiguous = traj.tracking_ambiguous || reference.ambiguous;
    if ((n + 1) % config.record_every == 0 || n + 1 == config.n_steps) record(t1);
  }

  if (config.check_convergence) {
    EvolutionConfig fine = config;
    fine.n_steps *= 2;
    fine.check_convergence = false;
    fine.record_sxsx = false;
    fine.keep_states = false;
    fine.record_every = fine.n_steps;
    const double diff = std::abs(evolve_unitary(fine).final_fidelity() - traj.final_fidelity());
    if (diff > config.convergence_tolerance) {
      throw AccuracyError("step doubling changed F(T) by " + std::to_string(diff));
    }
  }
  return traj;
}

/// Lindblad dynamics on the direct sum of sectors k, k-1, ..., 0 (the
/// dissipators only lower the excitation number). Mixed-state fidelity is
/// <v(t)|rho(t)|v(t)> against the tracked reference eigenstate.
inline Trajectory evolve_lindblad(const EvolutionConfig& config, const DecoherenceRates& rates) {
  detail::validate(config);
  if (rates.gamma < 0.0 || rates.kappa < 0.0) throw InvalidArgument("decoherence rates must be non-negative");
  std::vector<int> sectors;
  for (int k = config.n_excitations; k >= 0; --k) sectors.push_back(k);
  const Basis space = Basis::direct_sum(config.lattice.n_sites, sectors);
  const ScenarioModel model(config, space);
  detail::Start start_state = detail::initial_state(config, model);
  Spectrum reference = std::move(start_state.reference);
  const int label = start_state.label;

  const int dim = space.size();
  const int sector_dim = model.sector_basis().size();
  auto embed = [&](const Vector& v) {
    Vector out = Vector::Zero(dim);
    out.head(sector_dim) = v;
    return out;
  };
  const Vector start = embed(start_state.psi);
  Matrix rho = start * start.adjoint();

  std::vector<std::pair<double, Matrix>> jumps;
  for (int j = 0; j < config.lattice.n_sites; ++j) {
    jumps.emplace_back(rates.gamma, operator_matrix({{OpKind::sigma_minus, j}}, space, space));
    jumps.emplace_back(rates.kappa, operator_matrix({{OpKind::a, j}}, space, space));
  }
  const Matrix diss = detail::dissipator(jumps, dim);
  const Matrix sxsx = config.record_sxsx ? sxsx_operator(space) : Matrix{};
  const Matrix sector_mirror = reflection_permutation(model.sector_basis());

  Trajectory traj;
  traj.min_eigenvalue = 0.0;
  auto record = [&](double t) {
    const Vector ref = embed(reference.state(label));
    traj.times.push_back(t);
    traj.fidelity.push_back(fidelity(rho, ref));
    traj.infidelity.push_back(infidelity(rho, ref));
    const double drift = std::abs(rho.trace().real() - 1.0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, hermiticity_defect(rho));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
    if (config.record_sxsx) {
      traj.observables["sxsx"].push_back((sxsx * rho).trace().real());
      traj.observables["sxsx_reference"].push_back(ref.dot(sxsx * ref).real());
    }
    if (config.keep_states) traj.density_matrices.push_back(rho);
    if (drift > 1e-6) throw AccuracyError("trace drift " + std::to_string(drift));
  };

  const double T = config.ramp.total_time;
  const double h = T / config.n_steps;
  record(0.0);
  for (int n = 0; n < config.n_steps; ++n) {
    const double t0 = n * h;
    const Matrix prop = detail::lindblad_step(model, diss, config.rule, t0, h);
    Eigen::Map<Vector> vec(rho.data(), rho.size());
    const Vector next = prop * vec;
    vec = next;
    const double t1 = (n + 1 == config.n_steps) ? T : (n + 1) * h;
    reference = track_states(reference,
                             eigendecompose_symmetric(model.reference_hamiltonian(t1), sector_mirror));
    traj.tracking_ambiguous = traj.tracking_ambiguous || reference.ambiguous;
    if ((n + 1) % config.record_every == 0 || n + 1 == config.n_steps) record(t1);
  }
  return traj;
}

}  // namespace jcsim
