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

// `jcsim check`: a fast self-test of the numerical invariants.

#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "jcsim/evolve.hpp"
#include "jcsim/noise.hpp"

namespace jcsim::cli {

struct CheckResult {
  std::string name;
  bool pass;
  double value;
  double bound;
};

inline std::vector<CheckResult> run_checks() {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double value, double bound) {
    out.push_back({std::move(name), value < bound, value, bound});
  };
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  const Basis b21 = enumerate_basis(2, 1);

  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double g = u(rng), J = u(rng), d = u(rng) - 1.5;
    const auto a = analytic_spectrum_2s1e(g, J, d);
    const Spectrum s = labeled_eigenstates(build_hamiltonian({2, g, J, d}, b21));
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.energies[k] - s.energies(k)));
  }
  add("closed-form vs dense spectrum", worst, 1e-10);

  worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto a = analytic_spectrum_2s1e(u(rng), 0.0, u(rng) - 1.5);
    worst = std::max(worst, std::abs(a.energies[0] - a.energies[2]));
  }
  add("E1 = E3 at J = 0", worst, 1e-12);

  {
    const Spectrum s = eigendecompose(build_hamiltonian({2, 1.0, 0.7, 1.0}, b21));
    const Matrix dh = hopping_operator(b21);
    Spectrum phased = s;
    for (int k = 0; k < s.size(); ++k) phased.states.col(k) *= std::polar(1.0, 6.283 * (u(rng) / 3.0));
    add("CD gauge invariance", max_abs(exact_cd(s, dh) - exact_cd(phased, dh)), 1e-12);
  }

  EvolutionConfig e;
  e.lattice.delta = 1.0;
  e.cd.mode = CdMode::simplified;
  e.n_steps = 2000;
  {
    const Trajectory t = evolve_unitary(e);
    add("unitary norm drift", t.max_norm_drift, 1e-10);
    add("CD max infidelity", t.max_infidelity(), 1e-9);
  }
  {
    EvolutionConfig l = e;
    l.n_steps = 400;
    const Trajectory t = evolve_lindblad(l, {5e-5 / M_PI, 5e-5});
    add("Lindblad trace drift", t.max_norm_drift, 1e-8);
    add("Lindblad hermiticity", t.max_hermiticity_defect, 1e-10);
    add("Lindblad positivity (-min eig)", -t.min_eigenvalue, 1e-8);
  }
  {
    EvolutionConfig n = e;
    n.n_steps = 500;
    NoiseConfig nz{0.05, 1, 7, 100};
    const Trajectory a = noisy_trajectory(n, nz, 3);
    const Trajectory b = noisy_trajectory(n, nz, 3);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.fidelity.size(); ++i) diff = std::max(diff, std::abs(a.fidelity[i] - b.fidelity[i]));
    add("noise determinism", diff, 1e-300);
  }
  return out;
}

inline bool print_checks(const std::vector<CheckResult>& results, std::ostream& os) {
  bool ok = true;
  for (const auto& r : results) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e (< %.1e)", r.value, r.bound);
    os << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << buf << "\n";
    ok = ok && r.pass;
  }
  return ok;
}

}  // namespace jcsim::cli
