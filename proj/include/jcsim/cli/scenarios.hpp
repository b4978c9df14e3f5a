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

// Scenario runners. Each scenario turns a resolved Config into one or more CSV
// tables; `execute` adds the manifest.

#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include "jcsim/cli/config.hpp"
#include "jcsim/cli/output.hpp"
#include "jcsim/evolve.hpp"
#include "jcsim/noise.hpp"

#ifndef JCSIM_VERSION
#define JCSIM_VERSION "0.0.0"
#endif

namespace jcsim::cli {

inline CdMode cd_mode(const std::string& s) {
  if (s == "exact") return CdMode::exact;
  if (s == "full") return CdMode::full_analytic;
  if (s == "simplified") return CdMode::simplified;
  return CdMode::none;
}

/// Step count for total time T: at least evolve.n_steps, and fine enough
/// that no step exceeds evolve.max_dt.
inline int steps_for(const Config& c, double T) {
  int n = c.integer("evolve.n_steps");
  const double max_dt = c.real("evolve.max_dt");
  if (max_dt > 0.0) n = std::max(n, static_cast<int>(std::ceil(T / max_dt - 1e-9)));
  return n;
}

inline EvolutionConfig evolution_config(const Config& c) {
  EvolutionConfig e;
  e.lattice.n_sites = c.integer("lattice.n_sites");
  e.lattice.g = c.real("lattice.g");
  e.lattice.J = c.real("lattice.J");
  e.lattice.delta = c.real("lattice.delta");
  e.lattice.boundary = c.get("lattice.boundary") == "periodic" ? Boundary::periodic : Boundary::open;
  e.n_excitations = c.integer("lattice.excitations");
  e.ramp.parameter = c.get("ramp.parameter") == "g" ? RampParameter::g : RampParameter::J;
  e.ramp.shape = c.get("ramp.shape") == "quadratic" ? RampShape::quadratic : RampShape::linear;
  e.ramp.start_value = c.real("ramp.start");
  e.ramp.target_value = c.real("ramp.target");
  e.ramp.total_time = c.real("ramp.T");
  e.cd.mode = cd_mode(c.get("cd.mode"));
  e.cd.gap_tolerance = c.real("cd.gap_tolerance");
  e.n_steps = steps_for(c, e.ramp.total_time);
  e.rule = c.get("evolve.rule") == "midpoint" ? StepRule::midpoint : StepRule::magnus4;
  e.record_every = c.integer("evolve.record_every");
  const std::string& init = c.get("evolve.initial");
  e.initial = init == "ground" ? InitialState::ground() : InitialState::named(std::stoi(init.substr(1)));
  e.check_convergence = c.boolean("evolve.check_convergence");
  e.convergence_tolerance = c.real("evolve.convergence_tolerance");
  if (e.lattice.n_sites < 2) throw ConfigError("lattice.n_sites must be at least 2");
  if (e.n_excitations < 1) throw ConfigError("lattice.excitations must be at least 1");
  if (e.record_every < 1) throw ConfigError("evolve.record_every must be positive");
  return e;
}

inline NoiseConfig noise_config(const Config& c) {
  NoiseConfig n;
  n.alpha = c.real("noise.alpha");
  n.n_samples = c.integer("noise.samples");
  n.seed = c.unsigned_integer("noise.seed");
  n.resample_segments = c.integer("noise.segments");
  return n;
}

/// Evolution at a different total time, recording only the endpoints.
inline EvolutionConfig at_total_time(const Config& c, EvolutionConfig e, double T) {
  e.ramp.total_time = T;
  e.n_steps = steps_for(c, T);
  e.record_every = e.n_steps;
  return e;
}

inline EvolutionConfig with_cd(EvolutionConfig e, CdMode mode) {
  e.cd.mode = mode;
  return e;
}

inline std::vector<double> sweep_grid(const Config& c) {
  std::vector<double> values = c.real_list("sweep.values");
  if (!values.empty()) return values;
  const double a = c.real("sweep.start");
  const double b = c.real("sweep.stop");
  const int n = c.integer("sweep.points");
  if (n < 1) throw ConfigError("sweep.points must be positive");
  if (n == 1) return {a};
  const bool log = c.get("sweep.spacing") == "log";
  if (log && (a <= 0.0 || b <= 0.0)) throw ConfigError("log sweep needs positive start and stop");
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    values.push_back(log ? std::exp(std::log(a) + u * (std::log(b) - std::log(a))) : a + u * (b - a));
  }
  values.front() = a;
  values.back() = b;
  return values;
}

inline std::string pi_label(double T) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gpi", T / M_PI);
  return buf;
}

// ---------------------------------------------------------------------------

namespace scenarios {

inline std::vector<CsvTable> spectrum(const Config& c, const std::string& axis, const std::string& file) {
  const EvolutionConfig e = evolution_config(c);
  const Basis basis = enumerate_basis(e.lattice.n_sites, e.n_excitations);
  CsvTable t{file, {axis}, {}};
  for (int i = 1; i <= basis.size(); ++i) t.header.push_back("E" + std::to_string(i));
  for (double x : sweep_grid(c)) {
    LatticeParams p = e.lattice;
    (axis == "J" ? p.J : p.g) = x;
    const Spectrum s = labeled_eigenstates(build_hamiltonian(p, basis));
    std::vector<double> row{x};
    for (int i = 0; i < s.size(); ++i) row.push_back(s.energies(i));
    t.add_row(std::move(row));
  }
  return {t};
}

/// Traces recorded on a common time grid, one column per trajectory.
inline CsvTable trace_table(const std::string& file, double T, const std::vector<std::string>& names,
                            const std::vector<const std::vector<double>*>& series, const Trajectory& grid) {
  CsvTable t{file, {"t_over_T"}, {}};
  t.header.insert(t.header.end(), names.begin(), names.end());
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    std::vector<double> row{grid.times[i] / T};
    for (const auto* s : series) row.push_back(s->at(i));
    t.add_row(std::move(row));
  }
  return t;
}

inline std::vector<CsvTable> ramp_infidelity(const Config& c) {
  const EvolutionConfig e = evolution_config(c);
  const Trajectory plain = evolve_unitary(with_cd(e, CdMode::none));
  const Trajectory cd = evolve_unitary(e);
  return {trace_table("ramp_infidelity_vs_t.csv", e.ramp.total_time, {"infid_noCD", "infid_CD"},
                      {&plain.infidelity, &cd.infidelity}, plain)};
}

inline std::vector<CsvTable> infidelity_vs_T(const Config& c, unsigned workers) {
  const EvolutionConfig e = evolution_config(c);
  const std::vector<double> grid = sweep_grid(c);
  const int n = static_cast<int>(grid.size());
  std::vector<double> out(2 * n);
  parallel_for(2 * n, workers, [&](int job) {
    const EvolutionConfig run = at_total_time(c, job < n ? with_cd(e, CdMode::none) : e, grid[job % n]);
    out[job] = evolve_unitary(run).final_infidelity();
  });
  CsvTable t{"infidelity_vs_T.csv", {"T", "infid_noCD", "infid_CD"}, {}};
  for (int i = 0; i < n; ++i) t.add_row({grid[i], out[i], out[n + i]});
  return {t};
}

inline std::vector<CsvTable> two_exc_infidelity(const Config& c) {
  EvolutionConfig e = evolution_config(c);
  auto run = [&](CdMode mode, int label) {
    EvolutionConfig r = with_cd(e, mode);
    r.initial = InitialState::named(label);
    return evolve_unitary(r);
  };
  const Trajectory plain = run(CdMode::none, 7);
  const Trajectory exact = run(CdMode::exact, 7);
  const Trajectory simple3 = run(CdMode::simplified, 3);
  const Trajectory simple7 = run(CdMode::simplified, 7);
  return {trace_table("two_exc_infidelity.csv", e.ramp.total_time,
                      {"infid_noCD_v7", "infid_exactCD_v7", "infid_simplifiedCD_v3", "infid_simplifiedCD_v7"},
                      {&plain.infidelity, &exact.infidelity, &simple3.infidelity, &simple7.infidelity}, plain)};
}

inline std::vector<CsvTable> noise_single(const Config& c) {
  const EvolutionConfig e = evolution_config(c);
  const NoiseConfig nz = noise_config(c);
  const auto idx = static_cast<std::uint64_t>(c.integer("noise.sample_index"));
  const Trajectory plain = noisy_trajectory(with_cd(e, CdMode::none), nz, idx);
  const Trajectory cd = noisy_trajectory(e, nz, idx);
  return {trace_table("noise_single.csv", e.ramp.total_time, {"F_noCD", "F_CD"}, {&plain.fidelity, &cd.fidelity},
                      plain)};
}

inline std::vector<CsvTable> noise_sweep(const Config& c, unsigned workers) {
  const EvolutionConfig e = evolution_config(c);
  NoiseConfig nz = noise_config(c);
  CsvTable t{"noise_sweep.csv", {"alpha", "mean_F_noCD", "std_F_noCD", "mean_F_CD", "std_F_CD"}, {}};
  for (double alpha : sweep_grid(c)) {
    nz.alpha = alpha;
    const EnsembleResult plain = run_ensemble(with_cd(e, CdMode::none), nz, false, workers);
    const EnsembleResult cd = run_ensemble(e, nz, false, workers);
    t.add_row({alpha, plain.mean_F_T, plain.std_F_T, cd.mean_F_T, cd.std_F_T});
  }
  return {t};
}

inline std::vector<CsvTable> decoherence_sweep(const Config& c, bool gamma_axis, unsigned workers) {
  const EvolutionConfig e = evolution_config(c);
  const std::vector<double> grid = sweep_grid(c);
  const std::vector<double> times = c.real_list("decoherence.T_values");
  const int n = static_cast<int>(grid.size());
  const int m = static_cast<int>(times.size());
  std::vector<double> out(static_cast<std::size_t>(n) * m * 2);
  parallel_for(static_cast<int>(out.size()), workers, [&](int job) {
    const int i = job / (2 * m);
    const int j = (job / 2) % m;
    const bool use_cd = job % 2 == 1;
    DecoherenceRates rates{c.real("decoherence.gamma"), c.real("decoherence.kappa")};
    (gamma_axis ? rates.gamma : rates.kappa) = grid[i];
    const EvolutionConfig run = at_total_time(c, use_cd ? e : with_cd(e, CdMode::none), times[j]);
    out[job] = evolve_lindblad(run, rates).final_infidelity();
  });
  CsvTable t{gamma_axis ? "decoherence_gamma_sweep.csv" : "decoherence_kappa_sweep.csv",
             {gamma_axis ? "gamma" : "kappa"}, {}};
  for (double T : times) {
    t.header.push_back("infid_noCD_T" + pi_label(T));
    t.header.push_back("infid_CD_T" + pi_label(T));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<double> row{grid[i]};
    for (int j = 0; j < 2 * m; ++j) row.push_back(out[static_cast<std::size_t>(i) * 2 * m + j]);
    t.add_row(std::move(row));
  }
  return {t};
}

inline std::vector<CsvTable> sxsx_vs_t(const Config& c) {
  EvolutionConfig e = evolution_config(c);
  e.record_sxsx = true;
  const Trajectory plain = evolve_unitary(with_cd(e, CdMode::none));
  const Trajectory cd = evolve_unitary(e);
  return {trace_table("sxsx_vs_t_k" + std::to_string(e.n_excitations) + ".csv", e.ramp.total_time,
                      {"sxsx_noCD", "sxsx_CD", "sxsx_ground"},
                      {&plain.observables.at("sxsx"), &cd.observables.at("sxsx"), &cd.observables.at("sxsx_reference")},
                      plain)};
}

inline std::vector<CsvTable> custom(const Config& c) {
  EvolutionConfig e = evolution_config(c);
  e.record_sxsx = true;
  const std::string& dynamics = c.get("custom.dynamics");
  Trajectory tr;
  if (dynamics == "lindblad") {
    tr = evolve_lindblad(e, {c.real("decoherence.gamma"), c.real("decoherence.kappa")});
  } else if (dynamics == "noisy") {
    tr = noisy_trajectory(e, noise_config(c), static_cast<std::uint64_t>(c.integer("noise.sample_index")));
  } else {
    tr = evolve_unitary(e);
  }
  CsvTable t{"trajectory.csv", {"t", "t_over_T", "fidelity", "infidelity", "sxsx", "sxsx_ground"}, {}};
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    t.add_row({tr.times[i], tr.times[i] / e.ramp.total_time, tr.fidelity[i], tr.infidelity[i],
               tr.observables.at("sxsx")[i], tr.observables.at("sxsx_reference")[i]});
  }
  return {t};
}

}  // namespace scenarios

inline std::vector<CsvTable> run_scenario(const Config& c, unsigned workers = worker_count()) {
  const std::string& id = c.get("scenario");
  if (id == "spectrum_vs_J") return scenarios::spectrum(c, "J", "spectrum_vs_J.csv");
  if (id == "spectrum_vs_g") return scenarios::spectrum(c, "g", "spectrum_vs_g.csv");
  if (id == "two_exc_spectrum") return scenarios::spectrum(c, "J", "two_exc_spectrum.csv");
  if (id == "ramp_infidelity_vs_t") return scenarios::ramp_infidelity(c);
  if (id == "infidelity_vs_T") return scenarios::infidelity_vs_T(c, workers);
  if (id == "two_exc_infidelity") return scenarios::two_exc_infidelity(c);
  if (id == "noise_single") return scenarios::noise_single(c);
  if (id == "noise_sweep") return scenarios::noise_sweep(c, workers);
  if (id == "decoherence_gamma_sweep") return scenarios::decoherence_sweep(c, true, workers);
  if (id == "decoherence_kappa_sweep") return scenarios::decoherence_sweep(c, false, workers);
  if (id == "sxsx_vs_t") return scenarios::sxsx_vs_t(c);
  if (id == "custom") return scenarios::custom(c);
  throw ConfigError("unknown scenario: " + id);
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

/// Runs the scenario, writes its tables, `resolved_config.txt` and
/// `manifest.txt` into `out`, and returns the manifest.
inline Manifest execute(const Config& c, const std::filesystem::path& out, unsigned workers = worker_count()) {
  Manifest m;
  m.set("tool", "jcsim");
  m.set("version", JCSIM_VERSION);
  m.set("started_utc", utc_timestamp());
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CsvTable> tables = run_scenario(c, workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const EvolutionConfig e = evolution_config(c);
  m.set("scenario", c.get("scenario"));
  m.set("rng.algorithm", kRngAlgorithm);
  m.set("rng.seed", c.get("noise.seed"));
  m.set("integrator.rule", c.get("evolve.rule"));
  m.set("integrator.order", std::to_string(step_rule_order(e.rule)));
  m.set("integrator.n_steps", std::to_string(e.n_steps));
  m.set("integrator.max_dt", c.get("evolve.max_dt"));
  m.set("threads", std::to_string(workers));
  m.set("wall_clock_seconds", format_real(seconds));
  for (const auto& [k, v] : c.values()) m.set("config." + k, v);
  m.outputs = write_outputs(out, tables, c);
  write_file(out / "manifest.txt", m.to_string());
  return m;
}

}  // namespace jcsim::cli
