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

// Gaussian control errors on J and g, and seeded ensembles over them.
//
// Sample i of a run with seed s draws from its own std::mt19937_64 seeded by
// std::seed_seq{s_lo, s_hi, i_lo, i_hi}; both are fully specified by the
// standard. Normals come from the Box-Muller transform below rather than
// std::normal_distribution, whose algorithm is implementation defined.
// Samples are therefore identical across platforms, thread counts and
// execution order.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "jcsim/evolve.hpp"

namespace jcsim {

inline constexpr const char* kRngAlgorithm = "mt19937_64+seed_seq(seed,sample)+box_muller/v1";

struct NoiseConfig {
  /// Relative fluctuation: std of dJ is alpha*J_f, of dg is alpha*g.
  double alpha = 0.0;
  int n_samples = 100;
  std::uint64_t seed = 1;
  /// Number of equal piecewise-constant noise segments over [0, T].
  int resample_segments = 100;
};

class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t sample_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(sample_index),
                      static_cast<std::uint32_t>(sample_index >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// Noise amplitudes: the ramp target for the ramped coupling, the fixed
/// value for the other one.
inline std::pair<double, double> noise_scales(const EvolutionConfig& config, double alpha) {
  const bool j_ramp = config.ramp.parameter == RampParameter::J;
  const double j_ref = j_ramp ? config.ramp.target_value : config.lattice.J;
  const double g_ref = j_ramp ? config.lattice.g : config.ramp.target_value;
  return {alpha * std::abs(j_ref), alpha * std::abs(g_ref)};
}

inline ControlNoise draw_control_noise(const EvolutionConfig& config, const NoiseConfig& noise,
                                       std::uint64_t sample_index) {
  if (noise.resample_segments < 1) throw InvalidArgument("resample_segments must be positive");
  if (noise.alpha < 0.0) throw InvalidArgument("alpha must be non-negative");
  auto [sigma_j, sigma_g] = noise_scales(config, noise.alpha);
  NoiseStream rng(noise.seed, sample_index);
  ControlNoise out;
  out.total_time = config.ramp.total_time;
  out.dJ.resize(noise.resample_segments);
  out.dg.resize(noise.resample_segments);
  for (int s = 0; s < noise.resample_segments; ++s) {
    out.dJ[s] = sigma_j * rng.normal();
    out.dg[s] = sigma_g * rng.normal();
  }
  return out;
}

/// Step count rounded up so every step lies inside one noise segment.
inline int aligned_steps(int n_steps, int segments) {
  return ((n_steps + segments - 1) / segments) * segments;
}

inline Trajectory noisy_trajectory(const EvolutionConfig& config, const NoiseConfig& noise,
                                   std::uint64_t sample_index) {
  EvolutionConfig c = config;
  c.noise = draw_control_noise(config, noise, sample_index);
  c.n_steps = aligned_steps(config.n_steps, noise.resample_segments);
  c.check_convergence = false;
  return evolve_unitary(c);
}

struct EnsembleResult {
  std::vector<double> per_sample_final_fidelity;
  double mean_F_T = 0.0;
  double std_F_T = 0.0;
  std::vector<Trajectory> traces;

  double standard_error() const {
    const auto n = per_sample_final_fidelity.size();
    return n > 1 ? std_F_T / std::sqrt(static_cast<double>(n)) : 0.0;
  }
};

/// Worker count: JCSIM_THREADS if set, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("JCSIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `count` independent jobs on up to `workers` threads. The first
/// exception (by index) is rethrown after all workers finish.
template <class Job>
void parallel_for(int count, unsigned workers, Job&& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(count, 1))));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline EnsembleResult summarize(std::vector<double> finals) {
  EnsembleResult r;
  const double n = static_cast<double>(finals.size());
  r.mean_F_T = std::accumulate(finals.begin(), finals.end(), 0.0) / n;
  double ss = 0.0;
  for (double f : finals) ss += (f - r.mean_F_T) * (f - r.mean_F_T);
  r.std_F_T = finals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  r.per_sample_final_fidelity = std::move(finals);
  return r;
}

inline EnsembleResult run_ensemble(const EvolutionConfig& config, const NoiseConfig& noise,
                                   bool keep_traces = false, unsigned workers = worker_count()) {
  if (noise.n_samples < 1) throw InvalidArgument("n_samples must be positive");
  EvolutionConfig c = config;
  if (!keep_traces) {
    c.record_every = aligned_steps(c.n_steps, noise.resample_segments);
    c.record_sxsx = false;
    c.keep_states = false;
  }
  std::vector<double> finals(noise.n_samples);
  std::vector<Trajectory> traces(keep_traces ? noise.n_samples : 0);
  parallel_for(noise.n_samples, workers, [&](int i) {
    Trajectory t = noisy_trajectory(c, noise, static_cast<std::uint64_t>(i));
    finals[i] = t.final_fidelity();
    if (keep_traces) traces[i] = std::move(t);
  });
  EnsembleResult r = summarize(std::move(finals));
  r.traces = std::move(traces);
  return r;
}

}  // namespace jcsim
