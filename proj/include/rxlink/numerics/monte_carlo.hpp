#pragma once

// Monte Carlo oracle for the latch input-referred noise: integrate sampled
// white channel-noise current onto C_PQ over the amplification phase and
// refer the result back through the phase gain gm*t_a/C_PQ.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rxlink/errors.hpp"
#include "rxlink/latch.hpp"
#include "rxlink/numerics/quadrature.hpp"
#include "rxlink/numerics/random.hpp"
#include "rxlink/techmodel.hpp"

namespace rxlink::numerics {

struct NoiseMcResult {
  long trials = 0;
  double sample_std = 0;      // V
  double standard_error = 0;  // V, sample_std / sqrt(2 (trials - 1))
  std::uint64_t seed = 0;
};

inline constexpr int kMcStepsPerPhase = 1000;

/// Trial k draws from its own SplitMix64 stream, so the result does not
/// depend on evaluation order.
inline NoiseMcResult mc_latch_noise(const LatchConfig& cfg, const TechnologyParams& tech,
                                    long trials, std::uint64_t seed = kDefaultSeed) {
  if (trials < 1000) throw DomainError("mc_latch_noise: trials must be >= 1000");
  validate(cfg);
  const double t_a = phase_durations(cfg).t_a;
  const double dt = t_a / kMcStepsPerPhase;
  // One-sided PSD of the differential drain current, 2 * 4kT*gamma*gm.
  const double psd = 8.0 * tech.boltzmann_kT() * tech.gamma * cfg.gm_input;
  const double sigma_i = std::sqrt(psd / (2.0 * dt));
  const double phase_gain = cfg.gm_input * t_a / cfg.c_pq;

  std::vector<double> v(static_cast<std::size_t>(trials));
  std::vector<double> steps(kMcStepsPerPhase);
  for (long k = 0; k < trials; ++k) {
    NormalSampler normal(SplitMix64::stream(seed, static_cast<std::uint64_t>(k)));
    for (auto& s : steps) s = sigma_i * normal() * dt;
    const double charge = pairwise_sum(steps);
    v[static_cast<std::size_t>(k)] = charge / cfg.c_pq / phase_gain;
  }

  const double mean = pairwise_sum(v) / static_cast<double>(trials);
  std::vector<double> dev2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev2[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(dev2) / static_cast<double>(trials - 1);

  NoiseMcResult r;
  r.trials = trials;
  r.seed = seed;
  r.sample_std = std::sqrt(var);
  r.standard_error = r.sample_std / std::sqrt(2.0 * static_cast<double>(trials - 1));
  return r;
}

}  // namespace rxlink::numerics
