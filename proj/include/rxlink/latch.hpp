#pragma once

// StrongARM latch: sensing-phase timing and input-referred thermal noise.
//
// Timing follows the four-phase picture of the latch: P/Q discharge until
// M3/M4 turn on (t_a), X/Y discharge until M5/M6 turn on (t_o), then
// logarithmic regeneration (t_latch). The clock period is taken as three
// times the sensing duration plus an equal reset phase.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rxlink/constants.hpp"
#include "rxlink/detail/json_fields.hpp"
#include "rxlink/errors.hpp"
#include "rxlink/numerics/quadrature.hpp"
#include "rxlink/techmodel.hpp"

namespace rxlink {

struct LatchConfig {
  double c_pq = 0;           // F, parasitic at P/Q
  double c_xy = 0;           // F, output nodes X/Y
  double tail_current = 0;   // A, quiescent I_O of the tail device
  double gm_input = 0;       // S, input pair
  double gm_latch = 0;       // S, regeneration gm3 + gm5
  double beta_input = 0;     // A/V^2, input pair
  double vth_34 = 0;         // V
  double vth_56 = 0;         // V
  double vov_input = 0;      // V, input pair overdrive
  double delta_v_latch = 0;  // V, regeneration target swing
};

inline constexpr double kLatchConsistencyTol = 1e-6;

inline void validate(const LatchConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v))
      throw ValidationError(std::string("latch: ") + name + " must be finite and > 0");
  };
  positive(c.c_pq, "c_pq");
  positive(c.c_xy, "c_xy");
  positive(c.tail_current, "tail_current");
  positive(c.gm_input, "gm_input");
  positive(c.gm_latch, "gm_latch");
  positive(c.beta_input, "beta_input");
  positive(c.vth_34, "vth_34");
  positive(c.vth_56, "vth_56");
  positive(c.vov_input, "vov_input");
  positive(c.delta_v_latch, "delta_v_latch");
  const double linked = c.gm_input * c.vov_input / 2.0;
  if (std::abs(linked - c.tail_current) > kLatchConsistencyTol * c.tail_current)
    throw ValidationError("latch: tail_current must equal gm_input*vov_input/2");
}

/// Builds a self-consistent config from the tail current and input overdrive;
/// gm_input and beta_input follow from the square law (I = beta*Vov^2/2).
inline LatchConfig make_latch(double c_pq, double c_xy, double tail_current, double vov_input,
                              double gm_latch, double vth_34, double vth_56,
                              double delta_v_latch) {
  LatchConfig c;
  c.c_pq = c_pq;
  c.c_xy = c_xy;
  c.tail_current = tail_current;
  c.vov_input = vov_input;
  c.gm_input = 2.0 * tail_current / vov_input;
  c.beta_input = c.gm_input / vov_input;
  c.gm_latch = gm_latch;
  c.vth_34 = vth_34;
  c.vth_56 = vth_56;
  c.delta_v_latch = delta_v_latch;
  validate(c);
  return c;
}

struct PhaseDurations {
  double t_a = 0;  // s, amplification (P/Q discharge)
  double t_o = 0;  // s, X/Y discharge
};

inline PhaseDurations phase_durations(const LatchConfig& c) {
  return {2.0 * c.c_pq * c.vth_34 / c.tail_current, 2.0 * c.c_xy * c.vth_56 / c.tail_current};
}

/// Regeneration time for differential input `delta_v_in`; zero once the
/// input alone exceeds the regeneration target.
inline double latch_time(const LatchConfig& c, double delta_v_in) {
  if (!(delta_v_in > 0)) throw DomainError("latch_time: delta_v_in must be > 0");
  const double arg = std::sqrt(c.tail_current / (2.0 * c.beta_input)) / c.vth_56 *
                     c.delta_v_latch / delta_v_in;
  if (arg <= 1.0) return 0.0;
  return c.c_xy / c.gm_latch * std::log(arg);
}

inline double max_clock_frequency(const LatchConfig& c, double delta_v_in) {
  const auto [t_a, t_o] = phase_durations(c);
  return 1.0 / (6.0 * (t_a + t_o + latch_time(c, delta_v_in)));
}

/// Supremum of max_clock_frequency over all inputs.
inline double clock_frequency_ceiling(const LatchConfig& c) {
  const auto [t_a, t_o] = phase_durations(c);
  return 1.0 / (6.0 * (t_a + t_o));
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// Envelope over initial phase of the sinusoid-to-charge transfer of the
/// amplification phase, |sin(pi f t_a)| / (pi f); t_a at f = 0.
inline double tf_envelope(double f, double t_a) {
  if (f == 0) return t_a;
  const double x = constants::pi * f;
  return std::abs(std::sin(x * t_a)) / x;
}

/// Integral of tf_envelope^2 over [0, inf), one quadrature panel per lobe of
/// width 1/t_a. Beyond `lobes` lobes sin^2 is replaced by its mean 1/2; the
/// tail is t_a/(2 pi^2 K) with error at most the same amount.
inline numerics::QuadratureResult envelope_noise_quadrature(double t_a, double rel_tol = 1e-6,
                                                            std::size_t lobes = 10000) {
  if (!(t_a > 0)) throw DomainError("envelope_noise_integral: t_a must be > 0");
  // Integrate in u = f*t_a so the panel layout is scale-free, then rescale.
  auto integrand = [](double u) {
    const double e = tf_envelope(u, 1.0);
    return e * e;
  };
  const double cutoff = static_cast<double>(lobes);
  const double pi2 = constants::pi * constants::pi;
  numerics::TailSpec tail{cutoff, 1.0 / (2.0 * pi2 * cutoff), 1.0 / (2.0 * pi2 * cutoff * cutoff),
                          1.0};
  // The tail error is O(1/K^2) per unit lobe; with the bound above it stays
  // well inside the requested tolerance for K = 1e4.
  auto r = numerics::adaptive_quadrature(integrand, 0.0, std::numeric_limits<double>::infinity(),
                                         rel_tol, tail);
  r.value *= t_a;
  r.error *= t_a;
  return r;
}

inline double envelope_noise_integral(double t_a) {
  return envelope_noise_quadrature(t_a).value;
}

/// Input-referred rms noise, 4kT*gamma/(gm*t_a).
inline double input_referred_noise(const LatchConfig& c, const TechnologyParams& tech) {
  const double t_a = phase_durations(c).t_a;
  return std::sqrt(4.0 * tech.boltzmann_kT() * tech.gamma / (c.gm_input * t_a));
}

/// Excess factor of the kT/C form of the latch noise. With the tail-current
/// link I_O = gm*Vov/2 this is gamma*Vov/Vth34.
inline double noise_excess_factor(const LatchConfig& c, const TechnologyParams& tech) {
  return tech.gamma * c.vov_input / c.vth_34;
}

/// Same noise written as sqrt(M*kT/C_pq).
inline double input_referred_noise_ktc(const LatchConfig& c, const TechnologyParams& tech) {
  return std::sqrt(noise_excess_factor(c, tech) * tech.boltzmann_kT() / c.c_pq);
}

// ---------------------------------------------------------------------------
// Config section
//
// "latch": { "c_pq", "c_xy", "gm_latch", two of {"tail_current", "gm_input",
//            "vov_input"}, optional "vth_34", "vth_56" (default tech
//            thresholds), "delta_v_latch" (default supply), "beta_input"
//            (default gm_input/vov_input) }
// ---------------------------------------------------------------------------

inline LatchConfig latch_from_json(const detail::json& s, const TechnologyParams& tech) {
  constexpr std::string_view sec = "latch";
  detail::reject_unknown_keys(s, sec,
                              {"c_pq", "c_xy", "tail_current", "gm_input", "vov_input",
                               "gm_latch", "beta_input", "vth_34", "vth_56",
                               "delta_v_latch"});
  LatchConfig c;
  c.c_pq = detail::require_number(s, "c_pq", sec);
  c.c_xy = detail::require_number(s, "c_xy", sec);
  c.gm_latch = detail::require_number(s, "gm_latch", sec);
  c.vth_34 = detail::optional_number(s, "vth_34", sec).value_or(tech.vth_n);
  c.vth_56 = detail::optional_number(s, "vth_56", sec).value_or(tech.vth_p);
  c.delta_v_latch = detail::optional_number(s, "delta_v_latch", sec).value_or(tech.supply_voltage);

  auto io = detail::optional_number(s, "tail_current", sec);
  auto gm = detail::optional_number(s, "gm_input", sec);
  auto vov = detail::optional_number(s, "vov_input", sec);
  const int given = int(io.has_value()) + int(gm.has_value()) + int(vov.has_value());
  if (given < 2)
    throw ParseError("latch.tail_current", "need two of tail_current, gm_input, vov_input");
  if (!io) io = *gm * *vov / 2.0;
  if (!gm) gm = 2.0 * *io / *vov;
  if (!vov) vov = 2.0 * *io / *gm;
  c.tail_current = *io;
  c.gm_input = *gm;
  c.vov_input = *vov;
  c.beta_input = detail::optional_number(s, "beta_input", sec).value_or(c.gm_input / c.vov_input);
  validate(c);
  return c;
}

inline detail::json to_json(const LatchConfig& c) {
  return detail::json{{"c_pq", c.c_pq},         {"c_xy", c.c_xy},
                      {"tail_current", c.tail_current}, {"gm_input", c.gm_input},
                      {"gm_latch", c.gm_latch}, {"beta_input", c.beta_input},
                      {"vth_34", c.vth_34},     {"vth_56", c.vth_56},
                      {"delta_v_latch", c.delta_v_latch}};
}

}  // namespace rxlink
