#pragma once

// Current-integrating amplifier and multi-integrator cascades.
//
// During the integration window the stage is a transconductor driving R||C_L
// from a zero initial condition, so a step input v_in gives
//
//   v_out(T) = gm R v_in (1 - exp(-T / (R C_L)))
//
// and N identical stages in series give (gm R)^N P(N, T/(R C_L)) where P is
// the regularized lower incomplete gamma function.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "rxlink/detail/json_fields.hpp"
#include "rxlink/errors.hpp"
#include "rxlink/techmodel.hpp"

namespace rxlink {

enum class LoadKind { precharge, current_source };

inline const char* to_string(LoadKind k) {
  return k == LoadKind::precharge ? "precharge" : "current-source";
}

struct IntegratorConfig {
  double gm = 0;            // S, input pair
  double c_load = 0;        // F, per output node
  double bias_current = 0;  // A, tail current I_B
  LoadKind load_kind = LoadKind::precharge;
  std::optional<double> gm_load;  // S, current-source load only
  TechnologyParams tech;
};

inline void validate(const IntegratorConfig& c) {
  if (!(c.gm > 0)) throw ValidationError("integrator: gm must be > 0");
  if (!(c.c_load > 0)) throw ValidationError("integrator: c_load must be > 0");
  if (!(c.bias_current > 0)) throw ValidationError("integrator: bias_current must be > 0");
  if (c.load_kind == LoadKind::current_source && !c.gm_load)
    throw ValidationError("integrator: current-source load needs gm_load");
  if (c.gm_load && !(*c.gm_load >= 0)) throw ValidationError("integrator: gm_load must be >= 0");
  validate(c.tech);
}

/// Output resistance R: 2/(lambda I_B) with pre-charge loads, half that with
/// current-source loads.
inline double output_resistance(const IntegratorConfig& c) {
  const double r = 2.0 / (c.tech.lambda * c.bias_current);
  return c.load_kind == LoadKind::precharge ? r : 0.5 * r;
}

/// Integration window for full-rate clocking: half the clock period.
inline double integration_time(double f_clk) { return 0.5 / f_clk; }

inline double ideal_gain(const IntegratorConfig& c, double t_int) {
  if (!(t_int > 0)) throw DomainError("ideal_gain: t_int must be > 0");
  return c.gm * t_int / c.c_load;
}

/// Largest tail current that keeps the output common mode above 0.6*VDD at
/// the end of the window: (0.4 VDD)(2 C_L)/T_int.
inline double max_bias_current(double c_load, double t_int, double vdd) {
  if (!(c_load > 0) || !(t_int > 0)) throw DomainError("max_bias_current: inputs must be > 0");
  if (!(vdd >= 0)) throw DomainError("max_bias_current: vdd must be >= 0");
  return 0.4 * vdd * 2.0 * c_load / t_int;
}

/// P(n, x) = 1 - exp(-x) sum_{k<n} x^k/k!. Series from above for small x to
/// avoid cancellation; n = 1 is exactly -expm1(-x).
inline double regularized_gamma_p(int n, double x) {
  if (n < 1) throw DomainError("regularized_gamma_p: n must be >= 1");
  if (x <= 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (n == 1) return -std::expm1(-x);
  if (x < n + 1.0) {
    // e^{-x} sum_{k>=n} x^k/k!
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= x / k;
    double sum = term;
    for (int k = n + 1; k < n + 400; ++k) {
      term *= x / k;
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x);
  }
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= x / k;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

inline double exact_gain(const IntegratorConfig& c, double t_int) {
  if (!(t_int > 0)) throw DomainError("exact_gain: t_int must be > 0");
  const double r = output_resistance(c);
  return c.gm * r * regularized_gamma_p(1, t_int / (r * c.c_load));
}

/// Gain of the pre-charge integrator at I_B = I_B,max, where the window
/// ratio T_int/(R C_L) reduces to 0.4*lambda*VDD.
inline double max_gain_precharge(const IntegratorConfig& c) {
  if (c.load_kind != LoadKind::precharge)
    throw DomainError("max_gain_precharge: requires a pre-charge load");
  const double r = output_resistance(c);
  return c.gm * r * regularized_gamma_p(1, 0.4 * c.tech.lambda * c.tech.supply_voltage);
}

/// Input-referred rms noise over one integration window.
inline double input_noise(const IntegratorConfig& c, double t_int, const TechnologyParams& tech) {
  if (!(t_int > 0)) throw DomainError("integrator input_noise: t_int must be > 0");
  double v2 = 4.0 * tech.boltzmann_kT() * tech.gamma / (c.gm * t_int);
  if (c.load_kind == LoadKind::current_source) {
    if (!c.gm_load) throw ValidationError("integrator: current-source load needs gm_load");
    v2 *= 1.0 + *c.gm_load / c.gm;
  }
  return std::sqrt(v2);
}

// ---------------------------------------------------------------------------
// Cascades
// ---------------------------------------------------------------------------

struct CascadeConfig {
  IntegratorConfig stage;
  int depth = 1;
};

/// Ideal N-stage gain (k_i T)^N / N! with k_i = gm/C_L.
inline double cascade_gain_ideal(double k_i, double t_int, int depth) {
  if (depth < 1) throw DomainError("cascade_gain_ideal: depth must be >= 1");
  const double a = k_i * t_int;
  double g = 1.0;
  for (int n = 1; n <= depth; ++n) g *= a / n;
  return g;
}

inline double cascade_gain_exact(const CascadeConfig& c, double t_int) {
  if (c.depth < 1) throw DomainError("cascade_gain_exact: depth must be >= 1");
  if (c.depth == 1) return exact_gain(c.stage, t_int);
  if (!(t_int > 0)) throw DomainError("cascade_gain_exact: t_int must be > 0");
  const double r = output_resistance(c.stage);
  const double x = t_int / (r * c.stage.c_load);
  return std::pow(c.stage.gm * r, c.depth) * regularized_gamma_p(c.depth, x);
}

/// Depth maximising the ideal cascade gain for single-stage gain A: floor(A),
/// at least 1. For integer A depths A and A-1 tie.
inline int optimal_cascade_depth(double single_stage_gain) {
  if (!(single_stage_gain > 0)) throw DomainError("optimal_cascade_depth: gain must be > 0");
  return std::max(1, static_cast<int>(std::floor(single_stage_gain)));
}

// ---------------------------------------------------------------------------
// Sized integrator: small-signal config derived from device geometry.
// ---------------------------------------------------------------------------

struct IntegratorDesign {
  double width = 10;      // um, each input device
  double c_load = 10e-15; // F
  LoadKind load_kind = LoadKind::precharge;
  double load_width = 0;  // um, current-source load devices (0 = none)
};

inline IntegratorConfig integrator_at(const IntegratorDesign& d, const TechnologyParams& tech,
                                      double bias_current) {
  IntegratorConfig c;
  c.tech = tech;
  c.c_load = d.c_load;
  c.bias_current = bias_current;
  c.load_kind = d.load_kind;
  c.gm = device_point(tech, d.width, bias_current).gm;
  if (d.load_kind == LoadKind::current_source)
    c.gm_load = d.load_width > 0 ? device_point(tech, d.load_width, bias_current).gm : 0.0;
  validate(c);
  return c;
}

/// Integrator biased at I_B,max for full-rate clock `f_clk`.
inline IntegratorConfig integrator_at_clock(const IntegratorDesign& d,
                                            const TechnologyParams& tech, double f_clk) {
  if (!(f_clk > 0)) throw DomainError("integrator_at_clock: f_clk must be > 0");
  const double t_int = integration_time(f_clk);
  return integrator_at(d, tech, max_bias_current(d.c_load, t_int, tech.supply_voltage));
}

// "integrator": { "width", "c_load", optional "load_kind" ("precharge" |
//                 "current-source"), "load_width" }
inline IntegratorDesign integrator_from_json(const detail::json& s) {
  constexpr std::string_view sec = "integrator";
  detail::reject_unknown_keys(s, sec, {"width", "c_load", "load_kind", "load_width"});
  IntegratorDesign d;
  d.width = detail::require_number(s, "width", sec);
  d.c_load = detail::require_number(s, "c_load", sec);
  if (s.contains("load_kind")) {
    const auto k = detail::require_string(s, "load_kind", sec);
    if (k == "precharge")
      d.load_kind = LoadKind::precharge;
    else if (k == "current-source")
      d.load_kind = LoadKind::current_source;
    else
      throw ParseError("integrator.load_kind", "expected precharge or current-source");
  }
  d.load_width = detail::optional_number(s, "load_width", sec).value_or(0.0);
  if (!(d.width > 0) || !(d.c_load > 0) || d.load_width < 0)
    throw ValidationError("integrator: width and c_load must be > 0, load_width >= 0");
  if (d.load_kind == LoadKind::current_source && !(d.load_width > 0))
    throw ValidationError("integrator: current-source load needs load_width > 0");
  return d;
}

}  // namespace rxlink
