#pragma once

// Self-biased inverter LNA: mid-band gain (gm_n + gm_p)(r_on || r_op || R_B),
// single-pole bandwidth 1/(2 pi r_out C_L), thermal input noise over the
// amplifier bandwidth.

#include <cmath>
#include <string>

#include "rxlink/constants.hpp"
#include "rxlink/detail/json_fields.hpp"
#include "rxlink/errors.hpp"
#include "rxlink/techmodel.hpp"

namespace rxlink {

struct LnaConfig {
  double width_n = 24;       // um
  double width_p = 48;       // um
  double r_bias = 10e6;      // ohm, feedback resistor R_B
  double c_load = 10e-15;    // F, external load plus self-loading
  double max_bias_current = 10e-3;  // A, search ceiling for bias sizing
  TechnologyParams tech;
};

inline void validate(const LnaConfig& c) {
  if (!(c.width_n > 0) || !(c.width_p > 0)) throw ValidationError("lna: widths must be > 0");
  if (!(c.r_bias > 0)) throw ValidationError("lna: r_bias must be > 0");
  if (!(c.c_load > 0)) throw ValidationError("lna: c_load must be > 0");
  if (!(c.max_bias_current > 0)) throw ValidationError("lna: max_bias_current must be > 0");
  validate(c.tech);
}

struct LnaOperatingPoint {
  double bias_current = 0;  // A
  double gm_total = 0;      // S
  double r_out = 0;         // ohm
  double gain = 0;
  double bandwidth = 0;     // Hz
  double power = 0;         // W
  Region region = Region::depletion;
};

inline double parallel(double a, double b) {
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  return a * b / (a + b);
}

inline LnaOperatingPoint operating_point(const LnaConfig& c, double bias_current) {
  if (!(bias_current > 0)) throw DomainError("lna operating_point: bias_current must be > 0");
  const auto n = device_point(c.tech, c.width_n, bias_current);
  const auto p = device_point(c.tech, c.width_p, bias_current);

  LnaOperatingPoint op;
  op.bias_current = bias_current;
  op.gm_total = n.gm + p.gm;
  const double r_devices = parallel(n.r_out, p.r_out);
  op.r_out = parallel(r_devices, c.r_bias);
  op.gain = op.gm_total * op.r_out;
  op.bandwidth = 1.0 / (2.0 * constants::pi * op.r_out * c.c_load);
  op.power = bias_current * c.tech.supply_voltage;
  // Once the device resistance reaches R_B the feedback resistor sets r_out
  // and gain starts to collapse with current.
  if (r_devices >= c.r_bias)
    op.region = Region::depletion;
  else if (n.region == Region::strong_inversion || p.region == Region::strong_inversion)
    op.region = Region::strong_inversion;
  else
    op.region = Region::weak_inversion;
  return op;
}

/// Smallest current whose bandwidth reaches `target_bw`, by bisection on
/// the monotone bandwidth(I) map to `rel_tol`. Below `floor_current` the
/// amplifier is treated as off, so a target met by R_B alone returns the
/// floor.
inline double min_bias_for_bandwidth(const LnaConfig& c, double target_bw, double rel_tol = 1e-6,
                                     double floor_current = 1e-12) {
  if (!(target_bw > 0)) throw DomainError("min_bias_for_bandwidth: target_bw must be > 0");
  const double ceiling_bw = operating_point(c, c.max_bias_current).bandwidth;
  if (ceiling_bw < target_bw)
    throw CapacityError("min_bias_for_bandwidth: target bandwidth exceeds what the bias ceiling "
                        "allows",
                        ceiling_bw);
  if (operating_point(c, floor_current).bandwidth >= target_bw) return floor_current;

  double lo = floor_current;        // bandwidth(lo) < target
  double hi = c.max_bias_current;   // bandwidth(hi) >= target
  // Geometric bisection: the bracket spans many decades.
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    if (operating_point(c, mid).bandwidth >= target_bw)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Operating point at the minimum bias for `bandwidth`.
inline LnaOperatingPoint operating_point_for_bandwidth(const LnaConfig& c, double bandwidth) {
  return operating_point(c, min_bias_for_bandwidth(c, bandwidth));
}

/// Input-referred rms noise over `bandwidth`: sqrt(4kT*gamma*B/gm_total).
inline double input_noise(const LnaOperatingPoint& op, double bandwidth,
                          const TechnologyParams& tech) {
  if (!(bandwidth > 0)) throw DomainError("lna input_noise: bandwidth must be > 0");
  return std::sqrt(4.0 * tech.boltzmann_kT() * tech.gamma / op.gm_total * bandwidth);
}

// "lna": { "width_n", "width_p", "r_bias", "c_external", "c_self_per_width",
//          "max_bias_current" }  -- c_load = c_external + c_self_per_width*(Wn+Wp)
inline LnaConfig lna_from_json(const detail::json& s, const TechnologyParams& tech) {
  constexpr std::string_view sec = "lna";
  detail::reject_unknown_keys(s, sec,
                              {"width_n", "width_p", "r_bias", "c_external", "c_self_per_width",
                               "max_bias_current"});
  LnaConfig c;
  c.tech = tech;
  c.width_n = detail::require_number(s, "width_n", sec);
  c.width_p = detail::require_number(s, "width_p", sec);
  c.r_bias = detail::optional_number(s, "r_bias", sec).value_or(10e6);
  const double c_ext = detail::require_number(s, "c_external", sec);
  const double c_self = detail::optional_number(s, "c_self_per_width", sec).value_or(0.0);
  if (c_ext < 0 || c_self < 0) throw ValidationError("lna: capacitances must be >= 0");
  c.c_load = c_ext + c_self * (c.width_n + c.width_p);
  c.max_bias_current = detail::optional_number(s, "max_bias_current", sec).value_or(10e-3);
  validate(c);
  return c;
}

}  // namespace rxlink
