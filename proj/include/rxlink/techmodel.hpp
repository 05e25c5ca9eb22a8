#pragma once

// Device small-signal parameters from a technology description.
//
// Transconductance follows a two-regime law: sqrt(2*beta*I) above threshold
// and I/(n*Vt) in weak inversion, with the effective value taken as the
// smaller of the two. The minimum is continuous at the crossover current
// I_c = 2*beta*(n*Vt)^2 and monotone in I.

#include <cmath>
#include <limits>
#include <string>

#include "rxlink/constants.hpp"
#include "rxlink/detail/json_fields.hpp"
#include "rxlink/errors.hpp"

namespace rxlink {

inline constexpr int kSchemaVersion = 1;

struct TechnologyParams {
  double supply_voltage = 1.0;         // V
  double temperature = 300.0;          // K
  double gamma = 1.0;                  // thermal-noise factor
  double lambda = 0.1;                 // 1/V
  double beta_per_width = 1e-3;        // A/V^2 per um of width
  double vth_n = 0.4;                  // V
  double vth_p = 0.4;                  // V (magnitude)
  double subthreshold_slope_factor = 1.5;

  double boltzmann_kT() const noexcept { return constants::boltzmann * temperature; }

  /// kT/q in volts.
  double thermal_voltage() const noexcept {
    return boltzmann_kT() / constants::elementary_charge;
  }

  bool operator==(const TechnologyParams&) const = default;
};

inline void validate(const TechnologyParams& t) {
  if (!(t.supply_voltage > 0)) throw ValidationError("supply_voltage must be > 0");
  if (!(t.temperature > 0)) throw ValidationError("temperature must be > 0");
  if (!(t.gamma > 0)) throw ValidationError("gamma must be > 0");
  if (!(t.lambda > 0)) throw ValidationError("lambda must be > 0");
  if (!(t.beta_per_width > 0)) throw ValidationError("beta_per_width must be > 0");
  if (!(t.vth_n > 0)) throw ValidationError("vth_n must be > 0");
  if (!(t.vth_p > 0)) throw ValidationError("vth_p must be > 0");
  if (!(t.subthreshold_slope_factor >= 1))
    throw ValidationError("subthreshold_slope_factor must be >= 1");
}

enum class Region { strong_inversion, weak_inversion, depletion };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::strong_inversion: return "strong-inversion";
    case Region::weak_inversion: return "weak-inversion";
    case Region::depletion: return "depletion";
  }
  return "?";
}

struct DevicePoint {
  double width = 0;         // um
  double bias_current = 0;  // A
  double gm = 0;            // S
  double r_out = 0;         // ohm
  double overdrive = 0;     // V, effective 2I/gm
  Region region = Region::depletion;
};

/// Crossover current of the strong/weak transconductance laws for a device
/// of the given width.
inline double crossover_current(const TechnologyParams& tech, double width) {
  const double nvt = tech.subthreshold_slope_factor * tech.thermal_voltage();
  return 2.0 * tech.beta_per_width * width * nvt * nvt;
}

/// Small-signal point of a device at `bias_current`. r_out follows the
/// pair-loaded convention 2/(lambda*I) used throughout the front-end models.
inline DevicePoint device_point(const TechnologyParams& tech, double width,
                                double bias_current) {
  if (!(width > 0)) throw DomainError("device_point: width must be > 0");
  if (!(bias_current >= 0)) throw DomainError("device_point: bias_current must be >= 0");

  DevicePoint p;
  p.width = width;
  p.bias_current = bias_current;
  if (bias_current == 0) {
    p.gm = 0;
    p.r_out = std::numeric_limits<double>::infinity();
    p.overdrive = 0;
    p.region = Region::depletion;
    return p;
  }

  const double beta = tech.beta_per_width * width;
  const double nvt = tech.subthreshold_slope_factor * tech.thermal_voltage();
  const double gm_strong = std::sqrt(2.0 * beta * bias_current);
  const double gm_weak = bias_current / nvt;
  if (gm_strong <= gm_weak) {
    p.gm = gm_strong;
    p.region = Region::strong_inversion;
  } else {
    p.gm = gm_weak;
    p.region = Region::weak_inversion;
  }
  p.r_out = 2.0 / (tech.lambda * bias_current);
  p.overdrive = 2.0 * bias_current / p.gm;
  return p;
}

// ---------------------------------------------------------------------------
// Technology file I/O
//
// {
//   "schema_version": 1,
//   "technology": { "supply_voltage": ..., "temperature": ..., "gamma": ...,
//                   "lambda": ..., "beta_per_width": ..., "vth_n": ...,
//                   "vth_p": ..., "subthreshold_slope_factor": ... },
//   ... other sections (latch, lna, integrator, energy_per_bit, link)
// }
// ---------------------------------------------------------------------------

namespace detail {

inline void check_schema_version(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ParseError(origin, "top level must be an object");
  auto it = doc.find("schema_version");
  if (it == doc.end()) throw ParseError("schema_version", "missing field");
  if (!it->is_number_integer()) throw ParseError("schema_version", "expected an integer");
  if (it->get<int>() != kSchemaVersion)
    throw ParseError("schema_version", "unsupported version " + it->dump());
}

inline void reject_unknown_sections(const json& doc) {
  reject_unknown_keys(doc, "",
                      {"schema_version", "name", "description", "technology", "latch",
                       "lna", "integrator", "energy_per_bit", "link"});
}

}  // namespace detail

inline TechnologyParams technology_from_json(const detail::json& section) {
  constexpr std::string_view s = "technology";
  detail::reject_unknown_keys(section, s,
                              {"supply_voltage", "temperature", "gamma", "lambda",
                               "beta_per_width", "vth_n", "vth_p",
                               "subthreshold_slope_factor"});
  TechnologyParams t;
  t.supply_voltage = detail::require_number(section, "supply_voltage", s);
  t.temperature = detail::require_number(section, "temperature", s);
  t.gamma = detail::require_number(section, "gamma", s);
  t.lambda = detail::require_number(section, "lambda", s);
  t.beta_per_width = detail::require_number(section, "beta_per_width", s);
  t.vth_n = detail::require_number(section, "vth_n", s);
  t.vth_p = detail::require_number(section, "vth_p", s);
  t.subthreshold_slope_factor = detail::require_number(section, "subthreshold_slope_factor", s);
  validate(t);
  return t;
}

inline detail::json to_json(const TechnologyParams& t) {
  return detail::json{{"supply_voltage", t.supply_voltage},
                      {"temperature", t.temperature},
                      {"gamma", t.gamma},
                      {"lambda", t.lambda},
                      {"beta_per_width", t.beta_per_width},
                      {"vth_n", t.vth_n},
                      {"vth_p", t.vth_p},
                      {"subthreshold_slope_factor", t.subthreshold_slope_factor}};
}

inline TechnologyParams parse_technology(const std::string& text,
                                         const std::string& origin = "<string>") {
  auto doc = detail::parse_document(text, origin);
  detail::check_schema_version(doc, origin);
  detail::reject_unknown_sections(doc);
  return technology_from_json(detail::require_object(doc, "technology"));
}

inline TechnologyParams load_technology(const std::string& path) {
  return parse_technology(detail::read_file(path), path);
}

/// Standalone technology document (schema_version + technology section).
inline std::string serialize_technology(const TechnologyParams& t) {
  detail::json doc{{"schema_version", kSchemaVersion}, {"technology", to_json(t)}};
  return doc.dump(2) + "\n";
}

}  // namespace rxlink
