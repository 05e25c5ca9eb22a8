#pragma once

// Reference design document: technology plus the sizing of every front-end
// block and the per-block energy constants. Same schema family as the
// technology file; every section is required here.
//
//   "energy_per_bit": { "latch", "lna", "integrator" }   J/bit per block
//   "link":           { "tx_swing" }                      V, differential

#include <cstdint>
#include <string>

#include "rxlink/detail/json_fields.hpp"
#include "rxlink/integrator.hpp"
#include "rxlink/latch.hpp"
#include "rxlink/lna.hpp"
#include "rxlink/techmodel.hpp"

namespace rxlink {

struct EnergyModel {
  double latch = 0;       // J/bit
  double lna = 0;         // J/bit
  double integrator = 0;  // J/bit, per stage
};

struct Design {
  std::string name;
  TechnologyParams tech;
  LatchConfig latch;
  LnaConfig lna;
  IntegratorDesign integrator;
  EnergyModel energy;
  double tx_swing = 1.0;
};

inline EnergyModel energy_from_json(const detail::json& s) {
  constexpr std::string_view sec = "energy_per_bit";
  detail::reject_unknown_keys(s, sec, {"latch", "lna", "integrator"});
  EnergyModel e;
  e.latch = detail::require_number(s, "latch", sec);
  e.lna = detail::require_number(s, "lna", sec);
  e.integrator = detail::require_number(s, "integrator", sec);
  if (e.latch < 0 || e.lna < 0 || e.integrator < 0)
    throw ValidationError("energy_per_bit: values must be >= 0");
  return e;
}

inline Design parse_design(const std::string& text, const std::string& origin = "<string>") {
  auto doc = detail::parse_document(text, origin);
  detail::check_schema_version(doc, origin);
  detail::reject_unknown_sections(doc);

  Design d;
  if (doc.contains("name")) d.name = detail::require_string(doc, "name", "");
  d.tech = technology_from_json(detail::require_object(doc, "technology"));
  d.latch = latch_from_json(detail::require_object(doc, "latch"), d.tech);
  d.lna = lna_from_json(detail::require_object(doc, "lna"), d.tech);
  d.integrator = integrator_from_json(detail::require_object(doc, "integrator"));
  d.energy = energy_from_json(detail::require_object(doc, "energy_per_bit"));
  const auto& link = detail::require_object(doc, "link");
  detail::reject_unknown_keys(link, "link", {"tx_swing"});
  d.tx_swing = detail::require_number(link, "tx_swing", "link");
  if (!(d.tx_swing > 0)) throw ValidationError("link: tx_swing must be > 0");
  return d;
}

inline Design load_design(const std::string& path) {
  return parse_design(detail::read_file(path), path);
}

/// FNV-1a 64-bit digest, used to stamp outputs with the input file identity.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rxlink
