#pragma once

#include <numbers>

namespace rxlink::constants {

// CODATA 2018 exact values.
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double elementary_charge = 1.602176634e-19;  // C

inline constexpr double pi = std::numbers::pi;

}  // namespace rxlink::constants
