#pragma once

// Transient of a chain of transconductor/RC stages driven by a voltage step:
//
//   C_k dv_k/dt = gm_k v_{k-1} - v_k / R_k,   v_0 = v_in,   v_k(0) = 0
//
// integrated with classical fixed-step RK4. R_k may be +infinity (ideal
// integrator).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rxlink/errors.hpp"

namespace rxlink::numerics {

struct RcStage {
  double gm;  // S
  double r;   // ohm, may be +inf
  double c;   // F
};

struct TransientResult {
  std::vector<double> time_grid;
  // node_voltages[k][i]: output of stage k at time_grid[i]
  std::vector<std::vector<double>> node_voltages;
  std::vector<double> final_outputs;
};

inline TransientResult rc_chain_transient(std::span<const RcStage> stages, double v_in,
                                          double t_end, double dt) {
  if (stages.empty()) throw DomainError("rc_chain_transient: no stages");
  if (!(t_end > 0) || !(dt > 0)) throw DomainError("rc_chain_transient: t_end and dt must be > 0");
  if (dt > t_end / 1000.0)
    throw DomainError("rc_chain_transient: dt coarser than t_end/1000");
  for (const auto& s : stages) {
    if (!(s.gm > 0) || !(s.r > 0) || !(s.c > 0))
      throw DomainError("rc_chain_transient: stage parameters must be > 0");
  }

  const std::size_t n = stages.size();
  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);

  auto deriv = [&](std::span<const double> v, std::span<double> out) {
    double upstream = v_in;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& s = stages[k];
      out[k] = (s.gm * upstream - v[k] / s.r) / s.c;
      upstream = v[k];
    }
  };

  TransientResult res;
  res.time_grid.resize(steps + 1);
  res.node_voltages.assign(n, std::vector<double>(steps + 1, 0.0));

  std::vector<double> v(n, 0.0), k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t i = 0; i < steps; ++i) {
    deriv(v, k1);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + 0.5 * h * k1[k];
    deriv(tmp, k2);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + 0.5 * h * k2[k];
    deriv(tmp, k3);
    for (std::size_t k = 0; k < n; ++k) tmp[k] = v[k] + h * k3[k];
    deriv(tmp, k4);
    for (std::size_t k = 0; k < n; ++k)
      v[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    res.time_grid[i + 1] = static_cast<double>(i + 1) * h;
    for (std::size_t k = 0; k < n; ++k) res.node_voltages[k][i + 1] = v[k];
  }
  res.final_outputs = v;
  return res;
}

}  // namespace rxlink::numerics
