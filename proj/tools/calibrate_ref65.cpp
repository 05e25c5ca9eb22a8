// Solves the free parameters of the shipped reference design so the model
// chain lands on its published anchor points, then writes data/ref65.json.
//
//   latch:      f_max = 3.3 GHz at 100 mV, 0.8 GHz at 1 nV; sampler-only
//               L_max = 48 dB at BER 1e-12
//   lna:        self-loading chosen for +10 dB of L_max over sampler-only
//   integrator: C_L chosen for L_max = 53 dB with integrator + sampler;
//               width puts the weak/strong crossover near 1.8 GHz
//
// Usage: calibrate_ref65 [out.json]

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "rxlink/rxlink.hpp"

using namespace rxlink;

namespace {

double round_sig(double v, int digits = 6) {
  if (v == 0) return 0;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

// Bisection on a scalar knob for a monotone objective crossing zero.
double solve(std::function<double(double)> g, double lo, double hi, double tol) {
  double glo = g(lo);
  for (int i = 0; i < 200 && std::abs(hi - lo) > tol * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

nlohmann::ordered_json document(const TechnologyParams& t, double c_pq, double c_xy, double i_o,
                                double vov, double gm_latch, double c_self, double c_ext,
                                double int_width, double int_c) {
  nlohmann::ordered_json d;
  d["schema_version"] = kSchemaVersion;
  d["name"] = "ref65";
  d["description"] =
      "Calibrated 65 nm-class reference design (1.0 V). Values are fits to published "
      "anchors, not PDK data.";
  d["technology"] = {{"supply_voltage", t.supply_voltage},
                     {"temperature", t.temperature},
                     {"gamma", t.gamma},
                     {"lambda", t.lambda},
                     {"beta_per_width", t.beta_per_width},
                     {"vth_n", t.vth_n},
                     {"vth_p", t.vth_p},
                     {"subthreshold_slope_factor", t.subthreshold_slope_factor}};
  d["latch"] = {{"c_pq", round_sig(c_pq)},         {"c_xy", c_xy},
                {"tail_current", round_sig(i_o)},  {"vov_input", vov},
                {"gm_latch", round_sig(gm_latch)}, {"delta_v_latch", t.supply_voltage}};
  d["lna"] = {{"width_n", 24.0},
              {"width_p", 48.0},
              {"r_bias", 10e6},
              {"c_external", c_ext},
              {"c_self_per_width", round_sig(c_self)},
              {"max_bias_current", 50e-3}};
  d["integrator"] = {{"width", round_sig(int_width, 4)},
                     {"c_load", round_sig(int_c)},
                     {"load_kind", "precharge"}};
  d["energy_per_bit"] = {{"latch", 0.022e-12}, {"lna", 0.060e-12}, {"integrator", 0.020e-12}};
  d["link"] = {{"tx_swing", 1.0}};
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "data/ref65.json";

  TechnologyParams t;
  t.supply_voltage = 1.0;
  t.temperature = 300.0;
  t.gamma = 1.0;
  t.subthreshold_slope_factor = 1.5;
  t.vth_n = 0.4;
  t.vth_p = 0.4;
  t.beta_per_width = 2e-3;
  // Saturated weak-inversion integrator gain 2(1 - e^{-0.4 lambda VDD})/(lambda n Vt) = 6.8.
  const double nvt = t.subthreshold_slope_factor * t.thermal_voltage();
  t.lambda = solve(
      [&](double l) { return 2.0 * -std::expm1(-0.4 * l * t.supply_voltage) / (l * nvt) - 6.8; },
      1.0, 30.0, 1e-12);
  t.lambda = round_sig(t.lambda, 4);

  // Latch timing: with K = (Vov/2)/Vth56 * dV_latch the regeneration time is
  // tau*ln(K/v), so the two endpoints fix tau and t_a + t_o.
  const double vov = 0.2, c_xy = 20e-15;
  const double k = 0.5 * vov / t.vth_p * t.supply_voltage;
  const double p_hi = 1.0 / (6.0 * 3.3e9), p_lo = 1.0 / (6.0 * 0.8e9);
  const double tau = (p_lo - p_hi) / (std::log(k / 1e-9) - std::log(k / 0.1));
  const double sense = p_hi - tau * std::log(k / 0.1);
  const double gm_latch = c_xy / tau;
  // Noise: gm*t_a = 4 C_pq Vth34 / Vov; 48 dB at BER 1e-12 fixes sigma.
  const double sigma = 1.0 / (2.0 * q_inverse(1e-12) * std::pow(10.0, 48.0 / 20.0));
  const double c_pq = t.boltzmann_kT() * t.gamma * vov / (t.vth_n * sigma * sigma);
  const double i_o = 2.0 * (c_pq * t.vth_n + c_xy * t.vth_p) / sense;

  const double c_ext = 10e-15;
  const double f_cross = 1.8e9;
  auto integrator_width = [&](double c_load) {
    return 1.6 * c_load * f_cross / (2.0 * t.beta_per_width * nvt * nvt);
  };

  auto design_for = [&](double c_self, double int_c) {
    return parse_design(
        document(t, c_pq, c_xy, i_o, vov, gm_latch, c_self, c_ext, integrator_width(int_c), int_c)
            .dump());
  };
  const auto wire = BerTarget::wireline();
  auto lmax = [&](const Design& d, Architecture a) {
    return max_loss(make_chain(d, a), d.tx_swing, wire, {}, 1e-4);
  };

  const double l_one = lmax(design_for(0.5e-15, 45e-15), Architecture::sampler_only);
  const double c_self = solve(
      [&](double cs) {
        return lmax(design_for(cs, 45e-15), Architecture::lna_sampler) - l_one - 10.0;
      },
      0.0, 5e-15, 1e-6);
  const double int_c = solve(
      [&](double c) {
        return lmax(design_for(c_self, c), Architecture::integrator_sampler) - 53.0;
      },
      5e-15, 500e-15, 1e-6);

  const auto doc = document(t, c_pq, c_xy, i_o, vov, gm_latch, c_self, c_ext,
                            integrator_width(int_c), int_c);
  std::ofstream(out) << doc.dump(2) << "\n";

  const auto d = parse_design(doc.dump());
  std::printf("wrote %s\n", out.c_str());
  std::printf("lambda %.6g  tau %.6g s  t_a+t_o %.6g s\n", t.lambda, tau, sense);
  std::printf("f_max(100 mV) %.6g Hz  f_max(1 nV) %.6g Hz\n",
              max_clock_frequency(d.latch, 0.1), max_clock_frequency(d.latch, 1e-9));
  for (auto a : {Architecture::sampler_only, Architecture::lna_sampler,
                 Architecture::integrator_sampler, Architecture::lna_cascade_sampler}) {
    const auto c = make_chain(d, a, 1);
    std::printf("%-4s L_max(1e-12) %.4f dB  L_max(1e-3) %.4f dB\n", c.label().c_str(),
                max_loss(c, 1.0, wire), max_loss(c, 1.0, BerTarget::wireless()));
  }
  return 0;
}
