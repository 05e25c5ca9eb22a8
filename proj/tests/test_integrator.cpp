#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rxlink/design.hpp"
#include "rxlink/integrator.hpp"
#include "rxlink/numerics/ode.hpp"

using namespace rxlink;

namespace {

IntegratorConfig stage(double gm, double c, double ib, LoadKind k = LoadKind::precharge) {
  IntegratorConfig s;
  s.tech.lambda = 5.0;
  s.gm = gm;
  s.c_load = c;
  s.bias_current = ib;
  s.load_kind = k;
  if (k == LoadKind::current_source) s.gm_load = 0.5 * gm;
  return s;
}

}  // namespace

TEST(Integrator, RegularizedGammaReference) {
  // mpmath.gammainc(n, 0, x, regularized=True)
  EXPECT_NEAR(regularized_gamma_p(2, 0.5), 0.0902040104310499, 1e-15);
  EXPECT_NEAR(regularized_gamma_p(5, 3.0), 0.184736755476228, 1e-14);
  EXPECT_NEAR(regularized_gamma_p(3, 1e-3) / 1.66541716652781e-10, 1.0, 1e-12);
  EXPECT_EQ(regularized_gamma_p(1, 0.0), 0.0);
  EXPECT_EQ(regularized_gamma_p(4, INFINITY), 1.0);
  EXPECT_THROW(regularized_gamma_p(0, 1.0), DomainError);
}

TEST(Integrator, OutputResistanceByLoad) {
  const auto p = stage(1e-3, 10e-15, 100e-6);
  const auto c = stage(1e-3, 10e-15, 100e-6, LoadKind::current_source);
  EXPECT_DOUBLE_EQ(output_resistance(p), 2.0 / (5.0 * 100e-6));
  EXPECT_DOUBLE_EQ(output_resistance(c), 0.5 * output_resistance(p));
}

TEST(Integrator, IdealGainIsGmTOverC) {
  const auto s = stage(1e-3, 10e-15, 100e-6);
  EXPECT_DOUBLE_EQ(ideal_gain(s, 50e-12), 1e-3 * 50e-12 / 10e-15);
  EXPECT_THROW(ideal_gain(s, 0.0), DomainError);
}

TEST(Integrator, ExactGainApproachesIdealForShortWindows) {
  const auto s = stage(1e-3, 10e-15, 1e-6);
  const double t = 1e-13;
  const double x = t / (output_resistance(s) * s.c_load);
  ASSERT_LT(x, 1e-3);
  EXPECT_NEAR(exact_gain(s, t) / ideal_gain(s, t), 1.0 - 0.5 * x, x * x);
}

TEST(Integrator, ExactGainMatchesTransient) {
  const auto s = stage(2e-4, 20e-15, 50e-6);
  const double r = output_resistance(s);
  for (double x : {0.05, 1.0, 4.0}) {
    const double t = x * r * s.c_load;
    const std::vector<numerics::RcStage> chain = {{s.gm, r, s.c_load}};
    const auto tr = numerics::rc_chain_transient(chain, 1.0, t, t / 1e4);
    EXPECT_NEAR(tr.final_outputs[0] / exact_gain(s, t), 1.0, 1e-6) << "x=" << x;
  }
}

TEST(Integrator, MaxBiasCurrentKeepsCommonMode) {
  // 0.4 VDD of droop on each output at I_B/2 into C_L over T.
  const double ib = max_bias_current(10e-15, 100e-12, 1.0);
  EXPECT_NEAR(0.5 * ib * 100e-12 / 10e-15, 0.4, 1e-15);
}

TEST(Integrator, MaxGainPrechargeMatchesExactAtMaxBias) {
  auto s = stage(0, 30e-15, 0);
  s.tech.supply_voltage = 1.0;
  const double t = 200e-12;
  s.bias_current = max_bias_current(s.c_load, t, 1.0);
  s.gm = 1e-3;
  EXPECT_NEAR(max_gain_precharge(s) / exact_gain(s, t), 1.0, 1e-12);
  EXPECT_THROW(max_gain_precharge(stage(1e-3, 1e-14, 1e-4, LoadKind::current_source)),
               DomainError);
}

TEST(Integrator, CurrentSourceLoadAddsNoise) {
  const auto p = stage(1e-3, 10e-15, 100e-6);
  const auto c = stage(1e-3, 10e-15, 100e-6, LoadKind::current_source);
  EXPECT_NEAR(input_noise(c, 1e-10, c.tech) / input_noise(p, 1e-10, p.tech), std::sqrt(1.5),
              1e-12);
  auto bad = c;
  bad.gm_load.reset();
  EXPECT_THROW(validate(bad), ValidationError);
}

TEST(Integrator, SingleStageCascadeIsBitIdentical) {
  const auto s = stage(1e-3, 10e-15, 100e-6);
  for (double t : {1e-12, 1e-10, 1e-8})
    EXPECT_EQ(cascade_gain_exact(CascadeConfig{s, 1}, t), exact_gain(s, t));
}

TEST(Integrator, TwoStageClosedForm) {
  const auto s = stage(1e-3, 10e-15, 100e-6);
  const double r = output_resistance(s);
  const double t = 0.5 * r * s.c_load;
  const double a = s.gm * r;
  const double expected = a * a * (1.0 - 1.5 * std::exp(-0.5));
  EXPECT_NEAR(cascade_gain_exact(CascadeConfig{s, 2}, t) / expected, 1.0, 1e-12);
}

TEST(Integrator, IdealCascadeGain) {
  EXPECT_DOUBLE_EQ(cascade_gain_ideal(1e11, 5e-11, 1), 5.0);
  EXPECT_DOUBLE_EQ(cascade_gain_ideal(1e11, 5e-11, 2), 12.5);
  EXPECT_NEAR(cascade_gain_ideal(1e11, 5e-11, 5), std::pow(5.0, 5) / 120.0, 1e-12);
  EXPECT_THROW(cascade_gain_ideal(1e11, 5e-11, 0), DomainError);
}

TEST(Integrator, OptimalDepth) {
  EXPECT_EQ(optimal_cascade_depth(0.3), 1);
  EXPECT_EQ(optimal_cascade_depth(4.0), 4);
  EXPECT_EQ(optimal_cascade_depth(6.8), 6);
  EXPECT_THROW(optimal_cascade_depth(0.0), DomainError);
}

TEST(Integrator, ReferenceGainRangeAcrossRates) {
  const auto d = load_design(RXLINK_REF65);
  for (double f = 1e6; f <= 3.9e9; f *= 1.25) {
    const auto c = integrator_at_clock(d.integrator, d.tech, f);
    const double g = exact_gain(c, integration_time(f));
    EXPECT_GE(g, 4.5) << f;
    EXPECT_LE(g, 7.0) << f;
  }
}

TEST(Integrator, JsonParsing) {
  const auto d = integrator_from_json(
      detail::json::parse(R"({"width":10,"c_load":2e-14,"load_kind":"current-source",
                              "load_width":5})"));
  EXPECT_EQ(d.load_kind, LoadKind::current_source);
  EXPECT_THROW(integrator_from_json(
                   detail::json::parse(R"({"width":10,"c_load":2e-14,"load_kind":"resistor"})")),
               ParseError);
  EXPECT_THROW(integrator_from_json(
                   detail::json::parse(R"({"width":10,"c_load":2e-14,"load_kind":"current-source"})")),
               ValidationError);
}
