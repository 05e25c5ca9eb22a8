// Acceptance checks. `acceptance` runs all eight criteria, `acceptance N`
// runs one. Each prints a single PASS/FAIL line; exit status is nonzero if
// any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rxlink/rxlink.hpp"

using namespace rxlink;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const Design& ref65() {
  static const Design d = load_design(RXLINK_REF65);
  return d;
}

// 1 -------------------------------------------------------------------------
Outcome noise_integral_identity() {
  double worst = 0;
  for (double t_a : {1e-12, 80e-12, 1e-9, 1e-6})
    worst = std::max(worst, std::abs(envelope_noise_integral(t_a) / t_a / 0.5 - 1.0));
  return {worst <= 1e-3, fmt("max |I/t_a / 0.5 - 1| = %.3g (tol 1e-3)", worst)};
}

// 2 -------------------------------------------------------------------------
Outcome latch_noise_forms() {
  numerics::SplitMix64 g = numerics::SplitMix64::stream(numerics::kDefaultSeed, 2);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * g.uniform_open(); };
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    TechnologyParams t;
    t.temperature = uni(250, 400);
    t.gamma = uni(0.67, 2.0);
    const auto c = make_latch(uni(1e-15, 100e-15), uni(1e-15, 100e-15), uni(10e-6, 2e-3),
                              uni(0.05, 0.4), uni(1e-4, 1e-2), uni(0.2, 0.6), uni(0.2, 0.6),
                              uni(0.5, 1.2));
    const double a = input_referred_noise(c, t);
    const double b = input_referred_noise_ktc(c, t);
    worst = std::max(worst, std::abs(a / b - 1.0));
  }
  const auto& d = ref65();
  const double expected = input_referred_noise(d.latch, d.tech);
  const auto mc = numerics::mc_latch_noise(d.latch, d.tech, 100000, numerics::kDefaultSeed);
  const auto again = numerics::mc_latch_noise(d.latch, d.tech, 100000, numerics::kDefaultSeed);
  const double z = std::abs(mc.sample_std - expected) / mc.standard_error;
  const bool deterministic = mc.sample_std == again.sample_std;
  return {worst <= 1e-9 && z <= 3.0 && deterministic,
          fmt("form mismatch %.3g (tol 1e-9); MC %.6g V vs %.6g V, %.2f SE (tol 3); "
              "rerun identical: %s",
              worst, mc.sample_std, expected, z, deterministic ? "yes" : "no")};
}

// 3 -------------------------------------------------------------------------
Outcome integrator_exactness() {
  const double r = 1e4, c = 1e-13;
  TechnologyParams tech;
  double worst1 = 0;
  for (int i = 0; i < 5; ++i) {
    const double gmr = 2.0 * std::pow(25.0, i / 4.0);
    for (int j = 0; j < 5; ++j) {
      const double x = 0.01 * std::pow(1000.0, j / 4.0);
      IntegratorConfig s;
      s.tech = tech;
      s.c_load = c;
      s.bias_current = 2.0 / (tech.lambda * r);
      s.gm = gmr / r;
      const double t = x * r * c;
      const std::vector<numerics::RcStage> chain = {{s.gm, output_resistance(s), c}};
      const double ode = numerics::rc_chain_transient(chain, 1.0, t, t / 1e4).final_outputs[0];
      worst1 = std::max(worst1, std::abs(exact_gain(s, t) / ode - 1.0));
    }
  }
  double worst2 = 0;
  for (int n = 2; n <= 5; ++n) {
    for (double x : {0.05, 0.5, 2.0, 8.0}) {
      IntegratorConfig s;
      s.tech = tech;
      s.c_load = c;
      s.bias_current = 2.0 / (tech.lambda * r);
      s.gm = 6.0 / r;
      const double t = x * r * c;
      const std::vector<numerics::RcStage> chain(n, {s.gm, output_resistance(s), c});
      const double ode = numerics::rc_chain_transient(chain, 1.0, t, t / 1e4).final_outputs.back();
      worst2 = std::max(worst2, std::abs(cascade_gain_exact(CascadeConfig{s, n}, t) / ode - 1.0));
    }
  }
  return {worst1 <= 1e-3 && worst2 <= 2e-3,
          fmt("single stage max dev %.3g (tol 1e-3); cascade N=2..5 max dev %.3g (tol 2e-3)",
              worst1, worst2)};
}

// 4 -------------------------------------------------------------------------
Outcome cascade_optimality() {
  auto g = numerics::SplitMix64::stream(numerics::kDefaultSeed, 4);
  std::vector<double> gains;
  for (int i = 0; i < 95; ++i) gains.push_back(10.0 * g.uniform_open());
  for (double a : {1.0, 2.0, 5.0, 7.0, 10.0}) gains.push_back(a);  // ties
  int bad = 0;
  for (double a : gains) {
    double best = -1;
    std::vector<int> argmax;
    for (int n = 1; n <= 20; ++n) {
      const double v = cascade_gain_ideal(a, 1.0, n);
      if (v > best * (1 + 1e-12)) {
        best = v;
        argmax = {n};
      } else if (std::abs(v / best - 1) <= 1e-12) {
        argmax.push_back(n);
      }
    }
    const int expect = std::max(1, static_cast<int>(std::floor(a)));
    const bool ok = std::find(argmax.begin(), argmax.end(), expect) != argmax.end() &&
                    optimal_cascade_depth(a) == expect;
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%d of %zu gains disagree with floor(A)", bad, gains.size())};
}

// 5 -------------------------------------------------------------------------
Outcome reference_anchors() {
  const auto& d = ref65();
  std::vector<std::string> misses;
  auto within = [&](const char* what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) misses.push_back(fmt("%s=%.4g", what, got));
    return got;
  };
  const double f_hi = max_clock_frequency(d.latch, 0.1);
  const double f_lo = max_clock_frequency(d.latch, 1e-9);
  within("f_max(100mV)", f_hi, 3.3e9, 0.33e9);
  within("f_max(1nV)", f_lo, 0.8e9, 0.08e9);

  const auto wire = BerTarget::wireline(), wless = BerTarget::wireless();
  const auto one = make_chain(d, Architecture::sampler_only);
  const auto two = make_chain(d, Architecture::lna_sampler);
  const auto three = make_chain(d, Architecture::integrator_sampler);
  const double l1 = within("L_I(1e-12)", max_loss(one, d.tx_swing, wire), 48.0, 1.5);
  const double l1w = within("L_I(1e-3)", max_loss(one, d.tx_swing, wless), 55.0, 1.5);
  const double l2 = max_loss(two, d.tx_swing, wire);
  within("L_II-L_I", l2 - l1, 10.0, 1.5);
  const double l3 = within("L_III(1e-12)", max_loss(three, d.tx_swing, wire), 53.0, 1.5);

  auto pj3 = [](double e) {
    const double v = e * 1e12;
    return std::round(v * 1000.0) / 1000.0;
  };
  const double e1 = energy_per_bit(one, 1e9);
  const double e2 = energy_per_bit(two, 1e9);
  const double e3 = energy_per_bit(three, 1e9);
  const double e4 = energy_per_bit(make_chain(d, Architecture::lna_cascade_sampler, 1), 1e9);
  const double e5 = energy_per_bit(make_chain(d, Architecture::lna_cascade_sampler, 2), 1e9);
  const double want[] = {0.022, 0.082, 0.042, 0.102, 0.122};
  const double got[] = {e1, e2, e3, e4, e5};
  for (int i = 0; i < 5; ++i)
    if (pj3(got[i]) != want[i]) misses.push_back(fmt("E[%d]=%.4g pJ", i, got[i] * 1e12));
  const auto& em = d.energy;
  if (e4 != em.latch + em.lna + 1 * em.integrator) misses.push_back("additivity N=1");
  if (e5 != em.latch + em.lna + 2 * em.integrator) misses.push_back("additivity N=2");
  if (pj3(em.latch) + pj3(em.lna) + pj3(em.integrator) != pj3(e4) ||
      std::round((pj3(em.latch) + pj3(em.lna) + 2 * pj3(em.integrator)) * 1000) !=
          std::round(pj3(e5) * 1000))
    misses.push_back("additivity at 3 s.f.");

  std::string detail = fmt(
      "f_max %.4g/%.4g GHz; L_max I %.2f/%.2f dB, II-I %+.2f dB, III %.2f dB; "
      "E %.3f/%.3f/%.3f/%.3f/%.3f pJ/bit",
      f_lo / 1e9, f_hi / 1e9, l1, l1w, l2 - l1, l3, e1 * 1e12, e2 * 1e12, e3 * 1e12, e4 * 1e12,
      e5 * 1e12);
  for (const auto& m : misses) detail += "; miss " + m;
  return {misses.empty(), detail};
}

// 6 -------------------------------------------------------------------------
Outcome fixed_point_properties() {
  const auto& d = ref65();
  std::vector<double> losses;
  for (int i = 0; i < 50; ++i) losses.push_back(20.0 + 50.0 * i / 49.0);
  const std::vector<BerTarget> targets = {BerTarget::wireline(), BerTarget::wireless()};
  const std::vector<FrontEndChain> chains = {
      make_chain(d, Architecture::sampler_only), make_chain(d, Architecture::lna_sampler),
      make_chain(d, Architecture::integrator_sampler),
      make_chain(d, Architecture::lna_cascade_sampler, 1),
      make_chain(d, Architecture::lna_cascade_sampler, 2)};

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepResult> res;
  for (const auto& c : chains) res.push_back(sweep(c, d.tx_swing, losses, targets));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::string> misses;
  double worst_residual = 0;
  for (const auto& r : res) {
    double prev = INFINITY;
    for (const auto& row : r.rows) {
      const auto& s = row.at_max_rate;
      if (!s.feasible) {
        misses.push_back(r.chain_label + " infeasible");
        continue;
      }
      worst_residual = std::max(worst_residual, s.residual);
      if (s.data_rate > prev * (1 + 1e-9)) misses.push_back(r.chain_label + " not monotone");
      prev = s.data_rate;
    }
    if (!(r.max_loss_db[1] > r.max_loss_db[0])) misses.push_back(r.chain_label + " L_max order");
  }
  if (worst_residual > 1e-3) misses.push_back(fmt("residual %.3g", worst_residual));
  auto rate = [&](int c, std::size_t i) { return res[c].rows[i].at_max_rate.data_rate; };
  const double slack = 1 - 1e-6;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (rate(4, i) < rate(3, i) * slack) misses.push_back(fmt("IV(2)<IV(1) at %.1f dB", losses[i]));
    if (rate(3, i) < rate(1, i) * slack) misses.push_back(fmt("IV(1)<II at %.1f dB", losses[i]));
    if (rate(2, i) < rate(0, i) * slack) misses.push_back(fmt("III<I at %.1f dB", losses[i]));
  }
  if (secs >= 10.0) misses.push_back(fmt("runtime %.1f s", secs));
  std::string detail = fmt("max residual %.3g (tol 1e-3); 5 chains x 50 losses in %.2f s", worst_residual, secs);
  for (std::size_t k = 0; k < misses.size() && k < 5; ++k) detail += "; " + misses[k];
  return {misses.empty(), detail};
}

// 7 -------------------------------------------------------------------------
Outcome architecture_three_rate() {
  const auto& d = ref65();
  const auto c = make_chain(d, Architecture::integrator_sampler);
  const auto s = max_data_rate_for_ber(c, ChannelSpec{60.0, d.tx_swing}, BerTarget::wireless());
  const bool ok = s.feasible && s.data_rate >= 15e6 && s.data_rate <= 60e6;
  return {ok, fmt("BER<=1e-3 rate at 60 dB = %.4g bit/s (BER %.3g, noise %.4g V); "
                  "required [15, 60] Mbps",
                  s.data_rate, s.ber, s.rx_input_noise_rms)};
}

// 8 -------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / ("rxlink_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> manifests = {
      "compare --loss-db 20:70:11 --format csv",
      "compare --loss-db 20:70:11 --format json",
      "arch --arch IV --depth 2 --loss-db 20:70:11",
      "latch --vin-v 1e-9:0.1:21 --mc-trials 2000",
      "lna --bias-a 1e-9:1e-2:21 --format json",
      "integrator --rate-hz 1e6:4e9:21",
      "cascade --rate-hz 1e6:4e9:11 --depth 4"};
  int differing = 0, failed = 0;
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / fmt("m%zu_run%d.out", i, run);
      const std::string cmd = std::string("\"") + RXLINK_CLI + "\" " + manifests[i] +
                              " --tech \"" + RXLINK_REF65 + "\" --out \"" + out.string() + "\"";
      const int raw = std::system(cmd.c_str());
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) ++failed;
      outputs[run] = slurp(out);
      const auto side = dir / fmt("m%zu_run%d_lmax.out", i, run);
      if (fs::exists(side)) outputs[run] += slurp(side);
    }
    if (outputs[0] != outputs[1] || outputs[0].empty()) ++differing;
  }
  fs::remove_all(dir);
  return {differing == 0 && failed == 0,
          fmt("%zu manifests run twice: %d differing, %d failed runs", manifests.size(),
              differing, failed)};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "noise-integral identity", 5, noise_integral_identity},
      {2, "latch noise dual form and Monte Carlo", 60, latch_noise_forms},
      {3, "integrator exactness vs transient", 30, integrator_exactness},
      {4, "cascade optimality", 1, cascade_optimality},
      {5, "reference design anchors", 0, reference_anchors},
      {6, "fixed-point and ordering properties", 0, fixed_point_properties},
      {7, "integrator architecture rate at 60 dB", 0, architecture_three_rate},
      {8, "CLI determinism", 0, determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += fmt("; over time budget %.0f s", c.budget_s);
    }
    std::printf("[%s] criterion %d: %s -- %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id,
                c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
