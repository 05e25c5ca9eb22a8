#pragma once

// Receiver architectures built from the front-end blocks, the maximum
// data-rate fixed point against channel loss, BER limits and energy per bit.
//
// A rate f is achievable at loss L when the latch can clock at f with the
// swing the front end delivers at that rate:
//
//   g(A_FE(f) * v_RX(L)) >= f,   g = latch max_clock_frequency
//
// A_FE is not monotone in f (integrator gain grows as the clock slows), so
// the solver scans a log grid for the largest crossing and bisects it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rxlink/design.hpp"
#include "rxlink/errors.hpp"
#include "rxlink/integrator.hpp"
#include "rxlink/latch.hpp"
#include "rxlink/linkbudget.hpp"
#include "rxlink/lna.hpp"

namespace rxlink {

enum class Architecture {
  sampler_only,         // I
  lna_sampler,          // II
  integrator_sampler,   // III
  lna_cascade_sampler,  // IV
};

inline const char* roman(Architecture a) {
  switch (a) {
    case Architecture::sampler_only: return "I";
    case Architecture::lna_sampler: return "II";
    case Architecture::integrator_sampler: return "III";
    case Architecture::lna_cascade_sampler: return "IV";
  }
  return "?";
}

inline std::optional<Architecture> parse_architecture(std::string_view s) {
  if (s == "I" || s == "1") return Architecture::sampler_only;
  if (s == "II" || s == "2") return Architecture::lna_sampler;
  if (s == "III" || s == "3") return Architecture::integrator_sampler;
  if (s == "IV" || s == "4") return Architecture::lna_cascade_sampler;
  return std::nullopt;
}

struct FrontEndChain {
  Architecture architecture = Architecture::sampler_only;
  int cascade_depth = 1;  // integrator count for IV; III always 1
  TechnologyParams tech;
  LatchConfig latch;
  LnaConfig lna;
  IntegratorDesign integrator;
  EnergyModel energy;

  bool has_lna() const {
    return architecture == Architecture::lna_sampler ||
           architecture == Architecture::lna_cascade_sampler;
  }
  int integrator_count() const {
    switch (architecture) {
      case Architecture::integrator_sampler: return 1;
      case Architecture::lna_cascade_sampler: return cascade_depth;
      default: return 0;
    }
  }
  std::string label() const {
    std::string s = roman(architecture);
    if (architecture == Architecture::lna_cascade_sampler)
      s += "(" + std::to_string(cascade_depth) + ")";
    return s;
  }
};

inline FrontEndChain make_chain(const Design& d, Architecture arch, int cascade_depth = 1) {
  if (arch == Architecture::lna_cascade_sampler && cascade_depth < 1)
    throw ValidationError("architecture IV needs cascade depth >= 1");
  FrontEndChain c;
  c.architecture = arch;
  c.cascade_depth = arch == Architecture::lna_cascade_sampler ? cascade_depth : 1;
  c.tech = d.tech;
  c.latch = d.latch;
  c.lna = d.lna;
  c.integrator = d.integrator;
  c.energy = d.energy;
  return c;
}

/// Gain, noise and bias of every block at one data rate.
struct FrontEndState {
  double data_rate = 0;
  double gain = 1;         // A_FE
  double noise_rms = 0;    // input-referred, whole chain
  double lna_gain = 0;
  double lna_bias = 0;     // A
  double lna_noise = 0;    // V rms
  double integrator_gain = 0;  // whole cascade
  double integrator_bias = 0;  // A per stage
  double integrator_noise = 0; // V rms, one stage
  double latch_noise = 0;      // V rms
};

/// Evaluates the chain at `data_rate`. LNA bandwidth equals the rate;
/// integrators run at I_B,max with T_int = 1/(2 f). Noise combines stage
/// input-referred contributions divided by the gain ahead of each stage.
inline FrontEndState evaluate_front_end(const FrontEndChain& c, double data_rate) {
  if (!(data_rate > 0)) throw DomainError("front end: data_rate must be > 0");
  FrontEndState s;
  s.data_rate = data_rate;
  s.latch_noise = input_referred_noise(c.latch, c.tech);

  double upstream_gain = 1.0;
  double noise2 = 0.0;
  if (c.has_lna()) {
    const auto op = operating_point_for_bandwidth(c.lna, data_rate);
    s.lna_gain = op.gain;
    s.lna_bias = op.bias_current;
    s.lna_noise = input_noise(op, data_rate, c.tech);
    noise2 += s.lna_noise * s.lna_noise;
    upstream_gain *= op.gain;
  }
  const int n_int = c.integrator_count();
  if (n_int > 0) {
    const double t_int = integration_time(data_rate);
    const auto stage = integrator_at_clock(c.integrator, c.tech, data_rate);
    s.integrator_bias = stage.bias_current;
    s.integrator_noise = input_noise(stage, t_int, c.tech);
    const double vn2 = s.integrator_noise * s.integrator_noise;
    double cascade_ahead = 1.0;
    for (int k = 1; k <= n_int; ++k) {
      const double g = upstream_gain * cascade_ahead;
      noise2 += vn2 / (g * g);
      cascade_ahead = cascade_gain_exact(CascadeConfig{stage, k}, t_int);
    }
    s.integrator_gain = cascade_ahead;
    upstream_gain *= cascade_ahead;
  }
  noise2 += s.latch_noise * s.latch_noise / (upstream_gain * upstream_gain);
  s.gain = upstream_gain;
  s.noise_rms = std::sqrt(noise2);
  return s;
}

inline double front_end_gain(const FrontEndChain& c, double data_rate) {
  return evaluate_front_end(c, data_rate).gain;
}

inline double front_end_noise(const FrontEndChain& c, double data_rate) {
  return evaluate_front_end(c, data_rate).noise_rms;
}

/// Sum of per-block energies; each scales with the clock, so the per-bit
/// figure does not depend on the rate.
inline double energy_per_bit(const FrontEndChain& c, double data_rate) {
  if (!(data_rate > 0)) throw DomainError("energy_per_bit: data_rate must be > 0");
  double e = c.energy.latch;
  if (c.has_lna()) e += c.energy.lna;
  e += c.integrator_count() * c.energy.integrator;
  return e;
}

// ---------------------------------------------------------------------------
// Operating-point solver
// ---------------------------------------------------------------------------

struct SolverOptions {
  double f_lo = 1e3;          // Hz, feasibility floor
  double f_hi = 1e10;         // Hz
  int points_per_decade = 60;
  double rel_tol = 1e-7;      // bisection bracket width
};

struct OperatingSolution {
  double data_rate = 0;            // bit/s
  double channel_loss = 0;         // dB
  double rx_swing = 0;             // V
  double fe_gain = 0;
  double sampler_input_swing = 0;  // V
  double rx_input_noise_rms = 0;   // V
  double ber = 0.5;
  double energy_per_bit = 0;       // J/bit
  double residual = 0;             // |g(v_SAL) - f| / f at the returned rate
  double lna_bias = 0;             // A
  double integrator_bias = 0;      // A
  bool feasible = false;
  std::string reason;
};

namespace detail {

inline std::vector<double> log_grid(const SolverOptions& o) {
  const int n = static_cast<int>(std::lround(std::log10(o.f_hi / o.f_lo) * o.points_per_decade));
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i)
    f[i] = o.f_lo * std::pow(10.0, static_cast<double>(i) / o.points_per_decade);
  f[n] = o.f_hi;
  return f;
}

inline std::optional<FrontEndState> try_evaluate(const FrontEndChain& c, double f) {
  try {
    return evaluate_front_end(c, f);
  } catch (const CapacityError&) {
    return std::nullopt;
  }
}

/// Largest f on [f_lo, f_hi] satisfying `ok`, taking the top grid point that
/// passes and bisecting towards its failing neighbour.
template <class Pred>
std::optional<double> largest_satisfying(const SolverOptions& o, Pred ok) {
  const auto grid = log_grid(o);
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (!ok(grid[i])) continue;
    if (i + 1 == grid.size()) return grid[i];
    double lo = grid[i], hi = grid[i + 1];
    while (hi / lo - 1.0 > o.rel_tol) {
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi)) break;
      (ok(mid) ? lo : hi) = mid;
    }
    return lo;
  }
  return std::nullopt;
}

inline OperatingSolution solution_at(const FrontEndChain& c, const ChannelSpec& ch, double f) {
  OperatingSolution s;
  s.channel_loss = ch.loss_db;
  s.rx_swing = rx_swing(ch);
  s.data_rate = f;
  const auto st = evaluate_front_end(c, f);
  s.fe_gain = st.gain;
  s.sampler_input_swing = st.gain * s.rx_swing;
  s.rx_input_noise_rms = st.noise_rms;
  s.ber = ber_at(s.rx_swing, st.noise_rms);
  s.energy_per_bit = energy_per_bit(c, f);
  s.lna_bias = st.lna_bias;
  s.integrator_bias = st.integrator_bias;
  s.residual = std::abs(max_clock_frequency(c.latch, s.sampler_input_swing) - f) / f;
  s.feasible = true;
  return s;
}

inline OperatingSolution infeasible(const ChannelSpec& ch, std::string reason) {
  OperatingSolution s;
  s.channel_loss = ch.loss_db;
  s.rx_swing = rx_swing(ch);
  s.feasible = false;
  s.reason = std::move(reason);
  s.residual = std::numeric_limits<double>::quiet_NaN();
  s.ber = std::numeric_limits<double>::quiet_NaN();
  s.data_rate = 0;
  return s;
}

inline bool rate_achievable(const FrontEndChain& c, double v_rx, double f) {
  const auto st = try_evaluate(c, f);
  return st && max_clock_frequency(c.latch, st->gain * v_rx) >= f;
}

}  // namespace detail

/// Largest rate meeting the latch fixed point at this loss, noise ignored.
inline OperatingSolution max_data_rate(const FrontEndChain& c, const ChannelSpec& ch,
                                       const SolverOptions& o = {}) {
  validate(ch);
  const double v_rx = rx_swing(ch);
  auto f = detail::largest_satisfying(o, [&](double f) { return detail::rate_achievable(c, v_rx, f); });
  if (!f) return detail::infeasible(ch, "no rate above floor meets the latch fixed point");
  return detail::solution_at(c, ch, *f);
}

/// Largest rate meeting both the fixed point and the BER target.
inline OperatingSolution max_data_rate_for_ber(const FrontEndChain& c, const ChannelSpec& ch,
                                               const BerTarget& target,
                                               const SolverOptions& o = {}) {
  validate(ch);
  const double v_rx = rx_swing(ch);
  auto f = detail::largest_satisfying(o, [&](double f) {
    const auto st = detail::try_evaluate(c, f);
    if (!st) return false;
    if (max_clock_frequency(c.latch, st->gain * v_rx) < f) return false;
    return ber_at(v_rx, st->noise_rms) <= target.ber;
  });
  if (!f) return detail::infeasible(ch, "no rate above floor meets the BER target");
  return detail::solution_at(c, ch, *f);
}

/// Largest loss at which the BER at the maximum data rate meets `target`.
/// Scans upward in `coarse_step_db` and bisects the first failure to `tol_db`.
inline double max_loss(const FrontEndChain& c, double tx_swing, const BerTarget& target,
                       const SolverOptions& o = {}, double tol_db = 1e-4,
                       double coarse_step_db = 1.0, double loss_ceiling_db = 200.0) {
  auto meets = [&](double loss) {
    const auto s = max_data_rate(c, ChannelSpec{loss, tx_swing}, o);
    return s.feasible && s.ber <= target.ber;
  };
  if (!meets(0.0)) {
    const auto s = max_data_rate(c, ChannelSpec{0.0, tx_swing}, o);
    throw CapacityError("max_loss: BER target missed even without channel loss", s.ber);
  }
  double lo = 0.0, hi = coarse_step_db;
  while (meets(hi)) {
    lo = hi;
    hi += coarse_step_db;
    if (hi > loss_ceiling_db) return lo;
  }
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    (meets(mid) ? lo : hi) = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// BER above which a point is drawn as degraded.
inline constexpr double kDegradedBer = 1e-3;

struct SweepRow {
  OperatingSolution at_max_rate;
  std::vector<bool> meets_target;                 // per target, BER at f_max
  std::vector<OperatingSolution> under_target;    // per target, BER-limited rate
  bool degraded = false;                          // BER at f_max > 1e-3
};

struct SweepResult {
  std::string chain_label;
  std::vector<BerTarget> targets;
  std::vector<SweepRow> rows;
  std::vector<double> max_loss_db;  // per target; NaN when unattainable
};

inline SweepResult sweep(const FrontEndChain& c, double tx_swing,
                         const std::vector<double>& loss_grid,
                         const std::vector<BerTarget>& targets, const SolverOptions& o = {}) {
  if (loss_grid.empty()) throw ValidationError("sweep: empty loss grid");
  SweepResult r;
  r.chain_label = c.label();
  r.targets = targets;
  for (double loss : loss_grid) {
    SweepRow row;
    const ChannelSpec ch{loss, tx_swing};
    row.at_max_rate = max_data_rate(c, ch, o);
    for (const auto& t : targets) {
      row.meets_target.push_back(row.at_max_rate.feasible && row.at_max_rate.ber <= t.ber);
      row.under_target.push_back(max_data_rate_for_ber(c, ch, t, o));
    }
    row.degraded = !row.at_max_rate.feasible || row.at_max_rate.ber > kDegradedBer;
    r.rows.push_back(std::move(row));
  }
  for (const auto& t : targets) {
    try {
      r.max_loss_db.push_back(max_loss(c, tx_swing, t, o));
    } catch (const CapacityError&) {
      r.max_loss_db.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return r;
}

}  // namespace rxlink
