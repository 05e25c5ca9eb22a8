// rxlink: block characterisation and architecture sweeps over a design file.
//
//   rxlink <latch|lna|integrator|cascade|arch|compare> --tech FILE --out PATH
//          [--format csv|json] [range flags]
//
// Exit status: 0 ok, 2 usage, 3 numeric failure, 1 anything else. Failures
// print a one-line JSON record on stderr.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxlink/rxlink.hpp"
#include "table.hpp"

namespace {

using namespace rxlink;
using cli::Cell;
using cli::Table;

constexpr const char* kToolVersion = "rxlink 1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  double lo = 0, hi = 0;
  int n = 0;
};

Range parse_range(const std::string& flag, const std::string& text, bool log_spaced) {
  Range r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.n, &tail) != 3)
    throw UsageError(flag + ": expected a:b:n, got '" + text + "'");
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi))
    throw UsageError(flag + ": need finite a < b");
  if (r.n < 2) throw UsageError(flag + ": need at least 2 points");
  if (log_spaced && !(r.lo > 0)) throw UsageError(flag + ": log-spaced range needs a > 0");
  return r;
}

std::vector<double> linear_points(const Range& r) {
  std::vector<double> v(r.n);
  for (int i = 0; i < r.n; ++i) v[i] = r.lo + (r.hi - r.lo) * i / (r.n - 1);
  v.back() = r.hi;
  return v;
}

std::vector<double> log_points(const Range& r) {
  std::vector<double> v(r.n);
  const double a = std::log(r.lo), b = std::log(r.hi);
  for (int i = 0; i < r.n; ++i) v[i] = std::exp(a + (b - a) * i / (r.n - 1));
  v.front() = r.lo;
  v.back() = r.hi;
  return v;
}

std::vector<BerTarget> parse_bers(const std::string& text) {
  std::vector<BerTarget> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double p = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError("--ber: bad value '" + item + "'");
    try {
      out.push_back(BerTarget::custom(p));
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--ber: ") + e.what());
    }
  }
  if (out.empty()) throw UsageError("--ber: empty list");
  return out;
}

std::string ber_tag(const BerTarget& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t.ber);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Options {
  std::string command;
  std::string tech;
  std::string out;
  std::string format = "csv";
  std::string loss = "20:70:51";
  std::string rate = "1e6:4e9:41";
  std::string bias = "1e-9:1e-2:41";
  std::string vin = "1e-9:0.1:41";
  std::string ber = "1e-12,1e-3";
  std::string arch = "I";
  int depth = 1;
  long mc_trials = 0;
};

struct Output {
  Table table;
  std::vector<std::pair<std::string, std::string>> meta;
  std::optional<Table> secondary;  // compare: L_max summary
};

Cell num(double v) { return v; }

Output run_latch(const Design& d, const Options& o) {
  const auto vins = log_points(parse_range("--vin-v", o.vin, true));
  Output out{Table({"vin_V", "t_a_s", "t_o_s", "t_latch_s", "f_max_Hz", "noise_rms_V",
                    "noise_ktc_V", "excess_factor"}),
             {}, std::nullopt};
  const auto ph = phase_durations(d.latch);
  const double vn = input_referred_noise(d.latch, d.tech);
  const double vk = input_referred_noise_ktc(d.latch, d.tech);
  const double m = noise_excess_factor(d.latch, d.tech);
  for (double v : vins)
    out.table.add_row({v, ph.t_a, ph.t_o, latch_time(d.latch, v),
                       max_clock_frequency(d.latch, v), vn, vk, m});
  out.meta.push_back({"envelope_integral_over_t_a",
                      cli::format_number(envelope_noise_integral(ph.t_a) / ph.t_a)});
  if (o.mc_trials > 0) {
    const auto seed = numerics::seed_from_environment();
    const auto mc = numerics::mc_latch_noise(d.latch, d.tech, o.mc_trials, seed);
    out.meta.push_back({"mc_seed", std::to_string(seed)});
    out.meta.push_back({"mc_trials", std::to_string(mc.trials)});
    out.meta.push_back({"mc_noise_rms_V", cli::format_number(mc.sample_std)});
    out.meta.push_back({"mc_standard_error_V", cli::format_number(mc.standard_error)});
  }
  return out;
}

Output run_lna(const Design& d, const Options& o) {
  const auto biases = log_points(parse_range("--bias-a", o.bias, true));
  Output out{Table({"bias_A", "gm_total_S", "r_out_ohm", "gain", "bandwidth_Hz", "power_W",
                    "region"}),
             {}, std::nullopt};
  for (double i : biases) {
    const auto op = operating_point(d.lna, i);
    out.table.add_row({i, op.gm_total, op.r_out, op.gain, op.bandwidth, op.power,
                       std::string(to_string(op.region))});
  }
  return out;
}

Output run_integrator(const Design& d, const Options& o) {
  const auto rates = log_points(parse_range("--rate-hz", o.rate, true));
  Output out{Table({"rate_Hz", "t_int_s", "bias_A", "gm_S", "r_out_ohm", "ideal_gain",
                    "exact_gain", "max_gain_precharge", "noise_rms_V", "region"}),
             {}, std::nullopt};
  for (double f : rates) {
    const auto c = integrator_at_clock(d.integrator, d.tech, f);
    const double t = integration_time(f);
    const double gmax =
        c.load_kind == LoadKind::precharge ? max_gain_precharge(c)
                                           : std::numeric_limits<double>::quiet_NaN();
    out.table.add_row({f, t, c.bias_current, c.gm, output_resistance(c), ideal_gain(c, t),
                       exact_gain(c, t), gmax, input_noise(c, t, d.tech),
                       std::string(to_string(device_point(d.tech, d.integrator.width,
                                                          c.bias_current).region))});
  }
  return out;
}

Output run_cascade(const Design& d, const Options& o) {
  const auto rates = log_points(parse_range("--rate-hz", o.rate, true));
  Output out{Table({"rate_Hz", "depth", "single_stage_gain", "ideal_gain", "exact_gain",
                    "optimal_depth"}),
             {}, std::nullopt};
  for (double f : rates) {
    const auto c = integrator_at_clock(d.integrator, d.tech, f);
    const double t = integration_time(f);
    const double a = exact_gain(c, t);
    for (int n = 1; n <= o.depth; ++n)
      out.table.add_row({f, long(n), a, cascade_gain_ideal(c.gm / c.c_load, t, n),
                         cascade_gain_exact(CascadeConfig{c, n}, t),
                         long(optimal_cascade_depth(a))});
  }
  return out;
}

std::vector<std::string> arch_columns(const std::vector<BerTarget>& targets) {
  std::vector<std::string> cols = {"arch", "depth", "loss_dB", "tx_swing_V", "rx_swing_V",
                                   "feasible", "data_rate_Hz", "fe_gain", "sampler_swing_V",
                                   "noise_rms_V", "ber", "energy_J_per_bit", "residual",
                                   "degraded"};
  for (const auto& t : targets) {
    cols.push_back("meets_ber_" + ber_tag(t));
    cols.push_back("rate_at_ber_" + ber_tag(t) + "_Hz");
  }
  return cols;
}

Output run_arch(const Design& d, const Options& o) {
  const auto losses = linear_points(parse_range("--loss-db", o.loss, false));
  const auto targets = parse_bers(o.ber);
  const auto arch = parse_architecture(o.arch);
  if (!arch) throw UsageError("--arch: expected I, II, III or IV");
  const auto chain = make_chain(d, *arch, o.depth);
  const auto r = sweep(chain, d.tx_swing, losses, targets);

  Output out{Table(arch_columns(targets)), {}, std::nullopt};
  for (const auto& row : r.rows) {
    const auto& s = row.at_max_rate;
    std::vector<Cell> cells = {std::string(roman(chain.architecture)),
                               long(chain.cascade_depth), s.channel_loss, d.tx_swing,
                               s.rx_swing, s.feasible, s.data_rate, s.fe_gain,
                               s.sampler_input_swing, s.rx_input_noise_rms, s.ber,
                               s.energy_per_bit, s.residual, row.degraded};
    for (std::size_t k = 0; k < targets.size(); ++k) {
      cells.push_back(bool(row.meets_target[k]));
      cells.push_back(row.under_target[k].data_rate);
    }
    out.table.add_row(std::move(cells));
  }
  for (std::size_t k = 0; k < targets.size(); ++k)
    out.meta.push_back({"max_loss_dB_at_ber_" + ber_tag(targets[k]),
                        cli::format_number(r.max_loss_db[k])});
  return out;
}

Output run_compare(const Design& d, const Options& o) {
  const auto losses = linear_points(parse_range("--loss-db", o.loss, false));
  const auto targets = parse_bers(o.ber);
  const int deep = std::max(2, o.depth);
  const std::vector<FrontEndChain> chains = {
      make_chain(d, Architecture::sampler_only), make_chain(d, Architecture::lna_sampler),
      make_chain(d, Architecture::integrator_sampler),
      make_chain(d, Architecture::lna_cascade_sampler, 1),
      make_chain(d, Architecture::lna_cascade_sampler, deep)};

  std::vector<std::string> cols = {"loss_dB", "tx_swing_V"};
  for (const auto& c : chains) {
    cols.push_back("f_max_" + c.label() + "_Hz");
    cols.push_back("ber_" + c.label());
    cols.push_back("degraded_" + c.label());
    cols.push_back("energy_" + c.label() + "_J_per_bit");
  }
  std::vector<SweepResult> results;
  for (const auto& c : chains) results.push_back(sweep(c, d.tx_swing, losses, targets));

  Output out{Table(cols), {}, Table({"arch", "depth", "ber_target", "max_loss_dB"})};
  for (std::size_t i = 0; i < losses.size(); ++i) {
    std::vector<Cell> cells = {losses[i], d.tx_swing};
    for (const auto& r : results) {
      const auto& s = r.rows[i].at_max_rate;
      cells.push_back(s.data_rate);
      cells.push_back(s.ber);
      cells.push_back(bool(r.rows[i].degraded));
      cells.push_back(s.feasible ? s.energy_per_bit : std::nan(""));
    }
    out.table.add_row(std::move(cells));
  }
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t k = 0; k < targets.size(); ++k)
      out.secondary->add_row({std::string(roman(chains[c].architecture)),
                              long(chains[c].cascade_depth), targets[k].ber,
                              results[c].max_loss_db[k]});
  return out;
}

void error_record(const char* kind, const std::string& msg, int code) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  e["message"] = msg;
  e["exit_code"] = code;
  std::cerr << e.dump() << "\n";
}

std::filesystem::path secondary_path(const std::filesystem::path& out) {
  auto p = out;
  const auto ext = p.extension();
  p.replace_filename(p.stem().string() + "_lmax" + ext.string());
  return p;
}

void write_table(const Table& t, const std::filesystem::path& path, const std::string& format,
                 const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path.string());
  if (format == "json")
    t.write_json(f, meta);
  else
    t.write_csv(f, meta);
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

int run(const Options& o) {
  // Validate every range flag relevant to the command before touching files.
  if (o.format != "csv" && o.format != "json") throw UsageError("--format: expected csv or json");
  if (o.depth < 1) throw UsageError("--depth: must be >= 1");
  if (o.mc_trials != 0 && o.mc_trials < 1000) throw UsageError("--mc-trials: must be >= 1000");

  const std::string text = detail::read_file(o.tech);
  const auto design = parse_design(text, o.tech);

  Output out = [&] {
    if (o.command == "latch") return run_latch(design, o);
    if (o.command == "lna") return run_lna(design, o);
    if (o.command == "integrator") return run_integrator(design, o);
    if (o.command == "cascade") return run_cascade(design, o);
    if (o.command == "arch") return run_arch(design, o);
    return run_compare(design, o);
  }();

  std::vector<std::pair<std::string, std::string>> meta = {
      {"tool", kToolVersion},
      {"command", o.command},
      {"tech_file", o.tech},
      {"tech_fnv1a64", hex64(fnv1a64(text))},
      {"design", design.name},
  };
  meta.insert(meta.end(), out.meta.begin(), out.meta.end());

  write_table(out.table, o.out, o.format, meta);
  if (out.secondary) {
    auto m = meta;
    m.push_back({"table", "max_loss"});
    write_table(*out.secondary, secondary_path(o.out), o.format, m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireline receiver front-end design-space explorer"};
  app.require_subcommand(1);
  Options o;

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec commands[] = {
      {"latch", "latch timing and noise vs input swing"},
      {"lna", "LNA operating point vs bias current"},
      {"integrator", "integrator gain and noise vs clock rate"},
      {"cascade", "integrator cascade gain vs clock rate and depth"},
      {"arch", "one architecture swept over channel loss"},
      {"compare", "all architectures over channel loss, plus an L_max table"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--tech", o.tech, "design JSON file")->required();
    sub->add_option("--out", o.out, "output path")->required();
    sub->add_option("--format", o.format, "csv or json");
    const std::string name = c.name;
    if (name == "latch") {
      sub->add_option("--vin-v", o.vin, "input swing range a:b:n, V, log-spaced");
      sub->add_option("--mc-trials", o.mc_trials, "also run the Monte Carlo noise check");
    }
    if (name == "lna") sub->add_option("--bias-a", o.bias, "bias range a:b:n, A, log-spaced");
    if (name == "integrator" || name == "cascade")
      sub->add_option("--rate-hz", o.rate, "clock range a:b:n, Hz, log-spaced");
    if (name == "cascade" || name == "arch" || name == "compare")
      sub->add_option("--depth", o.depth, "cascade depth N");
    if (name == "arch" || name == "compare") {
      sub->add_option("--loss-db", o.loss, "loss range a:b:n, dB, linear");
      sub->add_option("--ber", o.ber, "comma-separated BER targets");
    }
    if (name == "arch") sub->add_option("--arch", o.arch, "I, II, III or IV");
    sub->callback([&o, name] { o.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("usage", e.what(), 2);
    return 2;
  }

  try {
    return run(o);
  } catch (const UsageError& e) {
    error_record("usage", e.what(), 2);
    return 2;
  } catch (const NumericError& e) {
    error_record("numeric", e.what(), 3);
    return 3;
  } catch (const ParseError& e) {
    error_record("config", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    error_record("error", e.what(), 1);
    return 1;
  }
}
