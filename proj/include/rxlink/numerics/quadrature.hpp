#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// Finite intervals are bisected panel-by-panel, always splitting the panel
// with the largest error estimate, until the summed estimate meets the
// tolerance. Semi-infinite intervals are truncated at a caller-supplied
// cutoff; the caller also supplies the analytic value and bound of the
// remaining tail. Oscillatory integrands with known zeros are best handled
// by passing a panel width equal to the zero spacing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "rxlink/errors.hpp"

namespace rxlink::numerics {

struct QuadratureResult {
  double value = 0;
  double error = 0;   // estimated absolute error, tail bound included
  std::size_t panels = 0;
};

/// Remainder of a semi-infinite integral beyond `cutoff`.
struct TailSpec {
  double cutoff = 0;
  double value = 0;        // analytic estimate of the tail integral
  double bound = 0;        // bound on |tail - value|
  double panel_width = 0;  // initial panel width on [a, cutoff]; 0 = one panel
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0;
  std::size_t max_panels = 200000;
};

/// Pairwise summation; result does not depend on how terms were produced.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace detail {

// Abscissae and weights of the 15-point Kronrod rule and embedded 7-point
// Gauss rule on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

template <class F>
QuadratureResult integrate_finite(F& f, double a, double b, const QuadratureOptions& opt,
                                  double abs_target) {
  std::priority_queue<Panel> work;
  work.push(gauss_kronrod15(f, a, b));
  double total = work.top().value;
  double total_err = work.top().error;
  std::size_t panels = 1;
  while (total_err > std::max(abs_target, opt.rel_tol * std::abs(total))) {
    if (panels >= opt.max_panels) break;
    Panel worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    work.pop();
    Panel left = gauss_kronrod15(f, worst.a, mid);
    Panel right = gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++panels;
  }
  // Re-sum in interval order so the reported value is independent of the
  // refinement history.
  std::vector<Panel> all;
  all.reserve(work.size());
  while (!work.empty()) {
    all.push_back(work.top());
    work.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values, errors;
  values.reserve(all.size());
  errors.reserve(all.size());
  for (const auto& p : all) {
    values.push_back(p.value);
    errors.push_back(p.error);
  }
  return QuadratureResult{pairwise_sum(values), pairwise_sum(errors), all.size()};
}

}  // namespace detail

/// Integrates f over [a, b]. For b = +infinity a TailSpec is required.
/// Throws NumericError (carrying the best estimate) if the tolerance is not
/// reached within the panel budget.
template <class F>
QuadratureResult adaptive_quadrature(F&& f, double a, double b, double rel_tol,
                                     std::optional<TailSpec> tail = std::nullopt,
                                     QuadratureOptions opt = {}) {
  opt.rel_tol = rel_tol;
  if (!(rel_tol > 0)) throw DomainError("adaptive_quadrature: rel_tol must be > 0");
  double upper = b;
  if (std::isinf(b)) {
    if (!tail) throw DomainError("adaptive_quadrature: infinite upper limit needs a tail bound");
    upper = tail->cutoff;
  } else if (tail) {
    upper = std::min(b, tail->cutoff);
  }
  if (!(upper > a)) {
    if (upper == a && !std::isinf(b)) return {};
    throw DomainError("adaptive_quadrature: empty interval");
  }

  const double width = (tail && tail->panel_width > 0) ? tail->panel_width : (upper - a);
  const auto count = static_cast<std::size_t>(std::ceil((upper - a) / width - 1e-9));

  // First pass to size an absolute target; each panel then gets its share.
  std::vector<double> values(count), errors(count);
  std::size_t panels = 0;
  QuadratureOptions per_panel = opt;
  per_panel.max_panels = std::max<std::size_t>(opt.max_panels / std::max<std::size_t>(count, 1), 8);
  for (std::size_t k = 0; k < count; ++k) {
    const double lo = a + static_cast<double>(k) * width;
    const double hi = (k + 1 == count) ? upper : std::min(upper, lo + width);
    auto r = detail::integrate_finite(f, lo, hi, per_panel, opt.abs_tol / static_cast<double>(count));
    values[k] = r.value;
    errors[k] = r.error;
    panels += r.panels;
  }
  QuadratureResult out{pairwise_sum(values), pairwise_sum(errors), panels};
  bool use_tail = tail && (std::isinf(b) || tail->cutoff < b);
  if (use_tail) {
    out.value += tail->value;
    out.error += tail->bound;
  }
  const double target = std::max(opt.abs_tol, rel_tol * std::abs(out.value));
  if (!(out.error <= target)) {
    throw NumericError("adaptive_quadrature: tolerance not reached", out.value,
                       out.value != 0 ? out.error / std::abs(out.value) : out.error);
  }
  return out;
}

}  // namespace rxlink::numerics
