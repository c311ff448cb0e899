#pragma once

#include <cmath>
#include <utility>

#include "qdmaps/errors.hpp"

namespace qdmaps {

struct QuadratureResult {
  double value;
  double error_estimate;
};

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double fa, double b, double fb, double m, double fm,
                       double whole, double tol, int depth, double& err_acc) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Negated comparison so a NaN estimate stops refinement (and poisons the
  // result) rather than recursing to full depth everywhere.
  if (depth <= 0 || !(std::abs(delta) > 15.0 * tol)) {
    err_acc += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, err_acc) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b]. The interval is pre-split
/// into `min_panels` equal panels (so narrow features are not stepped over),
/// each refined until the local Richardson error estimate meets its share of
/// `abs_tol`. Returns the integral and the accumulated error estimate.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-8,
                                  int min_panels = 64) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b))
    throw PreconditionError("adaptive_simpson: need finite b >= a");
  if (min_panels < 1) min_panels = 1;
  if (a == b) return {0.0, 0.0};

  const double panel_tol = abs_tol / static_cast<double>(min_panels);
  double total = 0.0;
  double err = 0.0;
  double right_edge = a;
  double f_right = f(a);
  for (int i = 0; i < min_panels; ++i) {
    const double pa = right_edge;
    const double pb = a + (b - a) * static_cast<double>(i + 1) / min_panels;
    const double fa = f_right;
    const double fb = f(pb);
    const double m = 0.5 * (pa + pb);
    const double fm = f(m);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_recurse(f, pa, fa, pb, fb, m, fm, whole, panel_tol, 40, err);
    right_edge = pb;
    f_right = fb;
  }
  return {total, err};
}

struct MinimizeResult {
  double argmin;
  double value;
};

/// Ternary search for the minimum of a convex function on [lo, hi].
template <class F>
MinimizeResult minimize_convex(F&& f, double lo, double hi, double x_tol = 1e-10,
                               int max_iter = 300) {
  if (!(hi >= lo)) throw PreconditionError("minimize_convex: need hi >= lo");
  for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace qdmaps
