#include "ipress/numeric.hpp"

#include <cstdio>

namespace ipress {

ThresholdSearch find_threshold(const std::function<double(double)>& g,
                               const ThresholdOptions& options) {
  ThresholdSearch out;
  auto eval = [&](double x) {
    ++out.evaluations;
    return g(x);
  };

  double width = 2.0 * options.radius;
  double lo = options.center - options.radius;
  double hi = options.center + options.radius;
  double glo = eval(lo);
  double ghi = eval(hi);

  // Walk right while the upper end is still positive.
  while (ghi > 0.0) {
    if (out.expansions >= options.max_expansions) {
      out.status = ThresholdSearch::Status::AlwaysPositive;
      out.lower = hi;
      out.upper = kInf;
      out.value = kInf;
      return out;
    }
    ++out.expansions;
    lo = hi;
    glo = ghi;
    width *= 2.0;
    hi = lo + width;
    ghi = eval(hi);
  }
  // Walk left while the lower end is already non-positive.
  while (!(glo > 0.0)) {
    if (out.expansions >= options.max_expansions) {
      out.status = ThresholdSearch::Status::NeverPositive;
      out.lower = -kInf;
      out.upper = lo;
      out.value = -kInf;
      return out;
    }
    ++out.expansions;
    hi = lo;
    ghi = glo;
    width *= 2.0;
    lo = hi - width;
    glo = eval(lo);
  }

  // Illinois regula falsi; side counters halve the stale endpoint value.
  int side = 0;
  double flo = glo;
  double fhi = ghi;
  for (int it = 0; it < options.max_iterations && hi - lo > options.tolerance; ++it) {
    double x;
    const bool finite = std::isfinite(flo) && std::isfinite(fhi) && flo != fhi;
    if (finite && it % 4 != 3) {
      x = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
    }
    const double gx = eval(x);
    if (gx > 0.0) {
      lo = x;
      flo = gx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = gx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  out.lower = lo;
  out.upper = hi;

  // Final secant estimate on the true (unhalved) endpoint values.
  const double g_lo = eval(lo);
  const double g_hi = eval(hi);
  if (std::isfinite(g_lo) && std::isfinite(g_hi) && g_hi < 0.0 && g_lo > 0.0) {
    const double x = hi - g_hi * (hi - lo) / (g_hi - g_lo);
    out.value = (x >= lo && x <= hi) ? x : 0.5 * (lo + hi);
  } else {
    out.value = 0.5 * (lo + hi);
  }
  return out;
}

std::string format_extended(double x) {
  if (x == kInf) return "+inf";
  if (x == -kInf) return "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace ipress
