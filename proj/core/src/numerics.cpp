#include "nnecon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nnecon/errors.hpp"

namespace nnecon::numerics {

namespace {

double finite_or_neg_inf(double v) {
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

bool same_strict_sign(double a, double b) {
  return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0);
}

}  // namespace

void SolveConfig::validate() const {
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "abs_tol must be > 0");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (!(bracket_expand > 1.0)) throw Error(ErrorCode::InvalidArgument, "bracket_expand must be > 1");
}

RootResult bisect_root(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg) {
  cfg.validate();
  if (lo > hi) std::swap(lo, hi);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) {
    throw Error(ErrorCode::NoBracket, "function is NaN at a bracket endpoint");
  }
  if (f_lo == 0.0) return {lo, 0};
  if (f_hi == 0.0) return {hi, 0};
  if (same_strict_sign(f_lo, f_hi)) {
    throw Error(ErrorCode::NoBracket, "f(lo) and f(hi) have the same sign on [" +
                                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) return {mid, it};
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {mid, it};
    if (same_strict_sign(f_mid, f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= cfg.abs_tol) return {lo + 0.5 * (hi - lo), it};
  }
  throw Error(ErrorCode::NoConvergence,
              "bisection exceeded " + std::to_string(cfg.max_iter) + " iterations");
}

double expand_bracket_upward(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg) {
  cfg.validate();
  const double f_lo = f(lo);
  double width = hi - lo;
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "expand_bracket_upward needs hi > lo");
  for (int k = 0; k <= kMaxBracketExpansions; ++k) {
    const double f_hi = f(hi);
    if (!same_strict_sign(f_lo, f_hi) && !std::isnan(f_hi)) return hi;
    width *= cfg.bracket_expand;
    hi = lo + width;
  }
  throw Error(ErrorCode::NoBracket, "no sign change after " +
                                        std::to_string(kMaxBracketExpansions) + " expansions");
}

MaxResult golden_max(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg) {
  cfg.validate();
  if (lo > hi) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = finite_or_neg_inf(f(c));
  double fd = finite_or_neg_inf(f(d));

  int it = 0;
  while (b - a > cfg.abs_tol) {
    if (++it > cfg.max_iter) {
      throw Error(ErrorCode::NoConvergence,
                  "golden section exceeded " + std::to_string(cfg.max_iter) + " iterations");
    }
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = finite_or_neg_inf(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = finite_or_neg_inf(f(d));
    }
  }

  const double x = 0.5 * (a + b);
  const double fx = finite_or_neg_inf(f(x));
  // The midpoint can sit on the infeasible side of a jump; keep the better probe.
  if (fc > fx && fc >= fd) return {c, fc, it};
  if (fd > fx) return {d, fd, it};
  return {x, fx, it};
}

double gaussian_upper_integral(double mu, double sigma, double p) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  const double z = (p - mu) / (sigma * std::numbers::sqrt2);
  return sigma * std::sqrt(2.0 * std::numbers::pi) * 0.5 * std::erfc(z);
}

double gaussian_lower_integral(double mu, double sigma, double p) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  const double z = (mu - p) / (sigma * std::numbers::sqrt2);
  return sigma * std::sqrt(2.0 * std::numbers::pi) * 0.5 * std::erfc(z);
}

FixedPointResult fixed_point_monotone(const ScalarFn& increasing, const ScalarFn& decreasing,
                                      double lo, double hi, const SolveConfig& cfg) {
  cfg.validate();
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "fixed_point_monotone needs hi > lo");

  constexpr int kSamples = 65;
  double prev_inc = increasing(lo);
  double prev_dec = decreasing(lo);
  for (int i = 1; i < kSamples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (kSamples - 1);
    const double inc = increasing(x);
    const double dec = decreasing(x);
    const double slack_inc = 1e-12 * (1.0 + std::abs(prev_inc));
    const double slack_dec = 1e-12 * (1.0 + std::abs(prev_dec));
    if (inc < prev_inc - slack_inc) {
      throw Error(ErrorCode::MonotonicityViolation,
                  "increasing branch decreases near x = " + std::to_string(x));
    }
    if (dec > prev_dec + slack_dec) {
      throw Error(ErrorCode::MonotonicityViolation,
                  "decreasing branch increases near x = " + std::to_string(x));
    }
    prev_inc = inc;
    prev_dec = dec;
  }

  auto gap = [&](double x) { return decreasing(x) - increasing(x); };
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (g_lo <= 0.0) return {FixedPointKind::IncreasingDominates, lo, 0};
  if (g_hi > 0.0) return {FixedPointKind::DecreasingDominates, hi, 0};

  const RootResult r = bisect_root(gap, lo, hi, cfg);
  return {FixedPointKind::Crossing, r.x, r.iterations};
}

ConcavityReport second_difference_scan(const ScalarFn& f, std::span<const double> grid,
                                       double tol) {
  ConcavityReport report;
  if (grid.size() < 3) return report;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);

  report.max_second_difference = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double h0 = grid[i] - grid[i - 1];
    const double h1 = grid[i + 1] - grid[i];
    if (!(h0 > 0.0 && h1 > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
    }
    const double d =
        (h0 * values[i + 1] - (h0 + h1) * values[i] + h1 * values[i - 1]) / (0.5 * (h0 + h1));
    report.second_differences.push_back(d);
    report.max_second_difference = std::max(report.max_second_difference, d);
    if (d > tol) report.violations.push_back(i);
  }
  return report;
}

}  // namespace nnecon::numerics
