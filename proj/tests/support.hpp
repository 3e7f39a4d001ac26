#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "nnecon/errors.hpp"
#include "nnecon/model.hpp"

namespace nnecon::testing {

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected nnecon::Error";
  return ErrorCode::InvalidArgument;
}

inline SubscriptionMarket s1(double rho, double p_t = 0.0) {
  return SubscriptionMarket(SubscriptionParams{200.0, 10.0, 0.5, rho, 0.0, 1.0, 10.0, p_t});
}

inline AdParams a1_params(double K, double p_t = 0.0) {
  AdParams p;
  p.K = K;
  p.MB = 1000.0;
  p.dist = ValuationDistribution::uniform(10.0);
  p.alpha = 10.0;
  p.beta = 0.5;
  p.p_r = 1.0;
  p.p_t = p_t;
  return p;
}

inline AdMarket a1(double K, double p_t = 0.0) { return AdMarket(a1_params(K, p_t)); }

inline AdMarket a1_normal(double K, double p_t = 0.0) {
  AdParams p = a1_params(K, p_t);
  p.dist = ValuationDistribution::normal(5.0, 2.0);
  return AdMarket(p);
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 50) {
  auto rule = [&](double l, double r, double fl, double fm, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double eps,
          int d) -> double {
    const double m = 0.5 * (l + r);
    const double lm = 0.5 * (l + m);
    const double rm = 0.5 * (m + r);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = rule(l, m, fl, flm, fm);
    const double right = rule(m, r, fm, frm, fr);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(l, m, fl, flm, fm, left, eps / 2.0, d - 1) +
           rec(m, r, fm, frm, fr, right, eps / 2.0, d - 1);
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth);
}

// Central difference with step h.
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  SubscriptionParams subscription() {
    SubscriptionParams p;
    p.alpha = log_uniform(0.5, 50.0);
    p.p_r = log_uniform(0.1, 10.0);
    p.beta = std::sqrt(4.0 * p.alpha * p.p_r * log_uniform(0.05, 0.95));
    p.D0 = p.alpha * p.p_r * log_uniform(2.0, 50.0);
    p.rho = log_uniform(0.2, 5.0);
    p.delta = uniform(0.0, 1.0);
    p.q_max = log_uniform(0.5, 50.0);
    p.p_t = p.p_r * uniform(-1.0, 2.0);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace nnecon::testing
