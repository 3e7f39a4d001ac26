#include "nnecon/harness/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnecon/bargaining.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/numerics.hpp"
#include "nnecon/subscription.hpp"

namespace nnecon::harness {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Plain golden section with a fixed iteration budget.
template <class F>
double argmax_golden(F&& f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo);
  double d = lo + r * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 90 && hi - lo > 1e-13 * (1.0 + std::abs(lo) + std::abs(hi)); ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double grid_max(F&& f, double lo, double hi, int points) {
  double best = kNegInf;
  for (int i = 0; i < points; ++i) best = std::max(best, f(lo + (hi - lo) * i / (points - 1)));
  return best;
}

// Ad price clearing the attention market at demand D, by bisection on the
// advertiser demand MB (1 - X(p)) / p.
double clearing_price(const AdMarket& a, double D) {
  auto excess = [&](double p) { return a.MB() * a.dist().tail(p) / p - D; };
  double hi = std::min(a.dist().scale(), a.dist().upper_support());
  while (excess(hi) > 0.0) hi *= 2.0;
  double lo = hi;
  while (excess(lo) < 0.0) lo *= 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DeviationGain subscription_deviation_gain(const SubscriptionMarket& m,
                                          const SubscriptionOutcome& ne, int points) {
  DeviationGain gain;
  const double u_isp = utility_isp(m, ne.p_s, ne.p_c, ne.q);
  const double u_cp = utility_cp_subscription(m, ne.p_s, ne.p_c, ne.q);

  const double ws = std::max(1.0, std::abs(ne.p_s));
  const double wq = std::max(0.5, ne.q);
  const double ps_lo = std::max(0.0, ne.p_s - ws);
  const double q_lo = std::max(0.0, ne.q - wq);
  const double q_hi = std::min(m.q_max(), ne.q + wq);
  double best_isp = kNegInf;
  for (int i = 0; i < points; ++i) {
    const double p_s = ps_lo + (ne.p_s + ws - ps_lo) * i / (points - 1);
    best_isp = std::max(best_isp, grid_max([&](double q) { return utility_isp(m, p_s, ne.p_c, q); },
                                           q_lo, q_hi, points));
  }
  gain.isp = best_isp - u_isp;

  const double wc = std::max(1.0, std::abs(ne.p_c));
  const double pc_lo = std::max(0.0, ne.p_c - wc);
  gain.cp = grid_max([&](double p_c) { return utility_cp_subscription(m, ne.p_s, p_c, ne.q); },
                     pc_lo, ne.p_c + wc, points) -
            u_cp;
  return gain;
}

GridEquilibrium ad_grid_refinement(const AdMarket& a) {
  const double tax = (1.0 - a.delta()) * a.p_t();
  auto demand = [&](double c, double p_s, double q) {
    return std::max(0.0, a.potential_demand(c) - a.alpha() * p_s + a.beta() * q);
  };
  auto isp_payoff = [&](double p_s, double q, double c) {
    return (p_s - a.p_r() + tax) * demand(c, p_s, q) - a.p_r() * q * q;
  };
  auto cp_payoff = [&](double c, double p_s, double q) {
    const double D = demand(c, p_s, q);
    const double revenue = D > 0.0 ? clearing_price(a, D) * D : 0.0;
    return revenue - a.p_t() * D - c;
  };

  const double c_hi = std::max(1.0, a.K() * (clearing_price(a, 1e-9) + std::abs(a.p_t())));
  const double ps_hi =
      (a.potential_demand(c_hi) + a.beta() * a.q_max()) / a.alpha() + a.p_r() + std::abs(tax) + 1.0;

  auto best_q = [&](double p_s, double c) {
    return argmax_golden([&](double q) { return isp_payoff(p_s, q, c); }, 0.0, a.q_max());
  };
  auto isp_price = [&](double c) {
    return argmax_golden([&](double p_s) { return isp_payoff(p_s, best_q(p_s, c), c); }, 0.0,
                         ps_hi);
  };
  auto cp_investment = [&](double p_s, double q) {
    return argmax_golden([&](double c) { return cp_payoff(c, p_s, q); }, 0.0, c_hi);
  };

  constexpr int n = 13;
  double c_lo = 0.0, c_up = c_hi, p_lo = 0.0, p_up = ps_hi;
  double best_c = 0.0, best_p = 0.0;
  int level = 0;
  for (; level < 200; ++level) {
    const double dc = (c_up - c_lo) / (n - 1);
    const double dp = (p_up - p_lo) / (n - 1);
    double best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double c = c_lo + dc * i;
      const double ps_br = isp_price(c);
      for (int j = 0; j < n; ++j) {
        const double p_s = p_lo + dp * j;
        const double c_br = cp_investment(p_s, best_q(p_s, c));
        const double r = std::max(std::abs(c_br - c) / c_hi, std::abs(ps_br - p_s) / ps_hi);
        if (r < best_r) {
          best_r = r;
          best_c = c;
          best_p = p_s;
        }
      }
    }
    if (dc < 1e-9 * c_hi && dp < 1e-9 * ps_hi) break;
    c_lo = std::max(0.0, best_c - 3.0 * dc);
    c_up = std::min(c_hi, best_c + 3.0 * dc);
    p_lo = std::max(0.0, best_p - 3.0 * dp);
    p_up = std::min(ps_hi, best_p + 3.0 * dp);
  }

  GridEquilibrium out;
  out.c = best_c;
  out.p_s = best_p;
  out.q = best_q(best_p, best_c);
  out.D = demand(best_c, best_p, out.q);
  out.levels = level;
  return out;
}

double nested_pre_bargain_subscription(const SubscriptionMarket& m, double gamma, double lo,
                                       double hi) {
  auto objective = [&](double p_t) {
    const SubscriptionOutcome o = solve_ne(m.with_side_payment(p_t));
    if (o.regime != SubscriptionRegime::Interior || !(o.u_isp > 0.0) || !(o.u_cp > 0.0)) {
      return kNegInf;
    }
    return nash_log_objective(o.u_isp, o.u_cp, gamma);
  };
  return numerics::golden_max(objective, lo, hi).argmax;
}

double fixed_strategy_side_payment(const SubscriptionMarket& m, double gamma, double p_s,
                                   double p_c, double q) {
  const double D = demand_subscription(m, p_s, p_c, q);
  if (!(D > 0.0)) throw Error(ErrorCode::InvalidArgument, "strategies leave no demand");
  // Window where both utilities are positive.
  const double lo = m.p_r() - p_s + m.p_r() * q * q / D;
  const double hi = p_c;
  auto objective = [&](double p_t) {
    const SubscriptionMarket priced = m.with_side_payment(p_t);
    const double u_isp = utility_isp(priced, p_s, p_c, q);
    const double u_cp = utility_cp_subscription(priced, p_s, p_c, q);
    if (!(u_isp > 0.0) || !(u_cp > 0.0)) return kNegInf;
    return nash_log_objective(u_isp, u_cp, gamma);
  };
  return numerics::golden_max(objective, lo, hi).argmax;
}

}  // namespace nnecon::harness
