#include "nnecon/bargaining.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "nnecon/advertisement.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/subscription.hpp"

namespace nnecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_bargain(double delta, double gamma) {
  validate(BargainSetting{gamma, BargainTiming::Pre});
  if (delta != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "bargaining is defined for delta = 0 only");
  }
}

bool is_unit_rho(double rho) { return std::abs(rho - 1.0) <= 1e-12; }

double market_surplus(const SubscriptionMarket& m) {
  const double n0 = m.D0() - m.alpha() * m.p_r();
  if (!(n0 > 0.0)) {
    throw Error(ErrorCode::InfeasibleMarket, "bargaining needs D0 > alpha p_r");
  }
  return n0;
}

SubscriptionOutcome outcome_at(const SubscriptionMarket& m, double p_s, double p_c, double q,
                               SubscriptionRegime regime) {
  SubscriptionOutcome out;
  out.p_s = p_s;
  out.p_c = p_c;
  out.q = q;
  out.D = demand_subscription(m, p_s, p_c, q);
  out.u_isp = utility_isp(m, p_s, p_c, q);
  out.u_cp = utility_cp_subscription(m, p_s, p_c, q);
  out.regime = regime;
  return out;
}

struct JointAdPoint {
  double D;
  double c;
  double p_s;
  double q;
  double y;
  double surplus;
};

JointAdPoint joint_ad_point(const AdMarket& a, double D) {
  JointAdPoint j{};
  j.D = D;
  j.c = a.K() * D / a.alpha() - 1.0;
  j.p_s = D / a.alpha() - cp_marginal_revenue(a, D) + a.p_r();
  j.q = a.beta() * D / (2.0 * a.alpha() * a.p_r());
  j.y = optimal_ad_price(a, D);
  j.surplus = (j.y + j.p_s - a.p_r()) * D - j.c - a.p_r() * j.q * j.q;
  return j;
}

}  // namespace

double nash_log_objective(double u_isp, double u_cp, double gamma) {
  if (!(u_isp > 0.0) || !(u_cp > 0.0)) {
    throw Error(ErrorCode::NonpositiveUtility, "Nash product needs positive utilities, got u_isp = " +
                                                   std::to_string(u_isp) +
                                                   ", u_cp = " + std::to_string(u_cp));
  }
  return (1.0 - gamma) * std::log(u_cp) + gamma * std::log(u_isp);
}

double bargained_side_payment(double gamma, double p_r, double p_s, double p_c, double q,
                              double D) {
  if (!(D > 0.0)) throw Error(ErrorCode::InvalidArgument, "side payment needs positive demand");
  return gamma * p_c - (1.0 - gamma) * (p_s - p_r) + (1.0 - gamma) * p_r * q * q / D;
}

SubscriptionBargain pre_bargain_subscription(const SubscriptionMarket& m, double gamma) {
  require_bargain(m.delta(), gamma);
  const double n0 = market_surplus(m);
  const double a = m.alpha();
  const double pr = m.p_r();
  const double b2 = m.beta() * m.beta();

  SubscriptionBargain out;
  if (is_unit_rho(m.rho())) {
    out.indeterminate = true;
    out.p_t = 0.0;
    const SubscriptionOutcome lo = solve_ne(m.with_side_payment(-1.0));
    const SubscriptionOutcome hi = solve_ne(m.with_side_payment(1.0));
    out.certificate = std::abs(nash_log_objective(lo.u_isp, lo.u_cp, gamma) -
                               nash_log_objective(hi.u_isp, hi.u_cp, gamma));
  } else if (m.rho() < 1.0) {
    out.p_t = pr * (4.0 * a * pr + 2.0 * m.D0() - b2) / (4.0 * a * pr + 2.0 * m.rho() * a * pr - b2);
  } else {
    out.p_t = -2.0 * pr * n0 / (2.0 * a * pr + m.rho() * (4.0 * a * pr - b2));
  }
  out.outcome = solve_ne(m.with_side_payment(out.p_t));
  return out;
}

SubscriptionBargain post_bargain_subscription(const SubscriptionMarket& m, double gamma) {
  require_bargain(m.delta(), gamma);
  const double n0 = market_surplus(m);
  const double a = m.alpha();
  const double pr = m.p_r();
  const double b = m.beta();

  double p_s = 0.0;
  double p_c = 0.0;
  double q = 0.0;
  SubscriptionRegime regime = SubscriptionRegime::CpPriceFloor;
  SubscriptionBargain out;
  if (m.rho() >= 1.0 || is_unit_rho(m.rho())) {
    const double den = 4.0 * a * pr - b * b;
    q = b * n0 / den;
    p_s = 2.0 * pr * n0 / den + pr;
    if (is_unit_rho(m.rho())) {
      out.indeterminate = true;
      out.family_sum = p_s;
    }
  } else {
    const double ar = a * m.rho();
    const double den = 4.0 * ar * pr - b * b;
    const double n = m.D0() - ar * pr;
    if (!(den > 0.0) || !(n > 0.0)) {
      throw Error(ErrorCode::InfeasibleMarket,
                  "joint surplus is unbounded or empty: need 4 alpha rho p_r > beta^2 and "
                  "D0 > alpha rho p_r");
    }
    const double s = 2.0 * pr * n / den;
    p_c = s + pr;
    q = b * s / (2.0 * pr);
    regime = SubscriptionRegime::IspPriceFloor;
  }
  if (q > m.q_max()) {
    throw Error(ErrorCode::InfeasibleMarket, "joint-surplus QoS exceeds q_max");
  }

  const double D = demand_subscription(m, p_s, p_c, q);
  out.p_t = regime == SubscriptionRegime::CpPriceFloor
                ? -(1.0 - gamma) * n0 / (2.0 * a)
                : bargained_side_payment(gamma, pr, p_s, p_c, q, D);
  out.outcome = outcome_at(m.with_side_payment(out.p_t), p_s, p_c, q, regime);
  return out;
}

AdBargain pre_bargain_ad(const AdMarket& a, double gamma, const numerics::SolveConfig& cfg) {
  require_bargain(a.delta(), gamma);
  cfg.validate();

  auto objective = [&](double p_t) {
    try {
      const AdOutcome out = solve_equilibrium_ad(a.with_side_payment(p_t), cfg);
      if (!(out.u_isp > 0.0) || !(out.u_cp > 0.0)) return -kInf;
      return nash_log_objective(out.u_isp, out.u_cp, gamma);
    } catch (const Error&) {
      return -kInf;
    }
  };

  constexpr int kGrid = 121;
  constexpr int kMaxWidenings = 10;
  double half = a.dist().scale();
  std::vector<double> xs(kGrid);
  std::vector<double> fs(kGrid);
  std::size_t best = 0;
  for (int widen = 0;; ++widen) {
    for (int i = 0; i < kGrid; ++i) {
      xs[i] = -half + 2.0 * half * i / (kGrid - 1);
      fs[i] = objective(xs[i]);
    }
    best = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    const bool none = !std::isfinite(fs[best]);
    const bool at_edge = best == 0 || best + 1 == xs.size();
    if (!none && !at_edge) break;
    if (widen == kMaxWidenings) {
      if (none) {
        throw Error(ErrorCode::NonpositiveUtility,
                    "no side payment in [" + std::to_string(-half) + ", " +
                        std::to_string(half) + "] leaves both utilities positive");
      }
      break;
    }
    half *= cfg.bracket_expand;
  }

  const double lo = xs[best == 0 ? 0 : best - 1];
  const double hi = xs[std::min(best + 1, xs.size() - 1)];
  const numerics::MaxResult r = numerics::golden_max(objective, lo, hi, cfg);
  const double p_t = r.max >= fs[best] ? r.argmax : xs[best];

  AdBargain out;
  out.p_t = p_t;
  out.outcome = solve_equilibrium_ad(a.with_side_payment(p_t), cfg);
  out.outcome.iterations = r.iterations;
  out.scanned_lo = -half;
  out.scanned_hi = half;
  return out;
}

double post_bargain_ad_residual(const AdMarket& a, double D) {
  const double al = a.alpha();
  const double pr = a.p_r();
  const double b = a.beta();
  return D * (4.0 * al * pr - b * b) / (2.0 * al * pr) - al * cp_marginal_revenue(a, D) -
         a.D0_0() + al * pr - a.K() * std::log(a.K() * D / al);
}

std::vector<double> post_bargain_ad_roots(const AdMarket& a, const numerics::SolveConfig& cfg) {
  cfg.validate();
  auto phi = [&](double D) { return post_bargain_ad_residual(a, D); };
  const double lo = a.alpha() / a.K();

  // Past hi the linear term dominates and the residual keeps rising.
  double hi = 2.0 * lo;
  for (int k = 0; !(phi(hi) > 0.0 && phi(2.0 * hi) > phi(hi)); ++k) {
    if (k > 4 * numerics::kMaxBracketExpansions) {
      throw Error(ErrorCode::NoBracket, "joint first-order residual never turns positive");
    }
    hi *= 2.0;
  }
  hi *= 2.0;

  constexpr int kGrid = 2000;
  numerics::SolveConfig t = cfg;
  t.abs_tol = std::min(cfg.abs_tol, 1e-14 * hi);
  t.max_iter = std::max(cfg.max_iter, 400);

  std::vector<double> roots;
  const double ratio = std::log(hi / lo);
  double x0 = lo;
  double f0 = phi(lo);
  if (f0 == 0.0) roots.push_back(lo);
  for (int i = 1; i < kGrid; ++i) {
    const double x1 = lo * std::exp(ratio * i / (kGrid - 1));
    const double f1 = phi(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      roots.push_back(numerics::bisect_root(phi, x0, x1, t).x);
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

AdBargain post_bargain_ad(const AdMarket& a, double gamma, const numerics::SolveConfig& cfg) {
  require_bargain(a.delta(), gamma);
  AdBargain out;
  out.roots = post_bargain_ad_roots(a, cfg);
  if (out.roots.empty()) {
    throw Error(ErrorCode::NoInteriorSolution, "joint first-order system has no root");
  }
  out.dual_root = post_bargain_ad_residual(a, a.alpha() / a.K()) >= 0.0;

  std::optional<JointAdPoint> chosen;
  std::string rejected;
  for (double D : out.roots) {
    const JointAdPoint j = joint_ad_point(a, D);
    if (!(j.p_s > 0.0) || !(j.c >= 0.0) || !(j.q <= a.q_max())) {
      rejected += " D=" + std::to_string(D) + " (p_s=" + std::to_string(j.p_s) +
                  ", c=" + std::to_string(j.c) + ", q=" + std::to_string(j.q) + ")";
      continue;
    }
    if (!chosen || j.surplus > chosen->surplus) chosen = j;
  }
  if (!chosen) {
    throw Error(ErrorCode::NoInteriorSolution, "no root gives an interior strategy:" + rejected);
  }

  const JointAdPoint& j = *chosen;
  out.p_t = gamma * j.y - gamma * j.c / j.D - (1.0 - gamma) * (j.p_s - a.p_r()) +
            (1.0 - gamma) * a.p_r() * j.q * j.q / j.D;
  const AdMarket priced = a.with_side_payment(out.p_t);
  AdOutcome& o = out.outcome;
  o.p_s = j.p_s;
  o.q = j.q;
  o.c = j.c;
  o.D = j.D;
  o.p_a = j.y;
  o.u_isp = utility_isp(priced, j.p_s, Demand{j.D}, j.q);
  o.u_cp = utility_cp_ad(priced, j.y, j.D, j.c);
  o.regime = AdRegime::Interior;
  o.iterations = static_cast<int>(out.roots.size());
  return out;
}

}  // namespace nnecon
