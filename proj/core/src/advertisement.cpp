#include "nnecon/advertisement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nnecon/errors.hpp"

namespace nnecon {

namespace {

// Bisection run down to floating-point resolution; the caller's tolerance
// only ever loosens this.
numerics::SolveConfig tight(const numerics::SolveConfig& cfg, double scale) {
  numerics::SolveConfig out = cfg;
  out.abs_tol = std::min(cfg.abs_tol, 1e-14 * (1.0 + std::abs(scale)));
  out.max_iter = std::max(cfg.max_iter, 400);
  return out;
}

double normal_ad_price(const AdMarket& a, double D) {
  const double mb = a.MB();
  const auto& dist = a.dist();
  auto g = [&](double p) { return mb * dist.tail(p) / p - D; };

  const double start = std::get<NormalValuation>(dist.shape()).mu;
  double lo = start;
  double hi = start;
  if (g(start) > 0.0) {
    for (int k = 0; g(hi) > 0.0; ++k) {
      if (k > 2 * numerics::kMaxBracketExpansions) {
        throw Error(ErrorCode::NoBracket, "ad price bracket did not close upward");
      }
      lo = hi;
      hi *= 2.0;
    }
  } else {
    for (int k = 0; g(lo) < 0.0; ++k) {
      if (k > 20 * numerics::kMaxBracketExpansions) {
        throw Error(ErrorCode::NoBracket, "ad price bracket did not close downward");
      }
      hi = lo;
      lo *= 0.5;
    }
  }
  numerics::SolveConfig cfg;
  cfg.abs_tol = std::numeric_limits<double>::min();
  cfg.max_iter = 2000;
  return numerics::bisect_root(g, lo, hi, cfg).x;
}

AdOutcome build_outcome(const AdMarket& a, double c, int iterations) {
  const AdIspResponse r = isp_best_response_ad(a, c);
  AdOutcome out;
  out.c = c;
  out.p_s = r.p_s;
  out.q = r.q;
  out.D = r.D;
  if (r.D > 0.0) {
    out.p_a = optimal_ad_price(a, r.D);
  } else {
    out.p_a = a.dist().is_uniform() ? a.dist().upper_support()
                                    : std::numeric_limits<double>::infinity();
  }
  out.u_isp = utility_isp(a, r.p_s, Demand{r.D}, r.q);
  out.u_cp = utility_cp_ad(a, out.p_a, r.D, c);
  if (c == 0.0) {
    out.regime = r.price_floor ? AdRegime::Both : AdRegime::ZeroInvestment;
  } else if (r.price_floor) {
    out.regime = AdRegime::IspPriceFloor;
  } else if (r.qos_capped) {
    out.regime = AdRegime::QosCapped;
  } else {
    out.regime = AdRegime::Interior;
  }
  out.iterations = iterations;
  return out;
}

// Equilibrium investment against the ISP's full best response (all
// boundaries included): the root of c -> cp_best_investment(D(c)) - c,
// which is strictly decreasing.
AdOutcome solve_in_investment(const AdMarket& a, const numerics::SolveConfig& cfg, int prior) {
  auto h = [&](double c) {
    const double D = std::max(isp_best_response_ad(a, c).D, kAdDemandFloor);
    return cp_best_investment(a, D) - c;
  };
  const double h0 = h(0.0);
  if (h0 <= 0.0) return build_outcome(a, 0.0, prior);

  const numerics::SolveConfig t = tight(cfg, h0);
  double hi = h0;
  if (h(hi) > 0.0) hi = numerics::expand_bracket_upward(h, 0.0, hi, t);
  const numerics::RootResult r = numerics::bisect_root(h, 0.0, hi, t);
  return build_outcome(a, std::max(0.0, r.x), prior + r.iterations);
}

}  // namespace

double optimal_ad_price(const AdMarket& a, double D) {
  if (!(D >= 0.0)) throw Error(ErrorCode::InvalidArgument, "demand must be >= 0");
  if (const auto* u = std::get_if<UniformValuation>(&a.dist().shape())) {
    return a.MB() * u->v_max / (a.MB() + D * u->v_max);
  }
  if (D == 0.0) {
    throw Error(ErrorCode::NoFiniteCrossing, "normal valuations have no finite ad price at D = 0");
  }
  return normal_ad_price(a, D);
}

double ad_revenue(const AdMarket& a, double D) {
  if (D == 0.0) return 0.0;
  return optimal_ad_price(a, D) * D;
}

double cp_marginal_revenue(const AdMarket& a, double D) {
  if (!(D >= 0.0)) throw Error(ErrorCode::InvalidArgument, "demand must be >= 0");
  if (const auto* u = std::get_if<UniformValuation>(&a.dist().shape())) {
    const double den = a.MB() + D * u->v_max;
    return a.MB() * a.MB() * u->v_max / (den * den);
  }
  const auto& n = std::get<NormalValuation>(a.dist().shape());
  const double p = optimal_ad_price(a, D);
  const double z = (p - n.mu) / n.sigma;
  const double e = std::exp(-0.5 * z * z);
  const double tail_integral = numerics::gaussian_upper_integral(n.mu, n.sigma, p);
  return p * p * e / (p * e + tail_integral);
}

AdIspResponse isp_best_response_ad(const AdMarket& a, double c) {
  const IspStrategy s = isp_optimal_strategy(a.isp_side(), a.potential_demand(c));
  return {s.p_s, s.q, s.demand, s.price_floor, s.qos_capped, s.zero_demand};
}

double cp_best_investment(const AdMarket& a, double D) {
  return std::max(0.0, a.K() * (cp_marginal_revenue(a, D) - a.p_t()) - 1.0);
}

double isp_investment_curve(const AdMarket& a, double D) {
  const double al = a.alpha();
  const double pr = a.p_r();
  const double tau = (1.0 - a.delta()) * a.p_t() - pr;
  const double potential = D * (4.0 * al * pr - a.beta() * a.beta()) / (2.0 * pr * al) - al * tau;
  return std::expm1((potential - a.D0_0()) / a.K());
}

numerics::FixedPointResult ad_demand_crossing(const AdMarket& a, double lo, double hi,
                                              const numerics::SolveConfig& cfg) {
  cfg.validate();
  auto inc = [&](double D) { return isp_investment_curve(a, D); };
  auto dec = [&](double D) { return cp_best_investment(a, std::max(D, kAdDemandFloor)); };
  double width = hi - lo;
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "demand bracket needs hi > lo");
  for (int k = 0; dec(hi) - inc(hi) > 0.0; ++k) {
    if (k >= numerics::kMaxBracketExpansions) {
      throw Error(ErrorCode::NoBracket, "ISP and CP curves do not cross below D = " +
                                            std::to_string(hi));
    }
    width *= cfg.bracket_expand;
    hi = lo + width;
  }
  return numerics::fixed_point_monotone(inc, dec, lo, hi, tight(cfg, hi));
}

AdOutcome solve_equilibrium_ad(const AdMarket& a, const numerics::SolveConfig& cfg) {
  cfg.validate();
  const double lo = kAdDemandFloor;
  const double c_max = cp_best_investment(a, lo);
  double hi = a.potential_demand(c_max) + a.beta() * a.q_max();
  if (!(hi > lo)) hi = lo + 1.0;

  const numerics::FixedPointResult fp = ad_demand_crossing(a, lo, hi, cfg);
  if (fp.kind == numerics::FixedPointKind::Crossing) {
    const double c = cp_best_investment(a, fp.x);
    if (c > 0.0) {
      const AdIspResponse r = isp_best_response_ad(a, c);
      if (!r.price_floor && !r.qos_capped && !r.zero_demand) {
        return build_outcome(a, c, fp.iterations);
      }
    }
  }
  return solve_in_investment(a, cfg, fp.iterations);
}

AdResiduals ad_residuals(const AdMarket& a, const AdOutcome& out) {
  const double tau = (1.0 - a.delta()) * a.p_t() - a.p_r();
  const double L = a.potential_demand(out.c) - a.alpha() * out.p_s + a.beta() * out.q;
  const double s = out.p_s + tau;
  return {cp_best_investment(a, std::max(out.D, kAdDemandFloor)) - out.c, L - a.alpha() * s,
          a.beta() * s - 2.0 * a.p_r() * out.q};
}

InvestmentTable investment_monotonicity(const AdMarket& a, std::span<const double> p_t_grid,
                                        const numerics::SolveConfig& cfg) {
  InvestmentTable table;
  for (double p_t : p_t_grid) {
    const AdOutcome out = solve_equilibrium_ad(a.with_side_payment(p_t), cfg);
    if (!table.points.empty()) {
      const double prev = table.points.back().c;
      if (out.c > prev + 1e-9 * (1.0 + prev)) table.nonincreasing = false;
    }
    table.points.push_back({p_t, out.c, out.regime});
  }
  return table;
}

numerics::ConcavityReport check_ad_concavity(const AdMarket& a, std::span<const double> D_grid,
                                             double tol) {
  for (double D : D_grid) {
    if (!(D > 0.0)) throw Error(ErrorCode::InvalidArgument, "demand grid must be positive");
  }
  return numerics::second_difference_scan([&](double D) { return ad_revenue(a, D); }, D_grid,
                                          tol);
}

}  // namespace nnecon
