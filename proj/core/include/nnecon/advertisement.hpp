#pragma once

// Advertisement revenue model: the ISP picks (p_s, q), the CP picks its
// content investment c and earns y(D) per unit of user attention.

#include <span>
#include <vector>

#include "nnecon/model.hpp"
#include "nnecon/numerics.hpp"

namespace nnecon {

/// Demand floor used wherever y(D) would otherwise be evaluated at D = 0.
inline constexpr double kAdDemandFloor = 1e-12;

/// Market-clearing ad price y(D). Uniform: MB v_max / (MB + D v_max).
/// Normal: root of MB (1 - X(p)) / p = D by bisection; NoFiniteCrossing at
/// D = 0 where the price is unbounded.
double optimal_ad_price(const AdMarket& a, double D);

/// y(D) D, with the D = 0 limit taken as 0.
double ad_revenue(const AdMarket& a, double D);

/// d/dD [y(D) D]. Same error behaviour as optimal_ad_price.
double cp_marginal_revenue(const AdMarket& a, double D);

struct AdIspResponse {
  double p_s = 0.0;
  double q = 0.0;
  double D = 0.0;
  bool price_floor = false;
  bool qos_capped = false;
  bool zero_demand = false;
};

/// ISP best response to a CP investment c >= 0.
AdIspResponse isp_best_response_ad(const AdMarket& a, double c);

/// CP best investment against realised demand D: K (MR(D) - p_t) - 1, clamped at 0.
double cp_best_investment(const AdMarket& a, double D);

/// Inverse of the interior ISP demand curve, D -> c. Can be negative.
double isp_investment_curve(const AdMarket& a, double D);

/// Crossing in D of the CP curve cp_best_investment and the interior ISP
/// curve on [lo, hi], expanding hi upward when needed.
numerics::FixedPointResult ad_demand_crossing(const AdMarket& a, double lo, double hi,
                                              const numerics::SolveConfig& cfg = {});

/// Unique simultaneous best response (p_s, q, c, D, p_a).
AdOutcome solve_equilibrium_ad(const AdMarket& a, const numerics::SolveConfig& cfg = {});

struct AdResiduals {
  double curve_gap = 0.0;  ///< cp_best_investment(D) - c
  double d_isp_dps = 0.0;
  double d_isp_dq = 0.0;
};

AdResiduals ad_residuals(const AdMarket& a, const AdOutcome& out);

struct InvestmentPoint {
  double p_t = 0.0;
  double c = 0.0;
  AdRegime regime = AdRegime::Interior;
};

struct InvestmentTable {
  std::vector<InvestmentPoint> points;
  bool nonincreasing = true;
};

/// Equilibrium investment along a side-payment grid (taken in the given order).
InvestmentTable investment_monotonicity(const AdMarket& a, std::span<const double> p_t_grid,
                                        const numerics::SolveConfig& cfg = {});

/// Second differences of y(D) D over a positive demand grid.
numerics::ConcavityReport check_ad_concavity(const AdMarket& a, std::span<const double> D_grid,
                                             double tol = 1e-8);

}  // namespace nnecon
