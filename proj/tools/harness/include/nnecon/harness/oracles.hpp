#pragma once

// Brute-force cross-checks that share no solving code with the library's
// closed forms and fixed-point solvers.

#include "nnecon/model.hpp"

namespace nnecon::harness {

struct DeviationGain {
  double isp = 0.0;  ///< best utility gain over a (p_s, q) grid, opponent fixed
  double cp = 0.0;   ///< best utility gain over a p_c grid
};

/// Largest unilateral improvement found on `points`-per-axis grids centred
/// on the candidate equilibrium.
DeviationGain subscription_deviation_gain(const SubscriptionMarket& m,
                                          const SubscriptionOutcome& ne, int points = 201);

struct GridEquilibrium {
  double c = 0.0;
  double p_s = 0.0;
  double q = 0.0;
  double D = 0.0;
  int levels = 0;
};

/// Advertisement equilibrium located by refining a grid over (c, p_s) on the
/// best-response residual. Best responses come from golden-section searches
/// on the raw payoffs and the ad price from bisection on the attention
/// market, so no closed form enters.
GridEquilibrium ad_grid_refinement(const AdMarket& a);

/// Maximiser over p_t in [lo, hi] of the Nash objective at the re-solved
/// subscription equilibrium, counting only interior equilibria.
double nested_pre_bargain_subscription(const SubscriptionMarket& m, double gamma, double lo,
                                       double hi);

/// Maximiser over p_t of the Nash objective with strategies held fixed.
double fixed_strategy_side_payment(const SubscriptionMarket& m, double gamma, double p_s,
                                   double p_c, double q);

}  // namespace nnecon::harness
