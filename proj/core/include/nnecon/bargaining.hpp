#pragma once

// Side-payment bargaining between ISP and CP under the weighted Nash
// product. All routines here assume a zero tax rate and ignore the p_t
// stored in the market: p_t is what they compute.

#include <limits>
#include <vector>

#include "nnecon/model.hpp"
#include "nnecon/numerics.hpp"

namespace nnecon {

/// (1 - gamma) log u_cp + gamma log u_isp. NonpositiveUtility unless both
/// utilities are positive.
double nash_log_objective(double u_isp, double u_cp, double gamma);

/// Side payment maximising the Nash product at fixed strategies; splits the
/// joint surplus so that gamma U_cp = (1 - gamma) U_isp.
double bargained_side_payment(double gamma, double p_r, double p_s, double p_c, double q,
                              double D);

struct SubscriptionBargain {
  double p_t = 0.0;
  SubscriptionOutcome outcome;
  /// rho = 1: the side payment (pre) or the price split (post) is not pinned down.
  bool indeterminate = false;
  /// Post, rho = 1: the value of p_s + p_c shared by every optimal split.
  double family_sum = std::numeric_limits<double>::quiet_NaN();
  /// Pre, rho = 1: |U(p_t = -1) - U(p_t = +1)|, zero when U ignores p_t.
  double certificate = std::numeric_limits<double>::quiet_NaN();
};

/// Side payment agreed before play, anticipating the equilibrium.
/// rho < 1 drives p_s to 0, rho > 1 drives p_c to 0, rho = 1 is
/// indeterminate (p_t = 0 reported). InfeasibleMarket if D0 <= alpha p_r.
SubscriptionBargain pre_bargain_subscription(const SubscriptionMarket& m, double gamma);

/// Side payment agreed after the joint-surplus strategies are fixed.
SubscriptionBargain post_bargain_subscription(const SubscriptionMarket& m, double gamma);

struct AdBargain {
  double p_t = 0.0;
  AdOutcome outcome;
  bool dual_root = false;
  std::vector<double> roots;  ///< post: every demand root of the joint first-order system
  double scanned_lo = 0.0;    ///< pre: side-payment window searched
  double scanned_hi = 0.0;
};

/// Numerical maximiser of the Nash product over p_t, re-solving the ad
/// equilibrium at every candidate. NonpositiveUtility if no scanned p_t
/// gives both players positive utility.
AdBargain pre_bargain_ad(const AdMarket& a, double gamma, const numerics::SolveConfig& cfg = {});

/// Residual of the joint first-order system in D, defined for D >= alpha / K
/// (the demand at which investment reaches 0).
double post_bargain_ad_residual(const AdMarket& a, double D);

/// All roots of post_bargain_ad_residual on [alpha / K, inf), ascending.
std::vector<double> post_bargain_ad_roots(const AdMarket& a,
                                          const numerics::SolveConfig& cfg = {});

/// Joint-surplus strategies followed by the bargained side payment. When the
/// residual is nonnegative at alpha / K there can be two roots; the one with
/// the larger joint surplus is returned and dual_root is set.
/// NoInteriorSolution if no root gives p_s > 0, c >= 0 and q <= q_max.
AdBargain post_bargain_ad(const AdMarket& a, double gamma, const numerics::SolveConfig& cfg = {});

}  // namespace nnecon
