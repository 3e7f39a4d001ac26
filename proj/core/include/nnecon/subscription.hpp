#pragma once

// Price competition with agile QoS: the ISP picks (p_s, q), the CP picks p_c,
// both simultaneously.

#include "nnecon/model.hpp"
#include "nnecon/numerics.hpp"

namespace nnecon {

struct IspResponse {
  double p_s = 0.0;
  double q = 0.0;
  bool price_floor = false;
  bool qos_capped = false;
  bool zero_demand = false;
};

/// ISP best response to a CP price, over p_s >= 0 and 0 <= q <= q_max.
IspResponse best_response_isp(const SubscriptionMarket& m, double p_c);

/// CP best response, clamped at 0.
double best_response_cp(const SubscriptionMarket& m, double p_s, double q);

/// Partial derivatives of the players' utilities along their own strategies,
/// on the unclamped demand branch.
struct FocResiduals {
  double d_isp_dps = 0.0;
  double d_isp_dq = 0.0;
  double d_cp_dpc = 0.0;
};

FocResiduals foc_residuals(const SubscriptionMarket& m, double p_s, double p_c, double q);

/// Unique Nash equilibrium. Closed forms are tried in the order interior,
/// QoS cap, ISP price floor, CP price floor, then the remaining boundary
/// faces; every candidate is accepted only if it is a fixed point of both
/// best responses.
SubscriptionOutcome solve_ne(const SubscriptionMarket& m);

/// Alternating best responses from (p_s, p_c, q) = (p_r, p_r, q_max / 2)
/// until the largest strategy change drops below cfg.abs_tol. The CP price
/// step is halved whenever the fixed-point gap fails to shrink.
SubscriptionOutcome solve_ne_iterative(const SubscriptionMarket& m,
                                       const numerics::SolveConfig& cfg = {});

enum class QosShift { Improved, Degraded, Unaffected };

std::string_view to_string(QosShift shift);

/// Direction in which a positive side payment m.p_t() moves equilibrium QoS
/// relative to p_t = 0. Read off the sign of 1 - rho - delta, then checked
/// against the two solved equilibria. RegimeMismatch if either is not
/// interior; InvalidArgument unless p_t > 0.
QosShift qos_shift_sign(const SubscriptionMarket& m);

}  // namespace nnecon
