#include "nnecon/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nnecon/errors.hpp"

namespace nnecon {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

void validate_isp_side(const IspSide& s, ErrorCode code) {
  require(std::isfinite(s.alpha) && s.alpha > 0.0, code, "alpha must be > 0");
  require(std::isfinite(s.beta) && s.beta > 0.0, code, "beta must be > 0");
  require(std::isfinite(s.p_r) && s.p_r > 0.0, code, "p_r must be > 0");
  require(std::isfinite(s.q_max) && s.q_max > 0.0, code, "q_max must be > 0");
  require(std::isfinite(s.delta) && s.delta >= 0.0 && s.delta <= 1.0, code,
          "delta must lie in [0, 1]");
  require(std::isfinite(s.p_t), code, "p_t must be finite");
  require(4.0 * s.alpha * s.p_r > s.beta * s.beta, code,
          "ISP utility is not concave: need 4 alpha p_r > beta^2");
}

}  // namespace

SubscriptionMarket::SubscriptionMarket(const SubscriptionParams& params) : p_(params) {
  require(std::isfinite(p_.D0) && p_.D0 >= 0.0, ErrorCode::InvalidMarket, "D0 must be >= 0");
  require(std::isfinite(p_.rho) && p_.rho > 0.0, ErrorCode::InvalidMarket, "rho must be > 0");
  validate_isp_side(isp_side(), ErrorCode::InvalidMarket);
}

SubscriptionMarket SubscriptionMarket::with_side_payment(double p_t) const {
  SubscriptionParams p = p_;
  p.p_t = p_t;
  return SubscriptionMarket(p);
}

AdMarket::AdMarket(const AdParams& params) : p_(params) {
  require(std::isfinite(p_.D0_0) && p_.D0_0 >= 0.0, ErrorCode::InvalidMarket, "D0_0 must be >= 0");
  require(std::isfinite(p_.K) && p_.K > 0.0, ErrorCode::InvalidMarket, "K must be > 0");
  require(std::isfinite(p_.MB) && p_.MB > 0.0, ErrorCode::InvalidMarket, "MB must be > 0");
  validate_isp_side(isp_side(), ErrorCode::InvalidMarket);
}

double AdMarket::potential_demand(double c) const {
  if (!(c >= 0.0)) throw Error(ErrorCode::InvalidArgument, "investment must be >= 0");
  return p_.D0_0 + p_.K * std::log1p(c);
}

AdMarket AdMarket::with_side_payment(double p_t) const {
  AdParams p = p_;
  p.p_t = p_t;
  return AdMarket(p);
}

std::string_view to_string(SubscriptionRegime regime) {
  switch (regime) {
    case SubscriptionRegime::Interior: return "Interior";
    case SubscriptionRegime::QosCapped: return "QosCapped";
    case SubscriptionRegime::IspPriceFloor: return "IspPriceFloor";
    case SubscriptionRegime::CpPriceFloor: return "CpPriceFloor";
    case SubscriptionRegime::ZeroDemand: return "ZeroDemand";
  }
  return "Unknown";
}

std::string_view to_string(AdRegime regime) {
  switch (regime) {
    case AdRegime::Interior: return "Interior";
    case AdRegime::IspPriceFloor: return "IspPriceFloor";
    case AdRegime::ZeroInvestment: return "ZeroInvestment";
    case AdRegime::Both: return "Both";
    case AdRegime::QosCapped: return "QosCapped";
  }
  return "Unknown";
}

std::string_view to_string(BargainTiming timing) {
  return timing == BargainTiming::Pre ? "pre" : "post";
}

void validate(const BargainSetting& setting) {
  require(std::isfinite(setting.gamma) && setting.gamma >= 0.0 && setting.gamma <= 1.0,
          ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
}

double demand_subscription(const SubscriptionMarket& m, double p_s, double p_c, double q) {
  return std::max(0.0, m.D0() - m.alpha() * (p_s + m.rho() * p_c) + m.beta() * q);
}

double utility_cp_subscription(const SubscriptionMarket& m, double p_s, double p_c, double q) {
  return (p_c - m.p_t()) * demand_subscription(m, p_s, p_c, q);
}

double utility_isp(const SubscriptionMarket& m, double p_s, Demand demand, double q) {
  return (p_s - m.p_r()) * demand.value + (1.0 - m.delta()) * m.p_t() * demand.value -
         m.p_r() * q * q;
}

double utility_isp(const SubscriptionMarket& m, double p_s, double p_c, double q) {
  return utility_isp(m, p_s, Demand{demand_subscription(m, p_s, p_c, q)}, q);
}

double demand_ad(const AdMarket& m, double p_s, double q, double c) {
  return std::max(0.0, m.potential_demand(c) - m.alpha() * p_s + m.beta() * q);
}

double utility_isp(const AdMarket& m, double p_s, Demand demand, double q) {
  return (p_s - m.p_r()) * demand.value + (1.0 - m.delta()) * m.p_t() * demand.value -
         m.p_r() * q * q;
}

double attention_demand(const AdMarket& m, double p_a, double user_demand) {
  if (!(p_a > 0.0)) throw Error(ErrorCode::InvalidArgument, "ad price must be > 0");
  const double advertisers = m.MB() * m.dist().tail(p_a) / p_a;
  return std::min(user_demand, advertisers);
}

double utility_cp_ad(const AdMarket& m, double p_a, double attention, double c) {
  if (!(c >= 0.0)) throw Error(ErrorCode::InvalidArgument, "investment must be >= 0");
  if (attention == 0.0) return -c;
  return (p_a - m.p_t()) * attention - c;
}

IspStrategy isp_optimal_strategy(const IspSide& isp, double base_demand) {
  const double a = isp.alpha;
  const double b = isp.beta;
  const double pr = isp.p_r;
  // ISP margin per unit demand at p_s = 0.
  const double tau = (1.0 - isp.delta) * isp.p_t - pr;
  const double numerator = base_demand + a * tau;

  IspStrategy out;
  auto price_out = [&] {
    // No positive demand is profitable: price the market out and spend nothing on QoS.
    out = IspStrategy{};
    out.p_s = std::max(0.0, base_demand / a);
    out.price_floor = out.p_s == 0.0;
    out.zero_demand = true;
    return out;
  };
  if (numerator <= 0.0) return price_out();

  auto utility = [&](double p_s, double q) {
    return (p_s + tau) * (base_demand - a * p_s + b * q) - pr * q * q;
  };

  struct Candidate {
    double p_s;
    double q;
    bool floor;
  };
  const double s = 2.0 * pr * numerator / (4.0 * a * pr - b * b);
  const std::array<Candidate, 6> faces{{
      {s - tau, b * s / (2.0 * pr), false},
      {(base_demand + b * isp.q_max - a * tau) / (2.0 * a), isp.q_max, false},
      {(base_demand - a * tau) / (2.0 * a), 0.0, false},
      {0.0, b * tau / (2.0 * pr), true},
      {0.0, isp.q_max, true},
      {0.0, 0.0, true},
  }};

  // The maximiser over the box is the best of the per-face maximisers that
  // land inside the box.
  const double eps = 1e-12;
  bool found = false;
  double best = 0.0;
  for (const Candidate& f : faces) {
    if (f.p_s < -eps * (1.0 + std::abs(f.p_s))) continue;
    if (f.q < -eps * (1.0 + isp.q_max) || f.q > isp.q_max * (1.0 + eps)) continue;
    const double p_s = std::max(0.0, f.p_s);
    const double q = std::clamp(f.q, 0.0, isp.q_max);
    const double u = utility(p_s, q);
    if (!found || u > best) {
      found = true;
      best = u;
      out.p_s = p_s;
      out.q = q;
      out.price_floor = f.floor || p_s == 0.0;
      out.qos_capped = q >= isp.q_max;
    }
  }
  // The quadratic is concave, so a box maximiser without positive demand or
  // with a loss means every point with positive demand loses money.
  out.demand = base_demand - a * out.p_s + b * out.q;
  if (out.demand <= 0.0 || (out.p_s + tau) * out.demand - pr * out.q * out.q < 0.0) {
    return price_out();
  }
  return out;
}

}  // namespace nnecon
