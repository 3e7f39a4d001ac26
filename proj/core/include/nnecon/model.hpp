#pragma once

// Market primitives shared by every solver: parameter sets, the advertiser
// valuation distribution, outcome records, and the raw demand and utility
// evaluators.

#include <string_view>
#include <variant>

namespace nnecon {

/// Parameters of the subscription market. Prices are per unit of demand.
struct SubscriptionParams {
  double D0 = 0.0;     ///< potential aggregate demand
  double alpha = 0.0;  ///< demand sensitivity to price
  double beta = 0.0;   ///< demand sensitivity to QoS
  double rho = 1.0;    ///< user sensitivity to the CP price relative to the ISP price
  double delta = 0.0;  ///< tax rate on side-payment revenue, in [0, 1]
  double p_r = 0.0;    ///< per-unit bandwidth cost
  double q_max = 10.0; ///< QoS ceiling
  double p_t = 0.0;    ///< side-payment price per unit demand; any sign
};

/// The ISP-facing subset of a market. Both revenue models share the ISP's
/// cost structure, so the ISP optimum is computed from this alone.
struct IspSide {
  double alpha;
  double beta;
  double delta;
  double p_r;
  double q_max;
  double p_t;
};

/// Validated, immutable subscription market. Construction enforces
/// positivity of the sensitivities and cost, delta in [0, 1], and the ISP
/// concavity condition 4 alpha p_r > beta^2.
class SubscriptionMarket {
 public:
  explicit SubscriptionMarket(const SubscriptionParams& params);

  const SubscriptionParams& params() const noexcept { return p_; }
  double D0() const noexcept { return p_.D0; }
  double alpha() const noexcept { return p_.alpha; }
  double beta() const noexcept { return p_.beta; }
  double rho() const noexcept { return p_.rho; }
  double delta() const noexcept { return p_.delta; }
  double p_r() const noexcept { return p_.p_r; }
  double q_max() const noexcept { return p_.q_max; }
  double p_t() const noexcept { return p_.p_t; }

  IspSide isp_side() const noexcept {
    return {p_.alpha, p_.beta, p_.delta, p_.p_r, p_.q_max, p_.p_t};
  }

  SubscriptionMarket with_side_payment(double p_t) const;

 private:
  SubscriptionParams p_;
};

struct UniformValuation {
  double v_max;
};

struct NormalValuation {
  double mu;
  double sigma;
};

/// Advertiser valuation distribution. The normal variant is untruncated, so
/// it carries (small) mass on negative valuations.
class ValuationDistribution {
 public:
  using Shape = std::variant<UniformValuation, NormalValuation>;

  static ValuationDistribution uniform(double v_max);
  static ValuationDistribution normal(double mu, double sigma);

  const Shape& shape() const noexcept { return shape_; }
  bool is_uniform() const noexcept { return std::holds_alternative<UniformValuation>(shape_); }

  double pdf(double v) const;
  double cdf(double v) const;
  /// 1 - X(v), evaluated without cancellation in the upper tail.
  double tail(double v) const;
  /// Largest valuation with positive density (infinity for the normal).
  double upper_support() const;
  /// Valuation scale used to size search brackets: v_max, or mu + 4 sigma.
  double scale() const;

 private:
  explicit ValuationDistribution(Shape shape);
  Shape shape_;
};

/// Parameters of the advertisement market. M advertisers with budget B only
/// ever enter through the product MB, so only the product is stored.
struct AdParams {
  double D0_0 = 0.0;  ///< base demand at zero investment
  double K = 0.0;     ///< investment efficiency, D0(c) = D0_0 + K log(1 + c)
  double MB = 0.0;    ///< advertiser mass times budget
  ValuationDistribution dist = ValuationDistribution::uniform(1.0);
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double p_r = 0.0;
  double q_max = 10.0;
  double p_t = 0.0;
};

class AdMarket {
 public:
  explicit AdMarket(const AdParams& params);

  const AdParams& params() const noexcept { return p_; }
  double D0_0() const noexcept { return p_.D0_0; }
  double K() const noexcept { return p_.K; }
  double MB() const noexcept { return p_.MB; }
  const ValuationDistribution& dist() const noexcept { return p_.dist; }
  double alpha() const noexcept { return p_.alpha; }
  double beta() const noexcept { return p_.beta; }
  double delta() const noexcept { return p_.delta; }
  double p_r() const noexcept { return p_.p_r; }
  double q_max() const noexcept { return p_.q_max; }
  double p_t() const noexcept { return p_.p_t; }

  /// Potential demand after investing c.
  double potential_demand(double c) const;

  IspSide isp_side() const noexcept {
    return {p_.alpha, p_.beta, p_.delta, p_.p_r, p_.q_max, p_.p_t};
  }

  AdMarket with_side_payment(double p_t) const;

 private:
  AdParams p_;
};

enum class SubscriptionRegime { Interior, QosCapped, IspPriceFloor, CpPriceFloor, ZeroDemand };
enum class AdRegime { Interior, IspPriceFloor, ZeroInvestment, Both, QosCapped };

std::string_view to_string(SubscriptionRegime regime);
std::string_view to_string(AdRegime regime);

struct SubscriptionOutcome {
  double p_s = 0.0;
  double p_c = 0.0;
  double q = 0.0;
  double D = 0.0;
  double u_isp = 0.0;
  double u_cp = 0.0;
  SubscriptionRegime regime = SubscriptionRegime::Interior;
  int iterations = 0;
};

struct AdOutcome {
  double p_s = 0.0;
  double q = 0.0;
  double c = 0.0;
  double D = 0.0;
  double p_a = 0.0;  ///< +infinity when D = 0 under an unbounded valuation support
  double u_isp = 0.0;
  double u_cp = 0.0;
  AdRegime regime = AdRegime::Interior;
  int iterations = 0;
};

enum class BargainTiming { Pre, Post };

struct BargainSetting {
  double gamma = 0.5;  ///< ISP bargaining power in [0, 1]
  BargainTiming timing = BargainTiming::Pre;
};

void validate(const BargainSetting& setting);
std::string_view to_string(BargainTiming timing);

/// Demand expressed in demand units; used where an argument could otherwise
/// be mistaken for a price.
struct Demand {
  double value;
};

// Subscription model evaluators. Demand is clamped at zero.
double demand_subscription(const SubscriptionMarket& m, double p_s, double p_c, double q);
double utility_cp_subscription(const SubscriptionMarket& m, double p_s, double p_c, double q);
double utility_isp(const SubscriptionMarket& m, double p_s, double p_c, double q);
double utility_isp(const SubscriptionMarket& m, double p_s, Demand demand, double q);

// Advertisement model evaluators.
double demand_ad(const AdMarket& m, double p_s, double q, double c);
double utility_isp(const AdMarket& m, double p_s, Demand demand, double q);
/// min(user_demand, MB (1 - X(p_a)) / p_a). Throws InvalidArgument for p_a <= 0.
double attention_demand(const AdMarket& m, double p_a, double user_demand);
double utility_cp_ad(const AdMarket& m, double p_a, double attention, double c);

/// ISP strategy maximising (p_s - p_r + (1-delta) p_t) L - p_r q^2 over
/// p_s >= 0, 0 <= q <= q_max, where L = base_demand - alpha p_s + beta q.
/// base_demand collects every demand term the ISP does not control.
struct IspStrategy {
  double p_s = 0.0;
  double q = 0.0;
  double demand = 0.0;  ///< realised (clamped) demand
  bool price_floor = false;
  bool qos_capped = false;
  bool zero_demand = false;
};

IspStrategy isp_optimal_strategy(const IspSide& isp, double base_demand);

}  // namespace nnecon
