#include <cmath>

#include <gtest/gtest.h>

#include "nnecon/advertisement.hpp"
#include "nnecon/bargaining.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/harness/oracles.hpp"
#include "nnecon/subscription.hpp"
#include "support.hpp"

namespace nnecon::harness {
namespace {

using nnecon::testing::a1;
using nnecon::testing::a1_normal;
using nnecon::testing::s1;

TEST(DeviationGain, VanishesAtEquilibrium) {
  for (double rho : {0.5, 1.0, 1.5}) {
    const SubscriptionMarket m = s1(rho, 1.0);
    const DeviationGain g = subscription_deviation_gain(m, solve_ne(m));
    EXPECT_LE(g.isp, 1e-9) << rho;
    EXPECT_LE(g.cp, 1e-9) << rho;
  }
}

TEST(DeviationGain, DetectsNonEquilibrium) {
  const SubscriptionMarket m = s1(0.5);
  SubscriptionOutcome off = solve_ne(m);
  off.p_s *= 1.5;
  off.p_c *= 0.5;
  off.u_isp = utility_isp(m, off.p_s, off.p_c, off.q);
  off.u_cp = utility_cp_subscription(m, off.p_s, off.p_c, off.q);
  const DeviationGain g = subscription_deviation_gain(m, off);
  EXPECT_GT(g.isp, 1.0);
  EXPECT_GT(g.cp, 1.0);
}

TEST(AdGridRefinement, AgreesWithCrossingSolver) {
  for (const AdMarket& a : {a1(10.0), a1(20.0, 1.0), a1_normal(10.0)}) {
    const AdOutcome o = solve_equilibrium_ad(a);
    const GridEquilibrium g = ad_grid_refinement(a);
    EXPECT_NEAR(g.c, o.c, 0.02 * (1.0 + o.c) / 10.0);
    EXPECT_NEAR(g.p_s, o.p_s, 1e-3);
    EXPECT_NEAR(g.q, o.q, 1e-3);
    EXPECT_GT(g.levels, 1);
  }
}

TEST(NestedPreBargain, MatchesClosedFormAtInteriorBoundary) {
  const SubscriptionMarket m = s1(0.5);
  EXPECT_NEAR(nested_pre_bargain_subscription(m, 0.5, 0.0, 20.0),
              pre_bargain_subscription(m, 0.5).p_t, 1e-4);
}

TEST(FixedStrategySidePayment, MatchesBargainedPayment) {
  const SubscriptionMarket m = s1(0.8);
  const double p_s = 6.0, p_c = 9.0, q = 1.4;
  const double D = demand_subscription(m, p_s, p_c, q);
  for (double gamma : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(fixed_strategy_side_payment(m, gamma, p_s, p_c, q),
                bargained_side_payment(gamma, m.p_r(), p_s, p_c, q, D), 1e-6)
        << gamma;
  }
  EXPECT_EQ(nnecon::testing::code_of([&] { fixed_strategy_side_payment(m, 0.5, 100.0, 100.0, 0.0); }),
            ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace nnecon::harness
