#include <cmath>

#include <gtest/gtest.h>

#include "nnecon/advertisement.hpp"
#include "nnecon/bargaining.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/subscription.hpp"
#include "support.hpp"

namespace nnecon {
namespace {

using testing::a1;
using testing::code_of;
using testing::s1;

TEST(NashObjective, WeightsLogs) {
  EXPECT_DOUBLE_EQ(nash_log_objective(std::exp(2.0), std::exp(4.0), 0.25), 0.25 * 2.0 + 0.75 * 4.0);
  EXPECT_EQ(code_of([] { nash_log_objective(0.0, 1.0, 0.5); }), ErrorCode::NonpositiveUtility);
  EXPECT_EQ(code_of([] { nash_log_objective(1.0, -1.0, 0.5); }), ErrorCode::NonpositiveUtility);
}

TEST(BargainedSidePayment, SplitsJointSurplus) {
  const SubscriptionMarket base = s1(0.8);
  const double p_s = 6.0, p_c = 9.0, q = 1.4;
  const double D = demand_subscription(base, p_s, p_c, q);
  for (double gamma : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    const double p_t = bargained_side_payment(gamma, base.p_r(), p_s, p_c, q, D);
    const SubscriptionMarket m = base.with_side_payment(p_t);
    const double u_isp = utility_isp(m, p_s, p_c, q);
    const double u_cp = utility_cp_subscription(m, p_s, p_c, q);
    EXPECT_NEAR(gamma * u_cp, (1.0 - gamma) * u_isp, 1e-9) << gamma;
  }
}

TEST(PreBargainSubscription, LowRhoDrivesIspPriceToZero) {
  const SubscriptionBargain b = pre_bargain_subscription(s1(0.5), 0.5);
  EXPECT_NEAR(b.p_t, 439.75 / 49.75, 1e-12);
  EXPECT_EQ(b.outcome.p_s, 0.0);
  EXPECT_EQ(b.outcome.regime, SubscriptionRegime::IspPriceFloor);
  EXPECT_FALSE(b.indeterminate);
  // The reported outcome is the equilibrium of the bargained market.
  const SubscriptionOutcome ne = solve_ne(s1(0.5, b.p_t));
  EXPECT_NEAR(ne.p_c, b.outcome.p_c, 1e-9);
  EXPECT_NEAR(ne.q, b.outcome.q, 1e-9);
}

TEST(PreBargainSubscription, HighRhoDrivesCpPriceToZero) {
  const SubscriptionBargain b = pre_bargain_subscription(s1(1.5), 0.5);
  EXPECT_NEAR(b.p_t, -380.0 / 79.625, 1e-12);
  EXPECT_EQ(b.outcome.p_c, 0.0);
  EXPECT_EQ(b.outcome.regime, SubscriptionRegime::CpPriceFloor);
}

TEST(PreBargainSubscription, GammaInvariantAndUnitRhoIndeterminate) {
  for (double rho : {0.5, 1.5}) {
    EXPECT_EQ(pre_bargain_subscription(s1(rho), 0.1).p_t, pre_bargain_subscription(s1(rho), 0.9).p_t);
  }
  const SubscriptionBargain unit = pre_bargain_subscription(s1(1.0), 0.5);
  EXPECT_TRUE(unit.indeterminate);
  EXPECT_EQ(unit.p_t, 0.0);
  EXPECT_LE(unit.certificate, 1e-10);
}

TEST(PreBargainSubscription, PerturbingPaymentNeverHelps) {
  for (double rho : {0.5, 1.5}) {
    const SubscriptionMarket m = s1(rho);
    const SubscriptionBargain b = pre_bargain_subscription(m, 0.5);
    auto objective = [&](double p_t) {
      const SubscriptionOutcome o = solve_ne(m.with_side_payment(p_t));
      return nash_log_objective(o.u_isp, o.u_cp, 0.5);
    };
    const double at = objective(b.p_t);
    EXPECT_GE(at, objective(b.p_t - 1e-3)) << rho;
    EXPECT_GE(at, objective(b.p_t + 1e-3)) << rho;
  }
}

TEST(PreBargainSubscription, Preconditions) {
  SubscriptionParams p = s1(0.5).params();
  p.delta = 0.1;
  EXPECT_EQ(code_of([&] { pre_bargain_subscription(SubscriptionMarket(p), 0.5); }),
            ErrorCode::InvalidArgument);
  p.delta = 0.0;
  p.D0 = 10.0;
  EXPECT_EQ(code_of([&] { pre_bargain_subscription(SubscriptionMarket(p), 0.5); }),
            ErrorCode::InfeasibleMarket);
  EXPECT_EQ(code_of([] { pre_bargain_subscription(s1(0.5), 1.2); }), ErrorCode::InvalidArgument);
}

TEST(PostBargainSubscription, HighRho) {
  const SubscriptionBargain b = post_bargain_subscription(s1(1.5), 0.5);
  EXPECT_EQ(b.p_t, -4.75);
  EXPECT_NEAR(b.outcome.q, 0.5 * 190.0 / 39.75, 1e-12);
  EXPECT_NEAR(b.outcome.p_s, 380.0 / 39.75 + 1.0, 1e-12);
  EXPECT_EQ(b.outcome.p_c, 0.0);
  EXPECT_EQ(b.outcome.regime, SubscriptionRegime::CpPriceFloor);
  EXPECT_NEAR(0.5 * b.outcome.u_cp, 0.5 * b.outcome.u_isp, 1e-9);
}

TEST(PostBargainSubscription, AffineInGamma) {
  for (double gamma : {0.0, 0.25, 1.0}) {
    EXPECT_NEAR(post_bargain_subscription(s1(2.0), gamma).p_t, -(1.0 - gamma) * 9.5, 1e-12);
  }
}

TEST(PostBargainSubscription, UnitRhoReportsPriceSum) {
  const SubscriptionBargain b = post_bargain_subscription(s1(1.0), 0.5);
  EXPECT_TRUE(b.indeterminate);
  EXPECT_NEAR(b.family_sum, 380.0 / 39.75 + 1.0, 1e-12);
}

TEST(PostBargainSubscription, LowRhoMirror) {
  const SubscriptionBargain b = post_bargain_subscription(s1(0.5), 0.5);
  EXPECT_EQ(b.outcome.p_s, 0.0);
  EXPECT_EQ(b.outcome.regime, SubscriptionRegime::IspPriceFloor);
  // Joint surplus with p_s = 0: 4 alpha rho p_r - beta^2 = 19.75, D0 - alpha rho p_r = 195.
  EXPECT_NEAR(b.outcome.p_c, 390.0 / 19.75 + 1.0, 1e-10);
  EXPECT_NEAR(b.outcome.q, 0.5 * 195.0 / 19.75, 1e-10);
  EXPECT_NEAR(b.p_t, 10.9968354430, 1e-9);
  EXPECT_NEAR(b.outcome.u_isp, b.outcome.u_cp, 1e-9);
}

TEST(PostBargainSubscription, QosAboveCapIsInfeasible) {
  SubscriptionParams p = s1(1.5).params();
  p.q_max = 1.0;
  EXPECT_EQ(code_of([&] { post_bargain_subscription(SubscriptionMarket(p), 0.5); }),
            ErrorCode::InfeasibleMarket);
}

TEST(PreBargainAd, ReferenceValues) {
  const AdBargain b = pre_bargain_ad(a1(20.0), 0.5);
  EXPECT_NEAR(b.p_t, 1.255883, 1e-5);
  EXPECT_LT(b.scanned_lo, b.p_t);
  EXPECT_GT(b.scanned_hi, b.p_t);
  EXPECT_NEAR(pre_bargain_ad(a1(10.0), 0.25).p_t, 3.177221, 1e-5);
  EXPECT_NEAR(pre_bargain_ad(a1(30.0), 0.75).p_t, -0.352492, 1e-5);
}

TEST(PreBargainAd, MaximisesNashProduct) {
  const AdMarket a = a1(20.0);
  const AdBargain b = pre_bargain_ad(a, 0.5);
  auto objective = [&](double p_t) {
    const AdOutcome o = solve_equilibrium_ad(a.with_side_payment(p_t));
    return nash_log_objective(o.u_isp, o.u_cp, 0.5);
  };
  const double at = objective(b.p_t);
  for (double h : {-0.05, -0.01, 0.01, 0.05}) EXPECT_GE(at, objective(b.p_t + h)) << h;
}

TEST(PostBargainAd, ReferenceValues) {
  const AdMarket a = a1(20.0);
  const AdBargain b = post_bargain_ad(a, 0.5);
  EXPECT_NEAR(b.outcome.D, 62.6018777246, 1e-8);
  EXPECT_NEAR(b.outcome.c, 124.2037554492, 1e-7);
  EXPECT_NEAR(b.outcome.p_s, 3.4779494823, 1e-8);
  EXPECT_NEAR(b.p_t, 0.8635705664, 1e-8);
  EXPECT_NEAR(b.outcome.u_isp, 206.73605757, 1e-6);
  EXPECT_NEAR(b.outcome.u_cp, b.outcome.u_isp, 1e-8);
  EXPECT_LT(std::abs(post_bargain_ad_residual(a, b.outcome.D)), 1e-8);
  EXPECT_NEAR(post_bargain_ad(a1(30.0), 0.5).p_t, -2.2200256989, 1e-8);
}

TEST(PostBargainAd, RootsAreRootsOfResidual) {
  const AdMarket a = a1(20.0);
  const auto roots = post_bargain_ad_roots(a);
  ASSERT_FALSE(roots.empty());
  for (double D : roots) {
    EXPECT_GE(D, a.alpha() / a.K());
    EXPECT_LT(std::abs(post_bargain_ad_residual(a, D)), 1e-8);
  }
}

TEST(PostBargainAd, NoInteriorSolutionForSmallK) {
  EXPECT_EQ(code_of([] { post_bargain_ad(a1(10.0), 0.5); }), ErrorCode::NoInteriorSolution);
}

}  // namespace
}  // namespace nnecon
