#include "nnecon/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "nnecon/advertisement.hpp"
#include "nnecon/bargaining.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/harness/config.hpp"
#include "nnecon/harness/oracles.hpp"
#include "nnecon/harness/run.hpp"
#include "nnecon/numerics.hpp"
#include "nnecon/subscription.hpp"

namespace nnecon::harness {

namespace {

// Reference markets: the subscription market and the uniform-valuation ad
// market used throughout the numerical study.
SubscriptionMarket reference_subscription(double rho, double p_t = 0.0) {
  return SubscriptionMarket(SubscriptionParams{200.0, 10.0, 0.5, rho, 0.0, 1.0, 10.0, p_t});
}

AdMarket reference_ad(double K, double p_t = 0.0,
                      ValuationDistribution dist = ValuationDistribution::uniform(10.0)) {
  AdParams p;
  p.D0_0 = 0.0;
  p.K = K;
  p.MB = 1000.0;
  p.dist = dist;
  p.alpha = 10.0;
  p.beta = 0.5;
  p.p_r = 1.0;
  p.p_t = p_t;
  return AdMarket(p);
}

std::string fmt(double v) { return format_number(v); }

class Recorder {
 public:
  explicit Recorder(std::string suite) { report_.suite = std::move(suite); }

  void check(std::string name, bool pass, std::string detail) {
    report_.checks.push_back({std::move(name), pass, std::move(detail)});
  }

  void near(std::string name, double got, double want, double tol) {
    const double err = std::abs(got - want);
    check(std::move(name), err <= tol,
          "got=" + fmt(got) + " want=" + fmt(want) + " err=" + fmt(err) + " tol=" + fmt(tol));
  }

  SuiteReport take() { return std::move(report_); }

 private:
  SuiteReport report_;
};

SuiteReport ne_oracle() {
  Recorder rec("ne-oracle");
  std::mt19937_64 rng(0x6e65636f6eULL);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  numerics::SolveConfig iter_cfg;
  iter_cfg.abs_tol = 1e-12;
  iter_cfg.max_iter = 100000;

  constexpr int kDraws = 1000;
  int disagreements = 0;
  int deviations = 0;
  double worst_diff = 0.0;
  double worst_gain = 0.0;
  std::map<std::string, int> regimes;
  for (int i = 0; i < kDraws; ++i) {
    SubscriptionParams p;
    p.alpha = log_uniform(0.5, 50.0);
    p.p_r = log_uniform(0.1, 10.0);
    p.beta = std::sqrt(4.0 * p.alpha * p.p_r * log_uniform(0.05, 0.95));
    p.D0 = p.alpha * p.p_r * log_uniform(2.0, 50.0);
    p.rho = log_uniform(0.2, 5.0);
    p.delta = uniform(0.0, 1.0);
    p.q_max = log_uniform(0.5, 50.0);
    p.p_t = p.p_r * uniform(-1.0, 2.0);
    const SubscriptionMarket m(p);

    const SubscriptionOutcome closed = solve_ne(m);
    const SubscriptionOutcome iter = solve_ne_iterative(m, iter_cfg);
    const double diff = std::max({std::abs(closed.p_s - iter.p_s), std::abs(closed.p_c - iter.p_c),
                                  std::abs(closed.q - iter.q)});
    worst_diff = std::max(worst_diff, diff);
    if (diff > 1e-6) ++disagreements;
    ++regimes[std::string(to_string(closed.regime))];

    const DeviationGain g = subscription_deviation_gain(m, closed, 201);
    const double rel = std::max(g.isp / (1.0 + std::abs(closed.u_isp)),
                                g.cp / (1.0 + std::abs(closed.u_cp)));
    worst_gain = std::max(worst_gain, rel);
    if (rel > 1e-9) ++deviations;
  }
  std::string mix;
  for (const auto& [name, count] : regimes) mix += " " + name + "=" + std::to_string(count);
  rec.check("closed-form-matches-iteration", disagreements == 0,
            "draws=" + std::to_string(kDraws) + mix + " mismatches=" + std::to_string(disagreements) + " max_diff=" + fmt(worst_diff) +
                " tol=1e-06");
  rec.check("no-improving-deviation", deviations == 0,
            "grid=201 violations=" + std::to_string(deviations) +
                " max_relative_gain=" + fmt(worst_gain) + " tol=1e-09");
  return rec.take();
}

SuiteReport qos_shift() {
  Recorder rec("qos-shift");
  const double q0 = solve_ne(reference_subscription(0.5, 0.0)).q;
  const double q2 = solve_ne(reference_subscription(0.5, 2.0)).q;
  rec.near("q(p_t=0,rho=0.5)", q0, 1.58996, 1e-5);
  rec.near("q(p_t=2,rho=0.5)", q2, 1.67364, 1e-5);
  rec.check("rho=0.5 improves", q2 > q0, "q(2)=" + fmt(q2) + " q(0)=" + fmt(q0));

  const double h0 = solve_ne(reference_subscription(1.5, 0.0)).q;
  const double h2 = solve_ne(reference_subscription(1.5, 2.0)).q;
  rec.check("rho=1.5 degrades", h2 < h0, "q(2)=" + fmt(h2) + " q(0)=" + fmt(h0));

  double spread = 0.0;
  const double base = solve_ne(reference_subscription(1.0, 0.0)).q;
  for (double p_t : {-2.0, -1.0, 1.0, 2.0}) {
    spread = std::max(spread, std::abs(solve_ne(reference_subscription(1.0, p_t)).q - base));
  }
  rec.check("rho=1 constant", spread <= 1e-12, "max |q(p_t) - q(0)|=" + fmt(spread));

  struct Row {
    double rho, delta;
    QosShift want;
  };
  for (const Row& r : {Row{0.5, 0.0, QosShift::Improved}, Row{1.5, 0.0, QosShift::Degraded},
                       Row{0.5, 0.5, QosShift::Unaffected}, Row{1.0, 0.0, QosShift::Unaffected},
                       Row{1.0, 0.5, QosShift::Degraded}, Row{0.25, 0.25, QosShift::Improved}}) {
    SubscriptionParams p = reference_subscription(r.rho).params();
    p.delta = r.delta;
    p.p_t = 2.0;
    const QosShift got = qos_shift_sign(SubscriptionMarket(p));
    rec.check("sign rho=" + fmt(r.rho) + " delta=" + fmt(r.delta), got == r.want,
              std::string(to_string(got)));
  }
  return rec.take();
}

SuiteReport price_trends() {
  Recorder rec("price-trends");
  const ScenarioConfig cfg = parse_config(
      "model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=0.5\ndelta=0\np_r=1\nq_max=10\n"
      "sweep=p_t,0,5,11\nseries=rho,0.5,1.5\n");
  RunOptions opts;
  opts.workers = 4;
  const std::vector<SweepRow> rows = run_scenario(cfg, opts);
  rec.check("row-count", rows.size() == 22, "rows=" + std::to_string(rows.size()));

  for (const std::string label : {"p_t[rho=0.5]", "p_t[rho=1.5]"}) {
    std::vector<SweepRow> series;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(series),
                 [&](const SweepRow& r) { return r.swept_var == label; });
    bool interior = series.size() == 11;
    bool pc_up = true;
    bool ps_down = true;
    for (std::size_t i = 0; i < series.size(); ++i) {
      interior = interior && !series[i].error && series[i].regime == "Interior";
      if (i == 0) continue;
      pc_up = pc_up && series[i].p_c_or_c > series[i - 1].p_c_or_c;
      ps_down = ps_down && series[i].p_s < series[i - 1].p_s;
    }
    rec.check(label + " interior", interior, "rows=" + std::to_string(series.size()));
    rec.check(label + " p_c increasing", pc_up,
              series.empty() ? "" : "p_c " + fmt(series.front().p_c_or_c) + " -> " +
                                        fmt(series.back().p_c_or_c));
    rec.check(label + " p_s decreasing", ps_down,
              series.empty() ? "" : "p_s " + fmt(series.front().p_s) + " -> " +
                                        fmt(series.back().p_s));
  }
  return rec.take();
}

SuiteReport pre_bargain_subscription_suite() {
  Recorder rec("pre-bargain-subscription");
  const SubscriptionMarket low = reference_subscription(0.5);
  const SubscriptionBargain b = pre_bargain_subscription(low, 0.5);
  rec.near("rho=0.5 p_t closed form", b.p_t, 439.75 / 49.75, 1e-6);
  const double nested = nested_pre_bargain_subscription(low, 0.5, 0.0, 20.0);
  rec.near("rho=0.5 nested golden", nested, b.p_t, 1e-4);
  rec.near("rho=0.5 p_s", b.outcome.p_s, 0.0, 1e-9);

  const SubscriptionMarket high = reference_subscription(1.5);
  const SubscriptionBargain h = pre_bargain_subscription(high, 0.5);
  rec.near("rho=1.5 p_t closed form", h.p_t, -4.77237, 1e-5);
  rec.near("rho=1.5 p_c", h.outcome.p_c, 0.0, 1e-9);
  rec.check("rho=1.5 p_s positive", h.outcome.p_s > 0.0, "p_s=" + fmt(h.outcome.p_s));

  for (const auto& m : {low, high}) {
    const double a = pre_bargain_subscription(m, 0.1).p_t;
    const double z = pre_bargain_subscription(m, 0.9).p_t;
    rec.check("rho=" + fmt(m.rho()) + " gamma invariant", a == z,
              "p_t(0.1)=" + fmt(a) + " p_t(0.9)=" + fmt(z));
  }

  const SubscriptionBargain unit = pre_bargain_subscription(reference_subscription(1.0), 0.5);
  rec.check("rho=1 indeterminate", unit.indeterminate && unit.certificate <= 1e-10,
            "|U(-1) - U(1)|=" + fmt(unit.certificate));
  return rec.take();
}

SuiteReport post_bargain_subscription_suite() {
  Recorder rec("post-bargain-subscription");
  const SubscriptionMarket m = reference_subscription(1.5);
  const SubscriptionBargain b = post_bargain_subscription(m, 0.5);
  rec.check("p_t exact", b.p_t == -4.75, "p_t=" + fmt(b.p_t));
  rec.near("q", b.outcome.q, 2.38994, 1e-5);
  rec.near("p_s", b.outcome.p_s, 10.55975, 1e-5);
  rec.near("p_c", b.outcome.p_c, 0.0, 0.0);
  const double numeric =
      fixed_strategy_side_payment(m, 0.5, b.outcome.p_s, b.outcome.p_c, b.outcome.q);
  rec.near("numeric Nash maximiser", numeric, b.p_t, 1e-4);

  for (double gamma : {0.25, 0.75, 1.0}) {
    const double got = post_bargain_subscription(m, gamma).p_t;
    rec.near("gamma=" + fmt(gamma) + " affine", got, -(1.0 - gamma) * 190.0 / 20.0, 1e-12);
  }
  const SubscriptionBargain unit = post_bargain_subscription(reference_subscription(1.0), 0.5);
  rec.near("rho=1 family sum", unit.family_sum, 1.0 + 380.0 / 39.75, 1e-9);
  return rec.take();
}

SuiteReport ad_equilibrium() {
  Recorder rec("ad-equilibrium");
  const AdMarket a = reference_ad(10.0, 0.0);
  const AdOutcome o = solve_equilibrium_ad(a);
  rec.near("c", o.c, 72.56, 0.02);
  rec.near("D", o.D, 16.60, 0.02);
  rec.near("p_s", o.p_s, 2.6595, 1e-3);
  rec.near("q", o.q, 0.4149, 1e-3);
  rec.check("regime", o.regime == AdRegime::Interior, std::string(to_string(o.regime)));

  const GridEquilibrium g = ad_grid_refinement(a);
  rec.near("grid oracle c", g.c, o.c, 0.02);
  rec.near("grid oracle D", g.D, o.D, 0.02);
  rec.near("grid oracle p_s", g.p_s, o.p_s, 1e-3);
  rec.near("grid oracle q", g.q, o.q, 1e-3);

  const AdResiduals r = ad_residuals(a, o);
  rec.near("investment residual", r.curve_gap, 0.0, 1e-8);
  rec.near("price FOC residual", r.d_isp_dps, 0.0, 1e-8);
  rec.near("QoS FOC residual", r.d_isp_dq, 0.0, 1e-8);
  return rec.take();
}

SuiteReport investment_monotonicity_suite() {
  Recorder rec("investment-monotonicity");
  const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  for (double K : {10.0, 20.0, 30.0}) {
    const InvestmentTable t = investment_monotonicity(reference_ad(K), grid);
    bool ok = true;
    bool clamped = false;
    std::string detail;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const double c = t.points[i].c;
      detail += (i ? " " : "c*=") + fmt(c);
      if (clamped) {
        ok = ok && c == 0.0;
      } else if (i > 0) {
        ok = ok && c < t.points[i - 1].c;
      }
      clamped = clamped || c == 0.0;
    }
    rec.check("K=" + fmt(K), ok, detail);
  }
  return rec.take();
}

SuiteReport revenue_concavity() {
  Recorder rec("revenue-concavity");
  std::vector<double> grid(500);
  for (int i = 0; i < 500; ++i) grid[i] = 0.1 + 499.9 * (i + 1) / 500.0;

  const AdMarket normal = reference_ad(10.0, 0.0, ValuationDistribution::normal(5.0, 2.0));
  const numerics::ConcavityReport n = check_ad_concavity(normal, grid, 1e-8);
  rec.check("normal second differences", n.violations.empty(),
            "points=500 max=" + fmt(n.max_second_difference) + " tol=1e-08");

  const AdMarket uniform = reference_ad(10.0);
  double worst = 0.0;
  for (double D : grid) {
    const double analytic = 1000.0 * 10.0 * D / (1000.0 + 10.0 * D);
    worst = std::max(worst, std::abs(ad_revenue(uniform, D) - analytic) / analytic);
  }
  rec.check("uniform matches analytic", worst <= 1e-10, "max relative error=" + fmt(worst));
  const numerics::ConcavityReport u = check_ad_concavity(uniform, grid, 0.0);
  rec.check("uniform strictly concave", u.violations.empty(),
            "max=" + fmt(u.max_second_difference));
  return rec.take();
}

SuiteReport ad_bargain_trends() {
  Recorder rec("ad-bargain-trends");
  const std::vector<double> ks = {10.0, 20.0, 30.0};
  const std::vector<double> gammas = {0.25, 0.5, 0.75};
  std::vector<std::vector<double>> pt(ks.size(), std::vector<double>(gammas.size()));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      pt[i][j] = pre_bargain_ad(reference_ad(ks[i]), gammas[j]).p_t;
    }
  }

  for (std::size_t j = 0; j < gammas.size(); ++j) {
    bool ok = true;
    std::string detail = "p_t*(K=10,20,30)=";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      detail += (i ? "," : "") + fmt(pt[i][j]);
      if (i > 0) ok = ok && pt[i][j] <= pt[i - 1][j];
    }
    rec.check("nonincreasing in K at gamma=" + fmt(gammas[j]), ok, detail);
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    bool ok = true;
    std::string detail = "p_t*(gamma=0.25,0.5,0.75)=";
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      detail += (j ? "," : "") + fmt(pt[i][j]);
      if (j > 0) ok = ok && pt[i][j] <= pt[i][j - 1];
    }
    rec.check("nonincreasing in gamma at K=" + fmt(ks[i]), ok, detail);
  }
  const bool negative =
      std::all_of(pt[2].begin(), pt[2].end(), [](double v) { return v < 0.0; });
  rec.check("negative at K=30", negative,
            "p_t*=" + fmt(pt[2][0]) + "," + fmt(pt[2][1]) + "," + fmt(pt[2][2]));
  return rec.take();
}

SuiteReport kernels() {
  Recorder rec("kernels");
  const double half = numerics::gaussian_upper_integral(5.0, 2.0, 5.0);
  const double mass = std::sqrt(8.0 * std::numbers::pi);
  rec.check("gaussian half mass", std::abs(half - mass / 2.0) / (mass / 2.0) < 1e-10,
            "got=" + fmt(half) + " want=" + fmt(mass / 2.0));
  rec.near("gaussian tail at mu+sigma", numerics::gaussian_upper_integral(5.0, 2.0, 7.0),
           mass * 0.158655253931457, 1e-10);
  rec.near("gaussian mass conservation",
           numerics::gaussian_upper_integral(5.0, 2.0, 3.3) +
               numerics::gaussian_lower_integral(5.0, 2.0, 3.3),
           mass, 1e-10);

  const numerics::SolveConfig cfg;
  rec.near("bisect x-1", numerics::bisect_root([](double x) { return x - 1.0; }, 0.0, 2.0, cfg).x,
           1.0, cfg.abs_tol);
  rec.near("bisect x^2-2",
           numerics::bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, cfg).x,
           std::sqrt(2.0), cfg.abs_tol);
  const numerics::MaxResult quad =
      numerics::golden_max([](double x) { return -(x - 3.0) * (x - 3.0); }, 0.0, 10.0, cfg);
  rec.near("golden quadratic argmax", quad.argmax, 3.0, cfg.abs_tol);
  rec.near("golden quadratic max", quad.max, 0.0, cfg.abs_tol);

  // A flat maximum resolves only to about sqrt(machine epsilon) in x.
  numerics::SolveConfig loose;
  loose.abs_tol = 1e-7;
  const numerics::MaxResult lg =
      numerics::golden_max([](double x) { return std::log(x) - x; }, 0.1, 5.0, loose);
  rec.near("golden log(x)-x argmax", lg.argmax, 1.0, loose.abs_tol);
  rec.near("golden log(x)-x max", lg.max, -1.0, loose.abs_tol);
  return rec.take();
}

struct Entry {
  SuiteInfo info;
  std::function<SuiteReport()> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"ne-oracle", "nash-equilibrium", "closed-form equilibrium vs iteration and grid deviations"},
       ne_oracle},
      {{"qos-shift", "lemma4", "QoS response to a side payment"}, qos_shift},
      {{"price-trends", "", "subscription price trends along a side-payment sweep"},
       price_trends},
      {{"pre-bargain-subscription", "", "side payment bargained before subscription pricing"},
       pre_bargain_subscription_suite},
      {{"post-bargain-subscription", "", "side payment bargained after subscription pricing"},
       post_bargain_subscription_suite},
      {{"ad-equilibrium", "", "advertisement equilibrium vs grid-refinement oracle"},
       ad_equilibrium},
      {{"investment-monotonicity", "lemma6", "CP investment falls as the side payment rises"},
       investment_monotonicity_suite},
      {{"revenue-concavity", "", "ad revenue is concave in demand"}, revenue_concavity},
      {{"ad-bargain-trends", "", "pre-bargained ad side payment across K and gamma"},
       ad_bargain_trends},
      {{"kernels", "", "numerical kernels"}, kernels},
  };
  return r;
}

const Entry* find(std::string_view name) {
  for (const Entry& e : registry()) {
    if (e.info.name == name || (!e.info.alias.empty() && e.info.alias == name)) return &e;
  }
  return nullptr;
}

}  // namespace

bool SuiteReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> v;
    for (const Entry& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

SuiteReport run_suite(std::string_view name) {
  const Entry* e = find(name);
  if (!e) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  return e->run();
}

int verify(std::string_view name, std::ostream& out) {
  std::vector<const Entry*> selected;
  if (name == "all") {
    for (const Entry& e : registry()) selected.push_back(&e);
  } else if (const Entry* e = find(name)) {
    selected.push_back(e);
  } else {
    out << "ERROR\t" << name << "\tunknown suite\n";
    return 2;
  }

  int status = 0;
  for (const Entry* e : selected) {
    try {
      const SuiteReport report = e->run();
      std::size_t passed = 0;
      for (const Check& c : report.checks) {
        out << (c.pass ? "PASS" : "FAIL") << '\t' << report.suite << '\t' << c.name << '\t'
            << c.detail << '\n';
        passed += c.pass ? 1 : 0;
      }
      out << "SUMMARY\t" << report.suite << '\t' << passed << '/' << report.checks.size() << '\n';
      if (!report.passed()) status = std::max(status, 1);
    } catch (const std::exception& ex) {
      out << "ERROR\t" << e->info.name << '\t' << ex.what() << '\n';
      status = 2;
    }
  }
  return status;
}

}  // namespace nnecon::harness
