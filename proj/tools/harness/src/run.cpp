#include "nnecon/harness/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "nnecon/advertisement.hpp"
#include "nnecon/bargaining.hpp"
#include "nnecon/errors.hpp"
#include "nnecon/subscription.hpp"

namespace nnecon::harness {

namespace {

struct Point {
  std::string label;
  std::optional<double> value;
  std::optional<ScenarioConfig> cfg;
  std::string error;
};

SweepRow subscription_row(const ScenarioConfig& cfg) {
  const SubscriptionMarket m(cfg.subscription);
  SubscriptionOutcome o;
  SweepRow row;
  std::string flags;
  if (cfg.bargain) {
    const SubscriptionBargain b = cfg.bargain->timing == BargainTiming::Pre
                                      ? pre_bargain_subscription(m, cfg.bargain->gamma)
                                      : post_bargain_subscription(m, cfg.bargain->gamma);
    o = b.outcome;
    row.p_t = b.p_t;
    if (b.indeterminate) flags = "+Indeterminate";
  } else {
    o = solve_ne(m);
    row.p_t = m.p_t();
  }
  row.p_s = o.p_s;
  row.p_c_or_c = o.p_c;
  row.q = o.q;
  row.D = o.D;
  row.u_isp = o.u_isp;
  row.u_cp = o.u_cp;
  row.regime = std::string(to_string(o.regime)) + flags;
  row.iterations = o.iterations;
  return row;
}

SweepRow ad_row(const ScenarioConfig& cfg, const numerics::SolveConfig& solve) {
  const AdMarket a(cfg.ad);
  AdOutcome o;
  SweepRow row;
  std::string flags;
  if (cfg.bargain) {
    const AdBargain b = cfg.bargain->timing == BargainTiming::Pre
                            ? pre_bargain_ad(a, cfg.bargain->gamma, solve)
                            : post_bargain_ad(a, cfg.bargain->gamma, solve);
    o = b.outcome;
    row.p_t = b.p_t;
    if (b.dual_root) flags = "+DualRoot";
  } else {
    o = solve_equilibrium_ad(a, solve);
    row.p_t = a.p_t();
  }
  row.p_s = o.p_s;
  row.p_c_or_c = o.c;
  row.q = o.q;
  row.D = o.D;
  row.p_a = o.p_a;
  row.u_isp = o.u_isp;
  row.u_cp = o.u_cp;
  row.regime = std::string(to_string(o.regime)) + flags;
  row.iterations = o.iterations;
  return row;
}

SweepRow error_row(const std::string& message, const std::string& regime) {
  SweepRow row;
  row.regime = regime;
  row.error = message;
  return row;
}

std::vector<Point> expand_points(const ScenarioConfig& cfg) {
  std::vector<Point> points;
  auto make = [&](const ScenarioConfig& base, const std::string& var, double v) {
    Point p;
    try {
      p.cfg = with_value(base, var, v);
    } catch (const std::exception& e) {
      p.error = e.what();
    }
    p.value = v;
    return p;
  };

  if (!cfg.sweep && !cfg.series) {
    points.push_back({"none", std::nullopt, cfg, {}});
    return points;
  }

  const std::vector<double> series_values =
      cfg.series ? cfg.series->values : std::vector<double>{0.0};
  for (double s : series_values) {
    ScenarioConfig base = cfg;
    std::string suffix;
    if (cfg.series) {
      if (!cfg.sweep) {
        Point p = make(cfg, cfg.series->var, s);
        p.label = cfg.series->var;
        points.push_back(std::move(p));
        continue;
      }
      suffix = "[" + cfg.series->var + "=" + format_number(s) + "]";
      try {
        base = with_value(cfg, cfg.series->var, s);
      } catch (const std::exception& e) {
        for (int i = 0; i < cfg.sweep->steps; ++i) {
          points.push_back({cfg.sweep->var + suffix, cfg.sweep->value(i), std::nullopt, e.what()});
        }
        continue;
      }
    }
    for (int i = 0; i < cfg.sweep->steps; ++i) {
      Point p = make(base, cfg.sweep->var, cfg.sweep->value(i));
      p.label = cfg.sweep->var + suffix;
      points.push_back(std::move(p));
    }
  }
  return points;
}

}  // namespace

SweepRow solve_point(const ScenarioConfig& cfg, const numerics::SolveConfig& solve) {
  try {
    return cfg.model == ModelKind::Subscription ? subscription_row(cfg) : ad_row(cfg, solve);
  } catch (const Error& e) {
    return error_row(e.what(), "Error(" + std::string(to_string(e.code())) + ")");
  }
}

std::vector<SweepRow> run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  const std::vector<Point> points = expand_points(cfg);
  std::vector<SweepRow> rows(points.size());

  auto solve_one = [&](std::size_t i) {
    const Point& p = points[i];
    SweepRow row = p.cfg ? solve_point(*p.cfg, opts.solve) : error_row(p.error, "Error(InvalidArgument)");
    row.swept_var = p.label;
    row.swept_value = p.value;
    rows[i] = std::move(row);
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, opts.workers)), 1, points.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) solve_one(i);
    return rows;
  }

  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) solve_one(i);
      });
    }
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit_csv(std::span<const SweepRow> rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("emit_csv needs at least one row");
  out << kCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    auto num = [&](double v) { return r.error ? std::string() : format_number(v); };
    out << r.swept_var << ',' << (r.swept_value ? format_number(*r.swept_value) : "") << ','
        << num(r.p_s) << ',' << num(r.p_c_or_c) << ',' << num(r.q) << ',' << num(r.D) << ','
        << (r.p_a && !r.error ? format_number(*r.p_a) : "") << ',' << num(r.u_isp) << ','
        << num(r.u_cp) << ',' << num(r.p_t) << ',' << r.regime << '\n';
  }
}

void emit_csv(std::span<const SweepRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  emit_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace nnecon::harness
