#include "nnecon/subscription.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "nnecon/errors.hpp"

namespace nnecon {

namespace {

struct Point {
  double p_s;
  double q;
  double p_c;
};

bool close(double a, double b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(b)); }

double tau(const SubscriptionMarket& m) { return (1.0 - m.delta()) * m.p_t() - m.p_r(); }

std::optional<Point> feasible(const SubscriptionMarket& m, Point x) {
  const double eps = 1e-10;
  if (!std::isfinite(x.p_s) || !std::isfinite(x.q) || !std::isfinite(x.p_c)) return std::nullopt;
  if (x.p_s < -eps * (1.0 + std::abs(x.p_s))) return std::nullopt;
  if (x.p_c < -eps * (1.0 + std::abs(x.p_c))) return std::nullopt;
  if (x.q < -eps * (1.0 + m.q_max()) || x.q > m.q_max() * (1.0 + eps)) return std::nullopt;
  return Point{std::max(0.0, x.p_s), std::clamp(x.q, 0.0, m.q_max()), std::max(0.0, x.p_c)};
}

bool is_equilibrium(const SubscriptionMarket& m, const Point& x) {
  const IspResponse isp = best_response_isp(m, x.p_c);
  const double cp = best_response_cp(m, x.p_s, x.q);
  return close(isp.p_s, x.p_s) && close(isp.q, x.q) && close(cp, x.p_c);
}

Point interior_closed_form(const SubscriptionMarket& m) {
  const double a = m.alpha();
  const double b = m.beta();
  const double pr = m.p_r();
  const double n = m.D0() - a * pr + a * m.p_t() * (1.0 - m.rho() - m.delta());
  const double den = 6.0 * a * pr - b * b;
  return {2.0 * pr * n / den + pr - (1.0 - m.delta()) * m.p_t(), b * n / den,
          2.0 * pr * n / (m.rho() * den) + m.p_t()};
}

Point qos_capped_closed_form(const SubscriptionMarket& m) {
  const double a = m.alpha();
  const double x = m.D0() + m.beta() * m.q_max() - a * m.p_r() +
                   a * (1.0 - m.rho() - m.delta()) * m.p_t();
  return {x / (3.0 * a) + m.p_r() - (1.0 - m.delta()) * m.p_t(), m.q_max(),
          x / (3.0 * a * m.rho()) + m.p_t()};
}

Point isp_floor_closed_form(const SubscriptionMarket& m) {
  const double q = m.beta() * tau(m) / (2.0 * m.p_r());
  const double ar = m.alpha() * m.rho();
  return {0.0, q, (m.D0() + m.beta() * q + ar * m.p_t()) / (2.0 * ar)};
}

Point cp_floor_closed_form(const SubscriptionMarket& m) {
  const IspResponse r = best_response_isp(m, 0.0);
  return {r.p_s, r.q, 0.0};
}

double det3(const std::array<std::array<double, 3>, 3>& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

enum class Bound { Free, Zero, Cap };

// Stationary point of the free coordinates with the others pinned to their
// bounds. Unknowns are ordered (p_s, q, p_c).
std::optional<Point> face_point(const SubscriptionMarket& m, Bound ps, Bound q, Bound pc) {
  const double a = m.alpha();
  const double b = m.beta();
  const double ar = a * m.rho();
  const double t = tau(m);
  std::array<std::array<double, 3>, 3> mat{};
  std::array<double, 3> rhs{};

  if (ps == Bound::Free) {
    mat[0] = {-2.0 * a, b, -ar};
    rhs[0] = -m.D0() + a * t;
  } else {
    mat[0] = {1.0, 0.0, 0.0};
    rhs[0] = 0.0;
  }
  if (q == Bound::Free) {
    mat[1] = {b, -2.0 * m.p_r(), 0.0};
    rhs[1] = -b * t;
  } else {
    mat[1] = {0.0, 1.0, 0.0};
    rhs[1] = q == Bound::Cap ? m.q_max() : 0.0;
  }
  if (pc == Bound::Free) {
    mat[2] = {-a, b, -2.0 * ar};
    rhs[2] = -m.D0() - ar * m.p_t();
  } else {
    mat[2] = {0.0, 0.0, 1.0};
    rhs[2] = 0.0;
  }

  const double d = det3(mat);
  if (d == 0.0) return std::nullopt;
  std::array<double, 3> x{};
  for (int col = 0; col < 3; ++col) {
    auto mc = mat;
    for (int row = 0; row < 3; ++row) mc[row][col] = rhs[row];
    x[col] = det3(mc) / d;
  }
  return Point{x[0], x[1], x[2]};
}

SubscriptionRegime classify(const SubscriptionMarket& m, const Point& x, double demand) {
  if (demand <= 1e-12 * std::max(1.0, m.D0())) return SubscriptionRegime::ZeroDemand;
  if (x.q >= m.q_max()) return SubscriptionRegime::QosCapped;
  if (x.p_s == 0.0) return SubscriptionRegime::IspPriceFloor;
  if (x.p_c == 0.0) return SubscriptionRegime::CpPriceFloor;
  return SubscriptionRegime::Interior;
}

SubscriptionOutcome make_outcome(const SubscriptionMarket& m, const Point& x, int iterations) {
  SubscriptionOutcome out;
  out.p_s = x.p_s;
  out.q = x.q;
  out.p_c = x.p_c;
  out.D = demand_subscription(m, x.p_s, x.p_c, x.q);
  out.u_isp = utility_isp(m, x.p_s, x.p_c, x.q);
  out.u_cp = utility_cp_subscription(m, x.p_s, x.p_c, x.q);
  out.regime = classify(m, x, out.D);
  out.iterations = iterations;
  return out;
}

std::optional<Point> iterate_best_responses(const SubscriptionMarket& m, Point x,
                                            const numerics::SolveConfig& cfg, int& iterations) {
  // The CP price step halves whenever the fixed-point gap stops shrinking.
  double step = 1.0;
  double last_gap = std::numeric_limits<double>::infinity();
  for (iterations = 1; iterations <= cfg.max_iter; ++iterations) {
    const IspResponse isp = best_response_isp(m, x.p_c);
    const double p_c = best_response_cp(m, isp.p_s, isp.q);
    const double gap = std::abs(p_c - x.p_c);
    const double change = std::max({std::abs(isp.p_s - x.p_s), std::abs(isp.q - x.q), gap});
    if (change < cfg.abs_tol) return Point{isp.p_s, isp.q, p_c};
    if (gap >= last_gap) step *= 0.5;
    last_gap = gap;
    x = {isp.p_s, isp.q, x.p_c + step * (p_c - x.p_c)};
  }
  return std::nullopt;
}

}  // namespace

IspResponse best_response_isp(const SubscriptionMarket& m, double p_c) {
  const IspStrategy s = isp_optimal_strategy(m.isp_side(), m.D0() - m.alpha() * m.rho() * p_c);
  return {s.p_s, s.q, s.price_floor, s.qos_capped, s.zero_demand};
}

double best_response_cp(const SubscriptionMarket& m, double p_s, double q) {
  const double ar = m.alpha() * m.rho();
  return std::max(0.0, (m.D0() - m.alpha() * p_s + m.beta() * q + ar * m.p_t()) / (2.0 * ar));
}

FocResiduals foc_residuals(const SubscriptionMarket& m, double p_s, double p_c, double q) {
  const double l = m.D0() - m.alpha() * (p_s + m.rho() * p_c) + m.beta() * q;
  const double s = p_s + tau(m);
  return {l - m.alpha() * s, m.beta() * s - 2.0 * m.p_r() * q,
          l - m.alpha() * m.rho() * (p_c - m.p_t())};
}

SubscriptionOutcome solve_ne(const SubscriptionMarket& m) {
  int tried = 0;
  auto accept = [&](const Point& raw) -> std::optional<Point> {
    ++tried;
    const auto x = feasible(m, raw);
    if (x && is_equilibrium(m, *x)) return x;
    return std::nullopt;
  };

  for (const Point& raw : {interior_closed_form(m), qos_capped_closed_form(m),
                           isp_floor_closed_form(m), cp_floor_closed_form(m)}) {
    if (const auto x = accept(raw)) return make_outcome(m, *x, tried);
  }

  for (Bound ps : {Bound::Free, Bound::Zero}) {
    for (Bound q : {Bound::Free, Bound::Cap, Bound::Zero}) {
      for (Bound pc : {Bound::Free, Bound::Zero}) {
        const auto raw = face_point(m, ps, q, pc);
        if (!raw) continue;
        if (const auto x = accept(*raw)) return make_outcome(m, *x, tried);
      }
    }
  }

  // No face carries positive demand: the equilibrium prices the market out.
  const double p_c0 = std::max(0.0, m.p_t());
  const Point start{std::max(0.0, (m.D0() - m.alpha() * m.rho() * p_c0) / m.alpha()), 0.0, p_c0};
  int iterations = 0;
  const auto x = iterate_best_responses(m, start, numerics::SolveConfig{}, iterations);
  if (x && is_equilibrium(m, *x)) return make_outcome(m, *x, tried + iterations);
  throw Error(ErrorCode::NoConvergence, "no boundary face yields a Nash equilibrium");
}

SubscriptionOutcome solve_ne_iterative(const SubscriptionMarket& m,
                                       const numerics::SolveConfig& cfg) {
  cfg.validate();
  int iterations = 0;
  const auto x =
      iterate_best_responses(m, {m.p_r(), 0.5 * m.q_max(), m.p_r()}, cfg, iterations);
  if (!x) {
    throw Error(ErrorCode::NoConvergence, "best-response iteration exceeded " +
                                              std::to_string(cfg.max_iter) + " sweeps");
  }
  return make_outcome(m, *x, iterations);
}

std::string_view to_string(QosShift shift) {
  switch (shift) {
    case QosShift::Improved: return "Improved";
    case QosShift::Degraded: return "Degraded";
    case QosShift::Unaffected: return "Unaffected";
  }
  return "Unknown";
}

QosShift qos_shift_sign(const SubscriptionMarket& m) {
  if (!(m.p_t() > 0.0)) throw Error(ErrorCode::InvalidArgument, "qos_shift_sign needs p_t > 0");
  const double k = 1.0 - m.rho() - m.delta();
  const QosShift predicted = std::abs(k) <= 1e-12 ? QosShift::Unaffected
                             : k > 0.0            ? QosShift::Improved
                                                  : QosShift::Degraded;

  const SubscriptionOutcome base = solve_ne(m.with_side_payment(0.0));
  const SubscriptionOutcome paid = solve_ne(m);
  if (base.regime != SubscriptionRegime::Interior || paid.regime != SubscriptionRegime::Interior) {
    throw Error(ErrorCode::RegimeMismatch,
                "QoS shift needs interior equilibria, got " + std::string(to_string(base.regime)) +
                    " at p_t = 0 and " + std::string(to_string(paid.regime)) + " at p_t > 0");
  }

  const double dq = paid.q - base.q;
  const double tol = 1e-9 * (1.0 + base.q);
  const QosShift solved = std::abs(dq) <= tol ? QosShift::Unaffected
                          : dq > 0.0          ? QosShift::Improved
                                              : QosShift::Degraded;
  if (solved != predicted) {
    throw Error(ErrorCode::RegimeMismatch, "solved QoS shift disagrees with 1 - rho - delta");
  }
  return predicted;
}

}  // namespace nnecon
