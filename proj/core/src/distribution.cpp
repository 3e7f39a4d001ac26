#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nnecon/errors.hpp"
#include "nnecon/model.hpp"
#include "nnecon/numerics.hpp"

namespace nnecon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Composite Simpson over [a, b]; used only for the construction-time mass check.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

ValuationDistribution::ValuationDistribution(Shape shape) : shape_(shape) {
  double mass = 0.0;
  if (const auto* u = std::get_if<UniformValuation>(&shape_)) {
    mass = simpson([this](double v) { return pdf(v); }, 0.0, u->v_max, 2);
  } else {
    const auto& n = std::get<NormalValuation>(shape_);
    mass = simpson([this](double v) { return pdf(v); }, n.mu - 12.0 * n.sigma,
                   n.mu + 12.0 * n.sigma, 4000);
  }
  if (std::abs(mass - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidArgument,
                "valuation density integrates to " + std::to_string(mass));
  }
}

ValuationDistribution ValuationDistribution::uniform(double v_max) {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw Error(ErrorCode::InvalidArgument, "uniform v_max must be finite and > 0");
  }
  return ValuationDistribution(UniformValuation{v_max});
}

ValuationDistribution ValuationDistribution::normal(double mu, double sigma) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidArgument, "normal mu must be finite and > 0");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "normal sigma must be finite and > 0");
  }
  return ValuationDistribution(NormalValuation{mu, sigma});
}

double ValuationDistribution::pdf(double v) const {
  return std::visit(
      overloaded{
          [v](const UniformValuation& u) { return (v >= 0.0 && v <= u.v_max) ? 1.0 / u.v_max : 0.0; },
          [v](const NormalValuation& n) {
            const double z = (v - n.mu) / n.sigma;
            return std::exp(-0.5 * z * z) / (n.sigma * std::sqrt(2.0 * std::numbers::pi));
          },
      },
      shape_);
}

double ValuationDistribution::cdf(double v) const {
  return std::visit(
      overloaded{
          [v](const UniformValuation& u) {
            if (v <= 0.0) return 0.0;
            if (v >= u.v_max) return 1.0;
            return v / u.v_max;
          },
          [v](const NormalValuation& n) {
            return 0.5 * std::erfc((n.mu - v) / (n.sigma * std::numbers::sqrt2));
          },
      },
      shape_);
}

double ValuationDistribution::tail(double v) const {
  return std::visit(
      overloaded{
          [v](const UniformValuation& u) {
            if (v <= 0.0) return 1.0;
            if (v >= u.v_max) return 0.0;
            return (u.v_max - v) / u.v_max;
          },
          [v](const NormalValuation& n) {
            return numerics::gaussian_upper_integral(n.mu, n.sigma, v) /
                   (n.sigma * std::sqrt(2.0 * std::numbers::pi));
          },
      },
      shape_);
}

double ValuationDistribution::upper_support() const {
  if (const auto* u = std::get_if<UniformValuation>(&shape_)) return u->v_max;
  return std::numeric_limits<double>::infinity();
}

double ValuationDistribution::scale() const {
  if (const auto* u = std::get_if<UniformValuation>(&shape_)) return u->v_max;
  const auto& n = std::get<NormalValuation>(shape_);
  return n.mu + 4.0 * n.sigma;
}

}  // namespace nnecon
