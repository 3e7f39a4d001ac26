#pragma once

// One-dimensional kernels used by every solver. Every system in the model
// reduces to a scalar root, a scalar maximisation, or a monotone crossing
// after substitution.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nnecon::numerics {

using ScalarFn = std::function<double(double)>;

struct SolveConfig {
  double abs_tol = 1e-10;
  int max_iter = 200;
  double bracket_expand = 2.0;  ///< geometric factor for auto-bracketing

  /// Throws InvalidArgument unless abs_tol > 0, max_iter >= 1, bracket_expand > 1.
  void validate() const;
};

/// Auto-bracketing gives up after this many expansions.
inline constexpr int kMaxBracketExpansions = 60;

struct RootResult {
  double x = 0.0;
  int iterations = 0;
};

/// Bisection on [lo, hi]. Requires f(lo) f(hi) <= 0 (NoBracket otherwise).
/// Stops once the bracket is narrower than abs_tol or cannot be split any
/// further in floating point; NoConvergence if max_iter is exhausted first.
RootResult bisect_root(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg = {});

/// Grows hi geometrically away from lo, at most kMaxBracketExpansions
/// times, until f(hi) has a sign opposite to f(lo). Returns the new hi.
double expand_bracket_upward(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg = {});

struct MaxResult {
  double argmax = 0.0;
  double max = 0.0;
  int iterations = 0;
};

/// Golden-section search for the maximiser of a unimodal f on [lo, hi].
/// Non-finite values compare as -infinity, so f may encode an infeasible
/// region by returning -inf.
MaxResult golden_max(const ScalarFn& f, double lo, double hi, const SolveConfig& cfg = {});

/// Integral of exp(-(t - mu)^2 / (2 sigma^2)) over [p, inf), which equals
/// sqrt(2 pi sigma^2) (1 - Phi((p - mu) / sigma)). Evaluated through erfc.
double gaussian_upper_integral(double mu, double sigma, double p);
/// Same integrand over (-inf, p].
double gaussian_lower_integral(double mu, double sigma, double p);

enum class FixedPointKind {
  Crossing,             ///< increasing(x) == decreasing(x) inside the interval
  DecreasingDominates,  ///< decreasing > increasing on the whole interval
  IncreasingDominates,  ///< increasing >= decreasing already at lo
};

struct FixedPointResult {
  FixedPointKind kind = FixedPointKind::Crossing;
  double x = 0.0;  ///< crossing, or the endpoint nearest to one
  int iterations = 0;
};

/// Crossing of a nondecreasing and a nonincreasing function on [lo, hi].
/// Monotonicity is checked on a sample grid first (MonotonicityViolation).
FixedPointResult fixed_point_monotone(const ScalarFn& increasing, const ScalarFn& decreasing,
                                      double lo, double hi, const SolveConfig& cfg = {});

struct ConcavityReport {
  std::vector<double> second_differences;  ///< one per interior grid point
  double max_second_difference = 0.0;
  std::vector<std::size_t> violations;     ///< grid indices with value > tol
};

/// Second differences of f over a strictly increasing grid. On a uniform
/// grid each entry is f(x[i-1]) - 2 f(x[i]) + f(x[i+1]); a nonuniform grid
/// uses the same three-point form rescaled to the mean spacing.
ConcavityReport second_difference_scan(const ScalarFn& f, std::span<const double> grid, double tol);

}  // namespace nnecon::numerics
