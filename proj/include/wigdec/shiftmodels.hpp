#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wigdec/types.hpp"

namespace wigdec::shiftmodels {

/// Golden mean (sqrt(5) - 1) / 2, the limit of f_j / f_{j+1}.
inline constexpr double kGoldenMean = 0.6180339887498948482;

/// Fibonacci numbers with f_0 = f_1 = 1. Throws Error{Overflow} for n > 91.
std::uint64_t fibonacci(int n);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// r_j = f_j / f_{j+1} for 1 <= j <= 90.
Rational fibonacci_ratio(int j);

/// Frequency ratio of the second tone (r_j or the golden mean).
double frequency_ratio(const ShiftModel &model);

/// Phase length 2 pi f_{j+1} after which a two-tone trajectory repeats.
double trajectory_period(const TwoTone &model);

/// Delta(theta) = delta0 + delta1 [sin(theta) + sin(r theta)].
double shift_at(const ShiftModel &model, double theta);

/// d Delta / d theta.
double shift_derivative(const ShiftModel &model, double theta);

/// Density of sin(phi) for uniform phi: 1 / (pi sqrt(1 - s^2)), |s| < 1.
double arcsine_density(double s);

/// Golden-mean limit density written with the elliptic integral of the
/// first kind. Zero outside |Delta - delta0| <= 2 delta1.
double golden_mean_density(const GoldenMean &model, double shift);

/// Density of a two-tone trajectory, w(Delta) = (1/P) sum_i 1/|Delta'(theta_i)|
/// over all roots theta_i of Delta(theta) = Delta within one period P.
///
/// Construction locates every critical phase (zero of Delta') by a uniform
/// pre-scan followed by bisection; evaluation then solves for at most one
/// root on each monotone arc between consecutive critical phases.
class TwoToneDensity {
 public:
  explicit TwoToneDensity(const TwoTone &model, std::size_t brackets_per_cycle = 4096);

  /// Throws Error{CausticPoint} at a critical value, where the density is
  /// infinite. Returns 0 outside the support.
  double operator()(double shift) const;

  /// Caustic-aware variant: +infinity at critical values instead of throwing.
  double value_or_inf(double shift) const;

  bool is_caustic(double shift) const;

  const std::vector<double> &critical_phases() const { return critical_; }
  /// Distinct critical values Delta(theta_c), sorted.
  std::vector<double> caustics() const;
  double support_min() const { return lo_; }
  double support_max() const { return hi_; }
  double period() const { return period_; }
  const TwoTone &model() const { return model_; }

 private:
  double sum_over_roots(double shift) const;

  TwoTone model_;
  double ratio_;
  double period_;
  std::vector<double> critical_;
  std::vector<double> critical_values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// Density of the shift distribution. GaussianShift with sigma = 0 throws
/// Error{DegenerateDelta}; caustics throw Error{CausticPoint}.
double density(const ShiftModel &model, double shift);

/// Number of critical phases of a two-tone trajectory in one period.
std::size_t count_critical_points(const TwoTone &model);

/// Midpoint samples of the trajectory for the window: one exact period for
/// TwoTone; `period_multiplier` periods of the `convergent` surrogate for
/// GoldenMean.
std::vector<double> trajectory_samples(const ShiftModel &model,
                                       const TrajectoryWindow &window);

/// Differential entropy in nats (shift measured in angstrom).
double entropy(const ShiftModel &model, const TrajectoryWindow &window = {});

struct EntropyEstimate {
  double value = 0.0;
  double refined_value = 0.0;
  bool converged = true;
};

/// Entropy at window.n_samples and at twice that; converged when the two
/// differ by less than `tolerance`.
EntropyEstimate entropy_checked(const ShiftModel &model, const TrajectoryWindow &window = {},
                                double tolerance = 1e-3);

/// w(Delta) pi^2 delta1 / ln(8 delta1 / |Delta - delta0|), which tends to 1
/// at the logarithmic caustic. Requires 0 < |u| <= 1e-2.
double caustic_asymptote_check(const GoldenMean &model, double shift);

}  // namespace wigdec::shiftmodels
