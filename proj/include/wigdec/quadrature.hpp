#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "wigdec/types.hpp"

namespace wigdec::quadrature {

/// Neumaier-compensated running sum. Accumulation order is fixed by the
/// caller, so results are bit-reproducible.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Rule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule1d gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
Rule1d composite_gauss_legendre(double a, double b, std::size_t panels,
                                std::size_t order = 8);

/// Closed trapezoid rule on n equally spaced nodes over [a, b].
Rule1d trapezoid(std::size_t n, double a, double b);

enum class GridRule { GaussLegendre, Trapezoid };

std::string_view to_string(GridRule r);

/// Tensor-product evaluation grid over (x, k) phase space.
struct PhaseSpaceGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  double k_min = -10.0;
  double k_max = 10.0;
  std::size_t nx = 256;
  std::size_t nk = 256;
  GridRule rule = GridRule::GaussLegendre;

  void validate() const;
  Rule1d x_rule() const;
  Rule1d k_rule() const;
  /// Same extents with twice the nodes on both axes.
  PhaseSpaceGrid refined() const;
  /// Largest gap between neighbouring k nodes.
  double max_k_spacing() const;
};

using Field2d = std::function<double(double x, double k)>;

double integrate_2d(const Field2d &f, const PhaseSpaceGrid &grid);

struct CheckedIntegral {
  double value = 0.0;
  double refined_value = 0.0;
  double relative_change = 0.0;
  /// False when doubling the nodes moved the estimate by more than the
  /// tolerance (the resolution warning).
  bool resolved = true;
};

/// Integrates on `grid` and on grid.refined(); reports the relative change.
CheckedIntegral integrate_2d_checked(const Field2d &f, const PhaseSpaceGrid &grid,
                                     double tolerance = 1e-6);

/// Values of a field sampled on the nodes of a grid, x-major.
struct SampledField {
  PhaseSpaceGrid grid;
  std::vector<double> values;

  double at(std::size_t ix, std::size_t ik) const { return values[ix * grid.nk + ik]; }
};

SampledField sample(const Field2d &f, const PhaseSpaceGrid &grid);

/// Weighted sum of f(values) over the grid nodes.
double integrate_sampled(const SampledField &field,
                         const std::function<double(double)> &map = {});

/// Midpoint average over one period. n_nodes >= 64.
struct PeriodicAverageSpec {
  std::size_t n_nodes = 4096;

  void validate() const;
};

/// Midpoint phases (i + 1/2) period / n for i = 0..n-1.
std::vector<double> midpoint_phases(double period, std::size_t n);

double periodic_average(const std::function<double(double)> &g, double period,
                        const PeriodicAverageSpec &spec);

/// Average of g(theta, theta') over the product of two periods. When
/// `symmetric` is set, g is assumed symmetric and only the upper triangle is
/// evaluated.
double periodic_average_2d(const std::function<double(double, double)> &g,
                           double period, const PeriodicAverageSpec &spec,
                           bool symmetric = true);

/// Double average of a symmetric kernel over precomputed sample values
/// (equal weights). Used by the trajectory paths, where evaluating the
/// trajectory once per node avoids recomputing it n times.
template <class Kernel>
double symmetric_pair_average(std::span<const double> samples, Kernel &&kernel) {
  const std::size_t n = samples.size();
  CompensatedSum diag;
  CompensatedSum off;
  for (std::size_t i = 0; i < n; ++i) {
    diag.add(kernel(samples[i], samples[i]));
    CompensatedSum row;
    for (std::size_t j = i + 1; j < n; ++j) row.add(kernel(samples[i], samples[j]));
    off.add(row.value());
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return (diag.value() + 2.0 * off.value()) / nn;
}

/// Weighted double average sum_ij w_i w_j kernel(s_i, s_j) for a symmetric
/// kernel.
template <class Kernel>
double weighted_pair_sum(std::span<const double> samples,
                         std::span<const double> weights, Kernel &&kernel) {
  const std::size_t n = samples.size();
  CompensatedSum diag;
  CompensatedSum off;
  for (std::size_t i = 0; i < n; ++i) {
    diag.add(weights[i] * weights[i] * kernel(samples[i], samples[i]));
    CompensatedSum row;
    for (std::size_t j = i + 1; j < n; ++j) {
      row.add(weights[j] * kernel(samples[i], samples[j]));
    }
    off.add(weights[i] * row.value());
  }
  return diag.value() + 2.0 * off.value();
}

/// Grid covering every branch of the configuration with margin, with k
/// resolution fine enough for the cos(k Delta) interference fringes.
PhaseSpaceGrid default_grid(const GaussianPacket &packet, StateCase state_case,
                            const ShiftModel &model);

}  // namespace wigdec::quadrature
