#include "wigdec/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wigdec/error.hpp"

namespace wigdec::quadrature {
namespace {

constexpr std::size_t kMaxNodes = 8192;

std::size_t next_pow2(std::size_t n) { return std::bit_ceil(n); }

}  // namespace

Rule1d gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        const auto kd = static_cast<double>(k);
        p0 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p2) / kd;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

Rule1d composite_gauss_legendre(double a, double b, std::size_t panels,
                                std::size_t order) {
  if (panels == 0) throw Error(ErrorKind::InvalidArgument, "composite rule needs >= 1 panel");
  const Rule1d base = gauss_legendre(order);
  Rule1d rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t i = 0; i < order; ++i) {
      rule.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

Rule1d trapezoid(std::size_t n, double a, double b) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "trapezoid rule needs n >= 2");
  Rule1d rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, (b - a) / static_cast<double>(n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  rule.weights.front() *= 0.5;
  rule.weights.back() *= 0.5;
  return rule;
}

std::string_view to_string(GridRule r) {
  return r == GridRule::GaussLegendre ? "gauss-legendre" : "trapezoid";
}

void PhaseSpaceGrid::validate() const {
  std::ostringstream os;
  if (nx < 16 || nk < 16) {
    os << "grid needs at least 16 nodes per axis (nx=" << nx << ", nk=" << nk << ")";
  } else if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
    os << "invalid x extent [" << x_min << ", " << x_max << "]";
  } else if (!(std::isfinite(k_min) && std::isfinite(k_max) && k_min < k_max)) {
    os << "invalid k extent [" << k_min << ", " << k_max << "]";
  } else {
    return;
  }
  throw Error(ErrorKind::InvalidArgument, os.str());
}

Rule1d PhaseSpaceGrid::x_rule() const {
  return rule == GridRule::GaussLegendre ? gauss_legendre(nx, x_min, x_max)
                                         : trapezoid(nx, x_min, x_max);
}

Rule1d PhaseSpaceGrid::k_rule() const {
  return rule == GridRule::GaussLegendre ? gauss_legendre(nk, k_min, k_max)
                                         : trapezoid(nk, k_min, k_max);
}

PhaseSpaceGrid PhaseSpaceGrid::refined() const {
  PhaseSpaceGrid g = *this;
  g.nx *= 2;
  g.nk *= 2;
  return g;
}

double PhaseSpaceGrid::max_k_spacing() const {
  const Rule1d r = k_rule();
  double gap = 0.0;
  for (std::size_t i = 1; i < r.nodes.size(); ++i) {
    gap = std::max(gap, r.nodes[i] - r.nodes[i - 1]);
  }
  return gap;
}

double integrate_2d(const Field2d &f, const PhaseSpaceGrid &grid) {
  grid.validate();
  const Rule1d xr = grid.x_rule();
  const Rule1d kr = grid.k_rule();
  CompensatedSum total;
  for (std::size_t i = 0; i < xr.nodes.size(); ++i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < kr.nodes.size(); ++j) {
      row.add(kr.weights[j] * f(xr.nodes[i], kr.nodes[j]));
    }
    total.add(xr.weights[i] * row.value());
  }
  return total.value();
}

CheckedIntegral integrate_2d_checked(const Field2d &f, const PhaseSpaceGrid &grid,
                                     double tolerance) {
  CheckedIntegral out;
  out.value = integrate_2d(f, grid);
  out.refined_value = integrate_2d(f, grid.refined());
  const double scale = std::max(std::abs(out.refined_value), 1e-300);
  out.relative_change = std::abs(out.refined_value - out.value) / scale;
  out.resolved = out.relative_change <= tolerance;
  return out;
}

SampledField sample(const Field2d &f, const PhaseSpaceGrid &grid) {
  grid.validate();
  SampledField field{grid, {}};
  field.values.resize(grid.nx * grid.nk);
  const Rule1d xr = grid.x_rule();
  const Rule1d kr = grid.k_rule();
  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t j = 0; j < grid.nk; ++j) {
      field.values[i * grid.nk + j] = f(xr.nodes[i], kr.nodes[j]);
    }
  }
  return field;
}

double integrate_sampled(const SampledField &field,
                         const std::function<double(double)> &map) {
  const Rule1d xr = field.grid.x_rule();
  const Rule1d kr = field.grid.k_rule();
  CompensatedSum total;
  for (std::size_t i = 0; i < field.grid.nx; ++i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < field.grid.nk; ++j) {
      const double v = field.at(i, j);
      row.add(kr.weights[j] * (map ? map(v) : v));
    }
    total.add(xr.weights[i] * row.value());
  }
  return total.value();
}

void PeriodicAverageSpec::validate() const {
  if (n_nodes < 64) {
    throw Error(ErrorKind::InvalidArgument, "periodic average needs n_nodes >= 64");
  }
}

std::vector<double> midpoint_phases(double period, std::size_t n) {
  std::vector<double> phases(n);
  for (std::size_t i = 0; i < n; ++i) {
    phases[i] = period * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  return phases;
}

double periodic_average(const std::function<double(double)> &g, double period,
                        const PeriodicAverageSpec &spec) {
  spec.validate();
  CompensatedSum sum;
  for (double theta : midpoint_phases(period, spec.n_nodes)) sum.add(g(theta));
  return sum.value() / static_cast<double>(spec.n_nodes);
}

double periodic_average_2d(const std::function<double(double, double)> &g,
                           double period, const PeriodicAverageSpec &spec,
                           bool symmetric) {
  spec.validate();
  const std::vector<double> phases = midpoint_phases(period, spec.n_nodes);
  if (symmetric) {
    return symmetric_pair_average(phases, g);
  }
  CompensatedSum total;
  for (double a : phases) {
    CompensatedSum row;
    for (double b : phases) row.add(g(a, b));
    total.add(row.value());
  }
  const auto n = static_cast<double>(spec.n_nodes);
  return total.value() / (n * n);
}

PhaseSpaceGrid default_grid(const GaussianPacket &packet, StateCase state_case,
                            const ShiftModel &model) {
  packet.validate();
  validate(model);
  const double delta = packet.delta;
  const double shift = mean_shift(model);
  double sigma = 0.0;
  double spread = 0.0;  // half-range of a trajectory shift about its mean
  if (const auto *g = std::get_if<GaussianShift>(&model)) {
    sigma = g->sigma;
  } else if (const auto *t = std::get_if<TwoTone>(&model)) {
    spread = 2.0 * t->delta1;
  } else {
    spread = 2.0 * std::get<GoldenMean>(model).delta1;
  }

  struct Branch {
    double centre;
    double half_range;
    double width;
  };
  std::vector<Branch> branches;
  const double x0 = packet.x0;
  const double widened = std::sqrt(delta * delta + sigma * sigma);
  switch (state_case) {
    case StateCase::SingleGaussian:
      branches.push_back({x0 - shift, spread, widened});
      break;
    case StateCase::Interferometer:
      branches.push_back({x0 - shift, spread, widened});
      branches.push_back({x0, 0.0, delta});
      branches.push_back({x0 - 0.5 * shift, 0.5 * spread, delta});
      break;
    case StateCase::Magnetic: {
      const double w = std::sqrt(delta * delta + 0.25 * sigma * sigma);
      branches.push_back({x0 - 0.5 * shift, 0.5 * spread, w});
      branches.push_back({x0 + 0.5 * shift, 0.5 * spread, w});
      branches.push_back({x0, 0.0, delta});
      break;
    }
  }

  PhaseSpaceGrid grid;
  grid.x_min = branches.front().centre;
  grid.x_max = branches.front().centre;
  for (const Branch &b : branches) {
    grid.x_min = std::min(grid.x_min, b.centre - b.half_range - 10.0 * b.width);
    grid.x_max = std::max(grid.x_max, b.centre + b.half_range + 10.0 * b.width);
  }
  const double dk = packet.momentum_spread();
  grid.k_min = packet.k0 - 10.0 * dk;
  grid.k_max = packet.k0 + 10.0 * dk;
  grid.nx = 256;
  grid.nk = 256;
  grid.rule = GridRule::GaussLegendre;

  // Narrowest x feature is the unshifted width delta; narrowest k feature is
  // the momentum spread. Gauss-Legendre gaps are at most ~pi/2 times the mean.
  const auto needed = [](double span, double feature) {
    const double n = std::numbers::pi * span / (2.0 * feature / 3.0);
    return next_pow2(static_cast<std::size_t>(std::ceil(n)));
  };
  grid.nx = std::clamp(needed(grid.x_max - grid.x_min, delta), grid.nx, kMaxNodes);
  grid.nk = std::clamp(needed(grid.k_max - grid.k_min, dk), grid.nk, kMaxNodes);

  if (state_case != StateCase::SingleGaussian) {
    // cos(k Delta) fringes: node spacing below one eighth of the fringe period.
    double frequency = std::abs(shift) + spread;
    if (state_case == StateCase::Interferometer) frequency += 10.0 * sigma;
    if (frequency > 0.0) {
      const double limit = (2.0 * std::numbers::pi / frequency) / 8.0;
      while (grid.max_k_spacing() >= limit && grid.nk < kMaxNodes) grid.nk *= 2;
    }
  }
  return grid;
}

}  // namespace wigdec::quadrature
