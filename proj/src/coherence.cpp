#include "wigdec/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "wigdec/error.hpp"
#include "wigdec/shiftmodels.hpp"
#include "wigdec/wavepacket.hpp"

namespace wigdec::coherence {
namespace {

using std::numbers::pi;
using quadrature::CompensatedSum;

double sq(double v) { return v * v; }

// Quadrature nodes and weights for an average over normally distributed
// shifts: composite Gauss-Legendre on delta0 +- span sigma with the Gaussian
// density folded into the weights. Panels are narrower than both the packet
// width, the k0 carrier period and sigma itself, so both the overlap kernel
// and the Gaussian weight are resolved.
quadrature::Rule1d gaussian_shift_rule(const GaussianShift &model,
                                       const GaussianPacket &packet,
                                       const AveragingOptions &options) {
  const double half = options.gaussian_span * model.sigma;
  const double h = 0.5 * std::min({packet.delta, 2.0 * pi / packet.k0, model.sigma});
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * half / h));
  quadrature::Rule1d rule = quadrature::composite_gauss_legendre(
      model.delta0 - half, model.delta0 + half, std::max<std::size_t>(panels, 1),
      options.gaussian_order);
  const double norm = 1.0 / std::sqrt(2.0 * pi * sq(model.sigma));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.weights[i] *= norm * std::exp(-0.5 * sq((rule.nodes[i] - model.delta0) / model.sigma));
  }
  return rule;
}

std::vector<double> trajectory_shifts(const ShiftModel &model,
                                      const AveragingOptions &options) {
  TrajectoryWindow window;
  if (std::holds_alternative<TwoTone>(model)) {
    options.two_tone.validate();
    window.n_samples = options.two_tone.n_nodes;
  } else {
    options.golden.validate();
    window.n_samples = options.golden.n_nodes;
    window.convergent = options.golden_convergent;
  }
  return shiftmodels::trajectory_samples(model, window);
}

double trajectory_average_wigner(StateCase state_case, const GaussianPacket &packet,
                                 std::span<const double> shifts, double x, double k) {
  CompensatedSum sum;
  for (double s : shifts) sum.add(wavepacket::pure_wigner(packet, state_case, s, x, k));
  return sum.value() / static_cast<double>(shifts.size());
}

double shift_entropy(const ShiftModel &model, const AveragingOptions &options) {
  if (!options.compute_entropy) return std::numeric_limits<double>::quiet_NaN();
  if (is_degenerate(model)) return -std::numeric_limits<double>::infinity();
  return shiftmodels::entropy(model, options.entropy_window);
}

CoherenceReport pure_report(StateCase state_case, const GaussianPacket &packet,
                            const ShiftModel &model, Path path,
                            const AveragingOptions &options) {
  const OverlapKernel kernel{state_case, packet};
  CoherenceReport r;
  r.norm_N = kernel.trace(mean_shift(model));
  r.purity = r.norm_N * r.norm_N;
  r.epsilon = 0.0;
  r.entropy = shift_entropy(model, options);
  r.path = path;
  return r;
}

}  // namespace

std::string_view to_string(Path p) {
  switch (p) {
    case Path::Analytic: return "analytic";
    case Path::KernelAverage: return "kernel-average";
    case Path::WignerQuadrature: return "wigner-quadrature";
  }
  return "unknown";
}

Path parse_path(std::string_view name) {
  if (name == "analytic") return Path::Analytic;
  if (name == "kernel-average" || name == "kernel") return Path::KernelAverage;
  if (name == "wigner-quadrature" || name == "wigner") return Path::WignerQuadrature;
  throw Error(ErrorKind::InvalidArgument, "unknown path '" + std::string(name) + "'");
}

void CoherenceReport::check_invariants(double slack) const {
  std::ostringstream os;
  if (!(epsilon >= -slack && epsilon < 1.0)) {
    os << "decoherence parameter " << epsilon << " outside [0, 1)";
  } else if (!(norm_N > 0.0 && norm_N <= 1.0 + slack)) {
    os << "trace N=" << norm_N << " outside (0, 1]";
  } else if (!(purity <= norm_N * norm_N * (1.0 + slack))) {
    os << "purity " << purity << " exceeds N^2=" << norm_N * norm_N;
  } else {
    return;
  }
  throw Error(ErrorKind::DomainError, os.str());
}

OverlapKernel::Value OverlapKernel::operator()(double shift_a, double shift_b) const {
  return {pair(shift_a, shift_b), trace(shift_a), trace(shift_b)};
}

double OverlapKernel::pair(double shift_a, double shift_b) const {
  std::complex<double> overlap{0.0, 0.0};
  for (const auto &ba : wavepacket::branches(state_case, shift_a)) {
    for (const auto &bb : wavepacket::branches(state_case, shift_b)) {
      overlap += ba.coefficient * bb.coefficient *
                 wavepacket::displaced_overlap(packet, ba.offset, bb.offset);
    }
  }
  return std::norm(overlap);
}

double OverlapKernel::trace(double shift) const {
  switch (state_case) {
    case StateCase::SingleGaussian:
      return 1.0;
    case StateCase::Interferometer:
    case StateCase::Magnetic:
      // Both branch pairs are separated by the full shift.
      return 0.5 * (1.0 + std::exp(-sq(shift) / (8.0 * sq(packet.delta))) *
                              std::cos(packet.k0 * shift));
  }
  return 0.0;
}

double averaged_wigner_gaussian(StateCase state_case, const GaussianPacket &packet,
                                const GaussianShift &model, double x, double k) {
  const double d2 = sq(packet.delta);
  const double s2 = sq(model.sigma);
  const double shift = model.delta0;
  const double u = x - packet.x0;
  const double gk = std::exp(-2.0 * d2 * sq(k - packet.k0));
  const double wide = d2 + s2;
  const double quarter = d2 + 0.25 * s2;
  switch (state_case) {
    case StateCase::SingleGaussian:
      return std::sqrt(d2 / wide) * gk * std::exp(-sq(u + shift) / (2.0 * wide)) / pi;
    case StateCase::Interferometer: {
      const double shifted = std::sqrt(d2 / wide) * std::exp(-sq(u + shift) / (2.0 * wide));
      const double fixed = std::exp(-sq(u) / (2.0 * d2));
      const double cross =
          2.0 * std::sqrt(d2 / quarter) *
          std::exp(-(sq(u + 0.5 * shift) + sq(k) * d2 * s2) / (2.0 * quarter)) *
          std::cos(k * (2.0 * d2 * shift - u * s2) / (2.0 * quarter));
      return gk / (4.0 * pi) * (shifted + fixed + cross);
    }
    case StateCase::Magnetic: {
      const double branch = std::sqrt(d2 / quarter);
      const double left = branch * std::exp(-sq(u - 0.5 * shift) / (2.0 * quarter));
      const double right = branch * std::exp(-sq(u + 0.5 * shift) / (2.0 * quarter));
      const double cross =
          2.0 * std::exp(-sq(u) / (2.0 * d2) - 0.5 * sq(k) * s2) * std::cos(k * shift);
      return gk / (4.0 * pi) * (left + right + cross);
    }
  }
  return 0.0;
}

double averaged_wigner(StateCase state_case, const GaussianPacket &packet,
                       const ShiftModel &model, double x, double k,
                       const AveragingOptions &options) {
  packet.validate();
  validate(model);
  if (is_degenerate(model)) {
    return wavepacket::pure_wigner(packet, state_case, mean_shift(model), x, k);
  }
  if (const auto *g = std::get_if<GaussianShift>(&model)) {
    return averaged_wigner_gaussian(state_case, packet, *g, x, k);
  }
  const std::vector<double> shifts = trajectory_shifts(model, options);
  return trajectory_average_wigner(state_case, packet, shifts, x, k);
}

double momentum_marginal(StateCase state_case, const GaussianPacket &packet,
                         const GaussianShift &model, double k) {
  const double d2 = sq(packet.delta);
  const double gk = std::exp(-2.0 * d2 * sq(k - packet.k0));
  if (state_case == StateCase::SingleGaussian) {
    return std::sqrt(2.0 * d2 / pi) * gk;
  }
  return std::sqrt(d2 / (2.0 * pi)) * gk *
         (1.0 + std::exp(-0.5 * sq(k) * sq(model.sigma)) * std::cos(k * model.delta0));
}

double position_marginal(StateCase state_case, const GaussianPacket &packet,
                         const GaussianShift &model, double x) {
  const double d2 = sq(packet.delta);
  if (state_case == StateCase::SingleGaussian) {
    const double wide = d2 + sq(model.sigma);
    return std::exp(-sq(x - packet.x0 + model.delta0) / (2.0 * wide)) /
           std::sqrt(2.0 * pi * wide);
  }
  // Integrate the closed-form field over k. The envelope is exp(-2 d^2 (k-k0)^2);
  // panels resolve the k-fringes whose frequency grows with |x| sigma^2.
  const double dk = packet.momentum_spread();
  const double lo = packet.k0 - 20.0 * dk;
  const double hi = packet.k0 + 20.0 * dk;
  const double quarter = d2 + 0.25 * sq(model.sigma);
  const double frequency = std::abs(model.delta0) +
                           std::abs(x - packet.x0) * sq(model.sigma) / quarter + 1.0;
  const double h = 0.5 * std::min(dk, 2.0 * pi / frequency);
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  const quadrature::Rule1d rule = quadrature::composite_gauss_legendre(lo, hi, panels, 8);
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum.add(rule.weights[i] *
            averaged_wigner_gaussian(state_case, packet, model, x, rule.nodes[i]));
  }
  return sum.value();
}

double analytic_norm(StateCase state_case, const GaussianPacket &packet,
                     const GaussianShift &model) {
  if (state_case == StateCase::SingleGaussian) return 1.0;
  const double d2 = sq(packet.delta);
  const double quarter = d2 + 0.25 * sq(model.sigma);
  const double k0 = packet.k0;
  const double shift = model.delta0;
  return 0.5 * (1.0 + std::sqrt(d2 / quarter) *
                          std::exp(-(sq(shift) + 4.0 * d2 * sq(model.sigma) * sq(k0)) /
                                   (8.0 * quarter)) *
                          std::cos(d2 / quarter * k0 * shift));
}

double analytic_epsilon(StateCase state_case, const GaussianPacket &packet,
                        const GaussianShift &model) {
  const double d2 = sq(packet.delta);
  const double s2 = sq(model.sigma);
  const double k0 = packet.k0;
  const double k02 = sq(k0);
  const double D = model.delta0;
  const double D2 = sq(D);
  switch (state_case) {
    case StateCase::SingleGaussian:
      return 1.0 - std::sqrt(d2 / (d2 + s2));
    case StateCase::Interferometer: {
      const double N = analytic_norm(state_case, packet, model);
      const double N2 = N * N;
      const double A = 4.0 * d2 + s2;
      const double Q = 16.0 * d2 * d2 + 12.0 * d2 * s2 + s2 * s2;
      const double damp = D2 + 4.0 * k02 * d2 * s2;
      const double t1 = 0.25 * (1.0 + std::sqrt(d2 / (d2 + s2))) +
                        std::sqrt(d2 / (4.0 * d2 + 2.0 * s2)) *
                            (std::exp(-D2 / (4.0 * d2 + 2.0 * s2)) +
                             std::exp(-2.0 * k02 * d2 * s2 / (2.0 * d2 + s2)));
      const double t2 = std::sqrt(d2 / A) * std::exp(-damp / (2.0 * A)) *
                            std::cos(4.0 * k0 * D * d2 / A) +
                        d2 / A * std::exp(-damp / A) * std::cos(8.0 * k0 * D * d2 / A);
      // Decaying exponent: the product of the two shifted branch overlaps.
      const double t3 = d2 / std::sqrt(Q) * std::exp(-(2.0 * d2 + s2) * damp / Q) *
                        std::cos(4.0 * k0 * D * d2 * (4.0 * d2 + 3.0 * s2) / Q);
      return 1.0 - t1 / (4.0 * N2) - t2 / (2.0 * N2) - t3 / N2;
    }
    case StateCase::Magnetic: {
      const double N = analytic_norm(state_case, packet, model);
      const double N2 = N * N;
      const double A = 4.0 * d2 + s2;
      const double B = 8.0 * d2 + s2;
      const double damp = D2 + 4.0 * k02 * d2 * s2;
      const double root = std::sqrt(d2 / A);
      return 1.0 -
             root * std::exp(-damp / A) * std::cos(8.0 * k0 * D * d2 / A) / (4.0 * N2) -
             root * (1.0 + std::exp(-D2 / A) + std::exp(-4.0 * k02 * d2 * s2 / A)) /
                 (4.0 * N2) -
             4.0 * d2 / B * std::exp(-damp / B) * std::cos(8.0 * k0 * D * d2 / B) / N2;
    }
  }
  return 0.0;
}

CoherenceReport report_from_field(const quadrature::SampledField &field) {
  CoherenceReport r;
  r.path = Path::WignerQuadrature;
  r.norm_N = quadrature::integrate_sampled(field);
  r.purity = 2.0 * pi * quadrature::integrate_sampled(field, [](double v) { return v * v; });
  r.epsilon = 1.0 - r.purity / (r.norm_N * r.norm_N);
  r.entropy = std::numeric_limits<double>::quiet_NaN();
  return r;
}

CoherenceReport coherence_report(StateCase state_case, const GaussianPacket &packet,
                                 const ShiftModel &model, Path path,
                                 const AveragingOptions &options) {
  packet.validate();
  validate(model);
  if (is_degenerate(model)) return pure_report(state_case, packet, model, path, options);

  const auto *gaussian = std::get_if<GaussianShift>(&model);
  CoherenceReport r;
  switch (path) {
    case Path::Analytic: {
      if (gaussian == nullptr) {
        throw Error(ErrorKind::InvalidArgument,
                    "the analytic path exists only for Gaussian shifts");
      }
      r.norm_N = analytic_norm(state_case, packet, *gaussian);
      r.epsilon = analytic_epsilon(state_case, packet, *gaussian);
      r.purity = (1.0 - r.epsilon) * r.norm_N * r.norm_N;
      break;
    }
    case Path::KernelAverage: {
      const OverlapKernel kernel{state_case, packet};
      const auto pair = [&](double a, double b) { return kernel.pair(a, b); };
      if (gaussian != nullptr) {
        const quadrature::Rule1d rule = gaussian_shift_rule(*gaussian, packet, options);
        CompensatedSum n;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          n.add(rule.weights[i] * kernel.trace(rule.nodes[i]));
        }
        r.norm_N = n.value();
        r.purity = quadrature::weighted_pair_sum(rule.nodes, rule.weights, pair);
      } else {
        const std::vector<double> shifts = trajectory_shifts(model, options);
        CompensatedSum n;
        for (double s : shifts) n.add(kernel.trace(s));
        r.norm_N = n.value() / static_cast<double>(shifts.size());
        r.purity = quadrature::symmetric_pair_average(shifts, pair);
      }
      r.epsilon = 1.0 - r.purity / (r.norm_N * r.norm_N);
      break;
    }
    case Path::WignerQuadrature: {
      const quadrature::PhaseSpaceGrid grid =
          options.grid ? *options.grid : quadrature::default_grid(packet, state_case, model);
      quadrature::SampledField field;
      if (gaussian != nullptr) {
        field = quadrature::sample(
            [&](double x, double k) {
              return averaged_wigner_gaussian(state_case, packet, *gaussian, x, k);
            },
            grid);
      } else {
        const std::vector<double> shifts = trajectory_shifts(model, options);
        field = quadrature::sample(
            [&](double x, double k) {
              return trajectory_average_wigner(state_case, packet, shifts, x, k);
            },
            grid);
      }
      r = report_from_field(field);
      break;
    }
  }
  r.path = path;
  r.entropy = shift_entropy(model, options);
  r.check_invariants();
  return r;
}

}  // namespace wigdec::coherence
