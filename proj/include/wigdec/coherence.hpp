#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "wigdec/quadrature.hpp"
#include "wigdec/types.hpp"

namespace wigdec::coherence {

enum class Path { Analytic, KernelAverage, WignerQuadrature };

std::string_view to_string(Path p);
Path parse_path(std::string_view name);

/// Trace, purity and decoherence parameter eps = 1 - Tr(rho^2) / Tr(rho)^2
/// of the shift-averaged state, together with the entropy of the shifts.
struct CoherenceReport {
  double norm_N = 1.0;
  double purity = 1.0;
  double epsilon = 0.0;
  /// Nats; -infinity for a Dirac shift distribution, NaN when not requested.
  double entropy = 0.0;
  Path path = Path::KernelAverage;

  /// Tr(rho) - Tr(rho^2).
  double idempotency_defect() const { return norm_N - purity; }
  /// Throws Error{DomainError} unless 0 <= eps < 1, 0 < N <= 1 and
  /// purity <= N^2, each up to `slack`.
  void check_invariants(double slack = 1e-9) const;
};

/// Pairwise trace Tr[rho_a rho_b] of the pure post-shift states, with the
/// single-state traces n(a) = Tr rho_a, in closed form from Gaussian
/// overlaps of the displaced branches.
struct OverlapKernel {
  StateCase state_case = StateCase::SingleGaussian;
  GaussianPacket packet;

  struct Value {
    double pair;
    double trace_a;
    double trace_b;
  };

  Value operator()(double shift_a, double shift_b) const;
  double pair(double shift_a, double shift_b) const;
  double trace(double shift) const;
};

/// Numerical settings for the averaging engines.
struct AveragingOptions {
  /// Midpoint nodes per axis over one exact two-tone period.
  quadrature::PeriodicAverageSpec two_tone{4096};
  /// Midpoint nodes per axis for the golden-mean convergent surrogate.
  quadrature::PeriodicAverageSpec golden{8192};
  int golden_convergent = 20;
  /// Gaussian shifts: composite Gauss-Legendre over delta0 +- span * sigma.
  double gaussian_span = 12.0;
  std::size_t gaussian_order = 8;
  /// Entropy sampling; only used when compute_entropy is set.
  TrajectoryWindow entropy_window{};
  bool compute_entropy = true;
  /// Phase-space grid for the Wigner-quadrature path; default_grid() if unset.
  std::optional<quadrature::PhaseSpaceGrid> grid;
};

/// Closed-form shift average of the pure Wigner function over Gaussian shifts.
double averaged_wigner_gaussian(StateCase state_case, const GaussianPacket &packet,
                                const GaussianShift &model, double x, double k);

/// Shift-averaged Wigner function. Gaussian shifts use the closed forms;
/// trajectory models average the pure Wigner function over the trajectory.
/// Degenerate models return the pure Wigner function at delta0.
double averaged_wigner(StateCase state_case, const GaussianPacket &packet,
                       const ShiftModel &model, double x, double k,
                       const AveragingOptions &options = {});

/// k-marginal of the averaged Wigner function (the x-integral).
double momentum_marginal(StateCase state_case, const GaussianPacket &packet,
                         const GaussianShift &model, double k);

/// x-marginal. Closed form for the single Gaussian; the double cases are
/// integrated over k numerically.
double position_marginal(StateCase state_case, const GaussianPacket &packet,
                         const GaussianShift &model, double x);

/// Detection probability N = <Tr rho_Delta> over Gaussian shifts (equal for
/// the interferometer and magnetic cases, 1 for the single Gaussian).
double analytic_norm(StateCase state_case, const GaussianPacket &packet,
                     const GaussianShift &model);

/// Closed-form decoherence parameter for Gaussian shifts.
double analytic_epsilon(StateCase state_case, const GaussianPacket &packet,
                        const GaussianShift &model);

/// N, purity and eps from a sampled averaged Wigner field.
CoherenceReport report_from_field(const quadrature::SampledField &field);

/// Full report along the requested path. The analytic path exists only for
/// Gaussian shifts.
CoherenceReport coherence_report(StateCase state_case, const GaussianPacket &packet,
                                 const ShiftModel &model, Path path = Path::KernelAverage,
                                 const AveragingOptions &options = {});

}  // namespace wigdec::coherence
