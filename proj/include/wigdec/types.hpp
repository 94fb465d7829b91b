#pragma once

// Plain domain types shared by every module. Lengths are in angstrom and
// wavenumbers in inverse angstrom unless a field name says otherwise.

#include <cstddef>
#include <string_view>
#include <variant>

namespace wigdec {

/// Minimum-uncertainty Gaussian packet centred at x0 with mean wavenumber k0
/// and coherence length delta. The momentum spread is 1 / (2 delta).
struct GaussianPacket {
  double x0 = 0.0;
  double k0 = 1.7;
  double delta = 1.1;

  double momentum_spread() const { return 0.5 / delta; }
  void validate() const;
};

enum class StateCase { SingleGaussian, Interferometer, Magnetic };

std::string_view to_string(StateCase c);
StateCase parse_state_case(std::string_view name);

/// Magnetic field region in SI units: field in tesla, length in metres,
/// neutron wavenumber in inverse metres.
struct FieldSetup {
  double b0 = 0.0;
  double length = 0.0;
  double k0 = 0.0;

  void validate() const;
};

/// Normally distributed shifts with mean delta0 and standard deviation sigma.
struct GaussianShift {
  double delta0 = 0.0;
  double sigma = 0.0;
};

/// Delta(theta) = delta0 + delta1 [sin(theta) + sin(r_j theta)] with the
/// Fibonacci ratio r_j = f_j / f_{j+1}.
struct TwoTone {
  double delta0 = 0.0;
  double delta1 = 1.0;
  int j = 1;
};

/// Two-tone shifts whose frequency ratio is the golden mean.
struct GoldenMean {
  double delta0 = 0.0;
  double delta1 = 1.0;
};

using ShiftModel = std::variant<GaussianShift, TwoTone, GoldenMean>;

/// Sampling window for trajectory (time) averages.
///
/// Two-tone models are sampled over one exact period 2 pi f_{j+1} of the
/// phase. The golden mean is replaced by the Fibonacci convergent with index
/// `convergent`, sampled over `period_multiplier` of its exact periods.
struct TrajectoryWindow {
  std::size_t n_samples = std::size_t{1} << 16;
  int period_multiplier = 1;
  int convergent = 20;

  void validate() const;
};

double mean_shift(const ShiftModel &model);

/// True for a Dirac distribution of shifts (sigma = 0 or delta1 = 0).
bool is_degenerate(const ShiftModel &model);

void validate(const ShiftModel &model);

}  // namespace wigdec
