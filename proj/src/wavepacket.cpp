#include "wigdec/wavepacket.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "wigdec/error.hpp"

namespace wigdec {

void GaussianPacket::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::InvalidArgument, "coherence length delta must be > 0");
  }
  if (!(k0 > 0.0) || !std::isfinite(k0)) {
    throw Error(ErrorKind::InvalidArgument, "wavenumber k0 must be > 0");
  }
  if (!std::isfinite(x0)) throw Error(ErrorKind::InvalidArgument, "x0 must be finite");
}

std::string_view to_string(StateCase c) {
  switch (c) {
    case StateCase::SingleGaussian: return "single";
    case StateCase::Interferometer: return "interferometer";
    case StateCase::Magnetic: return "magnetic";
  }
  return "unknown";
}

StateCase parse_state_case(std::string_view name) {
  if (name == "single") return StateCase::SingleGaussian;
  if (name == "interferometer") return StateCase::Interferometer;
  if (name == "magnetic") return StateCase::Magnetic;
  throw Error(ErrorKind::InvalidArgument,
              "unknown case '" + std::string(name) +
                  "' (expected single, interferometer or magnetic)");
}

void FieldSetup::validate() const {
  if (!(b0 > 0.0 && length > 0.0 && k0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "field setup needs B0, L and k0 strictly positive");
  }
}

namespace wavepacket {
namespace {

using std::numbers::pi;

double gauss_x(double u, double delta) { return std::exp(-u * u / (2.0 * delta * delta)); }

}  // namespace

Complex position_amplitude(const GaussianPacket &p, double x) {
  const double norm = std::pow(2.0 * pi * p.delta * p.delta, -0.25);
  const double u = x - p.x0;
  return norm * std::exp(Complex(-u * u / (4.0 * p.delta * p.delta), p.k0 * x));
}

Complex momentum_amplitude(const GaussianPacket &p, double k) {
  const double norm = std::pow(2.0 * p.delta * p.delta / pi, 0.25);
  const double q = k - p.k0;
  return norm * std::exp(Complex(-p.delta * p.delta * q * q, -q * p.x0));
}

std::vector<Branch> branches(StateCase state_case, double shift) {
  switch (state_case) {
    case StateCase::SingleGaussian: return {{1.0, shift}};
    case StateCase::Interferometer: return {{0.5, shift}, {0.5, 0.0}};
    case StateCase::Magnetic: return {{0.5, 0.5 * shift}, {0.5, -0.5 * shift}};
  }
  return {};
}

Complex postselected_amplitude(const GaussianPacket &p, StateCase state_case,
                               double shift, double x) {
  Complex sum{0.0, 0.0};
  for (const Branch &b : branches(state_case, shift)) {
    sum += b.coefficient * position_amplitude(p, x + b.offset);
  }
  return sum;
}

double pure_wigner(const GaussianPacket &p, StateCase state_case, double shift,
                   double x, double k) {
  const double d = p.delta;
  const double q = k - p.k0;
  const double gk = std::exp(-2.0 * d * d * q * q);
  const double u = x - p.x0;
  switch (state_case) {
    case StateCase::SingleGaussian:
      return gauss_x(u + shift, d) * gk / pi;
    case StateCase::Interferometer:
      return gk / (4.0 * pi) *
             (gauss_x(u + shift, d) + gauss_x(u, d) +
              2.0 * gauss_x(u + 0.5 * shift, d) * std::cos(k * shift));
    case StateCase::Magnetic:
      return gk / (4.0 * pi) *
             (gauss_x(u - 0.5 * shift, d) + gauss_x(u + 0.5 * shift, d) +
              2.0 * gauss_x(u, d) * std::cos(k * shift));
  }
  return 0.0;
}

Complex displaced_overlap(const GaussianPacket &p, double a, double b) {
  const double diff = a - b;
  return std::exp(Complex(-diff * diff / (8.0 * p.delta * p.delta), p.k0 * (b - a)));
}

double field_to_shift(const FieldSetup &f, StateCase state_case) {
  if (f.b0 == 0.0) return 0.0;
  f.validate();
  using C = NeutronConstants;
  const double metres = C::mass * C::magnetic_moment * f.b0 * f.length /
                        (C::hbar * C::hbar * f.k0 * f.k0);
  const double factor = state_case == StateCase::Magnetic ? 2.0 : 1.0;
  return factor * metres * 1e10;
}

double shear_for_flight_time(double seconds) {
  using C = NeutronConstants;
  return C::hbar * seconds / C::mass * 1e20;
}

quadrature::PhaseSpaceGrid sheared_grid(const quadrature::PhaseSpaceGrid &grid,
                                        double shear) {
  quadrature::PhaseSpaceGrid out = grid;
  const double a = shear * grid.k_min;
  const double b = shear * grid.k_max;
  out.x_min = grid.x_min + std::min(a, b);
  out.x_max = grid.x_max + std::max(a, b);
  const double ratio = (out.x_max - out.x_min) / (grid.x_max - grid.x_min);
  out.nx = std::bit_ceil(static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(grid.nx))));
  return out;
}

quadrature::SampledField shear_free_evolution(const quadrature::Field2d &w,
                                              const quadrature::PhaseSpaceGrid &grid,
                                              double shear, double tolerance) {
  const quadrature::SampledField original = quadrature::sample(w, grid);
  if (shear == 0.0) return original;
  quadrature::SampledField sheared = quadrature::sample(
      [&](double x, double k) { return w(x - shear * k, k); }, grid);
  // W^2 rather than |W|: it is smooth where W changes sign, so the rule
  // integrates it to full accuracy and only genuine leakage registers.
  const auto square = [](double v) { return v * v; };
  const double before = quadrature::integrate_sampled(original, square);
  const double after = quadrature::integrate_sampled(sheared, square);
  const double lost = (before - after) / before;
  if (lost > tolerance) {
    std::ostringstream os;
    os << "shear " << shear << " moves a fraction " << lost
       << " of the phase-space mass outside the grid";
    throw Error(ErrorKind::SupportEscape, os.str());
  }
  return sheared;
}

}  // namespace wavepacket
}  // namespace wigdec
