#pragma once

#include <complex>
#include <vector>

#include "wigdec/quadrature.hpp"
#include "wigdec/types.hpp"

namespace wigdec::wavepacket {

using Complex = std::complex<double>;

/// psi(x) = (2 pi delta^2)^(-1/4) exp[-(x - x0)^2 / (4 delta^2) + i k0 x].
Complex position_amplitude(const GaussianPacket &p, double x);

/// Momentum-space amplitude of the same packet.
Complex momentum_amplitude(const GaussianPacket &p, double k);

/// One term c * psi(x + offset) of a superposition of displaced packets.
struct Branch {
  double coefficient;
  double offset;
};

/// Displaced copies of the packet that make up the state after a shift:
/// psi(x + shift) for a single Gaussian, (psi(x + shift) + psi(x)) / 2 in the
/// interferometer's ordinary channel, and (psi(x + shift/2) + psi(x - shift/2)) / 2
/// after spin post-selection in the magnetic case.
std::vector<Branch> branches(StateCase state_case, double shift);

/// Amplitude of the (unnormalised) post-selected state for a given shift.
Complex postselected_amplitude(const GaussianPacket &p, StateCase state_case,
                               double shift, double x);

/// Closed-form Wigner function of the pure post-shift state.
double pure_wigner(const GaussianPacket &p, StateCase state_case, double shift,
                   double x, double k);

/// <psi(. + a) | psi(. + b)> = exp(-(a-b)^2 / 8 delta^2) exp(i k0 (b - a)).
Complex displaced_overlap(const GaussianPacket &p, double a, double b);

/// Physical constants (SI) used for the field-to-shift conversion.
struct NeutronConstants {
  static constexpr double mass = 1.67492749804e-27;             // kg
  static constexpr double magnetic_moment = 9.6623651e-27;      // J/T
  static constexpr double hbar = 1.054571817e-34;               // J s
};

/// Spatial shift in angstrom produced by a field region. The two spin
/// branches in the magnetic case separate by twice the single-branch shift.
double field_to_shift(const FieldSetup &f, StateCase state_case);

/// Free-evolution shear parameter hbar t / m for a flight time t, in
/// angstrom^2 (so that x -> x + s k).
double shear_for_flight_time(double seconds);

/// Samples W(x - s k, k) on `grid`. Throws Error{SupportEscape} when the
/// sheared field loses more than `tolerance` (relative) of its squared mass
/// through the grid boundary.
quadrature::SampledField shear_free_evolution(const quadrature::Field2d &w,
                                              const quadrature::PhaseSpaceGrid &grid,
                                              double shear, double tolerance = 1e-6);

/// Grid enclosing the image of `grid` under x -> x + s k, with the x node
/// count scaled to keep the same node density.
quadrature::PhaseSpaceGrid sheared_grid(const quadrature::PhaseSpaceGrid &grid,
                                        double shear);

}  // namespace wigdec::wavepacket
