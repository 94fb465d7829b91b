#pragma once

namespace wigdec::specfun {

/// Amplitude and modulus of an incomplete elliptic integral of the first kind.
/// `beta` lies in [0, pi/2], `gamma` in [0, 1].
struct EllipticArgs {
  double beta = 0.0;
  double gamma = 0.0;
};

/// F(beta, gamma) = integral_0^beta da / sqrt(1 - gamma^2 sin^2 a).
///
/// Evaluated with the descending Landen (arithmetic-geometric mean)
/// iteration, which keeps full relative accuracy as gamma -> 1.
/// Throws Error{PoleAtOne} for gamma = 1, beta = pi/2 and Error{DomainError}
/// for any other argument outside the domain.
double elliptic_f(EllipticArgs args);

/// Same integral parametrised by the complementary modulus
/// kc = sqrt(1 - gamma^2). Callers that already know kc (the golden-mean
/// density near its caustic) avoid the cancellation in 1 - gamma^2.
double elliptic_f_complementary(double beta, double kc);

/// Complete integral K(gamma) = F(pi/2, gamma).
double elliptic_k(double gamma);

}  // namespace wigdec::specfun
