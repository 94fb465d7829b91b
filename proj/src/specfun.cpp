#include "wigdec/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wigdec/error.hpp"

namespace wigdec::specfun {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_amplitude(double beta) {
  // A few ulps of slack so that pi/2 computed by the caller is accepted.
  constexpr double slack = 8.0 * std::numeric_limits<double>::epsilon();
  if (!(beta >= 0.0 && beta <= kHalfPi + slack)) {
    std::ostringstream os;
    os << "amplitude beta=" << beta << " outside [0, pi/2]";
    throw Error(ErrorKind::DomainError, os.str());
  }
}

bool is_quarter_period(double beta) {
  return std::abs(beta - kHalfPi) <= 8.0 * std::numeric_limits<double>::epsilon();
}

// Descending Landen transformation. The amplitude roughly doubles each step;
// the branch of the arctangent is chosen so that phi stays continuous.
double landen_agm(double beta, double kc) {
  // Extended precision: near the logarithmic pole the phase is amplified
  // by every halving step and double rounding shows up at ~1e-13.
  using real = long double;
  constexpr real pi = std::numbers::pi_v<long double>;
  real a = 1.0L;
  real b = kc;
  real phi = beta;
  real scale = 1.0L;
  for (int iter = 0; iter < 64; ++iter) {
    const real m = std::round(phi / pi);
    const real psi = phi - m * pi;
    phi = phi + m * pi + std::atan2(b * std::sin(psi), a * std::cos(psi));
    const real a_next = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = a_next;
    scale *= 2.0L;
    if (std::abs(a - b) <= 4.0L * std::numeric_limits<real>::epsilon() * a) {
      break;
    }
  }
  return static_cast<double>(phi / (scale * a));
}

}  // namespace

double elliptic_f_complementary(double beta, double kc) {
  check_amplitude(beta);
  if (!(kc >= 0.0 && kc <= 1.0)) {
    std::ostringstream os;
    os << "complementary modulus kc=" << kc << " outside [0, 1]";
    throw Error(ErrorKind::DomainError, os.str());
  }
  if (beta == 0.0) return 0.0;
  if (kc == 1.0) return std::min(beta, kHalfPi);
  if (kc == 0.0) {
    if (is_quarter_period(beta)) {
      throw Error(ErrorKind::PoleAtOne, "F(pi/2, 1) diverges");
    }
    return std::atanh(std::sin(beta));
  }
  if (is_quarter_period(beta)) {
    // Complete case: K = pi / (2 AGM(1, kc)).
    double a = 1.0;
    double b = kc;
    while (std::abs(a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a) {
      const double a_next = 0.5 * (a + b);
      b = std::sqrt(a * b);
      a = a_next;
    }
    return kHalfPi / a;
  }
  return landen_agm(beta, kc);
}

double elliptic_f(EllipticArgs args) {
  if (!(args.gamma >= 0.0 && args.gamma <= 1.0)) {
    std::ostringstream os;
    os << "modulus gamma=" << args.gamma << " outside [0, 1]";
    throw Error(ErrorKind::DomainError, os.str());
  }
  const double kc = std::sqrt((1.0 - args.gamma) * (1.0 + args.gamma));
  return elliptic_f_complementary(args.beta, kc);
}

double elliptic_k(double gamma) { return elliptic_f({kHalfPi, gamma}); }

}  // namespace wigdec::specfun
