#include "wigdec/shiftmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>

#include "wigdec/error.hpp"
#include "wigdec/quadrature.hpp"
#include "wigdec/specfun.hpp"

namespace wigdec {

double mean_shift(const ShiftModel &model) {
  return std::visit([](const auto &m) { return m.delta0; }, model);
}

bool is_degenerate(const ShiftModel &model) {
  if (const auto *g = std::get_if<GaussianShift>(&model)) return g->sigma == 0.0;
  if (const auto *t = std::get_if<TwoTone>(&model)) return t->delta1 == 0.0;
  return std::get<GoldenMean>(model).delta1 == 0.0;
}

void validate(const ShiftModel &model) {
  std::ostringstream os;
  if (!std::isfinite(mean_shift(model))) {
    os << "mean shift delta0 must be finite";
  } else if (const auto *g = std::get_if<GaussianShift>(&model)) {
    if (g->sigma >= 0.0 && std::isfinite(g->sigma)) return;
    os << "sigma must be >= 0, got " << g->sigma;
  } else if (const auto *t = std::get_if<TwoTone>(&model)) {
    if (t->j < 1 || t->j > 90) {
      os << "Fibonacci index j must lie in [1, 90], got " << t->j;
    } else if (t->delta1 >= 0.0 && std::isfinite(t->delta1)) {
      return;
    } else {
      os << "delta1 must be >= 0, got " << t->delta1;
    }
  } else {
    const double d1 = std::get<GoldenMean>(model).delta1;
    if (d1 >= 0.0 && std::isfinite(d1)) return;
    os << "delta1 must be >= 0, got " << d1;
  }
  throw Error(ErrorKind::InvalidArgument, os.str());
}

void TrajectoryWindow::validate() const {
  if (n_samples < 2) throw Error(ErrorKind::InvalidArgument, "window needs n_samples >= 2");
  if (period_multiplier < 1) {
    throw Error(ErrorKind::InvalidArgument, "window needs period_multiplier >= 1");
  }
  if (convergent < 1 || convergent > 90) {
    throw Error(ErrorKind::InvalidArgument, "convergent index must lie in [1, 90]");
  }
}

namespace shiftmodels {
namespace {

using std::numbers::pi;

constexpr double kCausticTolerance = 1e-12;

double two_tone(double delta0, double delta1, double ratio, double theta) {
  return delta0 + delta1 * (std::sin(theta) + std::sin(ratio * theta));
}

double two_tone_slope(double delta1, double ratio, double theta) {
  return delta1 * (std::cos(theta) + ratio * std::cos(ratio * theta));
}

// Bisection on a bracketed sign change of f, to the resolution of doubles.
template <class F>
double bisect(F &&f, double a, double b) {
  double fa = f(a);
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Newton iteration safeguarded by bisection for a monotone arc [a, b] that
// brackets a root of g.
template <class G, class DG>
double safe_newton(G &&g, DG &&dg, double a, double b) {
  double ga = g(a);
  double x = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == (ga < 0.0)) {
      a = x;
      ga = gx;
    } else {
      b = x;
    }
    const double slope = dg(x);
    double next = x - gx / slope;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x) ||
        b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b)) {
      return next;
    }
    x = next;
  }
  return x;
}

std::pair<double, double> golden_surrogate(const TrajectoryWindow &window) {
  const Rational r = fibonacci_ratio(window.convergent);
  const double period = 2.0 * pi * static_cast<double>(r.den) *
                        static_cast<double>(window.period_multiplier);
  return {r.value(), period};
}

}  // namespace

std::uint64_t fibonacci(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "Fibonacci index must be >= 0");
  if (n > 91) {
    throw Error(ErrorKind::Overflow, "Fibonacci number f_" + std::to_string(n) +
                                         " does not fit the 64-bit range used here");
  }
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  for (int i = 1; i < n; ++i) {
    const std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return b;
}

Rational fibonacci_ratio(int j) {
  if (j < 1) throw Error(ErrorKind::InvalidArgument, "Fibonacci ratio needs j >= 1");
  if (j > 90) throw Error(ErrorKind::Overflow, "Fibonacci ratio index j > 90");
  return {fibonacci(j), fibonacci(j + 1)};
}

double frequency_ratio(const ShiftModel &model) {
  if (const auto *t = std::get_if<TwoTone>(&model)) return fibonacci_ratio(t->j).value();
  if (std::holds_alternative<GoldenMean>(model)) return kGoldenMean;
  throw Error(ErrorKind::InvalidArgument, "Gaussian shifts have no trajectory");
}

double trajectory_period(const TwoTone &model) {
  return 2.0 * pi * static_cast<double>(fibonacci(model.j + 1));
}

double shift_at(const ShiftModel &model, double theta) {
  const double r = frequency_ratio(model);
  return std::visit(
      [&](const auto &m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GaussianShift>) {
          return m.delta0;
        } else {
          return two_tone(m.delta0, m.delta1, r, theta);
        }
      },
      model);
}

double shift_derivative(const ShiftModel &model, double theta) {
  const double r = frequency_ratio(model);
  return std::visit(
      [&](const auto &m) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GaussianShift>) {
          return 0.0;
        } else {
          return two_tone_slope(m.delta1, r, theta);
        }
      },
      model);
}

double arcsine_density(double s) {
  if (!(std::abs(s) < 1.0)) {
    std::ostringstream os;
    os << "sine distribution is supported on |s| < 1, got s=" << s;
    throw Error(ErrorKind::OutOfSupport, os.str());
  }
  return 1.0 / (pi * std::sqrt((1.0 - s) * (1.0 + s)));
}

double golden_mean_density(const GoldenMean &model, double shift) {
  if (model.delta1 == 0.0) {
    throw Error(ErrorKind::DegenerateDelta, "golden-mean shifts with delta1 = 0");
  }
  const double offset = shift - model.delta0;
  if (std::abs(offset) <= kCausticTolerance) {
    throw Error(ErrorKind::CausticPoint, "golden-mean density diverges at delta0");
  }
  double half_u = std::abs(offset) / (2.0 * model.delta1);
  // Rounding in delta0 +/- 2 delta1 must not push the edge out of support.
  if (half_u > 1.0 + 1e-12) return 0.0;
  half_u = std::min(half_u, 1.0);
  // sin(beta) = 1/sqrt(1 + |u|/2); the complementary modulus is |u|/2.
  const double beta = std::atan2(1.0, std::sqrt(half_u));
  return 2.0 / (pi * pi * model.delta1) *
         specfun::elliptic_f_complementary(beta, half_u);
}

TwoToneDensity::TwoToneDensity(const TwoTone &model, std::size_t brackets_per_cycle)
    : model_(model) {
  validate(ShiftModel{model});
  if (model.delta1 == 0.0) {
    throw Error(ErrorKind::DegenerateDelta, "two-tone shifts with delta1 = 0");
  }
  ratio_ = fibonacci_ratio(model.j).value();
  period_ = trajectory_period(model);
  const std::size_t cycles = fibonacci(model.j + 1);
  const std::size_t n = brackets_per_cycle * cycles;
  const auto slope = [&](double t) { return two_tone_slope(model_.delta1, ratio_, t); };
  double prev_t = 0.0;
  double prev_s = slope(0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = period_ * static_cast<double>(i) / static_cast<double>(n);
    const double s = slope(t);
    if (s == 0.0) {
      critical_.push_back(t);
    } else if (prev_s != 0.0 && (s < 0.0) != (prev_s < 0.0)) {
      critical_.push_back(bisect(slope, prev_t, t));
    }
    prev_t = t;
    prev_s = s;
  }
  // The slope at theta = 0 is delta1 (1 + r) > 0, so the wrap-around point is
  // never critical and the arcs between consecutive critical phases tile the
  // period.
  critical_values_.reserve(critical_.size());
  lo_ = std::numeric_limits<double>::infinity();
  hi_ = -lo_;
  for (double t : critical_) {
    const double v = two_tone(model_.delta0, model_.delta1, ratio_, t);
    critical_values_.push_back(v);
    lo_ = std::min(lo_, v);
    hi_ = std::max(hi_, v);
  }
}

std::vector<double> TwoToneDensity::caustics() const {
  std::vector<double> values = critical_values_;
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
  }
  return out;
}

bool TwoToneDensity::is_caustic(double shift) const {
  return std::any_of(critical_values_.begin(), critical_values_.end(),
                     [&](double v) { return std::abs(shift - v) <= kCausticTolerance; });
}

double TwoToneDensity::sum_over_roots(double shift) const {
  const auto g = [&](double t) {
    return two_tone(model_.delta0, model_.delta1, ratio_, t) - shift;
  };
  const auto dg = [&](double t) { return two_tone_slope(model_.delta1, ratio_, t); };
  quadrature::CompensatedSum sum;
  const std::size_t m = critical_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = critical_[i];
    const double b = (i + 1 < m) ? critical_[i + 1] : critical_[0] + period_;
    const double ga = critical_values_[i] - shift;
    const double gb = critical_values_[(i + 1) % m] - shift;
    if ((ga < 0.0) == (gb < 0.0)) continue;
    const double root = safe_newton(g, dg, a, b);
    sum.add(1.0 / std::abs(dg(root)));
  }
  return sum.value() / period_;
}

double TwoToneDensity::operator()(double shift) const {
  if (is_caustic(shift)) {
    std::ostringstream os;
    os.precision(17);
    os << "two-tone density diverges at critical value Delta=" << shift;
    throw Error(ErrorKind::CausticPoint, os.str());
  }
  if (shift < lo_ || shift > hi_) return 0.0;
  return sum_over_roots(shift);
}

double TwoToneDensity::value_or_inf(double shift) const {
  if (is_caustic(shift)) return std::numeric_limits<double>::infinity();
  if (shift < lo_ || shift > hi_) return 0.0;
  return sum_over_roots(shift);
}

double density(const ShiftModel &model, double shift) {
  validate(model);
  if (const auto *g = std::get_if<GaussianShift>(&model)) {
    if (g->sigma == 0.0) {
      throw Error(ErrorKind::DegenerateDelta, "Gaussian shifts with sigma = 0");
    }
    const double z = (shift - g->delta0) / g->sigma;
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi * g->sigma * g->sigma);
  }
  if (const auto *t = std::get_if<TwoTone>(&model)) return TwoToneDensity(*t)(shift);
  return golden_mean_density(std::get<GoldenMean>(model), shift);
}

std::size_t count_critical_points(const TwoTone &model) {
  return TwoToneDensity(model).critical_phases().size();
}

std::vector<double> trajectory_samples(const ShiftModel &model,
                                       const TrajectoryWindow &window) {
  validate(model);
  window.validate();
  double ratio = 0.0;
  double period = 0.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  if (const auto *t = std::get_if<TwoTone>(&model)) {
    ratio = fibonacci_ratio(t->j).value();
    period = trajectory_period(*t);
    delta0 = t->delta0;
    delta1 = t->delta1;
  } else if (const auto *g = std::get_if<GoldenMean>(&model)) {
    std::tie(ratio, period) = golden_surrogate(window);
    delta0 = g->delta0;
    delta1 = g->delta1;
  } else {
    throw Error(ErrorKind::InvalidArgument, "Gaussian shifts have no trajectory");
  }
  std::vector<double> out = quadrature::midpoint_phases(period, window.n_samples);
  for (double &theta : out) theta = two_tone(delta0, delta1, ratio, theta);
  return out;
}

double entropy(const ShiftModel &model, const TrajectoryWindow &window) {
  validate(model);
  if (is_degenerate(model)) {
    throw Error(ErrorKind::DegenerateDelta, "entropy of a Dirac shift distribution is -inf");
  }
  if (const auto *g = std::get_if<GaussianShift>(&model)) {
    return 0.5 * std::log(2.0 * pi * std::numbers::e * g->sigma * g->sigma);
  }
  const std::vector<double> shifts = trajectory_samples(model, window);
  quadrature::CompensatedSum sum;
  if (const auto *t = std::get_if<TwoTone>(&model)) {
    const TwoToneDensity w(*t);
    const double spacing = w.period() / static_cast<double>(shifts.size());
    const std::vector<double> phases = quadrature::midpoint_phases(w.period(), shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      // Next to a critical phase Delta is flat, so a node a few 1e-6 away
      // already lands inside the caustic tolerance. Nudge such a node along
      // its own arc; it carries an integrable log singularity either way.
      double s = shifts[i];
      for (double nudge = 0.25 * spacing; w.is_caustic(s); nudge *= 2.0) {
        s = shift_at(ShiftModel{*t}, phases[i] + nudge);
      }
      sum.add(std::log(w(s)));
    }
  } else {
    const auto &gm = std::get<GoldenMean>(model);
    for (double s : shifts) {
      sum.add(std::abs(s - gm.delta0) <= kCausticTolerance
                  ? std::log(golden_mean_density(gm, gm.delta0 + 2.0 * kCausticTolerance))
                  : std::log(golden_mean_density(gm, s)));
    }
  }
  return -sum.value() / static_cast<double>(shifts.size());
}

EntropyEstimate entropy_checked(const ShiftModel &model, const TrajectoryWindow &window,
                                double tolerance) {
  EntropyEstimate est;
  est.value = entropy(model, window);
  if (std::holds_alternative<GaussianShift>(model)) {
    est.refined_value = est.value;
    return est;
  }
  TrajectoryWindow refined = window;
  refined.n_samples *= 2;
  est.refined_value = entropy(model, refined);
  est.converged = std::abs(est.refined_value - est.value) < tolerance;
  return est;
}

double caustic_asymptote_check(const GoldenMean &model, double shift) {
  const double offset = std::abs(shift - model.delta0);
  const double u = offset / model.delta1;
  if (!(u > 0.0 && u <= 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "asymptote check needs 0 < |u| <= 1e-2");
  }
  return golden_mean_density(model, shift) * pi * pi * model.delta1 /
         std::log(8.0 * model.delta1 / offset);
}

}  // namespace shiftmodels
}  // namespace wigdec
