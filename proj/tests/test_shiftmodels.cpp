#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "wigdec/error.hpp"
#include "wigdec/shiftmodels.hpp"

using namespace wigdec;
using namespace wigdec::shiftmodels;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

// Self-convolution of the sine distribution, the density of sin a + sin b
// for independent uniform phases, in units of delta1 = 1.
double sine_convolution(double u) {
  const double v = std::abs(u);
  const double lo = std::max(-1.0, v - 1.0);
  const double hi = std::min(1.0, v + 1.0);
  return oracle::integrate_singular_ends(
      [&](double s) {
        const double a = 1.0 - s * s;
        const double b = 1.0 - (v - s) * (v - s);
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return 1.0 / (pi * pi * std::sqrt(a * b));
      },
      lo, hi, 64, 20);
}

}  // namespace

TEST_CASE("Fibonacci ratios") {
  CHECK(fibonacci(0) == 1);
  CHECK(fibonacci(1) == 1);
  CHECK(fibonacci(10) == 89);
  const Rational r1 = fibonacci_ratio(1);
  CHECK(r1.num == 1);
  CHECK(r1.den == 2);
  const Rational r5 = fibonacci_ratio(5);
  CHECK(r5.num == 8);
  CHECK(r5.den == 13);
  CHECK(fibonacci_ratio(40).value() == doctest::Approx(kGoldenMean).epsilon(1e-15));
  CHECK(kGoldenMean == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-16));
  CHECK(kind_of([] { fibonacci_ratio(91); }) == ErrorKind::Overflow);
  CHECK(kind_of([] { fibonacci(92); }) == ErrorKind::Overflow);
  CHECK_NOTHROW(fibonacci_ratio(90));
  CHECK_THROWS_AS(fibonacci_ratio(0), Error);
}

TEST_CASE("shift_at examples and bound") {
  const TwoTone m{16.1, 2.0, 1};
  CHECK(shift_at(m, 0.0) == 16.1);
  CHECK(shift_at(m, pi) == doctest::Approx(18.1).epsilon(1e-15));
  CHECK(trajectory_period(m) == doctest::Approx(4 * pi));
  CHECK(trajectory_period(TwoTone{0.0, 1.0, 5}) == doctest::Approx(2 * pi * 13));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double t = th(rng);
    CHECK(std::abs(shift_at(GoldenMean{16.1, 2.0}, t) - 16.1) <= 4.0);
    const TwoTone mj{16.1, 2.0, 1 + i % 6};
    CHECK(std::abs(shift_at(mj, t) - 16.1) <= 4.0);
    // Derivative against a central difference.
    const double h = 1e-6;
    const double fd = (shift_at(mj, t + h) - shift_at(mj, t - h)) / (2 * h);
    CHECK(std::abs(shift_derivative(mj, t) - fd) < 1e-6);
  }
}

TEST_CASE("Gaussian shift density") {
  const ShiftModel g = GaussianShift{16.1, 1.3};
  CHECK(density(g, 16.1) == doctest::Approx(1.0 / std::sqrt(2 * pi * 1.69)).epsilon(1e-15));
  const double norm = oracle::composite([&](double d) { return density(g, d); }, 16.1 - 15, 16.1 + 15, 60);
  CHECK(std::abs(norm - 1.0) < 1e-8);
  CHECK(kind_of([] { density(GaussianShift{16.1, 0.0}, 16.1); }) == ErrorKind::DegenerateDelta);
  CHECK(entropy(GaussianShift{0.0, 1.0}) == doctest::Approx(1.41894).epsilon(1e-5));
  CHECK(entropy(GaussianShift{0.0, 1.0}) == doctest::Approx(0.5 * std::log(2 * pi * std::numbers::e)).epsilon(1e-15));
  CHECK(kind_of([] { entropy(GaussianShift{1.0, 0.0}); }) == ErrorKind::DegenerateDelta);
}

TEST_CASE("arcsine density") {
  CHECK(arcsine_density(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(arcsine_density(0.5) == arcsine_density(-0.5));
  CHECK(std::abs(oracle::integrate_singular_ends(arcsine_density, -1.0, 1.0) - 1.0) < 1e-8);
  CHECK(kind_of([] { arcsine_density(1.0); }) == ErrorKind::OutOfSupport);
  CHECK(kind_of([] { arcsine_density(-1.5); }) == ErrorKind::OutOfSupport);
}

TEST_CASE("golden-mean density: edge value, convolution and normalisation") {
  const GoldenMean gm{16.1, 2.0};
  CHECK(golden_mean_density(gm, 20.1) == doctest::Approx(1.0 / (2 * pi * 2.0)).epsilon(1e-14));
  CHECK(golden_mean_density(gm, 12.1) == doctest::Approx(1.0 / (2 * pi * 2.0)).epsilon(1e-14));
  CHECK(golden_mean_density(gm, 20.2) == 0.0);
  CHECK(kind_of([&] { golden_mean_density(gm, 16.1); }) == ErrorKind::CausticPoint);

  double worst = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double u = -1.98 + 3.96 * (i - 0.5) / 50.0;
    const double closed = golden_mean_density(GoldenMean{0.0, 1.0}, u);
    worst = std::max(worst, std::abs(closed - sine_convolution(u)));
    // delta1 scaling
    CHECK(golden_mean_density(gm, 16.1 + 2.0 * u) == doctest::Approx(closed / 2.0).epsilon(1e-14));
  }
  CHECK(worst < 1e-8);

  // The logarithmic singularity at u = 0 is integrable: split there.
  const auto f = [&](double u) { return golden_mean_density(GoldenMean{0.0, 1.0}, u); };
  const double half = oracle::tanh_sinh(f, 2e-12, 2.0, 1e-12);
  CHECK(std::abs(2 * half - 1.0) < 1e-8);
}

TEST_CASE("golden-mean logarithmic asymptote") {
  const GoldenMean gm{16.1, 2.0};
  const double r3 = caustic_asymptote_check(gm, 16.1 + 2.0 * 1e-3);
  const double r4 = caustic_asymptote_check(gm, 16.1 - 2.0 * 1e-4);
  const double r5 = caustic_asymptote_check(gm, 16.1 + 2.0 * 1e-5);
  CHECK(std::abs(r3 - 1.0) < 0.05);
  CHECK(std::abs(r4 - 1.0) < 0.03);
  CHECK(std::abs(r5 - 1.0) < std::abs(r3 - 1.0));
  CHECK_THROWS_AS(caustic_asymptote_check(gm, 16.1 + 2.0 * 0.5), Error);
}

TEST_CASE("two-tone density matches a Monte Carlo histogram (j = 1)") {
  const TwoTone m{16.1, 2.0, 1};
  const TwoToneDensity w(m);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phase(0.0, trajectory_period(m));
  std::vector<double> samples(1'000'000);
  for (double &s : samples) s = shift_at(m, phase(rng));
  const int bins = 40;
  const double lo = w.support_min();
  const double hi = w.support_max();
  const auto hist = oracle::histogram(samples, lo, hi, bins);
  const auto caustics = w.caustics();
  const double width = (hi - lo) / bins;
  int compared = 0;
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * width;
    const double c = a + width;
    // Skip bins that touch a caustic; elsewhere compare bin averages.
    const bool near_caustic = std::any_of(caustics.begin(), caustics.end(), [&](double v) {
      return v > a - width && v < c + width;
    });
    if (near_caustic) continue;
    const double avg = oracle::composite([&](double d) { return w(d); }, a, c, 4, 10) / width;
    CHECK(std::abs(hist[b] - avg) < 0.02 * avg);
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("two-tone density: normalisation, symmetry and caustics") {
  for (int j = 1; j <= 5; ++j) {
    const TwoTone m{16.1, 2.0, j};
    const TwoToneDensity w(m);
    CHECK(w.support_min() >= 12.1 - 1e-12);
    CHECK(w.support_max() <= 20.1 + 1e-12);
    CHECK(w(11.0) == 0.0);
    std::vector<double> edges = w.caustics();
    double norm = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      norm += oracle::integrate_singular_ends([&](double d) { return w.value_or_inf(d); }, edges[i],
                                              edges[i + 1], 8, 20);
    }
    CHECK(std::abs(norm - 1.0) < 1e-3);
    for (double u : {0.13, 0.77, 1.41, 2.9}) {
      if (w.is_caustic(16.1 + u) || w.is_caustic(16.1 - u)) continue;
      CHECK(w(16.1 + u) == doctest::Approx(w(16.1 - u)).epsilon(1e-8));
    }
    for (double c : edges) {
      CHECK(std::isinf(w.value_or_inf(c)));
      CHECK(kind_of([&] { w(c); }) == ErrorKind::CausticPoint);
    }
  }
  std::size_t prev = 0;
  for (int j = 1; j <= 5; ++j) {
    const std::size_t n = count_critical_points(TwoTone{16.1, 2.0, j});
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(count_critical_points(TwoTone{16.1, 2.0, 1}) == 4);
  CHECK(count_critical_points(TwoTone{16.1, 2.0, 5}) == 26);
}

TEST_CASE("Monte Carlo histograms are symmetric about delta0") {
  std::mt19937_64 rng(5);
  for (int j : {2, 4}) {
    const TwoTone m{16.1, 2.0, j};
    std::uniform_real_distribution<double> phase(0.0, trajectory_period(m));
    std::vector<double> s(400'000);
    for (double &v : s) v = shift_at(m, phase(rng));
    const auto h = oracle::histogram(s, 12.1, 20.1, 20);
    for (int b = 0; b < 10; ++b) {
      CHECK(std::abs(h[b] - h[19 - b]) < 0.02 * std::max(h[b], h[19 - b]) + 2e-3);
    }
  }
}

TEST_CASE("golden-mean density is the limit of two-tone histograms") {
  const TwoTone m{0.0, 1.0, 12};
  TrajectoryWindow win;
  win.n_samples = std::size_t{1} << 23;
  const auto samples = trajectory_samples(m, win);
  const int bins = 80;
  const auto hist = oracle::histogram(samples, -2.0, 2.0, bins);
  const double width = 4.0 / bins;
  double worst = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double a = -2.0 + b * width;
    if (std::abs(a) < 0.1 || std::abs(a + width) < 0.1 || (a < 0 && a + width > 0)) continue;
    const double avg =
        oracle::composite([&](double u) { return golden_mean_density(GoldenMean{0.0, 1.0}, u); }, a, a + width, 2, 20) /
        width;
    worst = std::max(worst, std::abs(hist[b] - avg) / avg);
  }
  CHECK(worst < 0.03);
}

TEST_CASE("trajectory entropies") {
  const double s1 = entropy(TwoTone{16.1, 2.0, 1});
  const double s5 = entropy(TwoTone{16.1, 2.0, 5});
  CHECK(std::abs(s1 - 1.6165) < 0.02);
  CHECK(std::abs(s5 - 1.9434) < 0.02);
  double prev = -1e9;
  for (int j = 1; j <= 5; ++j) {
    const auto est = entropy_checked(TwoTone{16.1, 2.0, j});
    CHECK(est.converged);
    CHECK(est.value > prev);
    prev = est.value;
  }
  // Shift-invariance of differential entropy and the delta1 scaling law.
  CHECK(entropy(TwoTone{0.0, 2.0, 3}) == doctest::Approx(entropy(TwoTone{16.1, 2.0, 3})).epsilon(1e-9));
  CHECK(entropy(TwoTone{0.0, 4.0, 3}) ==
        doctest::Approx(entropy(TwoTone{0.0, 2.0, 3}) + std::log(2.0)).epsilon(1e-9));
  const auto g = entropy_checked(GoldenMean{16.1, 2.0});
  CHECK(g.converged);
  CHECK(g.value > s5 - 0.05);
}

TEST_CASE("shift model validation") {
  CHECK_THROWS_AS(validate(ShiftModel{GaussianShift{0.0, -1.0}}), Error);
  CHECK_THROWS_AS(validate(ShiftModel{TwoTone{0.0, 1.0, 0}}), Error);
  CHECK(is_degenerate(ShiftModel{TwoTone{3.0, 0.0, 2}}));
  CHECK(is_degenerate(ShiftModel{GaussianShift{3.0, 0.0}}));
  CHECK_FALSE(is_degenerate(ShiftModel{GoldenMean{3.0, 1.0}}));
  CHECK(mean_shift(ShiftModel{GoldenMean{3.0, 1.0}}) == 3.0);
  TrajectoryWindow bad;
  bad.n_samples = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
}
