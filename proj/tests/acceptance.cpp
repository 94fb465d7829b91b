// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Run from ctest or directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "wigdec/coherence.hpp"
#include "wigdec/quadrature.hpp"
#include "wigdec/shiftmodels.hpp"
#include "wigdec/wavepacket.hpp"

using namespace wigdec;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const GaussianPacket kDefault{0.0, 1.7, 1.1};
constexpr StateCase kCases[] = {StateCase::SingleGaussian, StateCase::Interferometer,
                                StateCase::Magnetic};

coherence::AveragingOptions quiet() {
  coherence::AveragingOptions o;
  o.compute_entropy = false;
  return o;
}

double cell(const cli::Cell &c) { return std::get<double>(c); }

// Reference entropy and eps values for j = 1..5.
constexpr double kS[] = {1.6165, 1.7398, 1.7458, 1.9051, 1.9434};
constexpr double kEpsSingle[] = {0.52894, 0.53166, 0.53199, 0.53173, 0.53173};
constexpr double kEpsDouble[] = {0.59545, 0.62478, 0.63185, 0.62695, 0.62695};

// Shared between criteria 1 and 2.
cli::Table g_table;

void table1(Outcome &o) {
  cli::RunConfig config;
  config.command = "table1";
  const auto t0 = std::chrono::steady_clock::now();
  g_table = cli::cmd_table1(config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "runtime " << secs << " s;";
  o.require(secs < 300.0, "runtime < 5 min");
  o.require(g_table.rows.size() == 6, "six rows (j = 1..5 and golden)");
  for (int j = 1; j <= 5; ++j) {
    const auto &row = g_table.rows[j - 1];
    const double s = cell(row[3]);
    const double es = cell(row[4]);
    const double ed = cell(row[5]);
    char buf[200];
    std::snprintf(buf, sizeof buf, " j=%d S=%.4f (%+.4f) eps1=%.5f (%+.5f) eps2=%.5f (%+.5f)%s;", j, s,
                  s - kS[j - 1], es, es - kEpsSingle[j - 1], ed, ed - kEpsDouble[j - 1],
                  j == 5 ? " advisory" : "");
    o.detail << buf;
    o.require(std::abs(s - kS[j - 1]) <= 0.02, "S j=" + std::to_string(j));
    if (j <= 4) {
      o.require(std::abs(es - kEpsSingle[j - 1]) <= 0.002, "eps_single j=" + std::to_string(j));
      o.require(std::abs(ed - kEpsDouble[j - 1]) <= 0.005, "eps_double j=" + std::to_string(j));
    }
  }
}

void maximum_at_three(Outcome &o) {
  std::vector<double> s, es, ed;
  for (int j = 0; j < 5; ++j) {
    s.push_back(cell(g_table.rows[j][3]));
    es.push_back(cell(g_table.rows[j][4]));
    ed.push_back(cell(g_table.rows[j][5]));
  }
  const auto argmax = [](const std::vector<double> &v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin()) + 1;
  };
  o.detail << "argmax eps_single j=" << argmax(es) << ", eps_double j=" << argmax(ed);
  o.require(argmax(es) == 3, "eps_single maximum at j=3");
  o.require(argmax(ed) == 3, "eps_double maximum at j=3");
  bool increasing = true;
  for (int j = 1; j < 5; ++j) increasing = increasing && s[j] > s[j - 1];
  o.detail << ", S strictly increasing: " << (increasing ? "yes" : "no");
  o.require(increasing, "S strictly increasing");
}

void analytic_numeric(Outcome &o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_kernel = 0.0;
  double worst_wigner = 0.0;
  for (StateCase c : kCases) {
    for (int i = 0; i < 5; ++i) {
      for (int s = 0; s < 5; ++s) {
        const GaussianPacket p{0.0, 1.7, 0.5 + 4.5 * i / 4.0};
        const ShiftModel m = GaussianShift{16.1, 0.5 + 4.5 * s / 4.0};
        const double a = coherence::coherence_report(c, p, m, coherence::Path::Analytic, quiet()).epsilon;
        const double k = coherence::coherence_report(c, p, m, coherence::Path::KernelAverage, quiet()).epsilon;
        const double w = coherence::coherence_report(c, p, m, coherence::Path::WignerQuadrature, quiet()).epsilon;
        worst_kernel = std::max(worst_kernel, std::abs(a - k));
        worst_wigner = std::max(worst_wigner, std::abs(a - w));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << "max |analytic-kernel| " << worst_kernel << ", max |analytic-wigner| " << worst_wigner
           << ", runtime " << secs << " s";
  o.require(worst_kernel < 1e-6, "kernel agreement 1e-6");
  o.require(worst_wigner < 1e-4, "wigner-quadrature agreement 1e-4");
  o.require(secs < 120.0, "runtime < 2 min");
}

void single_closed_form(Outcome &o) {
  double worst = 0.0;
  for (double d : {0.2, 0.5, 1.1, 2.0, 3.7, 6.0}) {
    const double e = coherence::analytic_epsilon(StateCase::SingleGaussian, {0.0, 1.7, d}, {16.1, d});
    worst = std::max(worst, std::abs(e - (1.0 - 1.0 / std::sqrt(2.0))));
  }
  int monotone = 0;
  for (int i = 0; i < 20; ++i) {
    const GaussianPacket p{0.0, 1.7, 0.2 + 5.8 * i / 19.0};
    bool ok = true;
    double prev = -1.0;
    for (int s = 0; s <= 400; ++s) {
      const double e = coherence::analytic_epsilon(StateCase::SingleGaussian, p, {16.1, 0.05 * s});
      ok = ok && e > prev;
      prev = e;
    }
    monotone += ok;
  }
  o.detail << "max |eps(sigma=delta) - (1 - 1/sqrt2)| " << worst << ", monotone for " << monotone << "/20 delta";
  o.require(worst < 1e-12, "closed form at sigma = delta");
  o.require(monotone == 20, "monotone in sigma");
}

void interferometer_bound(Outcome &o) {
  cli::RunConfig config;
  config.command = "sweep";
  config.state_case = StateCase::Interferometer;
  const cli::Table t = cli::cmd_sweep(config);
  double top = 0.0;
  for (const auto &row : t.rows) top = std::max(top, cell(row[2]));
  const double far = coherence::analytic_epsilon(StateCase::Interferometer, kDefault, {16.1, 50.0});
  const double kernel_far =
      coherence::coherence_report(StateCase::Interferometer, kDefault, GaussianShift{16.1, 50.0},
                                  coherence::Path::KernelAverage, quiet())
          .epsilon;
  o.detail << "max eps over sweep " << top << " (" << t.rows.size() << " points); eps(sigma=50) analytic "
           << far << ", kernel " << kernel_far << "; eps(sigma=200) "
           << coherence::analytic_epsilon(StateCase::Interferometer, kDefault, {16.1, 200.0});
  o.require(top <= 0.75, "eps <= 3/4 over the sweep grid");
  o.require(std::abs(far - 0.75) <= 0.01, "eps(sigma=50) = 0.75 +- 0.01");
}

void magnetic_non_monotone(Outcome &o) {
  const auto interior_max = [](double delta) {
    const GaussianPacket p{0.0, 1.7, delta};
    std::vector<double> e;
    for (int s = 1; s < 2000; ++s) e.push_back(coherence::analytic_epsilon(StateCase::Magnetic, p, {16.1, 0.01 * s}));
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
      if (e[i] > e[i - 1] && e[i] > e[i + 1]) return 0.01 * static_cast<double>(i + 1);
    }
    return -1.0;
  };
  const double at = interior_max(3.5);
  double onset = -1.0;
  for (int i = 0; i <= 60 && onset < 0; ++i) {
    if (interior_max(3.0 + 0.05 * i) > 0) onset = 3.0 + 0.05 * i;
  }
  if (at > 0) {
    o.detail << "interior maximum at sigma=" << at;
  } else {
    o.detail << "no interior maximum at delta=3.5 on sigma in (0, 20); first delta with one: " << onset
             << " (sigma ~ " << interior_max(onset) << ")";
  }
  o.require(at > 0, "interior maximum at delta = 3.5");
}

double sine_convolution(double u) {
  const double v = std::abs(u);
  return oracle::integrate_singular_ends(
      [&](double s) {
        const double a = 1.0 - s * s;
        const double b = 1.0 - (v - s) * (v - s);
        if (a <= 0.0 || b <= 0.0) return 0.0;
        return 1.0 / (pi * pi * std::sqrt(a * b));
      },
      std::max(-1.0, v - 1.0), std::min(1.0, v + 1.0), 64, 20);
}

void golden_density(Outcome &o) {
  const GoldenMean unit{0.0, 1.0};
  double worst_conv = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double u = -1.99 + 3.98 * (i + 0.5) / 50.0;
    worst_conv = std::max(worst_conv, std::abs(shiftmodels::golden_mean_density(unit, u) - sine_convolution(u)));
  }

  // Golden-ratio trajectory sampled at unit phase steps (a Kronecker sequence
  // on the torus), 10^7 samples.
  const std::size_t n = 10'000'000;
  const int bins = 80;
  std::vector<double> counts(bins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = static_cast<double>(i) + 0.5;
    const double u = std::sin(theta) + std::sin(shiftmodels::kGoldenMean * theta);
    const int b = static_cast<int>(std::floor((u + 2.0) / 4.0 * bins));
    if (b >= 0 && b < bins) counts[b] += 1.0;
  }
  const double width = 4.0 / bins;
  double worst_bin = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double lo = -2.0 + b * width;
    const double hi = lo + width;
    if (std::min(std::abs(lo), std::abs(hi)) < 0.1 || (lo < 0 && hi > 0)) continue;
    const double expected =
        oracle::composite([&](double u) { return shiftmodels::golden_mean_density(unit, u); }, lo, hi, 2, 20) / width;
    const double observed = counts[b] / (static_cast<double>(n) * width);
    worst_bin = std::max(worst_bin, std::abs(observed - expected) / expected);
  }
  const double ratio = shiftmodels::caustic_asymptote_check(GoldenMean{16.1, 2.0}, 16.1 + 2.0 * 1e-3);
  o.detail << "max |closed - convolution| " << worst_conv << ", worst histogram bin " << 100 * worst_bin
           << "%, asymptote ratio at |u|=1e-3 " << std::setprecision(8) << ratio;
  o.require(worst_conv < 1e-8, "convolution quadrature 1e-8");
  o.require(worst_bin < 0.02, "histogram within 2%");
  o.require(std::abs(ratio - 1.0) < 0.05, "log asymptote within 5%");
}

void wigner_invariants(Outcome &o) {
  std::mt19937_64 rng(20240);
  std::uniform_real_distribution<double> ud(0.4, 3.0), uk(0.5, 3.0), us(-20, 20), u0(-3, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianPacket p{u0(rng), uk(rng), ud(rng)};
    const StateCase c = kCases[trial % 3];
    const double shift = us(rng);
    const auto g = quadrature::default_grid(p, c, GaussianShift{shift, 0.0});
    const auto w = [&](double x, double k) { return wavepacket::pure_wigner(p, c, shift, x, k); };
    const auto amp = [&](double x) { return wavepacket::postselected_amplitude(p, c, shift, x); };

    const auto xr = quadrature::composite_gauss_legendre(g.x_min, g.x_max, 200, 20);
    double n = 0.0;
    for (std::size_t i = 0; i < xr.nodes.size(); ++i) n += xr.weights[i] * std::norm(amp(xr.nodes[i]));

    const double trace = quadrature::integrate_2d(w, g);
    const double purity = 2 * pi * quadrature::integrate_2d([&](double x, double k) { return w(x, k) * w(x, k); }, g);
    worst = std::max({worst, std::abs(trace - n), std::abs(purity - n * n)});
    if (c == StateCase::SingleGaussian) worst = std::max(worst, std::abs(trace - 1.0));

    const auto kr = g.k_rule();
    for (double x : {p.x0 - shift, p.x0 + 0.37, p.x0 - 0.5 * shift - 0.2}) {
      double m = 0.0;
      for (std::size_t i = 0; i < kr.nodes.size(); ++i) m += kr.weights[i] * w(x, kr.nodes[i]);
      worst = std::max(worst, std::abs(m - std::norm(amp(x))));
    }
    const auto xg = g.x_rule();
    for (double k : {p.k0, p.k0 + 0.3 / p.delta, p.k0 - 0.7 / p.delta}) {
      double m = 0.0;
      for (std::size_t i = 0; i < xg.nodes.size(); ++i) m += xg.weights[i] * w(xg.nodes[i], k);
      std::complex<double> phase{0.0, 0.0};
      for (const auto &b : wavepacket::branches(c, shift)) {
        phase += b.coefficient * std::exp(std::complex<double>(0.0, k * b.offset));
      }
      worst = std::max(worst, std::abs(m - std::norm(phase * wavepacket::momentum_amplitude(p, k))));
    }
  }

  std::uniform_real_distribution<double> ux(-10, 10), uq(-3, 6);
  double worst_reduction = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const GaussianPacket p{u0(rng), uk(rng), ud(rng)};
    const double x = ux(rng);
    const double k = uq(rng);
    const double single = wavepacket::pure_wigner(p, StateCase::SingleGaussian, 0.0, x, k);
    for (StateCase c : {StateCase::Interferometer, StateCase::Magnetic}) {
      const double v = wavepacket::pure_wigner(p, c, 0.0, x, k);
      worst_reduction = std::max(worst_reduction, std::abs(v - single) / std::max(std::abs(single), 1e-300));
    }
  }
  o.detail << "100 configurations, worst deviation " << worst << "; delta=0 reduction worst relative "
           << worst_reduction;
  o.require(worst < 1e-8, "normalisation, marginals and purity at 1e-8");
  o.require(worst_reduction < 1e-12, "case reduction at delta = 0");
}

void shear_invariance(Outcome &o) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(0.6, 3.0), us(0.3, 2.5), ud0(4.0, 18.0), ushear(-3.0, 3.0);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const StateCase c = kCases[t % 3];
    const GaussianPacket p{0.0, 1.7, ud(rng)};
    const GaussianShift m{ud0(rng), us(rng)};
    const double s = ushear(rng);
    const auto grid = quadrature::default_grid(p, c, m);
    const auto w = [&](double x, double k) { return coherence::averaged_wigner_gaussian(c, p, m, x, k); };
    const double ref = coherence::report_from_field(quadrature::sample(w, grid)).epsilon;
    const double sheared =
        coherence::report_from_field(wavepacket::shear_free_evolution(w, wavepacket::sheared_grid(grid, s), s)).epsilon;
    worst = std::max(worst, std::abs(sheared - ref));
  }
  o.detail << "10 shears, max |eps_sheared - eps| " << worst;
  o.require(worst < 1e-6, "shear invariance 1e-6");
}

void momentum_damping(Outcome &o) {
  double worst = 0.0;
  double worst_pair = 0.0;
  for (double sigma : {0.3, 0.9, 1.8}) {
    const GaussianShift m{16.1, sigma};
    for (int i = 0; i < 10; ++i) {
      const double k = 0.3 + 0.3 * i;
      double num[2];
      int idx = 0;
      for (StateCase c : {StateCase::Interferometer, StateCase::Magnetic}) {
        const auto xr = quadrature::composite_gauss_legendre(-16.1 - 12 * (1.1 + sigma), 16.1 + 12 * (1.1 + sigma), 200, 16);
        double s = 0.0;
        for (std::size_t n = 0; n < xr.nodes.size(); ++n) {
          s += xr.weights[n] * coherence::averaged_wigner_gaussian(c, kDefault, m, xr.nodes[n], k);
        }
        worst = std::max(worst, std::abs(s - coherence::momentum_marginal(c, kDefault, m, k)));
        num[idx++] = s;
      }
      worst_pair = std::max(worst_pair, std::abs(num[0] - num[1]));
    }
  }
  o.detail << "max |x-quadrature - closed form| " << worst << ", max |interferometer - magnetic| " << worst_pair;
  o.require(worst < 1e-6, "closed form matches quadrature");
  o.require(worst_pair < 1e-6, "shared k-marginal");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    std::function<void(Outcome &)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Table 1 reproduction", table1},
      {2, "Maximum at j=3", maximum_at_three},
      {3, "Analytic-numeric eps equivalence", analytic_numeric},
      {4, "Single-Gaussian closed form", single_closed_form},
      {5, "Interferometer bound and limit", interferometer_bound},
      {6, "Magnetic non-monotonicity", magnetic_non_monotone},
      {7, "Golden-mean density", golden_density},
      {8, "Wigner invariants suite", wigner_invariants},
      {9, "Free-evolution invariance", shear_invariance},
      {10, "Momentum-marginal damping", momentum_damping},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
