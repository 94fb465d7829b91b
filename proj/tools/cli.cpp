#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wigdec/coherence.hpp"
#include "wigdec/error.hpp"
#include "wigdec/quadrature.hpp"
#include "wigdec/shiftmodels.hpp"
#include "wigdec/version.hpp"

namespace wigdec::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char *const kKeys[] = {"case",  "noise", "delta0", "delta1",  "sigma",   "j",
                             "j_max", "k0",    "coh_len", "x0",     "nodes",   "grid_nx",
                             "grid_nk", "format", "out"};

template <typename T>
T get_as(const json &v, const std::string &key) {
  try {
    return v.get<T>();
  } catch (const json::exception &) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

std::string format_name(Format f) { return f == Format::Json ? "json" : "csv"; }

std::string ratio_text(const shiftmodels::Rational &r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string noise_or(const RunConfig &c, const std::string &fallback) {
  return c.noise.value_or(fallback);
}

coherence::AveragingOptions averaging(int nodes) {
  coherence::AveragingOptions o;
  o.two_tone = quadrature::PeriodicAverageSpec{static_cast<std::size_t>(nodes)};
  o.golden = quadrature::PeriodicAverageSpec{2 * static_cast<std::size_t>(nodes)};
  o.compute_entropy = false;
  return o;
}

// Kernel-average eps, accepted only if halving the node count changes it by
// less than `gate`. Trajectory averages over an exact period of a smooth
// periodic integrand converge spectrally, so this is a strict check.
double gated_epsilon(StateCase sc, const RunConfig &c, const ShiftModel &model, double gate = 1e-6) {
  const auto fine = coherence::coherence_report(sc, c.packet(), model, coherence::Path::KernelAverage,
                                                averaging(c.nodes));
  const auto coarse = coherence::coherence_report(sc, c.packet(), model, coherence::Path::KernelAverage,
                                                  averaging(c.nodes / 2));
  if (std::abs(fine.epsilon - coarse.epsilon) > gate) {
    std::ostringstream os;
    os << "eps did not converge for " << to_string(sc) << ": " << coarse.epsilon << " at "
       << c.nodes / 2 << " nodes vs " << fine.epsilon << " at " << c.nodes;
    throw ConvergenceFailure(os.str());
  }
  return fine.epsilon;
}

double gated_entropy(const ShiftModel &model) {
  const auto est = shiftmodels::entropy_checked(model);
  if (!est.converged) {
    std::ostringstream os;
    os << "entropy did not converge: " << est.value << " vs " << est.refined_value;
    throw ConvergenceFailure(os.str());
  }
  return est.refined_value;
}

ShiftModel trajectory_model(const RunConfig &c, const std::string &noise) {
  if (noise == "two-tone") return TwoTone{c.delta0, c.delta1, c.j};
  if (noise == "golden") return GoldenMean{c.delta0, c.delta1};
  if (noise == "gaussian") return GaussianShift{c.delta0, c.sigma.value_or(1.0)};
  throw ConfigError("unknown noise model '" + noise + "'");
}

}  // namespace

ordered_json RunConfig::to_json() const {
  ordered_json j_out;
  j_out["command"] = command;
  j_out["case"] = state_case ? ordered_json(std::string(wigdec::to_string(*state_case))) : ordered_json(nullptr);
  j_out["noise"] = noise ? ordered_json(*noise) : ordered_json(nullptr);
  j_out["delta0"] = delta0;
  j_out["delta1"] = delta1;
  j_out["sigma"] = sigma ? ordered_json(*sigma) : ordered_json(nullptr);
  j_out["j"] = j;
  j_out["j_max"] = j_max;
  j_out["k0"] = k0;
  j_out["coh_len"] = coh_len;
  j_out["x0"] = x0;
  j_out["nodes"] = nodes;
  j_out["grid_nx"] = grid_nx;
  j_out["grid_nk"] = grid_nk;
  j_out["format"] = format_name(format);
  j_out["out"] = out;
  return j_out;
}

void apply_layer(RunConfig &c, const json &layer) {
  if (!layer.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto &[key, v] : layer.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (v.is_null()) continue;
    if (key == "case") {
      try {
        c.state_case = parse_state_case(get_as<std::string>(v, key));
      } catch (const Error &e) {
        throw ConfigError(e.what());
      }
    } else if (key == "noise") {
      c.noise = get_as<std::string>(v, key);
    } else if (key == "delta0") {
      c.delta0 = get_as<double>(v, key);
    } else if (key == "delta1") {
      c.delta1 = get_as<double>(v, key);
    } else if (key == "sigma") {
      c.sigma = get_as<double>(v, key);
    } else if (key == "j") {
      c.j = get_as<int>(v, key);
    } else if (key == "j_max") {
      c.j_max = get_as<int>(v, key);
    } else if (key == "k0") {
      c.k0 = get_as<double>(v, key);
    } else if (key == "coh_len") {
      c.coh_len = get_as<double>(v, key);
    } else if (key == "x0") {
      c.x0 = get_as<double>(v, key);
    } else if (key == "nodes") {
      c.nodes = get_as<int>(v, key);
    } else if (key == "grid_nx") {
      c.grid_nx = get_as<int>(v, key);
    } else if (key == "grid_nk") {
      c.grid_nk = get_as<int>(v, key);
    } else if (key == "format") {
      const auto f = get_as<std::string>(v, key);
      if (f == "csv") {
        c.format = Format::Csv;
      } else if (f == "json") {
        c.format = Format::Json;
      } else {
        throw ConfigError("format must be csv or json, got '" + f + "'");
      }
    } else if (key == "out") {
      c.out = get_as<std::string>(v, key);
    }
  }
}

void validate(const RunConfig &c) {
  const auto need = [](bool ok, const std::string &what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::isfinite(c.delta0), "delta0 must be finite");
  need(std::isfinite(c.delta1) && c.delta1 > 0.0, "delta1 must be > 0");
  need(!c.sigma || (std::isfinite(*c.sigma) && *c.sigma >= 0.0), "sigma must be >= 0");
  need(c.j >= 1 && c.j <= 90, "j must lie in [1, 90]");
  need(c.j_max >= 1 && c.j_max <= 30, "j-max must lie in [1, 30]");
  need(std::isfinite(c.k0) && c.k0 > 0.0, "k0 must be > 0");
  need(std::isfinite(c.coh_len) && c.coh_len > 0.0, "coh-len must be > 0");
  need(std::isfinite(c.x0), "x0 must be finite");
  need(c.nodes >= 128, "nodes must be >= 128");
  need(c.grid_nx == 0 || c.grid_nx >= 2, "grid-nx must be >= 2");
  need(c.grid_nk == 0 || c.grid_nk >= 2, "grid-nk must be >= 2");
  if (c.noise) {
    need(*c.noise == "gaussian" || *c.noise == "two-tone" || *c.noise == "golden",
         "noise must be gaussian, two-tone or golden");
  }
}

Table cmd_table1(const RunConfig &c) {
  Table t;
  t.columns = {"j", "r_j", "r", "S", "eps_single", "eps_double"};
  for (int j = 1; j <= c.j_max; ++j) {
    const TwoTone model{c.delta0, c.delta1, j};
    const auto r = shiftmodels::fibonacci_ratio(j);
    t.add({std::int64_t{j}, ratio_text(r), r.value(), gated_entropy(model),
           gated_epsilon(StateCase::SingleGaussian, c, model),
           gated_epsilon(StateCase::Magnetic, c, model)});
  }
  // The golden-mean row closes the full table; a truncated table omits it.
  if (c.j_max >= 5) {
    const GoldenMean model{c.delta0, c.delta1};
    t.add({std::string("golden"), std::string("(sqrt5-1)/2"), shiftmodels::kGoldenMean,
           gated_entropy(model), gated_epsilon(StateCase::SingleGaussian, c, model),
           gated_epsilon(StateCase::Magnetic, c, model)});
  }
  return t;
}

Table cmd_sweep(const RunConfig &c) {
  const StateCase sc = c.state_case.value_or(StateCase::Magnetic);
  Table t;
  t.columns = {"delta", "sigma", "epsilon", "norm_N", "case"};
  const std::string name(to_string(sc));
  for (int i = 0; i <= 58; ++i) {
    const double delta = 0.2 + 0.1 * i;
    const GaussianPacket p{c.x0, c.k0, delta};
    for (int s = 0; s <= 60; ++s) {
      const double sigma = 0.1 * s;
      coherence::AveragingOptions o;
      o.compute_entropy = false;
      const auto rep = coherence::coherence_report(sc, p, GaussianShift{c.delta0, sigma},
                                                   coherence::Path::Analytic, o);
      t.add({delta, sigma, rep.epsilon, rep.norm_N, name});
    }
  }
  return t;
}

Table cmd_wigner(const RunConfig &c) {
  if (noise_or(c, "gaussian") != "gaussian") {
    throw ConfigError("wigner sheets are defined for gaussian noise only");
  }
  std::vector<StateCase> cases{StateCase::Interferometer, StateCase::Magnetic};
  if (c.state_case) cases = {*c.state_case};
  std::vector<double> sigmas{0.0, 0.6, 1.2, 1.8};
  if (c.sigma) sigmas = {*c.sigma};
  const double widest = *std::max_element(sigmas.begin(), sigmas.end());

  Table t;
  t.columns = {"x", "k", "W", "sigma", "case"};
  const GaussianPacket p = c.packet();
  for (StateCase sc : cases) {
    // Extents of the default grid for the noisiest sheet, sampled uniformly.
    const auto g = quadrature::default_grid(p, sc, GaussianShift{c.delta0, widest});
    const auto xs = quadrature::trapezoid(c.grid_nx ? c.grid_nx : 128, g.x_min, g.x_max).nodes;
    const auto ks = quadrature::trapezoid(c.grid_nk ? c.grid_nk : 128, g.k_min, g.k_max).nodes;
    const std::string name(to_string(sc));
    for (double sigma : sigmas) {
      const ShiftModel model = GaussianShift{c.delta0, sigma};
      for (double x : xs) {
        for (double k : ks) {
          t.add({x, k, coherence::averaged_wigner(sc, p, model, x, k), sigma, name});
        }
      }
    }
  }
  return t;
}

Table cmd_dist(const RunConfig &c) {
  const std::string noise = noise_or(c, "two-tone");
  const ShiftModel model = trajectory_model(c, noise);
  const std::size_t n = static_cast<std::size_t>(c.nodes);
  const std::size_t n_density = c.grid_nx ? static_cast<std::size_t>(c.grid_nx) : 1001;

  Table t;
  t.columns = {"series", "theta", "delta", "w"};
  if (noise == "gaussian") {
    const double sigma = std::get<GaussianShift>(model).sigma;
    if (sigma == 0.0) throw ConfigError("gaussian noise with sigma = 0 has no density");
    for (std::size_t i = 0; i < n_density; ++i) {
      const double d = c.delta0 - 6 * sigma + 12 * sigma * static_cast<double>(i) / (n_density - 1);
      t.add({std::string("density"), std::monostate{}, d, shiftmodels::density(model, d)});
    }
    return t;
  }

  TrajectoryWindow window;
  window.n_samples = n;
  double period = 0.0;
  if (noise == "two-tone") {
    period = shiftmodels::trajectory_period(std::get<TwoTone>(model));
  } else {
    period = 2 * std::numbers::pi *
             static_cast<double>(shiftmodels::fibonacci(window.convergent + 1));
  }
  const auto phases = quadrature::midpoint_phases(period, n);
  const auto shifts = shiftmodels::trajectory_samples(model, window);
  for (std::size_t i = 0; i < n; ++i) {
    t.add({std::string("trajectory"), phases[i], shifts[i], std::monostate{}});
  }

  std::vector<double> points;
  for (std::size_t i = 0; i < n_density; ++i) {
    points.push_back(c.delta0 - 2 * c.delta1 + 4 * c.delta1 * static_cast<double>(i) / (n_density - 1));
  }
  std::optional<shiftmodels::TwoToneDensity> two_tone;
  if (noise == "two-tone") {
    two_tone.emplace(std::get<TwoTone>(model));
    const auto caustics = two_tone->caustics();
    points.insert(points.end(), caustics.begin(), caustics.end());
  } else {
    points.push_back(c.delta0);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (double d : points) {
    double w = 0.0;
    if (two_tone) {
      w = two_tone->value_or_inf(d);
    } else {
      const auto &gm = std::get<GoldenMean>(model);
      try {
        w = shiftmodels::golden_mean_density(gm, d);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::CausticPoint) throw;
        w = std::numeric_limits<double>::infinity();
      }
    }
    t.add({std::string("density"), std::monostate{}, d, w});
  }
  return t;
}

ordered_json provenance(const RunConfig &c, const Table &t) {
  ordered_json m;
  m["tool"] = "wigdec";
  m["version"] = std::string(kVersion);
  ordered_json modules;
  for (const char *name : {"wavepacket", "shiftmodels", "specfun", "quadrature", "coherence", "cli"}) {
    modules[name] = std::string(kVersion);
  }
  m["modules"] = modules;
  m["config"] = c.to_json();
  m["columns"] = t.columns;
  m["rows"] = t.rows.size();
  m["csv"] = {{"delimiter", ","}, {"significant_digits", 17}, {"line_ending", "LF"},
              {"non_finite", "inf"}};
  return m;
}

int run(const std::vector<std::string> &args, std::ostream &err) {
  CLI::App app{"Decoherence of shift-averaged neutron wave packets", "wigdec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> state_case, noise, format, out;
    std::optional<double> delta0, delta1, sigma, k0, coh_len, x0;
    std::optional<int> j, j_max, nodes, grid_nx, grid_nk;
  } f;

  const auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", f.config, "JSON config file (flags override it)");
    sub->add_option("--out", f.out, "Output path (stdout when omitted)");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--case", f.state_case, "single, interferometer or magnetic")
        ->check(CLI::IsMember({"single", "interferometer", "magnetic"}));
    sub->add_option("--noise", f.noise, "gaussian, two-tone or golden")
        ->check(CLI::IsMember({"gaussian", "two-tone", "golden"}));
    sub->add_option("--delta0", f.delta0, "Mean shift [A]");
    sub->add_option("--delta1", f.delta1, "Two-tone amplitude [A]");
    sub->add_option("--sigma", f.sigma, "Gaussian shift spread [A]");
    sub->add_option("--j", f.j, "Fibonacci index");
    sub->add_option("--k0", f.k0, "Mean wavenumber [1/A]");
    sub->add_option("--coh-len", f.coh_len, "Coherence length delta [A]");
    sub->add_option("--x0", f.x0, "Packet centre [A]");
    sub->add_option("--nodes", f.nodes, "Averaging nodes per axis / trajectory samples");
    sub->add_option("--grid-nx", f.grid_nx, "Output grid points in x (or density points)");
    sub->add_option("--grid-nk", f.grid_nk, "Output grid points in k");
  };
  for (const char *name : {"table1", "sweep", "wigner", "dist"}) {
    auto *sub = app.add_subcommand(name);
    add_common(sub);
    if (std::string(name) == "table1") {
      sub->add_option("--j-max", f.j_max, "Largest Fibonacci index in the table");
    }
  }
  app.get_subcommand("table1")->description("Entropy and decoherence for j = 1..j-max and the golden mean");
  app.get_subcommand("sweep")->description("Analytic eps over delta in [0.2, 6], sigma in [0, 6]");
  app.get_subcommand("wigner")->description("Averaged Wigner sheets for sigma in {0, 0.6, 1.2, 1.8}");
  app.get_subcommand("dist")->description("Trajectory and density samples of the shift distribution");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    std::ostringstream out;
    const int code = app.exit(e, out, err);
    if (code == 0) {
      std::cout << out.str();
      return kOk;
    }
    return kUsage;
  }

  RunConfig config;
  try {
    config.command = app.get_subcommands().front()->get_name();
    if (f.config) {
      std::ifstream in(*f.config);
      if (!in) throw ConfigError("cannot read config file " + *f.config);
      json layer;
      try {
        in >> layer;
      } catch (const json::exception &e) {
        throw ConfigError("config file " + *f.config + ": " + e.what());
      }
      apply_layer(config, layer);
    }
    json flags = json::object();
    if (f.state_case) flags["case"] = *f.state_case;
    if (f.noise) flags["noise"] = *f.noise;
    if (f.format) flags["format"] = *f.format;
    if (f.out) flags["out"] = *f.out;
    if (f.delta0) flags["delta0"] = *f.delta0;
    if (f.delta1) flags["delta1"] = *f.delta1;
    if (f.sigma) flags["sigma"] = *f.sigma;
    if (f.k0) flags["k0"] = *f.k0;
    if (f.coh_len) flags["coh_len"] = *f.coh_len;
    if (f.x0) flags["x0"] = *f.x0;
    if (f.j) flags["j"] = *f.j;
    if (f.j_max) flags["j_max"] = *f.j_max;
    if (f.nodes) flags["nodes"] = *f.nodes;
    if (f.grid_nx) flags["grid_nx"] = *f.grid_nx;
    if (f.grid_nk) flags["grid_nk"] = *f.grid_nk;
    apply_layer(config, flags);
    validate(config);
    probe_writable(config.out);
  } catch (const std::exception &e) {
    err << "wigdec: " << e.what() << "\n";
    return kUsage;
  }

  try {
    Table table;
    if (config.command == "table1") {
      table = cmd_table1(config);
    } else if (config.command == "sweep") {
      table = cmd_sweep(config);
    } else if (config.command == "wigner") {
      table = cmd_wigner(config);
    } else {
      table = cmd_dist(config);
    }
    emit(table, provenance(config, table), config.format, config.out);
  } catch (const ConvergenceFailure &e) {
    err << "wigdec: convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const ConfigError &e) {
    err << "wigdec: " << e.what() << "\n";
    return kUsage;
  } catch (const Error &e) {
    err << "wigdec: " << e.what() << "\n";
    return e.kind() == ErrorKind::SupportEscape ? kConvergence : kUsage;
  } catch (const std::exception &e) {
    err << "wigdec: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace wigdec::cli
