#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "output.hpp"
#include "wigdec/types.hpp"

namespace wigdec::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kConvergence = 3 };

/// Bad flag values or config file contents.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical result failed its own refinement check.
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully resolved settings for one command. Defaults are the experimental
/// values k0 = 1.7 / A, delta = 1.1 A, delta0 = 16.1 A, delta1 = 2 A.
struct RunConfig {
  std::string command;
  std::optional<StateCase> state_case;
  std::optional<std::string> noise;
  double delta0 = 16.1;
  double delta1 = 2.0;
  std::optional<double> sigma;
  int j = 1;
  int j_max = 5;
  double k0 = 1.7;
  double coh_len = 1.1;
  double x0 = 0.0;
  int nodes = 4096;
  int grid_nx = 0;
  int grid_nk = 0;
  Format format = Format::Csv;
  std::string out;

  GaussianPacket packet() const { return {x0, k0, coh_len}; }
  /// Key/value form used for config files and the provenance record.
  nlohmann::ordered_json to_json() const;
};

/// Overlays the keys of `layer` on `config`. Unknown keys and wrongly typed
/// values raise ConfigError.
void apply_layer(RunConfig &config, const nlohmann::json &layer);

void validate(const RunConfig &config);

Table cmd_table1(const RunConfig &config);
Table cmd_sweep(const RunConfig &config);
Table cmd_wigner(const RunConfig &config);
Table cmd_dist(const RunConfig &config);

/// Provenance written next to every output file.
nlohmann::ordered_json provenance(const RunConfig &config, const Table &table);

/// Parses `args` (without the program name), runs the command and returns
/// the process exit code. Diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &err);

}  // namespace wigdec::cli
