#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screenbie/geometry.hpp"

namespace screenbie::cli {

enum class Mode { Solve, Probe, Sweep, Validate };

// Malformed configs; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldGrid {
  // Axis ranges as {min, max, count}; y is used for n = 3 only.
  double x[3] = {-0.5, 1.5, 21};
  double y[3] = {0.5, 0.5, 1};
  double z[3] = {0.1, 1.0, 10};
};

struct StudyConfig {
  Mode mode = Mode::Validate;
  ScreenGeometry geometry = ScreenGeometry::intervals({{0.0, 1.0}});
  std::vector<double> direction{0.0, -1.0};
  std::vector<double> ks{5.0};
  int mesh_n = 64;
  std::uint64_t seed = 42;
  double spectral_accuracy = 1e-8;
  std::string quantity = "coercivity_neumann";  // probe / sweep
  FieldGrid field;
  std::string output = "out";
  nlohmann::json echo;  // the config as read, for results.json
};

StudyConfig parse_config(const nlohmann::json& j, Mode mode);
StudyConfig load_config(const std::string& path, Mode mode);

// Runs one study and writes its artifacts; returns the exit status
// (0 pass, 2 inconclusive, 1 failure).
int run(const StudyConfig& c);

// Full command line: subcommand plus --config, --out, --jobs, --seed.
int main(int argc, char** argv);

}  // namespace screenbie::cli
