#pragma once

// JSON run configuration for the command-line tool. Parsing is strict:
// unknown keys are rejected, and every violation found is reported in a
// single error.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvednb/dynamics.hpp"
#include "curvednb/experiments.hpp"
#include "curvednb/types.hpp"

namespace curvednb {

struct SolveSection {
  Vector initial_alphas;
  int max_iterations = 200;
  double tolerance = tol::solver_residual;
};

struct SweepSection {
  std::vector<double> r_grid;
  int starts = 8;
  std::uint64_t seed = 0;
  double min_separation = 0.1;
  std::optional<double> fixed_angular_velocity;
  bool require_consistency = true;
  bool require_rigidity = true;
};

struct BoundednessSection {
  double a_fixed = 0.0;
  BoundednessFamily family = BoundednessFamily::polygon;
  double r_min = 0.0;
  double r_max = 0.0;
  int grid_points = 100;
};

struct ClusterSection {
  std::vector<double> delta_grid;
};

struct RunConfig {
  SpaceSpec space;
  MassVector masses;
  std::optional<double> r;
  std::optional<Vector> alphas;
  std::optional<double> angular_velocity;
  std::optional<IntegrationConfig> integration;
  std::optional<SolveSection> solve;
  std::optional<SweepSection> sweep;
  std::optional<std::string> probe;  // min-distance | boundedness | cluster-blowup
  std::optional<BoundednessSection> boundedness;
  std::optional<ClusterSection> cluster;
  std::optional<std::string> catalog;  // input catalog for min-distance
};

// Reads and validates a configuration file. Throws IoError when the file
// cannot be read and ValidationError (listing all problems) otherwise.
RunConfig parse_config(const std::string& path);

// Same validation on in-memory text.
RunConfig parse_config_text(const std::string& text);

}  // namespace curvednb
