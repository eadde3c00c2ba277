// Command-line front end: simulate trajectories, find and verify relative
// equilibria, and run the minimum-distance / boundedness / cluster-blow-up
// probes. Exit codes: 0 success, 1 failed verification or runtime failure,
// 2 validation, 3 singularity, 4 non-convergence, 5 I/O.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "curvednb/config.hpp"
#include "curvednb/dynamics.hpp"
#include "curvednb/equilibria.hpp"
#include "curvednb/experiments.hpp"
#include "curvednb/geometry.hpp"
#include "curvednb/io.hpp"

namespace {

using namespace curvednb;

int threads_from_env() {
  const char* env = std::getenv("NBODY_THREADS");
  if (env == nullptr) return 0;  // hardware default
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 1) {
    throw ValidationError("NBODY_THREADS must be a positive integer, got '" +
                          std::string(env) + "'");
  }
  return static_cast<int>(value);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

std::string brief_angles(const Vector& alphas) {
  std::string out = "[";
  char buf[32];
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6g", alphas(i));
    if (i > 0) out += ", ";
    out += buf;
  }
  return out + "]";
}

void print_record_line(int id, const EquilibriumRecord& rec) {
  std::printf("#%d r=%.6g n=%d A=%.10g residual=%.3e alphas=%s\n", id,
              rec.cfg.r, rec.cfg.body_count(), rec.angular_velocity,
              rec.residual_norm, brief_angles(rec.cfg.alphas).c_str());
}

int run_simulate(const RunConfig& cfg, const std::string& out_path) {
  require(cfg.r.has_value(), "simulate: config needs 'r'");
  require(cfg.alphas.has_value(), "simulate: config needs 'alphas'");
  require(cfg.integration.has_value(), "simulate: config needs 'integration'");
  require(cfg.alphas->size() == cfg.masses.size(),
          "simulate: 'alphas' and 'masses' must have the same length");

  PolarConfiguration polar;
  polar.r = *cfg.r;
  polar.alphas = *cfg.alphas;
  polar.z_block = solve_z_block(polar.r, cfg.space);

  const double A = cfg.angular_velocity.value_or(0.0);
  const AmbientState initial =
      initial_state_from_equilibrium(polar, A, cfg.space);
  const std::vector<AmbientState> series =
      simulate(initial, cfg.masses, cfg.space, *cfg.integration);
  write_trajectory_csv(series, out_path);
  std::printf("wrote %zu samples to %s\n", series.size(), out_path.c_str());
  return 0;
}

SweepSpec sweep_spec_from_config(const RunConfig& cfg,
                                 std::optional<std::uint64_t> seed_override) {
  require(cfg.sweep.has_value(), "config needs a 'sweep' section");
  const SweepSection& section = *cfg.sweep;
  SweepSpec spec;
  spec.space = cfg.space;
  spec.masses = cfg.masses;
  spec.r_grid = section.r_grid;
  spec.starts = section.starts;
  spec.seed = seed_override.value_or(section.seed);
  spec.min_separation = section.min_separation;
  spec.fixed_angular_velocity = section.fixed_angular_velocity;
  spec.require_consistency = section.require_consistency;
  spec.require_rigidity = section.require_rigidity;
  if (cfg.solve) {
    spec.solve_options.max_iterations = cfg.solve->max_iterations;
    spec.solve_options.residual_tolerance = cfg.solve->tolerance;
  }
  return spec;
}

int run_find_eq(const RunConfig& cfg, const std::string& out_path,
                std::optional<std::uint64_t> seed_override) {
  if (cfg.sweep) {
    const SweepSpec spec = sweep_spec_from_config(cfg, seed_override);
    const SweepResult result = sweep_equilibria(spec, threads_from_env());
    persist_catalog(result.catalog, out_path);
    for (std::size_t i = 0; i < result.catalog.size(); ++i) {
      print_record_line(static_cast<int>(i), result.catalog[i]);
    }
    std::printf("retained %zu records (%zu failed starts) -> %s\n",
                result.catalog.size(), result.failures.size(),
                out_path.c_str());
    return 0;
  }

  require(cfg.solve.has_value(),
          "find-eq: config needs a 'solve' or 'sweep' section");
  require(cfg.r.has_value(), "find-eq: config needs 'r'");
  require(cfg.solve->initial_alphas.size() == cfg.masses.size(),
          "find-eq: 'solve.initial_alphas' and 'masses' must have the same "
          "length");

  SolveOptions options;
  options.max_iterations = cfg.solve->max_iterations;
  options.residual_tolerance = cfg.solve->tolerance;
  if (cfg.angular_velocity) {
    options.fixed_angular_velocity = cfg.angular_velocity;
  }
  const SolveOutcome outcome = solve_equilibrium(
      cfg.masses, *cfg.r, cfg.space, cfg.solve->initial_alphas, options);
  if (!outcome.converged) {
    std::fprintf(stderr, "no solution: %s\n", outcome.message.c_str());
    return 4;
  }
  const EquilibriumRecord rec = canonicalize(outcome.record);
  persist_catalog({rec}, out_path);
  print_record_line(0, rec);
  std::printf("retained 1 record -> %s\n", out_path.c_str());
  return 0;
}

int run_verify(const std::string& eq_path, long long index) {
  const Catalog catalog = load_catalog(eq_path);
  require(index >= 0 && index < static_cast<long long>(catalog.size()),
          "verify: index " + std::to_string(index) +
              " out of range (catalog has " +
              std::to_string(catalog.size()) + " records)");
  const EquilibriumRecord& rec = catalog[static_cast<std::size_t>(index)];

  bool all_pass = true;
  const auto report = [&](const char* name, double value, double threshold) {
    const bool pass = value <= threshold;
    all_pass = all_pass && pass;
    std::printf("%-28s %.3e (threshold %.1e) %s\n", name, value, threshold,
                pass ? "PASS" : "FAIL");
  };

  const Vector residual = criterion_residual(rec.masses, rec.cfg, rec.space);
  report("criterion-residual", residual.lpNorm<Eigen::Infinity>(),
         tol::solver_residual);

  if (is_great_circle(rec.cfg)) {
    std::printf("%-28s skipped (Z = 0: balance inapplicable)\n",
                "angular-velocity-balance");
  } else {
    report("angular-velocity-balance",
           angular_velocity_consistency(rec.masses, rec.cfg, rec.space),
           tol::consistency);
    const double a2 =
        angular_velocity_squared(rec.masses, rec.cfg, rec.space, 0);
    const double stored = rec.angular_velocity * rec.angular_velocity;
    report("angular-velocity-match", std::abs(stored - a2) / a2,
           tol::consistency);
  }

  const RigidityCheckResult rc = rigidity_check(rec);
  report("dynamic-rigidity", rc.drift, tol::rigidity);
  report("manifold-drift", rc.manifold_drift, tol::manifold);

  std::printf("%s\n", all_pass ? "VERIFIED" : "NOT VERIFIED");
  return all_pass ? 0 : 1;
}

int run_probe(const RunConfig& cfg, const std::string& out_path,
              std::optional<std::uint64_t> seed_override) {
  require(cfg.probe.has_value(), "probe: config needs a 'probe' key");
  const std::string& kind = *cfg.probe;

  if (kind == "min-distance") {
    Catalog catalog;
    if (cfg.catalog) {
      catalog = load_catalog(*cfg.catalog);
    } else {
      const SweepSpec spec = sweep_spec_from_config(cfg, seed_override);
      catalog = sweep_equilibria(spec, threads_from_env()).catalog;
    }
    const MinDistanceReport report = min_distance_probe(catalog);
    write_min_distance_csv(report, out_path);
    if (report.rows.empty()) {
      std::printf("min-distance probe (%s): empty catalog\n",
                  report.evidence.c_str());
    } else {
      const MinDistanceRow& witness =
          report.rows[static_cast<std::size_t>(report.argmin_record)];
      std::printf(
          "min-distance probe (%s): global min %.10g at record #%d "
          "(r=%.6g, n=%d) over %zu records\n",
          report.evidence.c_str(), report.global_min, witness.record_id,
          witness.r, witness.n, report.rows.size());
    }
    return 0;
  }

  if (kind == "boundedness") {
    require(cfg.boundedness.has_value(),
            "probe: config needs a 'boundedness' section");
    const BoundednessSection& sec = *cfg.boundedness;
    const BoundednessReport report =
        boundedness_probe(cfg.masses, cfg.space, sec.a_fixed, sec.family,
                          sec.r_min, sec.r_max, sec.grid_points);
    write_boundedness_csv(report, out_path);
    std::printf("boundedness probe (%s): A^2(r) %s on [%.6g, %.6g]\n",
                report.evidence.c_str(),
                report.strictly_decreasing ? "strictly decreasing"
                                           : "NOT strictly decreasing",
                sec.r_min, sec.r_max);
    if (report.solved_r) {
      std::printf("A^2(r) = %.10g solved by r = %.10g\n",
                  report.a_fixed * report.a_fixed, *report.solved_r);
    } else {
      std::printf("no solution in range for A = %.10g\n", report.a_fixed);
    }
    return 0;
  }

  // cluster-blowup
  require(cfg.cluster.has_value(), "probe: config needs a 'cluster' section");
  require(cfg.r.has_value(), "probe: config needs 'r'");
  const ClusterBlowupReport report = cluster_blowup_probe(
      cfg.masses, *cfg.r, cfg.space, cfg.cluster->delta_grid);
  write_cluster_blowup_csv(report, out_path);
  std::printf("cluster-blowup probe: %zu rows, divergence %s\n",
              report.rows.size(),
              report.monotone_divergence ? "monotone" : "not monotone");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Curved n-body problem: dynamics and relative equilibria on "
      "surfaces of curvature +1/-1"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string eq_path;
  long long index = 0;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  CLI::App* sim = app.add_subcommand("simulate", "Integrate a trajectory");
  sim->add_option("--config", config_path, "JSON run configuration")
      ->required();
  sim->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* find = app.add_subcommand(
      "find-eq", "Solve for relative equilibria (single start or sweep)");
  find->add_option("--config", config_path, "JSON run configuration")
      ->required();
  find->add_option("--out", out_path, "Output JSONL catalog path")->required();
  find->add_option("--seed", seed_value, "Override the sweep seed")
      ->each([&](const std::string&) { seed_given = true; });

  CLI::App* verify =
      app.add_subcommand("verify", "Re-check a catalog record");
  verify->add_option("--eq", eq_path, "JSONL catalog path")->required();
  verify->add_option("--index", index, "Record index (0-based)")->required();

  CLI::App* probe = app.add_subcommand("probe", "Run a configured probe");
  probe->add_option("--config", config_path, "JSON run configuration")
      ->required();
  probe->add_option("--out", out_path, "Output CSV path")->required();
  probe->add_option("--seed", seed_value, "Override the sweep seed")
      ->each([&](const std::string&) { seed_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    std::optional<std::uint64_t> seed;
    if (seed_given) seed = seed_value;
    if (sim->parsed()) return run_simulate(parse_config(config_path), out_path);
    if (find->parsed()) {
      return run_find_eq(parse_config(config_path), out_path, seed);
    }
    if (verify->parsed()) return run_verify(eq_path, index);
    if (probe->parsed()) {
      return run_probe(parse_config(config_path), out_path, seed);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SingularityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
