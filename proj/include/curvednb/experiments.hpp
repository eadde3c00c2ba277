#pragma once

// Parameter sweeps and the numerical probes behind the two global
// statements about the rotating solutions: bodies of solved equilibria
// keep a strictly positive mutual distance, and at fixed masses and
// angular velocity the solved radii stay bounded.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvednb/dynamics.hpp"
#include "curvednb/equilibria.hpp"
#include "curvednb/types.hpp"

namespace curvednb {

using Catalog = std::vector<EquilibriumRecord>;

// Deterministic 64-bit generator used for all seeded draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double next_double();  // uniform in [0, 1)
 private:
  std::uint64_t state_;
};

// Independent deterministic stream for a (seed, lane, item) triple.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t lane,
                          std::uint64_t item);

// n angles uniform on [0, 2pi) with minimum pairwise circular
// separation min_separation.
Vector draw_separated_angles(SplitMix64& rng, int n, double min_separation);

struct RigidityCheckOptions {
  int steps_per_period = 20000;
  int output_stride = 100;
  double fallback_t_end = 1.0;  // horizon when A = 0
};

struct RigidityCheckResult {
  double drift = 0.0;           // max pairwise-distance drift
  double manifold_drift = 0.0;  // max |q (.) q - sigma| over samples
  double period = 0.0;          // integration horizon used
};

// Integrates the record's initial state over one rotation period and
// measures how rigid the motion stays.
RigidityCheckResult rigidity_check(const EquilibriumRecord& record,
                                   const RigidityCheckOptions& options = {});

struct SweepSpec {
  SpaceSpec space;
  MassVector masses;
  std::vector<double> r_grid;
  int starts = 8;
  std::uint64_t seed = 0;
  double min_separation = 0.1;
  std::optional<double> fixed_angular_velocity;
  SolveOptions solve_options;
  RigidityCheckOptions rigidity_options;
  // Retention gates. Both on: catalog holds verified relative equilibria.
  // Off: catalog holds converged tangential candidates (used by the
  // minimum-distance probe, whose subject is the criterion's root set).
  bool require_consistency = true;
  bool require_rigidity = true;

  void validate() const;
};

struct SweepFailure {
  double r = 0.0;
  int start_index = 0;
  std::string message;
};

struct SweepResult {
  Catalog catalog;  // canonical, deduplicated, in grid order
  std::vector<SweepFailure> failures;
};

// Multi-start solve over the radius grid. Canonicalizes, deduplicates
// (records match when canonical angles agree entrywise to 1e-8 at the
// same r), and gates retention per SweepSpec. Grid points are processed
// independently (max_threads caps the workers; 0 = hardware default) and
// merged in grid order, so results do not depend on the thread count.
SweepResult sweep_equilibria(const SweepSpec& spec, int max_threads = 0);

struct MinDistanceRow {
  int record_id = 0;
  double r = 0.0;
  int n = 0;
  double min_distance = 0.0;
};

struct MinDistanceReport {
  std::vector<MinDistanceRow> rows;
  double global_min = 0.0;
  int argmin_record = -1;
  // Probes exhibit witnesses; they do not prove the universal bound.
  std::string evidence = "empirical";
};

// Smallest ambient pairwise distance per record and over the catalog.
// Throws if a record has coincident bodies (impossible for converged
// records).
MinDistanceReport min_distance_probe(const Catalog& catalog);

enum class BoundednessFamily { polygon, solver };

struct BoundednessRow {
  double r = 0.0;
  double a_squared = 0.0;
};

struct BoundednessReport {
  std::vector<BoundednessRow> grid;
  bool strictly_decreasing = false;
  double a_fixed = 0.0;
  std::optional<double> solved_r;  // empty: no solution in the search range
  std::string evidence = "empirical";
};

// Evaluates A^2(r) for the regular-polygon family (closed form, or
// re-solved from polygon starts for family = solver) over [r_min, r_max],
// checks strict monotone decrease, and inverts A^2(r) = a_fixed^2 by
// bisection to interval width 1e-12.
BoundednessReport boundedness_probe(const MassVector& masses,
                                    const SpaceSpec& space, double a_fixed,
                                    BoundednessFamily family, double r_min,
                                    double r_max, int grid_points = 100);

struct ClusterBlowupRow {
  double delta = 0.0;
  double pair_term = 0.0;  // |m_2 sin(delta)| / pair denominator
};

struct ClusterBlowupReport {
  std::vector<ClusterBlowupRow> rows;
  bool monotone_divergence = false;  // pair term grows as delta shrinks
};

// Tabulates the in-cluster criterion term for a near-coincident pair
// (alpha_1 = 0, alpha_2 = delta; remaining bodies parked on the far
// side of the circle). The term scales like delta^{-2}, the mechanism
// that excludes clustered equilibria. Deltas at or below the coincidence
// tolerance are skipped.
ClusterBlowupReport cluster_blowup_probe(const MassVector& masses, double r,
                                         const SpaceSpec& space,
                                         const std::vector<double>& delta_grid);

// JSONL persistence; one record per line, reals at 17 significant digits,
// so load(persist(c)) reproduces c exactly.
void persist_catalog(const Catalog& catalog, const std::string& path);
Catalog load_catalog(const std::string& path);

// Serialization of a single record (the JSONL line, without newline).
std::string record_to_json_line(const EquilibriumRecord& record);
EquilibriumRecord record_from_json_line(const std::string& line);

}  // namespace curvednb
