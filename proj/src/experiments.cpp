#include "curvednb/experiments.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "curvednb/io.hpp"

namespace curvednb {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t lane,
                          std::uint64_t item) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (lane + 1)) ^
               (0xD1B54A32D192ED03ULL * (item + 1)));
  return g.next();
}

Vector draw_separated_angles(SplitMix64& rng, int n, double min_separation) {
  if (n < 1) {
    throw ValidationError("draw_separated_angles: n must be >= 1");
  }
  if (!(min_separation > 0.0) || n * min_separation >= kTwoPi) {
    throw ValidationError(
        "draw_separated_angles: separation infeasible for n bodies");
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vector alphas(n);
    for (int i = 0; i < n; ++i) alphas(i) = kTwoPi * rng.next_double();
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        const double w = std::fmod(std::abs(alphas(i) - alphas(j)), kTwoPi);
        if (std::min(w, kTwoPi - w) < min_separation) ok = false;
      }
    }
    if (ok) return alphas;
  }
  throw ValidationError(
      "draw_separated_angles: no admissible draw after 10000 attempts");
}

RigidityCheckResult rigidity_check(const EquilibriumRecord& record,
                                   const RigidityCheckOptions& options) {
  if (options.steps_per_period < 1 || options.output_stride < 1) {
    throw ValidationError("rigidity_check: bad options");
  }
  const double A = record.angular_velocity;
  const double period = A > 0.0 ? kTwoPi / A : options.fallback_t_end;

  const AmbientState initial =
      initial_state_from_equilibrium(record.cfg, A, record.space);
  IntegrationConfig cfg;
  cfg.step_size = period / options.steps_per_period;
  cfg.t_end = period;
  cfg.output_stride = options.output_stride;
  cfg.projection_enabled = true;

  const std::vector<AmbientState> series =
      simulate(initial, record.masses, record.space, cfg);
  RigidityCheckResult result;
  result.drift = rigidity_drift(series, initial);
  result.manifold_drift = manifold_drift(series, record.space);
  result.period = period;
  return result;
}

void SweepSpec::validate() const {
  space.validate();
  validate_masses(masses, 2);
  if (starts < 1) {
    throw ValidationError("SweepSpec: starts must be >= 1");
  }
  if (!(min_separation > 0.0) ||
      masses.size() * min_separation >= kTwoPi) {
    throw ValidationError("SweepSpec: infeasible min_separation");
  }
  for (double r : r_grid) {
    if (!(r > 0.0)) {
      throw ValidationError("SweepSpec: r_grid entries must be > 0");
    }
    if (space.sigma == 1 && r > 1.0) {
      throw ValidationError("SweepSpec: infeasible radius r = " +
                            std::to_string(r) + " on the sphere");
    }
    if (space.sigma == 1 && r == 1.0 && !fixed_angular_velocity) {
      throw ValidationError(
          "SweepSpec: great-circle radius r = 1 needs fixed_angular_velocity");
    }
  }
}

namespace {

bool same_canonical(const EquilibriumRecord& a, const EquilibriumRecord& b) {
  if (a.cfg.body_count() != b.cfg.body_count() || a.cfg.r != b.cfg.r) {
    return false;
  }
  return ((a.cfg.alphas - b.cfg.alphas).cwiseAbs().maxCoeff() <=
          tol::dedup_angle);
}

SweepResult sweep_grid_point(const SweepSpec& spec, int grid_index) {
  const double r = spec.r_grid[static_cast<std::size_t>(grid_index)];
  const int n = static_cast<int>(spec.masses.size());

  SolveOptions solve_options = spec.solve_options;
  if (spec.fixed_angular_velocity) {
    solve_options.fixed_angular_velocity = spec.fixed_angular_velocity;
  }

  SweepResult out;
  for (int start = 0; start < spec.starts; ++start) {
    SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(grid_index),
                               static_cast<std::uint64_t>(start)));
    const Vector alphas0 =
        draw_separated_angles(rng, n, spec.min_separation);

    const SolveOutcome outcome =
        solve_equilibrium(spec.masses, r, spec.space, alphas0, solve_options);
    if (!outcome.converged) {
      out.failures.push_back({r, start, outcome.message});
      continue;
    }

    const EquilibriumRecord rec = canonicalize(outcome.record);
    bool duplicate = false;
    for (const EquilibriumRecord& kept : out.catalog) {
      if (same_canonical(kept, rec)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    if (spec.require_consistency && !is_great_circle(rec.cfg) &&
        !(outcome.consistency <= tol::consistency)) {
      out.failures.push_back(
          {r, start,
           "angular-velocity consistency " +
               std::to_string(outcome.consistency) + " exceeds tolerance"});
      continue;
    }
    if (spec.require_rigidity) {
      const RigidityCheckResult rc =
          rigidity_check(rec, spec.rigidity_options);
      if (!(rc.drift <= tol::rigidity)) {
        out.failures.push_back(
            {r, start,
           "rigidity drift " + std::to_string(rc.drift) +
               " exceeds tolerance"});
        continue;
      }
    }
    out.catalog.push_back(rec);
  }
  return out;
}

}  // namespace

SweepResult sweep_equilibria(const SweepSpec& spec, int max_threads) {
  spec.validate();
  const int points = static_cast<int>(spec.r_grid.size());
  if (points == 0) return {};

  int workers = max_threads > 0
                    ? max_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, points));

  std::vector<SweepResult> per_point(static_cast<std::size_t>(points));
  std::atomic<int> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto run = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= points) return;
      try {
        per_point[static_cast<std::size_t>(i)] = sweep_grid_point(spec, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  SweepResult merged;
  for (SweepResult& part : per_point) {
    for (EquilibriumRecord& rec : part.catalog) {
      merged.catalog.push_back(std::move(rec));
    }
    for (SweepFailure& f : part.failures) {
      merged.failures.push_back(std::move(f));
    }
  }
  return merged;
}

MinDistanceReport min_distance_probe(const Catalog& catalog) {
  MinDistanceReport report;
  report.global_min = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < catalog.size(); ++id) {
    const EquilibriumRecord& rec = catalog[id];
    const Matrix points = embed_polar(rec.cfg, rec.space);
    const double dmin = min_pairwise_distance(points);
    if (!(dmin > 0.0)) {
      throw Error("min_distance_probe: record " + std::to_string(id) +
                  " has coincident bodies");
    }
    report.rows.push_back({static_cast<int>(id), rec.cfg.r,
                           rec.cfg.body_count(), dmin});
    if (dmin < report.global_min) {
      report.global_min = dmin;
      report.argmin_record = static_cast<int>(id);
    }
  }
  if (report.rows.empty()) report.global_min = 0.0;
  return report;
}

namespace {

Vector polygon_angles(int n) {
  Vector alphas(n);
  for (int i = 0; i < n; ++i) alphas(i) = kTwoPi * i / n;
  return alphas;
}

}  // namespace

BoundednessReport boundedness_probe(const MassVector& masses,
                                    const SpaceSpec& space, double a_fixed,
                                    BoundednessFamily family, double r_min,
                                    double r_max, int grid_points) {
  space.validate();
  validate_masses(masses, 2);
  if (!(r_min > 0.0) || !(r_max > r_min)) {
    throw ValidationError("boundedness_probe: need 0 < r_min < r_max");
  }
  if (space.sigma == 1 && r_max >= 1.0) {
    throw ValidationError(
        "boundedness_probe: search range must stay below r = 1 on the "
        "sphere");
  }
  if (grid_points < 2) {
    throw ValidationError("boundedness_probe: need at least 2 grid points");
  }
  if (!(a_fixed > 0.0)) {
    throw ValidationError("boundedness_probe: a_fixed must be > 0");
  }

  const int n = static_cast<int>(masses.size());
  const Vector alphas = polygon_angles(n);

  const auto a_squared_at = [&](double r) -> double {
    if (family == BoundednessFamily::polygon) {
      const PolarConfiguration cfg{r, alphas, solve_z_block(r, space)};
      return angular_velocity_squared_closed_form(masses, cfg, space, 0);
    }
    const SolveOutcome outcome =
        solve_equilibrium(masses, r, space, alphas, SolveOptions{});
    if (!outcome.converged) {
      throw NumericalError("boundedness_probe: solver family failed at r = " +
                           std::to_string(r) + ": " + outcome.message);
    }
    const double a = outcome.record.angular_velocity;
    return a * a;
  };

  BoundednessReport report;
  report.a_fixed = a_fixed;
  report.grid.reserve(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    const double r =
        r_min + (r_max - r_min) * static_cast<double>(i) / (grid_points - 1);
    report.grid.push_back({r, a_squared_at(r)});
  }
  report.strictly_decreasing = true;
  for (std::size_t i = 1; i < report.grid.size(); ++i) {
    if (!(report.grid[i].a_squared < report.grid[i - 1].a_squared)) {
      report.strictly_decreasing = false;
      break;
    }
  }

  const double target = a_fixed * a_fixed;
  if (!report.strictly_decreasing || target > report.grid.front().a_squared ||
      target < report.grid.back().a_squared) {
    return report;  // no solution in range
  }

  double lo = r_min;
  double hi = r_max;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (a_squared_at(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  report.solved_r = 0.5 * (lo + hi);
  return report;
}

ClusterBlowupReport cluster_blowup_probe(
    const MassVector& masses, double r, const SpaceSpec& space,
    const std::vector<double>& delta_grid) {
  space.validate();
  validate_masses(masses, 2);
  if (delta_grid.empty()) {
    throw ValidationError("cluster_blowup_probe: empty delta grid");
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0)) {
      throw ValidationError("cluster_blowup_probe: deltas must be > 0");
    }
    if (i > 0 && !(delta_grid[i] < delta_grid[i - 1])) {
      throw ValidationError("cluster_blowup_probe: deltas must decrease");
    }
  }

  ClusterBlowupReport report;
  for (double delta : delta_grid) {
    const double s = std::sin(0.5 * delta);
    if (2.0 * s * s <= tol::singularity) break;  // stop before the funnel
    const PairKernel kernel = pair_kernel(delta, r, space);
    report.rows.push_back(
        {delta, masses(1) * std::abs(std::sin(delta)) / kernel.denom});
  }
  report.monotone_divergence = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (!(report.rows[i].pair_term > report.rows[i - 1].pair_term)) {
      report.monotone_divergence = false;
      break;
    }
  }
  return report;
}

namespace {

void append_real_array(std::ostringstream& os, const Vector& values) {
  os << '[';
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    os << format_real(values(i));
  }
  os << ']';
}

}  // namespace

std::string record_to_json_line(const EquilibriumRecord& record) {
  std::ostringstream os;
  os << "{\"sigma\":" << record.space.sigma << ",\"k\":" << record.space.k
     << ",\"masses\":";
  append_real_array(os, record.masses);
  os << ",\"r\":" << format_real(record.cfg.r) << ",\"alphas\":";
  append_real_array(os, record.cfg.alphas);
  os << ",\"z_block\":";
  append_real_array(os, record.cfg.z_block);
  os << ",\"angular_velocity\":" << format_real(record.angular_velocity)
     << ",\"residual_norm\":" << format_real(record.residual_norm)
     << ",\"converged\":" << (record.converged ? "true" : "false")
     << ",\"iterations\":" << record.iterations << '}';
  return os.str();
}

namespace {

Vector json_to_vector(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string(field) + " must be an array of numbers");
  }
  Vector out(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw ValidationError(std::string(field) +
                            " must be an array of numbers");
    }
    out(i++) = v.get<double>();
  }
  return out;
}

}  // namespace

EquilibriumRecord record_from_json_line(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  if (!j.is_object()) {
    throw ValidationError("record is not a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "sigma" && key != "k" && key != "masses" && key != "r" &&
        key != "alphas" && key != "z_block" && key != "angular_velocity" &&
        key != "residual_norm" && key != "converged" && key != "iterations") {
      throw ValidationError("unknown field '" + key + "'");
    }
  }
  const char* required[] = {"sigma",        "k",       "masses",
                            "r",            "alphas",  "z_block",
                            "angular_velocity", "residual_norm",
                            "converged",    "iterations"};
  for (const char* field : required) {
    if (!j.contains(field)) {
      throw ValidationError(std::string("missing field '") + field + "'");
    }
  }

  EquilibriumRecord rec;
  rec.space.sigma = j.at("sigma").get<int>();
  rec.space.k = j.at("k").get<int>();
  rec.masses = json_to_vector(j.at("masses"), "masses");
  rec.cfg.r = j.at("r").get<double>();
  rec.cfg.alphas = json_to_vector(j.at("alphas"), "alphas");
  rec.cfg.z_block = json_to_vector(j.at("z_block"), "z_block");
  rec.angular_velocity = j.at("angular_velocity").get<double>();
  rec.residual_norm = j.at("residual_norm").get<double>();
  rec.converged = j.at("converged").get<bool>();
  rec.iterations = j.at("iterations").get<int>();

  rec.space.validate();
  validate_masses(rec.masses);
  if (rec.masses.size() != rec.cfg.alphas.size()) {
    throw ValidationError("masses and alphas disagree on the body count");
  }
  rec.cfg.validate(rec.space);
  return rec;
}

void persist_catalog(const Catalog& catalog, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  for (const EquilibriumRecord& rec : catalog) {
    out << record_to_json_line(rec) << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  Catalog catalog;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      catalog.push_back(record_from_json_line(line));
    } catch (const std::exception& e) {
      throw IoError("catalog parse error at " + path + ":" +
                    std::to_string(lineno) + ": " + e.what());
    }
  }
  return catalog;
}

}  // namespace curvednb
