// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; nothing is deferred to
// runtime configuration.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "curvednb/dynamics.hpp"
#include "curvednb/equilibria.hpp"
#include "curvednb/experiments.hpp"
#include "curvednb/geometry.hpp"

using namespace curvednb;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Vector ngon_angles(int n) {
  Vector alphas(n);
  for (int i = 0; i < n; ++i) alphas(i) = 2 * kPi * i / n;
  return alphas;
}

PolarConfiguration circle_cfg(double r, const Vector& alphas,
                              const SpaceSpec& space) {
  return PolarConfiguration{r, alphas, solve_z_block(r, space)};
}

// --- criterion 1: denominator identity over seeded random samples ------

void criterion_1() {
  SplitMix64 rng(20240501);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int sigma = (trial % 2 == 0) ? 1 : -1;
    const SpaceSpec space{sigma, 2};
    const double rmax = sigma == 1 ? 0.95 : 3.0;
    const double r = 0.25 + (rmax - 0.25) * rng.next_double();
    const double alpha_i = 2 * kPi * rng.next_double();
    const double delta = 0.5 + (2 * kPi - 1.0) * rng.next_double();
    const double u = 2.0 * std::pow(std::sin(0.5 * delta), 2);
    const double reduced = r * r * u * (2.0 - sigma * r * r * u);
    const double diff =
        denominator_identity_check(alpha_i, alpha_i - delta, r, space);
    worst = std::max(worst, diff / reduced);
  }
  report(1, "denominator identity, 10^4 samples", worst <= 1e-12,
         fmt("max relative difference %.3e (tolerance 1e-12)", worst));
}

// --- criterion 2: criterion residual at regular n-gons -----------------

void criterion_2() {
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const MassVector masses = Vector::Ones(n);
    for (const double r : {0.3, 0.5, 0.7}) {
      const SpaceSpec space{1, 2};
      const Vector f = criterion_residual(
          masses, circle_cfg(r, ngon_angles(n), space), space);
      worst = std::max(worst, f.lpNorm<Eigen::Infinity>());
    }
    for (const double r : {0.5, 1.0, 2.0}) {
      const SpaceSpec space{-1, 2};
      const Vector f = criterion_residual(
          masses, circle_cfg(r, ngon_angles(n), space), space);
      worst = std::max(worst, f.lpNorm<Eigen::Infinity>());
    }
  }
  report(2, "regular n-gons solve the tangential criterion", worst <= 1e-12,
         fmt("max |F|_inf over n = 2..8 is %.3e (tolerance 1e-12)", worst));
}

// --- criterion 3: angular-velocity balance at catalog equilibria -------

Catalog build_reference_catalog() {
  Catalog catalog;
  {
    SweepSpec spec;
    spec.space = SpaceSpec{1, 2};
    spec.masses = Vector::Ones(3);
    spec.r_grid = {0.3, 0.5, 0.7};
    spec.starts = 4;
    spec.seed = 31;
    for (auto& rec : sweep_equilibria(spec).catalog) catalog.push_back(rec);
  }
  {
    SweepSpec spec;
    spec.space = SpaceSpec{-1, 2};
    spec.masses = Vector::Ones(2);
    spec.r_grid = {0.5, 1.0, 2.0};
    spec.starts = 4;
    spec.seed = 32;
    for (auto& rec : sweep_equilibria(spec).catalog) catalog.push_back(rec);
  }
  {
    SweepSpec spec;
    spec.space = SpaceSpec{1, 2};
    spec.masses = Vector::Ones(4);
    spec.r_grid = {0.6};
    spec.starts = 6;
    spec.seed = 33;
    for (auto& rec : sweep_equilibria(spec).catalog) catalog.push_back(rec);
  }
  return catalog;
}

void criterion_3(const Catalog& catalog) {
  double worst_consistency = 0.0;
  double worst_equivalence = 0.0;
  for (const EquilibriumRecord& rec : catalog) {
    worst_consistency = std::max(
        worst_consistency,
        angular_velocity_consistency(rec.masses, rec.cfg, rec.space));
    for (int i = 0; i < rec.cfg.body_count(); ++i) {
      const double ambient =
          angular_velocity_squared(rec.masses, rec.cfg, rec.space, i);
      const double reduced = angular_velocity_squared_closed_form(
          rec.masses, rec.cfg, rec.space, i);
      worst_equivalence = std::max(
          worst_equivalence, std::abs(ambient - reduced) / ambient);
    }
  }
  const bool pass = !catalog.empty() && worst_consistency <= 1e-10 &&
                    worst_equivalence <= 1e-12;
  report(3, "angular-velocity balance at catalog equilibria", pass,
         fmt("%zu records: per-body spread %.3e (tol 1e-10), "
             "ambient vs reduced %.3e (tol 1e-12)",
             catalog.size(), worst_consistency, worst_equivalence));
}

// --- criterion 4: dynamic rigidity and integrator order ----------------

void criterion_4() {
  const SpaceSpec space{1, 2};
  const double r = 0.5;
  const MassVector masses = Vector::Ones(2);
  const PolarConfiguration cfg =
      circle_cfg(r, (Vector(2) << 0.0, kPi).finished(), space);
  const double a_squared =
      1.0 / (4.0 * r * r * r * std::pow(1.0 - r * r, 1.5));
  const double A = std::sqrt(a_squared);
  const double period = 2 * kPi / A;

  const AmbientState initial = initial_state_from_equilibrium(cfg, A, space);
  IntegrationConfig icfg;
  icfg.step_size = 1e-4;
  icfg.t_end = period;
  icfg.output_stride = 100;
  const std::vector<AmbientState> series =
      simulate(initial, masses, space, icfg);
  const double drift = rigidity_drift(series, initial);
  const double mdrift = manifold_drift(series, space);

  const auto end_error = [&](long steps) {
    IntegrationConfig c;
    c.step_size = period / static_cast<double>(steps);
    c.t_end = period;
    c.output_stride = static_cast<int>(steps);
    const AmbientState last =
        simulate(initial, masses, space, c).back();
    AmbientState exact = initial;
    rotate_plane_in_place(A * last.time, exact.positions);
    return (last.positions - exact.positions).cwiseAbs().maxCoeff();
  };
  const double ratio1 = end_error(500) / end_error(1000);
  const double ratio2 = end_error(1000) / end_error(2000);
  const bool order_ok = ratio1 >= 12.8 && ratio1 <= 19.2 &&
                        ratio2 >= 12.8 && ratio2 <= 19.2;

  const bool pass = drift <= 1e-6 && mdrift <= 1e-9 && order_ok;
  report(4, "dynamic rigidity of the balanced pair", pass,
         fmt("drift %.3e (tol 1e-6), manifold %.3e (tol 1e-9), "
             "halving ratios %.1f, %.1f (16 +/- 20%%)",
             drift, mdrift, ratio1, ratio2));
}

// --- criterion 5: solver basin for the equal-mass triangle -------------

void criterion_5() {
  const SpaceSpec space{1, 2};
  const MassVector masses = Vector::Ones(3);
  const double r = 0.5;
  const Vector triangle = ngon_angles(3);

  int hits = 0;
  bool certified = true;
  for (int start = 0; start < 20; ++start) {
    SplitMix64 rng(derive_seed(42, 0, static_cast<std::uint64_t>(start)));
    const Vector alphas0 = draw_separated_angles(rng, 3, 0.1);
    const SolveOutcome outcome =
        solve_equilibrium(masses, r, space, alphas0);
    if (!outcome.converged) continue;
    const EquilibriumRecord canon = canonicalize(outcome.record);
    if ((canon.cfg.alphas - triangle).cwiseAbs().maxCoeff() > 1e-8) continue;
    ++hits;
    certified = certified && canon.residual_norm <= 1e-12 &&
                outcome.consistency <= 1e-10 &&
                rigidity_check(canon).drift <= 1e-6;
  }
  const bool pass = hits >= 18 && certified;
  report(5, "multi-start solver reaches the regular triangle", pass,
         fmt("%d/20 starts converged to the triangle (need >= 18), "
             "records certified: %s",
             hits, certified ? "yes" : "no"));
}

// --- criterion 6: minimum-distance probe over random masses ------------

void criterion_6() {
  SplitMix64 mass_rng(777);
  double global_min = std::numeric_limits<double>::infinity();
  int witness_draw = -1;
  MinDistanceRow witness{};
  std::size_t total_records = 0;
  bool all_positive = true;

  for (int draw = 0; draw < 10; ++draw) {
    SweepSpec spec;
    spec.space = SpaceSpec{1, 2};
    spec.masses = Vector(3);
    for (int i = 0; i < 3; ++i) {
      spec.masses(i) = 0.5 + 1.5 * mass_rng.next_double();
    }
    spec.r_grid = {0.2, 0.35, 0.5, 0.65, 0.8};
    spec.starts = 4;
    spec.seed = derive_seed(990, static_cast<std::uint64_t>(draw), 0);
    // probe the tangential root set: for generic unequal masses the
    // shared-circle balance is overdetermined, so the gated catalog
    // would be empty by construction
    spec.require_consistency = false;
    spec.require_rigidity = false;

    const Catalog catalog = sweep_equilibria(spec).catalog;
    const MinDistanceReport probe = min_distance_probe(catalog);
    total_records += probe.rows.size();
    for (const MinDistanceRow& row : probe.rows) {
      all_positive = all_positive && row.min_distance > 0.0;
    }
    if (!probe.rows.empty() && probe.global_min < global_min) {
      global_min = probe.global_min;
      witness_draw = draw;
      witness = probe.rows[static_cast<std::size_t>(probe.argmin_record)];
    }
  }
  const bool pass = total_records > 0 && all_positive && witness_draw >= 0;
  report(6, "minimum-distance probe over 10 mass draws", pass,
         fmt("%zu records, all min distances > 0; empirical global min "
             "%.6g at draw %d, record #%d (r=%.3g, n=%d) — the universal "
             "constant itself is not reproducible",
             total_records, global_min, witness_draw, witness.record_id,
             witness.r, witness.n));
}

// --- criterion 7: boundedness probe on the hyperboloid pair ------------

void criterion_7() {
  const SpaceSpec space{-1, 2};
  const MassVector masses = Vector::Ones(2);
  const auto pair_a2 = [](double r) {
    return 1.0 / (4.0 * r * r * r * std::pow(1.0 + r * r, 1.5));
  };
  const double a_fixed = std::sqrt(pair_a2(0.5));
  const BoundednessReport probe = boundedness_probe(
      masses, space, a_fixed, BoundednessFamily::polygon, 0.1, 10.0, 100);

  double worst_grid = 0.0;
  for (const BoundednessRow& row : probe.grid) {
    worst_grid = std::max(
        worst_grid, std::abs(row.a_squared - pair_a2(row.r)) / pair_a2(row.r));
  }
  const double recovered =
      probe.solved_r ? std::abs(*probe.solved_r - 0.5)
                     : std::numeric_limits<double>::infinity();
  const bool pass =
      probe.strictly_decreasing && worst_grid <= 1e-12 && recovered <= 1e-10;
  report(7, "boundedness probe: A^2(r) decreasing, bisection inverts", pass,
         fmt("grid vs closed form %.3e (tol 1e-12), strictly decreasing: "
             "%s, |r - 0.5| = %.3e (tol 1e-10)",
             worst_grid, probe.strictly_decreasing ? "yes" : "no",
             recovered));
}

// --- criterion 8: cluster blow-up scaling -------------------------------

void criterion_8() {
  const SpaceSpec space{1, 2};
  std::vector<double> grid;
  for (int i = 0; i <= 6; ++i) grid.push_back(1e-3 / std::pow(2.0, i));
  const ClusterBlowupReport probe =
      cluster_blowup_probe(Vector::Ones(3), 0.5, space, grid);

  const bool head_ok =
      !probe.rows.empty() && probe.rows.front().pair_term >= 9e5;
  bool ratios_ok = probe.rows.size() >= 4;
  double worst_ratio_error = 0.0;
  if (ratios_ok) {
    for (std::size_t i = probe.rows.size() - 3; i < probe.rows.size(); ++i) {
      const double ratio =
          probe.rows[i].pair_term / probe.rows[i - 1].pair_term;
      worst_ratio_error = std::max(worst_ratio_error,
                                   std::abs(ratio - 4.0) / 4.0);
      ratios_ok = ratios_ok && std::abs(ratio - 4.0) / 4.0 <= 0.05;
    }
  }
  const bool pass = head_ok && ratios_ok && probe.monotone_divergence;
  report(8, "near-coincident pair term diverges like delta^-2", pass,
         fmt("term(1e-3) = %.4g (need >= 9e5), worst halving-ratio error "
             "%.2f%% (tol 5%%)",
             probe.rows.empty() ? 0.0 : probe.rows.front().pair_term,
             100.0 * worst_ratio_error));
}

// --- criterion 9: invariances of the criterion residual ----------------

void criterion_9() {
  SplitMix64 rng(4242);
  double worst_gauge = 0.0;
  double worst_perm = 0.0;
  double worst_weighted = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int sigma = (trial % 2 == 0) ? 1 : -1;
    const SpaceSpec space{sigma, 2};
    const int n = 2 + static_cast<int>(rng.next_double() * 5);
    MassVector masses(n);
    for (int i = 0; i < n; ++i) masses(i) = 0.5 + 1.5 * rng.next_double();
    const Vector alphas = draw_separated_angles(rng, n, 0.1);
    const double rmax = sigma == 1 ? 0.9 : 3.0;
    const double r = 0.15 + (rmax - 0.15) * rng.next_double();

    const Vector f = criterion_residual(masses, alphas, r, space);
    const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());

    const double shift = 20.0 * (rng.next_double() - 0.5);
    const Vector shifted = criterion_residual(
        masses, (alphas.array() + shift).matrix(), r, space);
    worst_gauge = std::max(
        worst_gauge, (shifted - f).cwiseAbs().maxCoeff() / scale);

    // rotate the body labels by one slot
    Vector perm_alphas(n);
    MassVector perm_masses(n);
    for (int i = 0; i < n; ++i) {
      perm_alphas(i) = alphas((i + 1) % n);
      perm_masses(i) = masses((i + 1) % n);
    }
    const Vector perm_f =
        criterion_residual(perm_masses, perm_alphas, r, space);
    for (int i = 0; i < n; ++i) {
      worst_perm = std::max(
          worst_perm, std::abs(perm_f(i) - f((i + 1) % n)) / scale);
    }

    const double weighted = std::abs(masses.dot(f));
    const double weighted_scale =
        std::max(1e-6, masses.cwiseProduct(f).cwiseAbs().sum());
    worst_weighted = std::max(worst_weighted, weighted / weighted_scale);
  }
  const bool pass =
      worst_gauge <= 1e-12 && worst_perm <= 1e-12 && worst_weighted <= 1e-12;
  report(9, "gauge/permutation invariance and weighted residual sum", pass,
         fmt("gauge %.3e, permutation %.3e, sum %.3e (each tol 1e-12, "
             "10^3 configurations)",
             worst_gauge, worst_perm, worst_weighted));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3(build_reference_catalog());
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all 9 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
