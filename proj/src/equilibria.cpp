#include "curvednb/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

namespace curvednb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_to_2pi(double angle) {
  double out = std::fmod(angle, kTwoPi);
  if (out < 0.0) out += kTwoPi;
  if (out >= kTwoPi) out = 0.0;  // fmod rounding can land exactly on 2pi
  return out;
}

}  // namespace

PairKernel pair_kernel(double delta_alpha, double r, const SpaceSpec& space) {
  space.validate();
  if (!(r > 0.0)) {
    throw ValidationError("pair_kernel: r must be > 0");
  }
  const double s = std::sin(0.5 * delta_alpha);
  const double u = 2.0 * s * s;  // = 1 - cos(delta), stable near 0
  if (u <= tol::singularity) {
    throw SingularityError("coincident-angle singularity: |delta_alpha| ~ 0",
                           -1, -1);
  }
  const double chord = 2.0 - space.sigma * r * r * u;
  if (chord <= tol::singularity) {
    throw SingularityError(
        "antipodal singularity: 2 - r^2 (1 - cos delta) ~ 0", -1, -1);
  }
  return PairKernel{u, std::pow(u, 1.5) * std::pow(chord, 1.5)};
}

double denominator_identity_check(double alpha_i, double alpha_j, double r,
                                  const SpaceSpec& space) {
  const PolarConfiguration cfg{r, (Vector(2) << alpha_i, alpha_j).finished(),
                               solve_z_block(r, space)};
  const Matrix q = embed_polar(cfg, space);
  const double a = sigma_inner(q.col(0), q.col(1), space);
  const double ambient = space.sigma - space.sigma * a * a;

  const double s = std::sin(0.5 * (alpha_i - alpha_j));
  const double u = 2.0 * s * s;
  const double reduced = r * r * u * (2.0 - space.sigma * r * r * u);
  return std::abs(ambient - reduced);
}

Vector criterion_residual(const MassVector& masses, const Vector& alphas,
                          double r, const SpaceSpec& space) {
  validate_masses(masses, 2);
  if (masses.size() != alphas.size()) {
    throw ValidationError("criterion_residual: " +
                          std::to_string(masses.size()) + " masses vs " +
                          std::to_string(alphas.size()) + " angles");
  }
  const int n = static_cast<int>(alphas.size());
  Vector residual = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double delta = alphas(i) - alphas(j);
      PairKernel kernel;
      try {
        kernel = pair_kernel(delta, r, space);
      } catch (const SingularityError& e) {
        throw SingularityError(std::string(e.what()) + " for pair (" +
                                   std::to_string(i + 1) + ", " +
                                   std::to_string(j + 1) + ")",
                               i, j);
      }
      sum += masses(j) * std::sin(delta) / kernel.denom;
    }
    residual(i) = sum;
  }
  return residual;
}

Vector criterion_residual(const MassVector& masses,
                          const PolarConfiguration& cfg,
                          const SpaceSpec& space) {
  cfg.validate(space);
  return criterion_residual(masses, cfg.alphas, cfg.r, space);
}

bool is_great_circle(const PolarConfiguration& cfg) {
  return cfg.z_block.isZero(0.0);
}

double angular_velocity_squared(const MassVector& masses,
                                const PolarConfiguration& cfg,
                                const SpaceSpec& space, int body_index) {
  cfg.validate(space);
  validate_masses(masses, 2);
  const int n = cfg.body_count();
  if (masses.size() != n) {
    throw ValidationError("angular_velocity_squared: masses/angles mismatch");
  }
  if (body_index < 0 || body_index >= n) {
    throw ValidationError("angular_velocity_squared: body index out of range");
  }
  if (is_great_circle(cfg)) {
    throw ValidationError(
        "angular-velocity balance inapplicable: Z = 0 (great-circle "
        "configuration; the angular velocity is a free parameter there)");
  }
  const Matrix q = embed_polar(cfg, space);
  const double sigma = space.sigma;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == body_index) continue;
    const double a = sigma_inner(q.col(body_index), q.col(j), space);
    const double base = sigma - sigma * a * a;
    if (base <= tol::singularity) {
      throw SingularityError("singular pair (" +
                                 std::to_string(body_index + 1) + ", " +
                                 std::to_string(j + 1) +
                                 ") in angular-velocity balance",
                             body_index, j);
    }
    sum += masses(j) * (1.0 - sigma * a) / std::pow(base, 1.5);
  }
  return sigma * sum / (cfg.r * cfg.r);
}

double angular_velocity_squared_closed_form(const MassVector& masses,
                                            const PolarConfiguration& cfg,
                                            const SpaceSpec& space,
                                            int body_index) {
  cfg.validate(space);
  validate_masses(masses, 2);
  const int n = cfg.body_count();
  if (masses.size() != n) {
    throw ValidationError("angular_velocity_squared: masses/angles mismatch");
  }
  if (body_index < 0 || body_index >= n) {
    throw ValidationError("angular_velocity_squared: body index out of range");
  }
  if (is_great_circle(cfg)) {
    throw ValidationError(
        "angular-velocity balance inapplicable: Z = 0 (great-circle "
        "configuration; the angular velocity is a free parameter there)");
  }
  const double r = cfg.r;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == body_index) continue;
    const PairKernel kernel =
        pair_kernel(cfg.alphas(body_index) - cfg.alphas(j), r, space);
    const double chord = 2.0 - space.sigma * r * r * kernel.u;
    sum += masses(j) /
           (r * r * r * std::sqrt(kernel.u) * std::pow(chord, 1.5));
  }
  return sum;
}

double angular_velocity_consistency(const MassVector& masses,
                                    const PolarConfiguration& cfg,
                                    const SpaceSpec& space) {
  const int n = cfg.body_count();
  if (n < 2) {
    throw ValidationError("angular_velocity_consistency: needs n >= 2");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double a2 = angular_velocity_squared(masses, cfg, space, i);
    lo = std::min(lo, a2);
    hi = std::max(hi, a2);
  }
  return (hi - lo) / hi;
}

namespace {

// Residual of the reduced system {F_2..F_n} at gauge alpha_1 = 0.
// Returns false when the configuration hits a pair singularity.
bool reduced_residual(const MassVector& masses, const Vector& reduced_alphas,
                      double r, const SpaceSpec& space, Vector& out_full) {
  const int n = static_cast<int>(reduced_alphas.size()) + 1;
  Vector alphas(n);
  alphas(0) = 0.0;
  alphas.tail(n - 1) = reduced_alphas;
  try {
    out_full = criterion_residual(masses, alphas, r, space);
  } catch (const SingularityError&) {
    return false;
  }
  return true;
}

}  // namespace

SolveOutcome solve_equilibrium(const MassVector& masses, double r,
                               const SpaceSpec& space,
                               const Vector& initial_alphas,
                               const SolveOptions& options) {
  space.validate();
  validate_masses(masses, 2);
  if (initial_alphas.size() != masses.size()) {
    throw ValidationError("solve_equilibrium: masses/angles mismatch");
  }
  if (!(r > 0.0)) {
    throw ValidationError("solve_equilibrium: r must be > 0");
  }
  if (space.sigma == 1 && r > 1.0) {
    throw ValidationError("infeasible radius: r = " + std::to_string(r) +
                          " > 1 is not embeddable on the sphere");
  }
  const Vector z_block = solve_z_block(r, space);
  const bool great_circle = z_block.isZero(0.0);
  if (great_circle && !options.fixed_angular_velocity) {
    throw ValidationError(
        "solve_equilibrium: great-circle radius (Z = 0) needs a fixed "
        "angular velocity");
  }

  const int n = static_cast<int>(masses.size());
  SolveOutcome outcome;
  outcome.consistency = std::numeric_limits<double>::quiet_NaN();

  // Pin the gauge: shift the start so alpha_1 = 0.
  Vector x = (initial_alphas.array() - initial_alphas(0))
                 .tail(n - 1)
                 .matrix()
                 .eval();

  Vector full(n);
  if (!reduced_residual(masses, x, r, space, full)) {
    outcome.message = "initial angles contain a singular pair";
    return outcome;
  }

  double fnorm = full.lpNorm<Eigen::Infinity>();
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (fnorm <= options.residual_tolerance) break;

    // Forward-difference Jacobian of the reduced residual.
    Matrix jac(n - 1, n - 1);
    Vector fx = full.tail(n - 1);
    bool jac_ok = true;
    for (int c = 0; c < n - 1; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(c)));
      Vector xp = x;
      xp(c) += h;
      Vector fp(n);
      if (!reduced_residual(masses, xp, r, space, fp)) {
        jac_ok = false;
        break;
      }
      jac.col(c) = (fp.tail(n - 1) - fx) / h;
    }
    if (!jac_ok) {
      outcome.message = "finite-difference probe hit a singular pair";
      outcome.iterations = iter;
      return outcome;
    }

    const Vector dx = jac.fullPivLu().solve(-fx);
    if (!dx.allFinite()) {
      outcome.message = "Newton step is not finite (singular Jacobian)";
      outcome.iterations = iter;
      return outcome;
    }

    // Damping: halve the step until the residual max-norm decreases,
    // rejecting trial points that step into a singular pair.
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_step_halvings; ++halving) {
      Vector trial_full(n);
      if (reduced_residual(masses, x + lambda * dx, r, space, trial_full)) {
        const double trial_norm = trial_full.lpNorm<Eigen::Infinity>();
        if (trial_norm < fnorm) {
          x += lambda * dx;
          full = trial_full;
          fnorm = trial_norm;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      outcome.message = "damping underflow: no descent step found";
      outcome.iterations = iter;
      return outcome;
    }
  }

  outcome.iterations = iter;
  if (fnorm > options.residual_tolerance) {
    outcome.message = "no convergence after " +
                      std::to_string(options.max_iterations) + " iterations";
    return outcome;
  }

  EquilibriumRecord rec;
  rec.space = space;
  rec.masses = masses;
  rec.cfg.r = r;
  rec.cfg.alphas = Vector(n);
  rec.cfg.alphas(0) = 0.0;
  rec.cfg.alphas.tail(n - 1) = x;
  rec.cfg.z_block = z_block;
  rec.residual_norm = fnorm;
  rec.converged = true;
  rec.iterations = iter;
  if (great_circle) {
    rec.angular_velocity = *options.fixed_angular_velocity;
  } else {
    rec.angular_velocity =
        std::sqrt(angular_velocity_squared(masses, rec.cfg, space, 0));
    outcome.consistency =
        angular_velocity_consistency(masses, rec.cfg, space);
  }
  outcome.converged = true;
  outcome.record = std::move(rec);
  return outcome;
}

EquilibriumRecord canonicalize(const EquilibriumRecord& record) {
  const int n = record.cfg.body_count();
  const Vector& alphas = record.cfg.alphas;
  const MassVector& masses = record.masses;

  struct Body {
    double angle;
    double mass;
    int index;
  };

  std::vector<Body> best;
  for (int base = 0; base < n; ++base) {
    std::vector<Body> cand(n);
    for (int i = 0; i < n; ++i) {
      cand[i] = Body{wrap_to_2pi(alphas(i) - alphas(base)), masses(i), i};
    }
    std::sort(cand.begin(), cand.end(), [](const Body& a, const Body& b) {
      return std::tie(a.angle, a.mass, a.index) <
             std::tie(b.angle, b.mass, b.index);
    });
    const auto less_than_best = [&]() {
      for (int i = 0; i < n; ++i) {
        if (cand[i].angle != best[i].angle)
          return cand[i].angle < best[i].angle;
      }
      for (int i = 0; i < n; ++i) {
        if (cand[i].mass != best[i].mass) return cand[i].mass < best[i].mass;
      }
      return false;
    };
    if (best.empty() || less_than_best()) best = std::move(cand);
  }

  EquilibriumRecord out = record;
  for (int i = 0; i < n; ++i) {
    out.cfg.alphas(i) = best[i].angle;
    out.masses(i) = best[i].mass;
  }
  return out;
}

}  // namespace curvednb
