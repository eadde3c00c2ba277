#include "curvednb/dynamics.hpp"

#include <cmath>
#include <string>

namespace curvednb {

void AmbientState::validate(const SpaceSpec& space) const {
  space.validate();
  const int dim = space.ambient_dim();
  if (positions.rows() != dim || velocities.rows() != dim ||
      positions.cols() != velocities.cols() || positions.cols() < 1) {
    throw ValidationError("AmbientState: positions/velocities must both be " +
                          std::to_string(dim) + " x n with n >= 1");
  }
  const int n = body_count();
  for (int i = 0; i < n; ++i) {
    const double qq = sigma_inner(positions.col(i), positions.col(i), space);
    if (std::abs(qq - space.sigma) > tol::manifold) {
      throw ValidationError("body " + std::to_string(i + 1) +
                            " is off the manifold: q (.) q = " +
                            std::to_string(qq));
    }
    if (space.sigma == -1 && !(positions(dim - 1, i) > 0.0)) {
      throw ValidationError("body " + std::to_string(i + 1) +
                            " is not on the upper hyperboloid sheet");
    }
    const double qv = sigma_inner(positions.col(i), velocities.col(i), space);
    if (std::abs(qv) > tol::tangent) {
      throw ValidationError("velocity of body " + std::to_string(i + 1) +
                            " is not tangent: q (.) qd = " +
                            std::to_string(qv));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = sigma_inner(positions.col(i), positions.col(j), space);
      const double base = space.sigma - space.sigma * a * a;
      if (base <= tol::singularity) {
        throw SingularityError(
            "pair (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                ") is singular: sigma - sigma (q_i (.) q_j)^2 ~ 0",
            i, j);
      }
    }
  }
}

void IntegrationConfig::validate() const {
  if (!(step_size > 0.0)) {
    throw ValidationError("IntegrationConfig: step_size must be > 0");
  }
  if (!(t_end > 0.0)) {
    throw ValidationError("IntegrationConfig: t_end must be > 0");
  }
  if (!(step_size < t_end)) {
    throw ValidationError("IntegrationConfig: step_size must be < t_end");
  }
  if (output_stride < 1) {
    throw ValidationError("IntegrationConfig: output_stride must be >= 1");
  }
}

namespace {

// Accelerations for raw position/velocity blocks (also used on RK4 stage
// points, which sit slightly off the manifold).
Matrix acceleration_blocks(const Matrix& positions, const Matrix& velocities,
                           const MassVector& masses, const SpaceSpec& space) {
  const int n = static_cast<int>(positions.cols());
  const double sigma = space.sigma;
  Matrix acc = Matrix::Zero(positions.rows(), n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double a = sigma_inner(positions.col(i), positions.col(j), space);
      const double base = sigma - sigma * a * a;
      if (base <= tol::singularity) {
        const char* kind = (sigma == 1 && a < 0.0)
                               ? "antipodal singularity"
                               : "collision singularity";
        throw SingularityError(std::string(kind) + " for pair (" +
                                   std::to_string(i + 1) + ", " +
                                   std::to_string(j + 1) + ")",
                               i, j);
      }
      acc.col(i) += masses(j) *
                    (positions.col(j) - sigma * a * positions.col(i)) /
                    std::pow(base, 1.5);
    }
    const double vv = sigma_inner(velocities.col(i), velocities.col(i), space);
    acc.col(i) -= sigma * vv * positions.col(i);
  }
  return acc;
}

}  // namespace

Matrix acceleration(const AmbientState& state, const MassVector& masses,
                    const SpaceSpec& space) {
  state.validate(space);
  validate_masses(masses);
  if (masses.size() != state.body_count()) {
    throw ValidationError("acceleration: masses/bodies mismatch");
  }
  return acceleration_blocks(state.positions, state.velocities, masses, space);
}

AmbientState initial_state_from_equilibrium(const PolarConfiguration& cfg,
                                            double angular_velocity,
                                            const SpaceSpec& space) {
  AmbientState state;
  state.positions = embed_polar(cfg, space);
  state.velocities = Matrix::Zero(space.ambient_dim(), cfg.body_count());
  for (int i = 0; i < cfg.body_count(); ++i) {
    state.velocities(0, i) =
        -angular_velocity * cfg.r * std::sin(cfg.alphas(i));
    state.velocities(1, i) =
        angular_velocity * cfg.r * std::cos(cfg.alphas(i));
  }
  state.time = 0.0;
  return state;
}

namespace {

AmbientState rk4_step(const AmbientState& state, const MassVector& masses,
                      const SpaceSpec& space, const IntegrationConfig& cfg) {
  const double h = cfg.step_size;
  const Matrix& q = state.positions;
  const Matrix& v = state.velocities;

  const Matrix a1 = acceleration_blocks(q, v, masses, space);
  const Matrix q2 = q + 0.5 * h * v;
  const Matrix v2 = v + 0.5 * h * a1;
  const Matrix a2 = acceleration_blocks(q2, v2, masses, space);
  const Matrix q3 = q + 0.5 * h * v2;
  const Matrix v3 = v + 0.5 * h * a2;
  const Matrix a3 = acceleration_blocks(q3, v3, masses, space);
  const Matrix q4 = q + h * v3;
  const Matrix v4 = v + h * a3;
  const Matrix a4 = acceleration_blocks(q4, v4, masses, space);

  AmbientState next;
  next.positions = q + (h / 6.0) * (v + 2.0 * (v2 + v3) + v4);
  next.velocities = v + (h / 6.0) * (a1 + 2.0 * (a2 + a3) + a4);
  next.time = state.time + h;

  if (!next.positions.allFinite() || !next.velocities.allFinite()) {
    throw NumericalError("integration produced non-finite values at t = " +
                         std::to_string(next.time));
  }

  if (cfg.projection_enabled) {
    for (int i = 0; i < next.body_count(); ++i) {
      next.positions.col(i) = manifold_normalize(next.positions.col(i), space);
      next.velocities.col(i) =
          tangent_project(next.positions.col(i), next.velocities.col(i),
                          space);
    }
  }
  return next;
}

}  // namespace

AmbientState step(const AmbientState& state, const MassVector& masses,
                  const SpaceSpec& space, const IntegrationConfig& cfg) {
  state.validate(space);
  cfg.validate();
  validate_masses(masses);
  if (masses.size() != state.body_count()) {
    throw ValidationError("step: masses/bodies mismatch");
  }
  return rk4_step(state, masses, space, cfg);
}

std::vector<AmbientState> simulate(const AmbientState& initial,
                                   const MassVector& masses,
                                   const SpaceSpec& space,
                                   const IntegrationConfig& cfg) {
  initial.validate(space);
  cfg.validate();
  validate_masses(masses);
  if (masses.size() != initial.body_count()) {
    throw ValidationError("simulate: masses/bodies mismatch");
  }

  const long steps =
      std::max<long>(1, std::lround(cfg.t_end / cfg.step_size));
  std::vector<AmbientState> series;
  series.reserve(static_cast<std::size_t>(steps / cfg.output_stride) + 2);
  series.push_back(initial);

  AmbientState current = initial;
  for (long s = 1; s <= steps; ++s) {
    try {
      current = rk4_step(current, masses, space, cfg);
    } catch (const SingularityError& e) {
      throw SingularityError("integration aborted at t = " +
                                 std::to_string(current.time) + ": " +
                                 e.what(),
                             e.body_i, e.body_j);
    }
    current.time = initial.time + static_cast<double>(s) * cfg.step_size;
    if (s % cfg.output_stride == 0 || s == steps) {
      series.push_back(current);
    }
  }
  return series;
}

double rigidity_drift(const std::vector<AmbientState>& series,
                      const AmbientState& reference) {
  if (series.empty()) {
    throw ValidationError("rigidity_drift: empty series");
  }
  if (reference.body_count() < 2) return 0.0;
  const Matrix d0 = pairwise_euclidean_distance(reference.positions);
  double drift = 0.0;
  for (const AmbientState& state : series) {
    const Matrix d = pairwise_euclidean_distance(state.positions);
    drift = std::max(drift, (d - d0).cwiseAbs().maxCoeff());
  }
  return drift;
}

double manifold_drift(const std::vector<AmbientState>& series,
                      const SpaceSpec& space) {
  double drift = 0.0;
  for (const AmbientState& state : series) {
    for (int i = 0; i < state.body_count(); ++i) {
      const double qq =
          sigma_inner(state.positions.col(i), state.positions.col(i), space);
      drift = std::max(drift, std::abs(qq - space.sigma));
    }
  }
  return drift;
}

}  // namespace curvednb
