#pragma once

// Relative-equilibrium machinery for the rotating ansatz
// q_i(t) = (T(At) Q_i, Z): the tangential criterion whose roots are the
// equilibrium candidates, the angular-velocity balance that holds when
// Z != 0, a damped-Newton solver over the angles, and canonicalization
// of solved records.

#include <optional>
#include <string>

#include "curvednb/geometry.hpp"
#include "curvednb/types.hpp"

namespace curvednb {

// u = 1 - cos(delta) and the pair denominator u^{3/2} (2 - sigma r^2 u)^{3/2}.
struct PairKernel {
  double u = 0.0;
  double denom = 0.0;
};

// Throws SingularityError when the pair is coincident (u ~ 0) or, on the
// sphere, antipodal through the ambient chord (2 - r^2 u ~ 0).
PairKernel pair_kernel(double delta_alpha, double r, const SpaceSpec& space);

// |(sigma - sigma (q_i (.) q_j)^2) - r^2 u (2 - sigma r^2 u)| with the left
// side evaluated through embedded ambient coordinates. Zero in exact
// arithmetic; exercises the reduction that turns the ambient force
// denominators into the pair kernel.
double denominator_identity_check(double alpha_i, double alpha_j, double r,
                                  const SpaceSpec& space);

// Tangential criterion residual
//   F_i = sum_{j != i} m_j sin(a_i - a_j) / [u_ij^{3/2} (2 - sigma r^2 u_ij)^{3/2}]
// A configuration is an equilibrium candidate iff every F_i vanishes.
Vector criterion_residual(const MassVector& masses, const Vector& alphas,
                          double r, const SpaceSpec& space);
Vector criterion_residual(const MassVector& masses,
                          const PolarConfiguration& cfg,
                          const SpaceSpec& space);

// A^2 from the Z-block balance sigma A^2 r^2 = sum_j m_j (1 - sigma q_i (.) q_j)
// / (sigma - sigma (q_i (.) q_j)^2)^{3/2}, evaluated through embedded
// ambient coordinates. Requires z_block != 0.
double angular_velocity_squared(const MassVector& masses,
                                const PolarConfiguration& cfg,
                                const SpaceSpec& space, int body_index);

// Same quantity through the algebraic reduction:
//   A^2 = sum_{j != i} m_j / (r^3 u_ij^{1/2} (2 - sigma r^2 u_ij)^{3/2}).
double angular_velocity_squared_closed_form(const MassVector& masses,
                                            const PolarConfiguration& cfg,
                                            const SpaceSpec& space,
                                            int body_index);

// max_{i,i'} |A^2(i) - A^2(i')| / max_i A^2(i). Zero at a true relative
// equilibrium, where one A serves every body.
double angular_velocity_consistency(const MassVector& masses,
                                    const PolarConfiguration& cfg,
                                    const SpaceSpec& space);

struct SolveOptions {
  int max_iterations = 200;
  double residual_tolerance = tol::solver_residual;
  int max_step_halvings = 30;
  // Required for the great-circle case (sigma = +1, r = 1, Z = 0), where
  // the radial balance degenerates and A is a free parameter.
  std::optional<double> fixed_angular_velocity;
};

// A solved (or attempted) equilibrium of the rotating ansatz.
struct EquilibriumRecord {
  SpaceSpec space;
  MassVector masses;
  PolarConfiguration cfg;
  double angular_velocity = 0.0;  // nonnegative root of A^2
  double residual_norm = 0.0;     // max-norm of the criterion residual
  bool converged = false;
  int iterations = 0;
};

struct SolveOutcome {
  bool converged = false;
  int iterations = 0;
  std::string message;       // diagnostics on failure
  double consistency = 0.0;  // NaN when Z = 0 (balance inapplicable)
  EquilibriumRecord record;  // meaningful only when converged
};

// Damped Newton with finite-difference Jacobian on the reduced system
// {F_2, ..., F_n} with the gauge alpha_1 = 0 pinned (the criterion is
// invariant under a common rotation of all angles). Non-convergence is a
// result, not an exception; infeasible r and bad inputs throw.
SolveOutcome solve_equilibrium(const MassVector& masses, double r,
                               const SpaceSpec& space,
                               const Vector& initial_alphas,
                               const SolveOptions& options = {});

// Gauge- and relabeling-independent form: picks the base body whose
// rotation to zero yields the lexicographically smallest (angles, masses)
// sequence, sorts bodies by angle (ties by mass, then original index),
// and reduces angles to [0, 2pi). The residual is unchanged.
EquilibriumRecord canonicalize(const EquilibriumRecord& record);

// True when the record's trailing block is exactly zero (great-circle
// configurations on the sphere).
bool is_great_circle(const PolarConfiguration& cfg);

}  // namespace curvednb
