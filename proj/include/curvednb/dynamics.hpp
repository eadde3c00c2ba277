#pragma once

// Equations of motion on M_sigma^k and their constraint-preserving
// integration:
//   qdd_i = sum_{j != i} m_j (q_j - sigma (q_i (.) q_j) q_i)
//                        / (sigma - sigma (q_i (.) q_j)^2)^{3/2}
//           - sigma (qd_i (.) qd_i) q_i
// The gravitational part is tangent to the manifold; the last term keeps
// the sigma-norm constraint along exact solutions.

#include <vector>

#include "curvednb/equilibria.hpp"
#include "curvednb/geometry.hpp"
#include "curvednb/types.hpp"

namespace curvednb {

// Full phase state: positions and velocities as (k+1) x n column blocks.
struct AmbientState {
  Matrix positions;
  Matrix velocities;
  double time = 0.0;

  int body_count() const { return static_cast<int>(positions.cols()); }
  // Checks the manifold, tangency and pair-separation invariants.
  void validate(const SpaceSpec& space) const;
};

struct IntegrationConfig {
  double step_size = 1e-3;
  double t_end = 1.0;
  int output_stride = 100;  // steps between stored samples
  bool projection_enabled = true;

  void validate() const;
};

// Right-hand side accelerations, one column per body. Throws
// SingularityError naming the offending pair when a denominator
// degenerates (collision, or antipodal pair on the sphere).
Matrix acceleration(const AmbientState& state, const MassVector& masses,
                    const SpaceSpec& space);

// Phase state of the rotating ansatz at t = 0: embedded positions and
// velocities A * r * (-sin a_i, cos a_i, 0, ..., 0), which are tangent
// and satisfy qd (.) qd = A^2 r^2.
AmbientState initial_state_from_equilibrium(const PolarConfiguration& cfg,
                                            double angular_velocity,
                                            const SpaceSpec& space);

// One classical RK4 step; with projection enabled, positions are rescaled
// back onto the manifold and velocities re-projected onto the tangent
// space afterwards.
AmbientState step(const AmbientState& state, const MassVector& masses,
                  const SpaceSpec& space, const IntegrationConfig& cfg);

// Fixed-step integration to t_end. Returns sampled states: t = 0, every
// output_stride-th step, and the final step. Deterministic in its inputs.
std::vector<AmbientState> simulate(const AmbientState& initial,
                                   const MassVector& masses,
                                   const SpaceSpec& space,
                                   const IntegrationConfig& cfg);

// Max over samples and pairs of |d_ij(t) - d_ij(0)| against the reference
// state; zero for an exactly rigid motion.
double rigidity_drift(const std::vector<AmbientState>& series,
                      const AmbientState& reference);

// Max over samples and bodies of |q (.) q - sigma|.
double manifold_drift(const std::vector<AmbientState>& series,
                      const SpaceSpec& space);

}  // namespace curvednb
