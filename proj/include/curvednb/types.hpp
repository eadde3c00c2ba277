#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace curvednb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Masses m_1..m_n, all strictly positive.
using MassVector = Eigen::VectorXd;

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: wrong dimensions, infeasible radius, invalid configuration,
// rejected config file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A pair of bodies too close to a singularity of the force law
// (collision, or antipodal pair on the sphere).
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, int body_i, int body_j)
      : Error(what), body_i(body_i), body_j(body_j) {}
  int body_i;
  int body_j;
};

// Integration produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File system / serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace tol {

// |q (.) q - sigma| allowed on validated states.
inline constexpr double manifold = 1e-9;
// |q (.) qdot| allowed on validated states.
inline constexpr double tangent = 1e-9;
// Lower bound kept on sigma - sigma*(q_i (.) q_j)^2 and on the
// pair-kernel factors; below this the 3/2-power denominators are
// treated as singular.
inline constexpr double singularity = 1e-10;
// Max relative spread of the per-body A^2 values accepted for a
// verified equilibrium.
inline constexpr double consistency = 1e-10;
// Max pairwise-distance drift over one period accepted as "rigid".
inline constexpr double rigidity = 1e-6;
// Canonical angles closer than this (entrywise) are the same record.
inline constexpr double dedup_angle = 1e-8;
// Newton convergence threshold on the max-norm of the criterion residual.
inline constexpr double solver_residual = 1e-12;

}  // namespace tol

void validate_masses(const MassVector& masses, int min_count = 1);

}  // namespace curvednb
