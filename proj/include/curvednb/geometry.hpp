#pragma once

// The surfaces M_sigma^k of constant curvature +1 (sphere S^k) and -1
// (upper sheet of the hyperboloid model of H^k), embedded in R^{k+1},
// together with the sigma-weighted inner product and the polar shape
// coordinates used by the rotating-solution ansatz.

#include <Eigen/Dense>

#include "curvednb/types.hpp"

namespace curvednb {

// Curvature sign and manifold dimension. Points live in R^{k+1}.
struct SpaceSpec {
  int sigma = 1;  // +1 sphere, -1 hyperboloid
  int k = 2;

  int ambient_dim() const { return k + 1; }
  void validate() const;
};

// x_1 y_1 + ... + x_k y_k + sigma * x_{k+1} y_{k+1}
template <typename DerivedA, typename DerivedB>
double sigma_inner(const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y,
                   const SpaceSpec& space) {
  const Eigen::Index dim = space.ambient_dim();
  if (x.size() != dim || y.size() != dim) {
    throw ValidationError("sigma_inner: expected vectors of length " +
                          std::to_string(dim) + ", got " +
                          std::to_string(x.size()) + " and " +
                          std::to_string(y.size()));
  }
  const double head = x.template head(dim - 1).dot(y.template head(dim - 1));
  return head + space.sigma * x(dim - 1) * y(dim - 1);
}

// Removes the sigma-normal component: v - sigma * (q (.) v) * q.
// The result is sigma-orthogonal to q for q on the manifold.
template <typename DerivedQ, typename DerivedV>
Vector tangent_project(const Eigen::MatrixBase<DerivedQ>& point,
                       const Eigen::MatrixBase<DerivedV>& vector,
                       const SpaceSpec& space) {
  return vector - space.sigma * sigma_inner(point, vector, space) * point;
}

// Shape coordinates of the rotating ansatz: every body sits on the
// circle of radius r in the first two ambient coordinates, at angle
// alphas[i], and shares the constant trailing block z_block (k-1
// coordinates, sigma-weighted on the last one).
struct PolarConfiguration {
  double r = 1.0;
  Vector alphas;
  Vector z_block;

  int body_count() const { return static_cast<int>(alphas.size()); }
  // Throws ValidationError on infeasible radius or broken constraint
  // closure r^2 + z (.) z = sigma.
  void validate(const SpaceSpec& space) const;
};

// z (.) z restricted to the trailing block: plain squares except the
// sigma weight on the final entry.
double z_block_weighted_norm2(const Vector& z_block, const SpaceSpec& space);

// Canonical trailing block for radius r: zeros except the last entry,
// sqrt(1 - r^2) on the sphere and sqrt(1 + r^2) on the hyperboloid.
Vector solve_z_block(double r, const SpaceSpec& space);

// Ambient points as columns of a (k+1) x n matrix:
// q_i = (r cos a_i, r sin a_i, Z).
Matrix embed_polar(const PolarConfiguration& cfg, const SpaceSpec& space);

// Rotation by `angle` in the first two ambient coordinates; the
// trailing block is untouched.
Vector rotate_plane(double angle, const Vector& point);
void rotate_plane_in_place(double angle, Eigen::Ref<Matrix> points);

// Symmetric matrix of ambient Euclidean distances ||q_i - q_j|| over
// all k+1 coordinates (the norm used by the minimum-distance bound).
Matrix pairwise_euclidean_distance(const Matrix& points);

// Smallest off-diagonal entry of pairwise_euclidean_distance.
double min_pairwise_distance(const Matrix& points);

// Rescales a near-manifold point so that q (.) q = sigma exactly.
Vector manifold_normalize(const Vector& point, const SpaceSpec& space);

}  // namespace curvednb
