#include "curvednb/geometry.hpp"

#include <cmath>
#include <string>

namespace curvednb {

void SpaceSpec::validate() const {
  if (sigma != 1 && sigma != -1) {
    throw ValidationError("SpaceSpec: sigma must be +1 or -1, got " +
                          std::to_string(sigma));
  }
  if (k < 2) {
    throw ValidationError("SpaceSpec: k must be >= 2, got " +
                          std::to_string(k));
  }
}

void validate_masses(const MassVector& masses, int min_count) {
  if (masses.size() < min_count) {
    throw ValidationError("expected at least " + std::to_string(min_count) +
                          " masses, got " + std::to_string(masses.size()));
  }
  for (Eigen::Index i = 0; i < masses.size(); ++i) {
    if (!(masses(i) > 0.0)) {
      throw ValidationError("mass " + std::to_string(i + 1) +
                            " must be strictly positive, got " +
                            std::to_string(masses(i)));
    }
  }
}

double z_block_weighted_norm2(const Vector& z_block, const SpaceSpec& space) {
  if (z_block.size() != space.k - 1) {
    throw ValidationError("z_block: expected " + std::to_string(space.k - 1) +
                          " entries, got " + std::to_string(z_block.size()));
  }
  const Eigen::Index m = z_block.size();
  double head = m > 1 ? z_block.head(m - 1).squaredNorm() : 0.0;
  return head + space.sigma * z_block(m - 1) * z_block(m - 1);
}

void PolarConfiguration::validate(const SpaceSpec& space) const {
  space.validate();
  if (!(r > 0.0)) {
    throw ValidationError("PolarConfiguration: r must be > 0");
  }
  if (space.sigma == 1 && r > 1.0) {
    throw ValidationError(
        "infeasible radius: r = " + std::to_string(r) +
        " > 1 is not embeddable on the sphere");
  }
  if (alphas.size() < 1) {
    throw ValidationError("PolarConfiguration: needs at least one angle");
  }
  const double closure = r * r + z_block_weighted_norm2(z_block, space);
  if (std::abs(closure - space.sigma) > tol::manifold) {
    throw ValidationError(
        "invalid configuration: r^2 + z (.) z = " + std::to_string(closure) +
        " violates the constraint closure (expected " +
        std::to_string(space.sigma) + ")");
  }
  if (space.sigma == -1 && !(z_block(z_block.size() - 1) > 0.0)) {
    throw ValidationError(
        "invalid configuration: hyperboloid points must lie on the upper "
        "sheet (last coordinate > 0)");
  }
}

Vector solve_z_block(double r, const SpaceSpec& space) {
  space.validate();
  if (!(r > 0.0)) {
    throw ValidationError("solve_z_block: r must be > 0");
  }
  if (space.sigma == 1 && r > 1.0) {
    throw ValidationError("infeasible radius: r = " + std::to_string(r) +
                          " > 1 is not embeddable on the sphere");
  }
  Vector z = Vector::Zero(space.k - 1);
  z(space.k - 2) = std::sqrt(1.0 - space.sigma * r * r);
  return z;
}

Matrix embed_polar(const PolarConfiguration& cfg, const SpaceSpec& space) {
  cfg.validate(space);
  const int n = cfg.body_count();
  Matrix points(space.ambient_dim(), n);
  for (int i = 0; i < n; ++i) {
    points(0, i) = cfg.r * std::cos(cfg.alphas(i));
    points(1, i) = cfg.r * std::sin(cfg.alphas(i));
    points.col(i).tail(space.k - 1) = cfg.z_block;
  }
  return points;
}

Vector rotate_plane(double angle, const Vector& point) {
  if (point.size() < 2) {
    throw ValidationError("rotate_plane: point needs at least 2 coordinates");
  }
  Vector out = point;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  out(0) = c * point(0) - s * point(1);
  out(1) = s * point(0) + c * point(1);
  return out;
}

void rotate_plane_in_place(double angle, Eigen::Ref<Matrix> points) {
  if (points.rows() < 2) {
    throw ValidationError("rotate_plane: points need at least 2 coordinates");
  }
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double x = points(0, i);
    const double y = points(1, i);
    points(0, i) = c * x - s * y;
    points(1, i) = s * x + c * y;
  }
}

Matrix pairwise_euclidean_distance(const Matrix& points) {
  const Eigen::Index n = points.cols();
  if (n < 2) {
    throw ValidationError("pairwise_euclidean_distance: needs >= 2 points");
  }
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (points.col(i) - points.col(j)).norm();
      d(i, j) = dist;
      d(j, i) = dist;
    }
  }
  return d;
}

double min_pairwise_distance(const Matrix& points) {
  const Matrix d = pairwise_euclidean_distance(points);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      best = std::min(best, d(i, j));
    }
  }
  return best;
}

Vector manifold_normalize(const Vector& point, const SpaceSpec& space) {
  const double qq = sigma_inner(point, point, space);
  const double scale2 = space.sigma * qq;  // = |q (.) q| when near the manifold
  if (!(scale2 > 0.0)) {
    throw NumericalError(
        "manifold_normalize: point cannot be rescaled onto the manifold "
        "(sigma * q (.) q <= 0)");
  }
  return point / std::sqrt(scale2);
}

}  // namespace curvednb
