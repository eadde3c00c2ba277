#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvednb/experiments.hpp"
#include "curvednb/geometry.hpp"

using namespace curvednb;

namespace {
constexpr double kPi = std::numbers::pi;

Vector vec3(double a, double b, double c) {
  return (Vector(3) << a, b, c).finished();
}
}  // namespace

TEST_CASE("sigma_inner on orthogonal axes and poles") {
  const SpaceSpec sphere{1, 2};
  const SpaceSpec hyper{-1, 2};
  CHECK(sigma_inner(vec3(1, 0, 0), vec3(0, 1, 0), sphere) == 0.0);
  CHECK(sigma_inner(vec3(0, 0, 1), vec3(0, 0, 1), sphere) == 1.0);
  CHECK(sigma_inner(vec3(0, 0, 1), vec3(0, 0, 1), hyper) == -1.0);
}

TEST_CASE("sigma_inner rejects dimension mismatch") {
  const SpaceSpec sphere{1, 3};  // ambient dimension 4
  CHECK_THROWS_AS(sigma_inner(vec3(1, 0, 0), vec3(0, 1, 0), sphere),
                  ValidationError);
}

TEST_CASE("SpaceSpec validation") {
  CHECK_THROWS_AS((SpaceSpec{0, 2}.validate()), ValidationError);
  CHECK_THROWS_AS((SpaceSpec{2, 2}.validate()), ValidationError);
  CHECK_THROWS_AS((SpaceSpec{1, 1}.validate()), ValidationError);
  CHECK_NOTHROW((SpaceSpec{-1, 5}.validate()));
}

TEST_CASE("embed_polar places bodies on the constraint surface") {
  SUBCASE("sphere, constraint-forced z") {
    const SpaceSpec space{1, 2};
    const PolarConfiguration cfg{0.6, Vector::Zero(1),
                                 (Vector(1) << 0.8).finished()};
    const Matrix q = embed_polar(cfg, space);
    CHECK(q(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(q(1, 0) == doctest::Approx(0.0));
    CHECK(q(2, 0) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("hyperboloid, upper sheet") {
    const SpaceSpec space{-1, 2};
    const PolarConfiguration cfg{0.6, Vector::Zero(1),
                                 (Vector(1) << std::sqrt(1.36)).finished()};
    const Matrix q = embed_polar(cfg, space);
    CHECK(q(2, 0) == doctest::Approx(std::sqrt(1.36)).epsilon(1e-15));
    CHECK(sigma_inner(q.col(0), q.col(0), space) ==
          doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("great-circle antipodal pair in S^3") {
    const SpaceSpec space{1, 3};
    const PolarConfiguration cfg{1.0, (Vector(2) << 0.0, kPi).finished(),
                                 Vector::Zero(2)};
    const Matrix q = embed_polar(cfg, space);
    CHECK(q(0, 0) == doctest::Approx(1.0));
    CHECK(q(0, 1) == doctest::Approx(-1.0));
    CHECK(q.col(0).tail(3).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("embed_polar errors") {
  const SpaceSpec sphere{1, 2};
  CHECK_THROWS_AS(
      embed_polar({1.2, Vector::Zero(1), Vector::Zero(1)}, sphere),
      ValidationError);
  // closure violated: r = 0.6 with z = 0.9 gives 0.36 + 0.81 != 1
  CHECK_THROWS_AS(
      embed_polar({0.6, Vector::Zero(1), (Vector(1) << 0.9).finished()},
                  sphere),
      ValidationError);
}

TEST_CASE("solve_z_block canonical branch") {
  CHECK(solve_z_block(1.0, SpaceSpec{1, 2}).isZero(0.0));
  CHECK(solve_z_block(0.6, SpaceSpec{-1, 2})(0) ==
        doctest::Approx(std::sqrt(1.36)).epsilon(1e-15));
  const Vector z = solve_z_block(0.5, SpaceSpec{1, 3});
  CHECK(z.size() == 2);
  CHECK(z(0) == 0.0);
  CHECK(z(1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK_THROWS_AS(solve_z_block(1.2, SpaceSpec{1, 2}), ValidationError);
}

TEST_CASE("hyperboloid z_block is always strictly positive") {
  const SpaceSpec space{-1, 2};
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 0.05 + 5.0 * rng.next_double();
    CHECK(solve_z_block(r, space)(0) > 0.0);
  }
}

TEST_CASE("rotate_plane basics") {
  const Vector p = vec3(1, 0, 0);
  CHECK((rotate_plane(0.0, p) - p).cwiseAbs().maxCoeff() == 0.0);
  const Vector q = rotate_plane(kPi / 2, p);
  CHECK(q(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q(1) == doctest::Approx(1.0).epsilon(1e-15));
  const Vector full = rotate_plane(2 * kPi, vec3(0.3, -0.4, 0.9));
  CHECK(std::abs(full(0) - 0.3) <= 1e-15);
  CHECK(std::abs(full(1) + 0.4) <= 1e-15);
  CHECK(full(2) == 0.9);
}

TEST_CASE("rotate_plane preserves the sigma inner product") {
  SplitMix64 rng(29);
  for (const int sigma : {1, -1}) {
    const SpaceSpec space{sigma, 2};
    for (int trial = 0; trial < 200; ++trial) {
      const double r1 = 0.2 + 0.7 * rng.next_double();
      const double r2 = 0.2 + 0.7 * rng.next_double();
      const double a1 = 2 * kPi * rng.next_double();
      const double a2 = 2 * kPi * rng.next_double();
      const Vector p =
          embed_polar({r1, (Vector(1) << a1).finished(),
                       solve_z_block(r1, space)},
                      space)
              .col(0);
      const Vector q =
          embed_polar({r2, (Vector(1) << a2).finished(),
                       solve_z_block(r2, space)},
                      space)
              .col(0);
      const double before = sigma_inner(p, q, space);
      const double t = 20.0 * (rng.next_double() - 0.5);
      const double after =
          sigma_inner(rotate_plane(t, p), rotate_plane(t, q), space);
      CHECK(std::abs(after - before) <=
            1e-13 * std::max(1.0, std::abs(before)));
    }
  }
}

TEST_CASE("pairwise distances") {
  const SpaceSpec space{1, 2};
  SUBCASE("antipodal pair on the r-circle") {
    const double r = 0.5;
    const PolarConfiguration cfg{r, (Vector(2) << 0.0, kPi).finished(),
                                 solve_z_block(r, space)};
    const Matrix d = pairwise_euclidean_distance(embed_polar(cfg, space));
    CHECK(d(0, 1) == doctest::Approx(2 * r).epsilon(1e-14));
    CHECK(d(1, 0) == d(0, 1));
    CHECK(d(0, 0) == 0.0);
  }
  SUBCASE("coincident points") {
    Matrix points(3, 2);
    points.col(0) = vec3(0.6, 0.0, 0.8);
    points.col(1) = vec3(0.6, 0.0, 0.8);
    CHECK(pairwise_euclidean_distance(points)(0, 1) == 0.0);
  }
  SUBCASE("quarter turn at r = 0.5 against direct subtraction") {
    const double r = 0.5;
    const PolarConfiguration cfg{r, (Vector(2) << 0.0, kPi / 2).finished(),
                                 solve_z_block(r, space)};
    const Matrix q = embed_polar(cfg, space);
    const double direct = (q.col(0) - q.col(1)).norm();
    const Matrix d = pairwise_euclidean_distance(q);
    CHECK(d(0, 1) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(d(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
}

TEST_CASE("chord formula d^2 = 2 r^2 (1 - cos(da)) for shared z") {
  SplitMix64 rng(37);
  for (const int sigma : {1, -1}) {
    const SpaceSpec space{sigma, 2};
    for (int trial = 0; trial < 300; ++trial) {
      const double rmax = sigma == 1 ? 0.95 : 3.0;
      const double r = 0.1 + (rmax - 0.1) * rng.next_double();
      const double a1 = 2 * kPi * rng.next_double();
      const double a2 = 2 * kPi * rng.next_double();
      const PolarConfiguration cfg{r, (Vector(2) << a1, a2).finished(),
                                   solve_z_block(r, space)};
      const Matrix d = pairwise_euclidean_distance(embed_polar(cfg, space));
      const double expected = 2 * r * r * (1 - std::cos(a1 - a2));
      CHECK(std::abs(d(0, 1) * d(0, 1) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("tangent_project") {
  const SpaceSpec sphere{1, 2};
  const Vector q = vec3(0.6, 0.0, 0.8);
  SUBCASE("already tangent vectors are unchanged") {
    const Vector v = vec3(0.0, 1.0, 0.0);  // tangent at q
    CHECK((tangent_project(q, v, sphere) - v).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("the point itself projects to zero") {
    CHECK(tangent_project(q, q, sphere).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("random vectors project into the tangent space") {
    SplitMix64 rng(43);
    for (const int sigma : {1, -1}) {
      const SpaceSpec space{sigma, 3};
      for (int trial = 0; trial < 200; ++trial) {
        const double rmax = sigma == 1 ? 0.95 : 2.5;
        const double r = 0.1 + (rmax - 0.1) * rng.next_double();
        const double a = 2 * kPi * rng.next_double();
        const Vector point =
            embed_polar({r, (Vector(1) << a).finished(),
                         solve_z_block(r, space)},
                        space)
                .col(0);
        Vector v(4);
        for (int m = 0; m < 4; ++m) v(m) = 2.0 * rng.next_double() - 1.0;
        const Vector w = tangent_project(point, v, space);
        CHECK(std::abs(sigma_inner(point, w, space)) <= 1e-13 * v.norm());
      }
    }
  }
}

TEST_CASE("embedded configurations satisfy the manifold constraint") {
  SplitMix64 rng(53);
  for (const int sigma : {1, -1}) {
    for (const int k : {2, 3, 4}) {
      const SpaceSpec space{sigma, k};
      for (int trial = 0; trial < 100; ++trial) {
        const double rmax = sigma == 1 ? 1.0 : 4.0;
        const double r = 0.05 + (rmax - 0.05) * rng.next_double();
        const int n = 2 + static_cast<int>(rng.next_double() * 4);
        Vector alphas(n);
        for (int i = 0; i < n; ++i) alphas(i) = 2 * kPi * rng.next_double();
        const PolarConfiguration cfg{r, alphas, solve_z_block(r, space)};
        const Matrix q = embed_polar(cfg, space);
        for (int i = 0; i < n; ++i) {
          CHECK(std::abs(sigma_inner(q.col(i), q.col(i), space) - sigma) <=
                1e-12);
        }
      }
    }
  }
}

TEST_CASE("manifold_normalize rescales onto the constraint surface") {
  for (const int sigma : {1, -1}) {
    const SpaceSpec space{sigma, 2};
    const Vector q0 =
        embed_polar({0.5, Vector::Zero(1), solve_z_block(0.5, space)}, space)
            .col(0);
    const Vector repaired = manifold_normalize(1.001 * q0, space);
    CHECK(std::abs(sigma_inner(repaired, repaired, space) - sigma) <= 1e-15);
  }
}
