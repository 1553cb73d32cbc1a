#include <doctest.h>

#include <cmath>

#include "tubevol/harness.hpp"
#include "tubevol/variety.hpp"

using namespace tubevol;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::VectorXd pt(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}
}  // namespace

TEST_CASE("variety spec validation") {
  VarietySpec v = corpus_variety("circle2d");
  CHECK_NOTHROW(v.validate());

  v.degree_bound = 1;  // below the actual degree
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);

  VarietySpec s;
  s.space = AmbientSpace::sphere(2);
  s.system = PolySystem(3, {parse_poly("X3 - 1", 3)});  // inhomogeneous
  s.dim_bound = 1;
  s.degree_bound = 1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("exact binomial interval") {
  // Clopper-Pearson for 5/10 at 95%: [0.187086, 0.813413].
  const auto [lo, hi] = binomial_ci(5, 10, 0.95);
  CHECK(lo == doctest::Approx(0.187086).epsilon(1e-4));
  CHECK(hi == doctest::Approx(0.813413).epsilon(1e-4));
  CHECK(binomial_ci(0, 100, 0.99).first == 0.0);
  CHECK(binomial_ci(100, 100, 0.99).second == 1.0);
  const auto [l2, h2] = binomial_ci(0, 50, 0.99);
  CHECK(l2 == 0.0);
  CHECK(h2 > 0.0);
  CHECK_THROWS_AS(binomial_ci(2, 1, 0.9), std::invalid_argument);
}

TEST_CASE("grid oracle on the small corpus") {
  const VarietySpec line = corpus_variety("line2d");
  CHECK(grid_distance(line, pt(0.3, 0.7), 2.0, 1e-3) ==
        doctest::Approx(0.3).epsilon(7e-3));

  const VarietySpec circle = corpus_variety("circle2d");
  CHECK(grid_distance(circle, pt(2.0, 0.0), 2.5, 1e-3) ==
        doctest::Approx(1.0).epsilon(7e-3));

  const VarietySpec origin = corpus_variety("origin2d");
  Eigen::VectorXd far(2);
  far << 3.0, 4.0;
  CHECK(grid_distance(origin, far, 2.0, 1e-3) ==
        doctest::Approx(5.0).epsilon(2e-3));

  CHECK_THROWS_AS(
      GridOracle(VarietySpec{PolySystem(4, {parse_poly("X1", 4)}),
                             AmbientSpace::euclidean(4), 1, 1, false},
                 1.0, 0.1),
      std::invalid_argument);
}

TEST_CASE("projection basics") {
  const VarietySpec circle = corpus_variety("circle2d");
  const Projection pr = project_to_variety(circle, pt(2.0, 0.0));
  REQUIRE(pr.found);
  CHECK(pr.upper_bound == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((pr.y - pt(1.0, 0.0)).norm() <= 1e-5);
  CHECK(pr.residual <= 1e-10);

  // A point already on Z projects to distance ~0.
  const VarietySpec line = corpus_variety("line2d");
  const Projection on = project_to_variety(line, pt(0.7, 0.0));
  REQUIRE(on.found);
  CHECK(on.upper_bound <= 1e-6);

  // Cusp from (-1, 0): the nearest point is the cusp tip at distance 1.
  const VarietySpec cusp = corpus_variety("cusp2d");
  ProjectionOptions opts;
  opts.restarts = 20;
  const Projection pc = project_to_variety(cusp, pt(-1.0, 0.0), opts, 3, 0);
  REQUIRE(pc.found);
  CHECK(pc.upper_bound == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("projection agrees with the grid oracle on the 2d corpus") {
  const std::vector<std::string> names = {"line2d", "circle2d", "node2d",
                                          "cusp2d", "origin2d"};
  ProjectionOptions opts;
  opts.restarts = 10;
  int not_found = 0;
  const int queries_per_variety = 200;
  for (const auto& name : names) {
    const VarietySpec v = corpus_variety(name);
    const GridOracle oracle(v, 2.5, 1e-3);
    for (int i = 0; i < queries_per_variety; ++i) {
      SampleRng rng(17, 123, i);
      const Eigen::VectorXd x = pt(rng.uniform(-2, 2), rng.uniform(-2, 2));
      const Projection pr = project_to_variety(v, x, opts, 17, i);
      if (!pr.found) {
        ++not_found;
        continue;
      }
      CHECK(std::abs(pr.upper_bound - oracle.distance(x)) <= 5e-3);
    }
  }
  CHECK(not_found <= 1);  // < 0.1% of 1000
}

TEST_CASE("tube probability on the line matches the strip area") {
  const VarietySpec line = corpus_variety("line2d");
  const double eps = 0.1;
  const double truth =
      2.0 * (eps * std::sqrt(1.0 - eps * eps) + std::asin(eps)) / kPi;
  const McEstimate est = tube_probability_mc(line, pt(0, 0), 1.0, eps, 200000, 5);
  CHECK(est.ci_low <= truth);
  CHECK(truth <= est.ci_high);
  CHECK(est.not_found == 0);
}

TEST_CASE("tube probability edge cases") {
  // Z misses the ball entirely.
  const VarietySpec circle = corpus_variety("circle2d");
  Eigen::VectorXd far = pt(5.0, 0.0);
  const McEstimate none = tube_probability_mc(circle, far, 0.5, 0.05, 2000, 6);
  CHECK(none.hits == 0);

  // The tube swallows the whole ball.
  const VarietySpec line = corpus_variety("line2d");
  const McEstimate all = tube_probability_mc(line, pt(0, 0), 0.5, 2.0, 2000, 7);
  CHECK(all.p_hat == 1.0);

  // eps = 0: almost surely no hits.
  const McEstimate zero = tube_probability_mc(line, pt(0, 0), 1.0, 0.0, 2000, 8);
  CHECK(zero.hits == 0);
}

TEST_CASE("tube probability is deterministic across thread counts") {
  const VarietySpec circle = corpus_variety("circle2d");
  McOptions one;
  one.threads = 1;
  McOptions four;
  four.threads = 4;
  const McEstimate a =
      tube_probability_mc(circle, pt(0.5, 0.0), 1.0, 0.1, 20000, 99, one);
  const McEstimate b =
      tube_probability_mc(circle, pt(0.5, 0.0), 1.0, 0.1, 20000, 99, four);
  CHECK(a.hits == b.hits);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.not_found == b.not_found);
}

TEST_CASE("sampling points on varieties") {
  const VarietySpec circle = corpus_variety("circle2d");
  const PointCloud on_circle =
      sample_variety_points(circle, pt(0, 0), 2.0, 200, 21);
  CHECK(on_circle.size() >= 150);
  for (const auto& y : on_circle.points)
    CHECK(std::abs(y.norm() - 1.0) <= 1e-7);

  const VarietySpec origin = corpus_variety("origin2d");
  for (const auto& y :
       sample_variety_points(origin, pt(0, 0), 2.0, 50, 22).points)
    CHECK(y.norm() <= 1e-7);

  const VarietySpec node = corpus_variety("node2d");
  for (const auto& y : sample_variety_points(node, pt(0, 0), 2.0, 100, 23).points)
    CHECK(std::min(std::abs(y[0]), std::abs(y[1])) <= 1e-7);

  // Spherical: the great circle {X3=0} in S^2.
  const VarietySpec gc = corpus_variety("great_circle_s2");
  Eigen::VectorXd north(3);
  north << 0.0, 0.0, 1.0;
  const PointCloud on_gc = sample_variety_points(gc, north, kPi, 100, 24);
  CHECK(on_gc.size() >= 60);
  for (const auto& y : on_gc.points) {
    CHECK(std::abs(y.norm() - 1.0) <= 1e-9);
    CHECK(std::abs(y[2]) <= 1e-7);
  }
}

TEST_CASE("jacobian min singular value") {
  const VarietySpec circle = corpus_variety("circle2d");
  CHECK(jacobian_min_sv(circle.system, pt(1.0, 0.0), false) ==
        doctest::Approx(2.0).epsilon(1e-12));

  const VarietySpec node = corpus_variety("node2d");
  CHECK(jacobian_min_sv(node.system, pt(0.0, 0.0), false) == 0.0);

  const VarietySpec origin = corpus_variety("origin2d");
  CHECK(jacobian_min_sv(origin.system, pt(0.0, 0.0), false) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Spherical flag appends the sphere gradient row.
  const VarietySpec gc = corpus_variety("great_circle_s2");
  Eigen::VectorXd x(3);
  x << 1.0, 0.0, 0.0;
  CHECK(jacobian_min_sv(gc.system, x, true) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spherical tube probability covers the band fraction") {
  // Z = great circle in S^2, sigma = pi/2 around a point of Z: the true
  // probability equals sin(eps) (band area over sphere area).
  const VarietySpec gc = corpus_variety("great_circle_s2");
  Eigen::VectorXd p(3);
  p << 1.0, 0.0, 0.0;
  const double eps = 0.15;
  const McEstimate est = tube_probability_mc(gc, p, kPi / 2, eps, 100000, 31);
  CHECK(est.ci_low <= std::sin(eps));
  CHECK(std::sin(eps) <= est.ci_high);
}
