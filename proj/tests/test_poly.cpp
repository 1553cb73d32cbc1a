#include <doctest.h>

#include <cmath>

#include "tubevol/geometry.hpp"
#include "tubevol/poly.hpp"
#include "tubevol/rng.hpp"

using namespace tubevol;

namespace {

// Independent evaluation oracle: plain term-by-term sum with std::pow.
double eval_oracle(const SparsePoly& p, const Eigen::VectorXd& x) {
  double acc = 0.0;
  for (const Term& t : p.terms()) {
    double m = t.coeff;
    for (int i = 0; i < p.n_vars(); ++i)
      m *= std::pow(x[i], static_cast<double>(t.exps[i]));
    acc += m;
  }
  return acc;
}

SparsePoly random_poly(int n, int max_deg, SampleRng& rng) {
  SparsePoly p(n);
  const int terms = 3 + static_cast<int>(rng.uniform() * 6);
  for (int t = 0; t < terms; ++t) {
    std::vector<unsigned> e(n, 0);
    int budget = static_cast<int>(rng.uniform() * (max_deg + 1));
    for (int i = 0; i < n && budget > 0; ++i) {
      const int take = static_cast<int>(rng.uniform() * (budget + 1));
      e[i] = static_cast<unsigned>(take);
      budget -= take;
    }
    p = p + SparsePoly::monomial(n, e, rng.uniform(-2.0, 2.0));
  }
  return p;
}

Eigen::VectorXd random_point(int n, SampleRng& rng, double scale = 1.5) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-scale, scale);
  return x;
}

}  // namespace

TEST_CASE("eval basics") {
  const SparsePoly p = parse_poly("X1^2 + X2^2", 2);
  Eigen::VectorXd x(2);
  x << 0.0, 0.0;
  CHECK(p.eval(x) == 0.0);

  const SparsePoly q = parse_poly("X1*X2", 2);
  x << 2.0, 3.0;
  CHECK(q.eval(x) == 6.0);

  CHECK_THROWS_AS(p.eval(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("eval matches the monomial-sum oracle on random cubics") {
  SampleRng rng(7, 0, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const SparsePoly p = random_poly(4, 3, rng);
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = random_point(4, rng);
      const double a = p.eval(x);
      const double b = eval_oracle(p, x);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("eval is linear in the polynomial") {
  SampleRng rng(8, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const SparsePoly p = random_poly(3, 4, rng);
    const SparsePoly q = random_poly(3, 4, rng);
    const Eigen::VectorXd x = random_point(3, rng);
    CHECK((p + q).eval(x) ==
          doctest::Approx(p.eval(x) + q.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("gradient basics") {
  const PolySystem g1 = gradient(parse_poly("X1^2", 2));
  REQUIRE(g1.size() == 2);
  CHECK(g1.polys[0].same_terms(parse_poly("2*X1", 2), 0.0));
  CHECK(g1.polys[1].is_zero());

  const PolySystem g2 = gradient(parse_poly("X1*X2", 2));
  CHECK(g2.polys[0].same_terms(parse_poly("X2", 2), 0.0));
  CHECK(g2.polys[1].same_terms(parse_poly("X1", 2), 0.0));
}

TEST_CASE("gradient matches central finite differences") {
  SampleRng rng(9, 0, 0);
  const double h = 1e-6;
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);  // up to 6
    const SparsePoly p = random_poly(n, 5, rng);
    const PolySystem g = gradient(p);
    for (int i = 0; i < 12; ++i) {
      const Eigen::VectorXd x = random_point(n, rng, 1.0);
      for (int v = 0; v < n; ++v) {
        Eigen::VectorXd xp = x, xm = x;
        xp[v] += h;
        xm[v] -= h;
        const double fd = (p.eval(xp) - p.eval(xm)) / (2.0 * h);
        const double an = g.polys[v].eval(x);
        CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("homogenize examples") {
  // X1^2 + 1 -> X1^2 + X0^2 (the new variable prints as X1).
  const SparsePoly h1 = homogenize(parse_poly("X1^2 + 1", 1));
  CHECK(h1.same_terms(parse_poly("X2^2 + X1^2", 2), 0.0));

  const SparsePoly h2 = homogenize(parse_poly("X1 + X2^2", 2));
  CHECK(h2.same_terms(parse_poly("X1*X2 + X3^2", 3), 0.0));
  CHECK(h2.is_homogeneous());
}

TEST_CASE("homogenize passes the scaling test and round-trips") {
  SampleRng rng(10, 0, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    const SparsePoly p = random_poly(n, 4, rng);
    const SparsePoly h = homogenize(p);
    CHECK(h.is_homogeneous());
    CHECK(h.degree() == p.degree());
    CHECK(dehomogenize(h).same_terms(p, 0.0));

    const double lam = rng.uniform(0.3, 2.0);
    const Eigen::VectorXd x = random_point(n + 1, rng);
    const double lhs = h.eval(lam * x);
    const double rhs = std::pow(lam, static_cast<double>(h.degree())) * h.eval(x);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("dehomogenize examples") {
  CHECK(dehomogenize(parse_poly("X1^2 + X2^2", 2))
            .same_terms(parse_poly("1 + X1^2", 1), 0.0));
  CHECK(dehomogenize(parse_poly("X1*X2", 2)).same_terms(parse_poly("X1", 1), 0.0));

  SampleRng rng(11, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const SparsePoly p = random_poly(3, 4, rng);
    const SparsePoly h = homogenize(p);
    CHECK(dehomogenize(h).degree() <= h.degree());
  }
}

TEST_CASE("sum_of_squares") {
  PolySystem f(2, {parse_poly("X1", 2), parse_poly("X2", 2)});
  CHECK(sum_of_squares(f).same_terms(parse_poly("X1^2 + X2^2", 2), 0.0));

  PolySystem g(2, {parse_poly("X1*X2", 2)});
  CHECK(sum_of_squares(g).same_terms(parse_poly("X1^2*X2^2", 2), 0.0));

  CHECK_THROWS_AS(sum_of_squares(PolySystem(2)), std::invalid_argument);

  // Grid oracle: Q >= 0 everywhere and Q vanishes exactly at simultaneous
  // zeros of the family.
  PolySystem fam(2, {parse_poly("X1*X2", 2), parse_poly("X1 - X2", 2)});
  const SparsePoly q = sum_of_squares(fam);
  CHECK(q.degree() == 2 * fam.max_degree());
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      Eigen::VectorXd x(2);
      x << -2.0 + 4.0 * i / 49.0, -2.0 + 4.0 * j / 49.0;
      const double qv = q.eval(x);
      const double fv =
          std::max(std::abs(fam.polys[0].eval(x)), std::abs(fam.polys[1].eval(x)));
      CHECK(qv >= 0.0);
      CHECK((qv <= 1e-20) == (fv <= 1e-10));
    }
}

TEST_CASE("deformation_poly") {
  const SparsePoly q = parse_poly("X1^2", 2);
  const SparsePoly g = parse_poly("X2^2", 2);
  CHECK(deformation_poly(q, g, 0.0).same_terms(q, 0.0));
  CHECK(deformation_poly(q, g, 1.0).same_terms(g * -1.0, 0.0));
  CHECK(deformation_poly(q, g, 0.5).same_terms(
      parse_poly("0.5*X1^2 - 0.5*X2^2", 2), 1e-15));
  CHECK_THROWS_AS(deformation_poly(q, g, 1.5), std::invalid_argument);
}

TEST_CASE("cr_set") {
  const SparsePoly g = parse_poly("X1^2 + X2^2 + X3^2", 3);
  const PolySystem c0 = cr_set(g, 0);
  REQUIRE(c0.size() == 1);
  CHECK(c0.polys[0].same_terms(g, 0.0));

  const PolySystem c2 = cr_set(g, 2);
  REQUIRE(c2.size() == 3);
  CHECK(c2.polys[0].same_terms(g, 0.0));
  CHECK(c2.polys[1].same_terms(parse_poly("2*X1", 3), 0.0));
  CHECK(c2.polys[2].same_terms(parse_poly("2*X2", 3), 0.0));

  SampleRng rng(12, 0, 0);
  for (int k = 0; k <= 3; ++k)
    CHECK(cr_set(random_poly(3, 3, rng), k).size() ==
          static_cast<std::size_t>(k) + 1);
  CHECK_THROWS_AS(cr_set(g, 4), std::invalid_argument);
}

TEST_CASE("rotate_coords") {
  SampleRng rng(13, 0, 0);
  const SparsePoly p = random_poly(3, 3, rng);
  PolySystem s(3, {p});

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  CHECK(rotate_coords(s, id).polys[0].same_terms(p, 1e-14));

  const Eigen::MatrixXd r = random_orthogonal(3, 99);
  const PolySystem rs = rotate_coords(s, r);
  CHECK(rs.polys[0].degree() == p.degree());
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = random_point(3, rng);
    CHECK(std::abs(rs.polys[0].eval(x) - p.eval(r * x)) <= 1e-10);
  }

  // Rotational invariance of X1^2 + X2^2 in the plane.
  const SparsePoly circ = parse_poly("X1^2 + X2^2", 2);
  const double a = 0.83;
  Eigen::MatrixXd rot(2, 2);
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  CHECK(rotate_coords(circ, rot).same_terms(circ, 1e-12));

  Eigen::MatrixXd bad(3, 3);
  bad.setConstant(0.5);
  CHECK_THROWS_AS(rotate_coords(s, bad), std::invalid_argument);
}

TEST_CASE("text format round trip") {
  SampleRng rng(14, 0, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const SparsePoly p = random_poly(3, 4, rng);
    const SparsePoly back = parse_poly(format_poly(p), 3);
    CHECK(back.same_terms(p, 1e-15));
  }
  CHECK(format_poly(SparsePoly::zero(2)) == "0");
  CHECK(parse_poly("X1^2*X2 - 3*X3 + 1").n_vars() == 3);
  CHECK_THROWS_AS(parse_poly("X1 + ", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("X0 + 1", 2), std::invalid_argument);
}

TEST_CASE("degree conventions") {
  CHECK(SparsePoly::zero(3).degree() == 0);
  CHECK(SparsePoly::constant(3, 2.0).degree() == 0);
  CHECK(parse_poly("X1^2*X2 + X3", 3).degree() == 3);
}
