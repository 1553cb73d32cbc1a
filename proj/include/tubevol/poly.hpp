#ifndef TUBEVOL_POLY_HPP
#define TUBEVOL_POLY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace tubevol {

// One monomial: exponent vector (length n_vars) and a nonzero coefficient.
struct Term {
  std::vector<unsigned> exps;
  double coeff = 0.0;

  unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned e : exps) d += e;
    return d;
  }
};

// Sparse multivariate polynomial over the reals.
//
// Invariants (restored by normalize() after every mutation):
//  - terms are sorted in graded-lex order, highest first;
//  - no two terms share an exponent vector, no stored coefficient is zero;
//  - every exponent vector has length n_vars().
// The zero polynomial is the empty term list and has degree() == 0 by
// convention.
class SparsePoly {
 public:
  SparsePoly() = default;
  explicit SparsePoly(int n_vars) : n_vars_(n_vars) {}
  SparsePoly(int n_vars, std::vector<Term> terms);

  static SparsePoly zero(int n_vars) { return SparsePoly(n_vars); }
  static SparsePoly constant(int n_vars, double c);
  // X_{var+1} as a polynomial (var is 0-based).
  static SparsePoly variable(int n_vars, int var);
  static SparsePoly monomial(int n_vars, std::vector<unsigned> exps, double c);

  int n_vars() const { return n_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;  // 0 for the zero polynomial
  bool is_homogeneous() const;

  double eval(const Eigen::VectorXd& x) const;
  SparsePoly derivative(int var) const;

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator*(double c) const;
  SparsePoly operator-() const { return *this * -1.0; }

  // Drops terms with |coeff| < rel_tol * max|coeff|.
  void prune(double rel_tol);

  bool same_terms(const SparsePoly& o, double coeff_tol) const;

 private:
  void normalize();

  int n_vars_ = 0;
  std::vector<Term> terms_;
};

struct PolySystem {
  int n_vars = 0;
  std::vector<SparsePoly> polys;

  PolySystem() = default;
  explicit PolySystem(int n) : n_vars(n) {}
  PolySystem(int n, std::vector<SparsePoly> ps);

  std::size_t size() const { return polys.size(); }
  unsigned max_degree() const;
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  // Jacobian rows are gradients of the member polynomials.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
};

// n_vars partial derivatives of p, in variable order.
PolySystem gradient(const SparsePoly& p);

// Adds a homogenizing variable in front (it becomes variable 0); the result
// is homogeneous of degree deg(p) and restricting it to 1 recovers p.
SparsePoly homogenize(const SparsePoly& p);

// Substitutes variable 0 by 1 and drops it.
SparsePoly dehomogenize(const SparsePoly& p);

SparsePoly sum_of_squares(const PolySystem& f);

// (1-t)*Q - t*G, 0 <= t <= 1.
SparsePoly deformation_poly(const SparsePoly& q, const SparsePoly& g, double t);

// {g, dg/dX_1, ..., dg/dX_k}; exactly k+1 polynomials.
PolySystem cr_set(const SparsePoly& g, int k);

// Each polynomial composed with x -> R x; R must be orthogonal within 1e-10.
PolySystem rotate_coords(const PolySystem& s, const Eigen::MatrixXd& r);
SparsePoly rotate_coords(const SparsePoly& p, const Eigen::MatrixXd& r);

// Text form: sum of `coeff*X1^a1*...*Xn^an` terms, e.g. "X1^2*X2 - 3*X3 + 1".
std::string format_poly(const SparsePoly& p);
SparsePoly parse_poly(const std::string& text, int n_vars);
// Infers the variable count from the highest index that appears.
SparsePoly parse_poly(const std::string& text);

inline SparsePoly operator*(double c, const SparsePoly& p) { return p * c; }

}  // namespace tubevol

#endif  // TUBEVOL_POLY_HPP
