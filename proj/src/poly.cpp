#include "tubevol/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace tubevol {

namespace {

double powi(double x, unsigned e) {
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return r;
}

// Graded lex, larger term first: higher total degree wins, then the
// lexicographically larger exponent vector.
bool grlex_greater(const Term& a, const Term& b) {
  const unsigned da = a.total_degree(), db = b.total_degree();
  if (da != db) return da > db;
  return a.exps > b.exps;
}

void check_dims(const SparsePoly& a, const SparsePoly& b, const char* op) {
  if (a.n_vars() != b.n_vars())
    throw std::invalid_argument(std::string("poly ") + op +
                                ": variable count mismatch");
}

}  // namespace

SparsePoly::SparsePoly(int n_vars, std::vector<Term> terms)
    : n_vars_(n_vars), terms_(std::move(terms)) {
  for (const Term& t : terms_)
    if (static_cast<int>(t.exps.size()) != n_vars_)
      throw std::invalid_argument("poly term: exponent vector length mismatch");
  normalize();
}

SparsePoly SparsePoly::constant(int n_vars, double c) {
  SparsePoly p(n_vars);
  if (c != 0.0) p.terms_.push_back({std::vector<unsigned>(n_vars, 0), c});
  return p;
}

SparsePoly SparsePoly::variable(int n_vars, int var) {
  if (var < 0 || var >= n_vars)
    throw std::invalid_argument("poly variable index out of range");
  std::vector<unsigned> e(n_vars, 0);
  e[var] = 1;
  return monomial(n_vars, std::move(e), 1.0);
}

SparsePoly SparsePoly::monomial(int n_vars, std::vector<unsigned> exps,
                                double c) {
  SparsePoly p(n_vars);
  if (static_cast<int>(exps.size()) != n_vars)
    throw std::invalid_argument("poly monomial: exponent vector length mismatch");
  if (c != 0.0) p.terms_.push_back({std::move(exps), c});
  return p;
}

unsigned SparsePoly::degree() const {
  unsigned d = 0;
  for (const Term& t : terms_) d = std::max(d, t.total_degree());
  return d;
}

bool SparsePoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = terms_.front().total_degree();
  for (const Term& t : terms_)
    if (t.total_degree() != d) return false;
  return true;
}

double SparsePoly::eval(const Eigen::VectorXd& x) const {
  if (x.size() != n_vars_)
    throw std::invalid_argument("poly eval: point dimension mismatch");
  double acc = 0.0;
  for (const Term& t : terms_) {
    double m = t.coeff;
    for (int i = 0; i < n_vars_; ++i)
      if (t.exps[i]) m *= powi(x[i], t.exps[i]);
    acc += m;
  }
  return acc;
}

SparsePoly SparsePoly::derivative(int var) const {
  if (var < 0 || var >= n_vars_)
    throw std::invalid_argument("poly derivative: variable out of range");
  SparsePoly out(n_vars_);
  for (const Term& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term d = t;
    d.coeff *= static_cast<double>(d.exps[var]);
    d.exps[var] -= 1;
    out.terms_.push_back(std::move(d));
  }
  out.normalize();
  return out;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  check_dims(*this, o, "add");
  SparsePoly out(n_vars_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  out.normalize();
  return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  return *this + (o * -1.0);
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  check_dims(*this, o, "mul");
  std::map<std::vector<unsigned>, double> acc;
  for (const Term& a : terms_)
    for (const Term& b : o.terms_) {
      std::vector<unsigned> e(n_vars_);
      for (int i = 0; i < n_vars_; ++i) e[i] = a.exps[i] + b.exps[i];
      acc[std::move(e)] += a.coeff * b.coeff;
    }
  SparsePoly out(n_vars_);
  for (auto& [e, c] : acc)
    if (c != 0.0) out.terms_.push_back({e, c});
  out.normalize();
  return out;
}

SparsePoly SparsePoly::operator*(double c) const {
  SparsePoly out(n_vars_);
  if (c == 0.0) return out;
  out.terms_ = terms_;
  for (Term& t : out.terms_) t.coeff *= c;
  out.normalize();
  return out;
}

void SparsePoly::prune(double rel_tol) {
  double mx = 0.0;
  for (const Term& t : terms_) mx = std::max(mx, std::abs(t.coeff));
  const double cut = rel_tol * mx;
  std::erase_if(terms_, [cut](const Term& t) { return std::abs(t.coeff) <= cut; });
}

bool SparsePoly::same_terms(const SparsePoly& o, double coeff_tol) const {
  if (n_vars_ != o.n_vars_ || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].exps != o.terms_[i].exps) return false;
    if (std::abs(terms_[i].coeff - o.terms_[i].coeff) > coeff_tol) return false;
  }
  return true;
}

void SparsePoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), grlex_greater);
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (Term& t : terms_) {
    if (!merged.empty() && merged.back().exps == t.exps)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

PolySystem::PolySystem(int n, std::vector<SparsePoly> ps)
    : n_vars(n), polys(std::move(ps)) {
  for (const SparsePoly& p : polys)
    if (p.n_vars() != n_vars)
      throw std::invalid_argument("poly system: member variable count mismatch");
}

unsigned PolySystem::max_degree() const {
  unsigned d = 0;
  for (const SparsePoly& p : polys) d = std::max(d, p.degree());
  return d;
}

Eigen::VectorXd PolySystem::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = polys[i].eval(x);
  return v;
}

Eigen::MatrixXd PolySystem::jacobian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(polys.size()), n_vars);
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (int v = 0; v < n_vars; ++v)
      j(static_cast<Eigen::Index>(i), v) = polys[i].derivative(v).eval(x);
  return j;
}

PolySystem gradient(const SparsePoly& p) {
  PolySystem out(p.n_vars());
  out.polys.reserve(p.n_vars());
  for (int v = 0; v < p.n_vars(); ++v) out.polys.push_back(p.derivative(v));
  return out;
}

SparsePoly homogenize(const SparsePoly& p) {
  const int n = p.n_vars();
  const unsigned d = p.degree();
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    Term h;
    h.coeff = t.coeff;
    h.exps.resize(n + 1);
    h.exps[0] = d - t.total_degree();
    std::copy(t.exps.begin(), t.exps.end(), h.exps.begin() + 1);
    terms.push_back(std::move(h));
  }
  return SparsePoly(n + 1, std::move(terms));
}

SparsePoly dehomogenize(const SparsePoly& p) {
  if (p.n_vars() < 1)
    throw std::invalid_argument("dehomogenize: no variables to drop");
  std::vector<Term> terms;
  terms.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    Term a;
    a.coeff = t.coeff;
    a.exps.assign(t.exps.begin() + 1, t.exps.end());
    terms.push_back(std::move(a));
  }
  return SparsePoly(p.n_vars() - 1, std::move(terms));
}

SparsePoly sum_of_squares(const PolySystem& f) {
  if (f.polys.empty())
    throw std::invalid_argument("sum_of_squares: empty family");
  SparsePoly q(f.n_vars);
  for (const SparsePoly& p : f.polys) q = q + p * p;
  return q;
}

SparsePoly deformation_poly(const SparsePoly& q, const SparsePoly& g,
                            double t) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("deformation_poly: t outside [0,1]");
  return q * (1.0 - t) - g * t;
}

PolySystem cr_set(const SparsePoly& g, int k) {
  if (k < 0 || k > g.n_vars())
    throw std::invalid_argument("cr_set: k outside [0, n_vars]");
  PolySystem out(g.n_vars());
  out.polys.push_back(g);
  for (int v = 0; v < k; ++v) out.polys.push_back(g.derivative(v));
  return out;
}

SparsePoly rotate_coords(const SparsePoly& p, const Eigen::MatrixXd& r) {
  const int n = p.n_vars();
  if (r.rows() != n || r.cols() != n)
    throw std::invalid_argument("rotate_coords: matrix size mismatch");
  if ((r.transpose() * r - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::invalid_argument("rotate_coords: matrix is not orthogonal");

  // Linear forms (Rx)_i.
  std::vector<SparsePoly> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    SparsePoly li(n);
    for (int j = 0; j < n; ++j)
      li = li + SparsePoly::variable(n, j) * r(i, j);
    rows.push_back(std::move(li));
  }

  SparsePoly out(n);
  for (const Term& t : p.terms()) {
    SparsePoly m = SparsePoly::constant(n, t.coeff);
    for (int i = 0; i < n; ++i)
      for (unsigned e = 0; e < t.exps[i]; ++e) m = m * rows[i];
    out = out + m;
  }
  out.prune(1e-14);
  return out;
}

PolySystem rotate_coords(const PolySystem& s, const Eigen::MatrixXd& r) {
  PolySystem out(s.n_vars);
  out.polys.reserve(s.polys.size());
  for (const SparsePoly& p : s.polys) out.polys.push_back(rotate_coords(p, r));
  return out;
}

namespace {

std::string format_coeff(double c) {
  char buf[40];
  if (c == static_cast<long long>(c) && std::abs(c) < 1e15)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(c));
  else
    std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

}  // namespace

std::string format_poly(const SparsePoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : p.terms()) {
    const double c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    const double a = std::abs(c);
    std::string vars;
    for (int i = 0; i < p.n_vars(); ++i) {
      if (t.exps[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += "X" + std::to_string(i + 1);
      if (t.exps[i] > 1) vars += "^" + std::to_string(t.exps[i]);
    }
    if (vars.empty()) {
      out += format_coeff(a);
    } else if (a == 1.0) {
      out += vars;
    } else {
      out += format_coeff(a) + "*" + vars;
    }
  }
  return out;
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("poly parse error at position " +
                                std::to_string(pos) + ": " + what);
  }

  double number() {
    skip_ws();
    const char* start = s.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("expected a number");
    pos += static_cast<std::size_t>(end - start);
    return v;
  }

  unsigned integer() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected an integer");
    unsigned v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      v = v * 10 + static_cast<unsigned>(s[pos++] - '0');
    return v;
  }

  // factor := number | X<k>[^<e>]
  // term   := factor (* factor)*
  Term term(int& max_var) {
    Term t;
    t.coeff = 1.0;
    bool any = false;
    while (true) {
      const char c = peek();
      if (c == 'X' || c == 'x') {
        ++pos;
        const unsigned idx = integer();
        if (idx == 0) fail("variable indices start at X1");
        max_var = std::max(max_var, static_cast<int>(idx));
        unsigned e = 1;
        if (peek() == '^') {
          ++pos;
          e = integer();
        }
        if (t.exps.size() < idx) t.exps.resize(idx, 0);
        t.exps[idx - 1] += e;
        any = true;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.coeff *= number();
        any = true;
      } else {
        break;
      }
      if (peek() == '*') {
        ++pos;
        continue;
      }
      // Implicit products like "2 X1" are not allowed; the loop ends unless
      // the next factor is introduced by '*'.
      break;
    }
    if (!any) fail("expected a term");
    return t;
  }
};

}  // namespace

SparsePoly parse_poly(const std::string& text, int n_vars) {
  Parser p(text);
  std::vector<Term> terms;
  int max_var = 0;
  bool first = true;
  while (!p.eof()) {
    double sign = 1.0;
    char c = p.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1.0 : 1.0;
      ++p.pos;
    } else if (!first) {
      p.fail("expected '+' or '-' between terms");
    }
    Term t = p.term(max_var);
    t.coeff *= sign;
    terms.push_back(std::move(t));
    first = false;
  }
  if (first) throw std::invalid_argument("poly parse error: empty input");
  const int n = (n_vars >= 0) ? n_vars : max_var;
  if (max_var > n)
    throw std::invalid_argument("poly parse error: variable X" +
                                std::to_string(max_var) +
                                " exceeds declared count " + std::to_string(n));
  for (Term& t : terms) t.exps.resize(n, 0);
  return SparsePoly(n, std::move(terms));
}

SparsePoly parse_poly(const std::string& text) { return parse_poly(text, -1); }

}  // namespace tubevol
