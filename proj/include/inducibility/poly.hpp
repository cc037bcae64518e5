#pragma once

#include <array>
#include <map>

#include "inducibility/numeric.hpp"

namespace inducibility {

// Dense-enough trivariate polynomial with exact rational coefficients,
// used to expand, differentiate and evaluate the lower-bound objectives.
class TriPoly {
 public:
  TriPoly() = default;
  static TriPoly constant(const Rational& c);
  static TriPoly variable(int i);  // i in {0,1,2}

  TriPoly operator+(const TriPoly& o) const;
  TriPoly operator-(const TriPoly& o) const;
  TriPoly operator*(const TriPoly& o) const;
  TriPoly operator*(const Rational& c) const;
  TriPoly pow(int e) const;

  TriPoly derivative(int i) const;

  bool operator==(const TriPoly& o) const { return terms_ == o.terms_; }

  double eval(double x1, double x2, double x3) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
      double term = c.get_d();
      for (int j = 0; j < e[0]; ++j) term *= x1;
      for (int j = 0; j < e[1]; ++j) term *= x2;
      for (int j = 0; j < e[2]; ++j) term *= x3;
      acc += term;
    }
    return acc;
  }

  // all intermediates carry the precision of x1
  mpf_class eval(const mpf_class& x1, const mpf_class& x2, const mpf_class& x3) const;

  Rational eval_exact(const Rational& x1, const Rational& x2, const Rational& x3) const;

  size_t term_count() const { return terms_.size(); }

 private:
  void trim();
  std::map<std::array<int, 3>, Rational> terms_;
};

// The degree-5 objective whose scaled maximum gives the binary lower bound;
// arguments live in the open simplex x1,x2,x3 > 0, x1+x2+x3 < 1 with the
// fourth coordinate implicit.
class ObjectiveF {
 public:
  ObjectiveF();

  const TriPoly& poly() const { return poly_; }
  const TriPoly& grad(int i) const { return grad_[i]; }
  const TriPoly& hess(int i, int j) const { return hess_[i][j]; }

  double value(double x1, double x2, double x3) const;
  mpf_class value(const mpf_class& x1, const mpf_class& x2, const mpf_class& x3) const;
  Rational value_exact(const Rational& x1, const Rational& x2,
                       const Rational& x3) const;

 private:
  TriPoly poly_;
  std::array<TriPoly, 3> grad_;
  std::array<std::array<TriPoly, 3>, 3> hess_;
};

// f(x) = (1 + 9x - 33x^2 + 48x^3 - 24x^4) / 312, the two-branch even-ternary
// density objective.
Rational eval_f(const Rational& x);
// f'(x) = -(2x-1)(4x-3)(4x-1)/104
Rational eval_f_prime(const Rational& x);

}  // namespace inducibility
