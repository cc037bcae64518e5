#include "inducibility/poly.hpp"

namespace inducibility {

void TriPoly::trim() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

TriPoly TriPoly::constant(const Rational& c) {
  TriPoly p;
  if (c != 0) p.terms_[{0, 0, 0}] = c;
  return p;
}

TriPoly TriPoly::variable(int i) {
  TriPoly p;
  std::array<int, 3> e{0, 0, 0};
  e[i] = 1;
  p.terms_[e] = 1;
  return p;
}

TriPoly TriPoly::operator+(const TriPoly& o) const {
  TriPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.terms_[e] += c;
  r.trim();
  return r;
}

TriPoly TriPoly::operator-(const TriPoly& o) const {
  TriPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.terms_[e] -= c;
  r.trim();
  return r;
}

TriPoly TriPoly::operator*(const TriPoly& o) const {
  TriPoly r;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      std::array<int, 3> e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
      r.terms_[e] += c1 * c2;
    }
  }
  r.trim();
  return r;
}

TriPoly TriPoly::operator*(const Rational& c) const {
  TriPoly r;
  if (c == 0) return r;
  for (const auto& [e, v] : terms_) r.terms_[e] = v * c;
  return r;
}

TriPoly TriPoly::pow(int e) const {
  TriPoly r = constant(1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

TriPoly TriPoly::derivative(int i) const {
  TriPoly r;
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    std::array<int, 3> d = e;
    d[i] -= 1;
    r.terms_[d] += c * e[i];
  }
  r.trim();
  return r;
}

mpf_class TriPoly::eval(const mpf_class& x1, const mpf_class& x2,
                        const mpf_class& x3) const {
  mp_bitcnt_t prec = x1.get_prec();
  mpf_class acc(0, prec);
  for (const auto& [e, c] : terms_) {
    mpf_class term(c.get_num(), prec);
    term /= mpf_class(c.get_den(), prec);
    for (int j = 0; j < e[0]; ++j) term *= x1;
    for (int j = 0; j < e[1]; ++j) term *= x2;
    for (int j = 0; j < e[2]; ++j) term *= x3;
    acc += term;
  }
  return acc;
}

Rational TriPoly::eval_exact(const Rational& x1, const Rational& x2,
                             const Rational& x3) const {
  Rational acc = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int j = 0; j < e[0]; ++j) term *= x1;
    for (int j = 0; j < e[1]; ++j) term *= x2;
    for (int j = 0; j < e[2]; ++j) term *= x3;
    acc += term;
  }
  return acc;
}

ObjectiveF::ObjectiveF() {
  const TriPoly x1 = TriPoly::variable(0);
  const TriPoly x2 = TriPoly::variable(1);
  const TriPoly x3 = TriPoly::variable(2);
  const TriPoly one = TriPoly::constant(1);
  const TriPoly x4 = one - x1 - x2 - x3;
  const Rational c840(1, 840);
  const Rational c56(1, 56);
  const Rational c14 = 14;

  TriPoly head = (x1.pow(5) + x2.pow(5) + x3.pow(5) + x4.pow(5)) * c840;
  TriPoly tail = x3 * x4.pow(4) + x4 * x3.pow(4) +
                 x2 * (x3.pow(4) + x4.pow(4) + (x3.pow(2) * x4.pow(2)) * c14) +
                 (one - x1 - x2) * x2.pow(4) +
                 x1 * (x2.pow(4) + x3.pow(4) + x4.pow(4) +
                       (x3.pow(2) * x4.pow(2)) * c14 +
                       (x2.pow(2) * (one - x1 - x2).pow(2)) * c14) +
                 (one - x1) * x1.pow(4);
  poly_ = head + tail * c56;
  for (int i = 0; i < 3; ++i) grad_[i] = poly_.derivative(i);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) hess_[i][j] = grad_[i].derivative(j);
}

double ObjectiveF::value(double x1, double x2, double x3) const {
  return poly_.eval(x1, x2, x3);
}

mpf_class ObjectiveF::value(const mpf_class& x1, const mpf_class& x2,
                            const mpf_class& x3) const {
  return poly_.eval(x1, x2, x3);
}

Rational ObjectiveF::value_exact(const Rational& x1, const Rational& x2,
                                 const Rational& x3) const {
  return poly_.eval_exact(x1, x2, x3);
}

Rational eval_f(const Rational& x) {
  Rational v = 1 + 9 * x - 33 * x * x + 48 * x * x * x - 24 * x * x * x * x;
  return v / 312;
}

Rational eval_f_prime(const Rational& x) {
  Rational v = (2 * x - 1) * (4 * x - 3) * (4 * x - 1);
  return -v / 104;
}

}  // namespace inducibility
