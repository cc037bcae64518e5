#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "inducibility/numeric.hpp"
#include "inducibility/pattern_count.hpp"
#include "inducibility/poly.hpp"
#include "inducibility/tree.hpp"

namespace inducibility {

struct MaximizeResult {
  // maximizer with the larger third coordinate; the mirror image
  // (x3 -> 1 - x1 - x2 - x3) is the other global maximizer
  std::vector<mpf_class> argmax;         // size 3
  std::vector<mpf_class> argmax_mirror;  // size 3
  mpf_class max_value;
  mpf_class gradient_norm;  // max |dF/dx_i| at argmax
  int starts = 0;
};

// Multi-start projected gradient ascent over the open simplex followed by
// Newton polishing of the gradient system at high precision. Throws
// std::runtime_error when polishing does not push the gradient below
// tolerance. `digits` is the working decimal precision (>= 50 recommended).
MaximizeResult maximize_objective(const ObjectiveF& f, int starts = 1000,
                                  int digits = 60);

// 120 * max F; the binary-tree lower bound.
mpf_class lower_bound_a5(int starts = 1000, int digits = 60);

struct SmallMaximizeResult {
  Rational argmax;     // 1/4 (the canonical representative; 3/4 is the mirror)
  Rational max_value;  // 59/9984
};

// Exact maximization of f over (0,1) by comparing the critical points of the
// factored derivative.
SmallMaximizeResult maximize_f_small();

// 24 * max f = 59/416; the ternary-tree lower bound.
Rational lower_bound_q4();

// Exact limiting density of the pattern in complete trees: 1/13 for Q4
// (in CD^3_h), 1/7 for A5 (in CD^2_h).
Rational limit_density_complete(PatternSpec::Id pattern);

// lim gamma(Q_k, CD^d_h) = k!(d-1)C(d,k-1) / ((d^{k-1}-d)(d^{k-1}-1)).
Rational qk_limit_density(int d, int k);

// Builds a construction from text: "E2:n", "E3:n", "CD:d,h", "S:n1,n2,n3,n4",
// "W:h", "Star:k", "F:n", "Q:k", or a literal tree in parentheses format.
TreePtr build_construction(const std::string& text);

// Exact density of the pattern in the finite construction (no asymptotics).
Rational construction_density(const std::string& construction,
                              const PatternSpec& pattern);

// The degree-16 minimal polynomial of the binary lower bound, loaded from a
// data file with one coefficient per line (constant term first).
class MinimalPolynomial {
 public:
  static MinimalPolynomial load(const std::filesystem::path& file);
  // data/a5_minpoly.txt resolved from INDUCIBILITY_DATA_DIR or the compiled-in
  // default.
  static MinimalPolynomial load_default();

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coefficients() const { return coeffs_; }

  mpf_class eval(const mpf_class& x) const;
  mpf_class eval_derivative(const mpf_class& x) const;

 private:
  std::vector<BigInt> coeffs_;  // constant term first
};

struct MinPolyReport {
  mpf_class newton_residual;  // |p(c)| / |p'(c)|
  bool sign_change = false;   // p changes sign on [c - 1e-12, c + 1e-12]
  bool pass = false;          // residual < 1e-25 and sign change present
};

// Checks that the candidate (>= 40 significant digits) is a root of the
// minimal polynomial. Throws std::invalid_argument on insufficient precision.
MinPolyReport verify_minimal_polynomial(const MinimalPolynomial& poly,
                                        const mpf_class& candidate);

// Decimal rendering of a high-precision float.
std::string mpf_to_string(const mpf_class& value, int digits);

}  // namespace inducibility
