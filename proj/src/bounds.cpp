#include "inducibility/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifndef INDUCIBILITY_DATA_DIR_DEFAULT
#define INDUCIBILITY_DATA_DIR_DEFAULT "data"
#endif

namespace inducibility {

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

bool feasible(const double* x, double margin) {
  return x[0] > margin && x[1] > margin && x[2] > margin &&
         x[0] + x[1] + x[2] < 1.0 - margin;
}

// Gradient ascent with backtracking, staying inside the open simplex.
double ascend(const ObjectiveF& f, double* x) {
  const double margin = 1e-9;
  double fx = f.value(x[0], x[1], x[2]);
  for (int iter = 0; iter < 2000; ++iter) {
    double g[3];
    double gmax = 0;
    for (int i = 0; i < 3; ++i) {
      g[i] = f.grad(i).eval(x[0], x[1], x[2]);
      gmax = std::max(gmax, std::fabs(g[i]));
    }
    if (gmax < 1e-13) break;
    double t = 0.5;
    bool moved = false;
    while (t > 1e-18) {
      double y[3] = {x[0] + t * g[0], x[1] + t * g[1], x[2] + t * g[2]};
      if (feasible(y, margin)) {
        double fy = f.value(y[0], y[1], y[2]);
        if (fy > fx) {
          std::copy(y, y + 3, x);
          fx = fy;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return fx;
}

// Solves the 3x3 system a * sol = rhs in place (partial pivoting).
void solve3(mpf_class a[3][3], mpf_class rhs[3], mpf_class sol[3]) {
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (abs(a[perm[row]][col]) > abs(a[perm[piv]][col])) piv = row;
    }
    std::swap(perm[col], perm[piv]);
    if (a[perm[col]][col] == 0) throw std::runtime_error("singular Newton system");
    for (int row = col + 1; row < 3; ++row) {
      mpf_class factor = a[perm[row]][col] / a[perm[col]][col];
      for (int c2 = col; c2 < 3; ++c2) a[perm[row]][c2] -= factor * a[perm[col]][c2];
      rhs[perm[row]] -= factor * rhs[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    mpf_class s = rhs[perm[col]];
    for (int c2 = col + 1; c2 < 3; ++c2) s -= a[perm[col]][c2] * sol[c2];
    sol[col] = s / a[perm[col]][col];
  }
}

}  // namespace

MaximizeResult maximize_objective(const ObjectiveF& f, int starts, int digits) {
  if (starts < 1) throw std::invalid_argument("need at least one start");
  if (digits < 15) throw std::invalid_argument("precision too low");

  double best_x[3] = {0.25, 0.25, 0.25};
  double best_f = -1;
  int accepted = 0;
  for (int idx = 1; accepted < starts; ++idx) {
    double x[3] = {halton(idx, 2), halton(idx, 3), halton(idx, 5)};
    if (!feasible(x, 1e-6)) continue;
    ++accepted;
    double fx = ascend(f, x);
    if (fx > best_f) {
      best_f = fx;
      std::copy(x, x + 3, best_x);
    }
  }

  // Newton polish of the gradient system at high precision.
  mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(digits * 3.33) + 64;
  mpf_class x[3] = {mpf_class(best_x[0], prec), mpf_class(best_x[1], prec),
                    mpf_class(best_x[2], prec)};
  mpf_class gnorm(0, prec);
  for (int iter = 0; iter < 60; ++iter) {
    mpf_class g[3], h[3][3], delta[3];
    gnorm = 0;
    for (int i = 0; i < 3; ++i) {
      g[i] = f.grad(i).eval(x[0], x[1], x[2]);
      if (abs(g[i]) > gnorm) gnorm = abs(g[i]);
    }
    mpf_class tol(0, prec);
    tol = 10;
    mpf_pow_ui(tol.get_mpf_t(), tol.get_mpf_t(), static_cast<unsigned long>(digits));
    tol = 1 / tol;  // 10^-digits
    if (gnorm < tol) break;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i][j] = f.hess(i, j).eval(x[0], x[1], x[2]);
    for (int i = 0; i < 3; ++i) g[i] = -g[i];
    solve3(h, g, delta);
    for (int i = 0; i < 3; ++i) x[i] += delta[i];
  }

  mpf_class residual_limit(0, prec);
  residual_limit = 10;
  mpf_pow_ui(residual_limit.get_mpf_t(), residual_limit.get_mpf_t(), 20);
  residual_limit = 1 / residual_limit;  // 10^-20
  for (int i = 0; i < 3; ++i) {
    mpf_class gi = f.grad(i).eval(x[0], x[1], x[2]);
    if (abs(gi) > residual_limit) {
      throw std::runtime_error("Newton polishing failed to reach gradient tolerance");
    }
    gnorm = std::max(gnorm, mpf_class(abs(gi)));
  }

  mpf_class x4 = 1 - x[0] - x[1] - x[2];
  MaximizeResult result;
  result.starts = starts;
  if (x[2] >= x4) {
    result.argmax = {x[0], x[1], x[2]};
    result.argmax_mirror = {x[0], x[1], x4};
  } else {
    result.argmax = {x[0], x[1], x4};
    result.argmax_mirror = {x[0], x[1], x[2]};
  }
  result.max_value =
      f.value(result.argmax[0], result.argmax[1], result.argmax[2]);
  result.gradient_norm = gnorm;
  return result;
}

mpf_class lower_bound_a5(int starts, int digits) {
  static ObjectiveF objective;
  MaximizeResult r = maximize_objective(objective, starts, digits);
  return 120 * r.max_value;
}

SmallMaximizeResult maximize_f_small() {
  // f'(x) = -(2x-1)(4x-3)(4x-1)/104 vanishes exactly at 1/4, 1/2, 3/4.
  const Rational candidates[3] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  Rational best_x = candidates[0];
  Rational best_v = eval_f(best_x);
  for (const Rational& c : candidates) {
    Rational v = eval_f(c);
    if (v > best_v) {
      best_v = v;
      best_x = c;
    }
  }
  return {best_x, best_v};
}

Rational lower_bound_q4() {
  SmallMaximizeResult r = maximize_f_small();
  return 24 * r.max_value;
}

Rational qk_limit_density(int d, int k) {
  if (d < 2 || k < 3) throw std::invalid_argument("qk_limit_density: d >= 2, k >= 3");
  BigInt dk1;
  mpz_ui_pow_ui(dk1.get_mpz_t(), d, static_cast<unsigned long>(k) - 1);
  BigInt fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
  return make_rational(fact * (d - 1) * binomial(d, k - 1), (dk1 - d) * (dk1 - 1));
}

Rational limit_density_complete(PatternSpec::Id pattern) {
  switch (pattern) {
    case PatternSpec::Id::Q4:
      return qk_limit_density(3, 4);  // 1/13
    case PatternSpec::Id::A5:
      // (2*5 / (2^5 - 2)) * I_2(CD^2_2), with I_2(CD^2_2) = 3/7
      return make_rational(10, 30) * make_rational(3, 7);  // 1/7
    default:
      throw std::invalid_argument("limit only available for A5 and Q4");
  }
}

TreePtr build_construction(const std::string& text) {
  if (!text.empty() && (text[0] == '(' || text[0] == '*')) return parse_tree(text);
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("construction must look like KIND:params");
  }
  std::string kind = text.substr(0, colon);
  std::vector<long> args;
  std::string rest = text.substr(colon + 1);
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    args.push_back(std::stol(rest.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  auto need = [&](size_t k) {
    if (args.size() != k) {
      throw std::invalid_argument("construction " + kind + " needs " +
                                  std::to_string(k) + " parameter(s)");
    }
  };
  if (kind == "E2") {
    need(1);
    return even_tree(2, args[0]);
  }
  if (kind == "E3") {
    need(1);
    return even_tree(3, args[0]);
  }
  if (kind == "CD") {
    need(2);
    return complete_tree(static_cast<int>(args[0]), static_cast<int>(args[1]));
  }
  if (kind == "S") {
    need(4);
    return s_construction(args[0], args[1], args[2], args[3]);
  }
  if (kind == "W") {
    need(1);
    return w_tree(static_cast<int>(args[0]));
  }
  if (kind == "Star") {
    need(1);
    return star(static_cast<int>(args[0]));
  }
  if (kind == "F") {
    need(1);
    return caterpillar(args[0]);
  }
  if (kind == "Q") {
    need(1);
    return q_tree(static_cast<int>(args[0]));
  }
  throw std::invalid_argument("unknown construction kind " + kind);
}

Rational construction_density(const std::string& construction,
                              const PatternSpec& pattern) {
  TreePtr tree = build_construction(construction);
  return density(pattern, tree);
}

MinimalPolynomial MinimalPolynomial::load(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  MinimalPolynomial p;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    p.coeffs_.emplace_back(line);
  }
  if (p.coeffs_.size() != 17) {
    throw std::runtime_error("expected 17 coefficients in " + file.string());
  }
  return p;
}

MinimalPolynomial MinimalPolynomial::load_default() {
  const char* env = std::getenv("INDUCIBILITY_DATA_DIR");
  std::filesystem::path dir = env ? env : INDUCIBILITY_DATA_DIR_DEFAULT;
  return load(dir / "a5_minpoly.txt");
}

mpf_class MinimalPolynomial::eval(const mpf_class& x) const {
  mpf_class acc(0, x.get_prec());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + mpf_class(*it, x.get_prec());
  }
  return acc;
}

mpf_class MinimalPolynomial::eval_derivative(const mpf_class& x) const {
  mpf_class acc(0, x.get_prec());
  for (size_t i = coeffs_.size(); i-- > 1;) {
    acc = acc * x + mpf_class(static_cast<long>(i) * coeffs_[i], x.get_prec());
  }
  return acc;
}

MinPolyReport verify_minimal_polynomial(const MinimalPolynomial& poly,
                                        const mpf_class& candidate) {
  // ~3.32 bits per decimal digit; the cancellation in p(c) eats ~60 digits
  if (candidate.get_prec() < 133) {
    throw std::invalid_argument("candidate precision below 40 significant digits");
  }
  mp_bitcnt_t prec = candidate.get_prec() + 256;
  mpf_class c(candidate, prec);
  MinPolyReport report;
  mpf_class pc = poly.eval(c);
  mpf_class dpc = poly.eval_derivative(c);
  if (dpc == 0) throw std::runtime_error("derivative vanished at candidate");
  report.newton_residual = abs(pc / dpc);

  mpf_class eps(0, prec);
  eps = 10;
  mpf_pow_ui(eps.get_mpf_t(), eps.get_mpf_t(), 12);
  eps = 1 / eps;  // 1e-12
  mpf_class lo = poly.eval(mpf_class(c - eps));
  mpf_class hi = poly.eval(mpf_class(c + eps));
  report.sign_change = (lo < 0 && hi > 0) || (lo > 0 && hi < 0);

  mpf_class limit(0, prec);
  limit = 10;
  mpf_pow_ui(limit.get_mpf_t(), limit.get_mpf_t(), 25);
  limit = 1 / limit;  // 1e-25
  report.pass = report.sign_change && report.newton_residual < limit;
  return report;
}

std::string mpf_to_string(const mpf_class& value, int digits) {
  mp_exp_t exp;
  std::string mant = value.get_str(exp, 10, static_cast<size_t>(digits));
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(mant.begin());
  if (mant.empty()) return "0";
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<size_t>(-exp), '0') + mant;
  } else if (static_cast<size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<size_t>(exp)) + "." +
          mant.substr(static_cast<size_t>(exp));
  }
  return neg ? "-" + out : out;
}

}  // namespace inducibility
