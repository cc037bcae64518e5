#include "inducibility/pattern_count.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace inducibility {

namespace {

bool is_binary(const TreePtr& t) { return t->max_outdegree() <= 2; }

const char* kA5Text = "(*((**)(**)))";
const char* kCD22Text = "((**)(**))";

// canonical keys (the text constants above use reader-friendly child order)
const std::string& a5_key() {
  static const std::string key = parse_tree(kA5Text)->key();
  return key;
}
const std::string& cd22_key() {
  static const std::string key = parse_tree(kCD22Text)->key();
  return key;
}

struct PairMemo {
  std::unordered_map<std::string, std::pair<BigInt, BigInt>> map;
  std::mutex mu;

  bool lookup(const std::string& key, std::pair<BigInt, BigInt>& out) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = map.find(key);
    if (it == map.end()) return false;
    out = it->second;
    return true;
  }
  void store(const std::string& key, const std::pair<BigInt, BigInt>& val) {
    std::lock_guard<std::mutex> lock(mu);
    map.emplace(key, val);
  }
};

// (c(A5,T), c(CD22,T)) for binary T.
std::pair<BigInt, BigInt> a5_pair(const TreePtr& t) {
  static PairMemo memo;
  if (t->is_leaf()) return {0, 0};
  if (t->children().size() != 2) {
    throw std::invalid_argument("A5/CD22 recursion requires a binary tree");
  }
  std::pair<BigInt, BigInt> cached;
  if (memo.lookup(t->key(), cached)) return cached;
  auto [a1, c1] = a5_pair(t->children()[0]);
  auto [a2, c2] = a5_pair(t->children()[1]);
  long n1 = t->children()[0]->leaf_count();
  long n2 = t->children()[1]->leaf_count();
  BigInt a5 = a1 + a2 + n1 * c2 + n2 * c1;
  BigInt cd = c1 + c2 + binomial(n1, 2) * binomial(n2, 2);
  std::pair<BigInt, BigInt> result{a5, cd};
  memo.store(t->key(), result);
  return result;
}

// (c(Q4,T), c(S3,T)) for T with max outdegree 3.
std::pair<BigInt, BigInt> q4_pair(const TreePtr& t) {
  static PairMemo memo;
  if (t->is_leaf()) return {0, 0};
  size_t deg = t->children().size();
  if (deg > 3) throw std::invalid_argument("Q4/S3 recursion requires outdegree <= 3");
  std::pair<BigInt, BigInt> cached;
  if (memo.lookup(t->key(), cached)) return cached;
  BigInt q = 0, s = 0;
  std::vector<BigInt> si(deg);
  std::vector<long> ni(deg);
  for (size_t i = 0; i < deg; ++i) {
    auto [qi, s3i] = q4_pair(t->children()[i]);
    q += qi;
    s += s3i;
    si[i] = s3i;
    ni[i] = t->children()[i]->leaf_count();
  }
  for (size_t i = 0; i < deg; ++i)
    for (size_t j = 0; j < deg; ++j)
      if (i != j) q += ni[i] * si[j];
  if (deg == 3) s += BigInt(ni[0]) * ni[1] * ni[2];
  std::pair<BigInt, BigInt> result{q, s};
  memo.store(t->key(), result);
  return result;
}

void combinations_rec(long n, long k, long start, std::vector<long>& cur,
                      const std::function<void(const std::vector<long>&)>& fn) {
  if (static_cast<long>(cur.size()) == k) {
    fn(cur);
    return;
  }
  for (long i = start; i <= n - (k - static_cast<long>(cur.size())); ++i) {
    cur.push_back(i);
    combinations_rec(n, k, i + 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

PatternSpec PatternSpec::a5() {
  return {Id::A5, 0, parse_tree(kA5Text), parse_tree(kCD22Text)};
}
PatternSpec PatternSpec::cd22() { return {Id::CD22, 0, parse_tree(kCD22Text), nullptr}; }
PatternSpec PatternSpec::q4() { return {Id::Q4, 0, q_tree(4), star(3)}; }
PatternSpec PatternSpec::s3() { return {Id::S3, 0, star(3), nullptr}; }
PatternSpec PatternSpec::star_k(int k) {
  if (k < 2) throw std::invalid_argument("Sk requires k >= 2");
  return {Id::Star, k, star(k), nullptr};
}
PatternSpec PatternSpec::q_k(int k) {
  if (k < 3) throw std::invalid_argument("Qk requires k >= 3");
  return {Id::Qk, k, q_tree(k), star(k - 1)};
}

PatternSpec PatternSpec::general(const TreePtr& b) {
  if (b->is_leaf() || b->children().size() != 2 || !is_binary(b)) {
    throw std::invalid_argument("general pattern must be binary with two branches");
  }
  // The decomposed branch B2 is the larger one; on equal sizes, whichever
  // ordering satisfies the eligibility constraints.
  for (int swap = 0; swap < 2; ++swap) {
    TreePtr b1 = b->children()[swap ? 1 : 0];
    TreePtr b2 = b->children()[swap ? 0 : 1];
    if (b1->leaf_count() > b2->leaf_count()) continue;
    if (b1->leaf_count() > 3) continue;
    if (b2->is_leaf() || b2->children().size() != 2) continue;
    if (b2->children()[0]->leaf_count() > 3 || b2->children()[1]->leaf_count() > 3)
      continue;
    PatternSpec spec{Id::GeneralEligible, 0, b, b2};
    return spec;
  }
  throw std::invalid_argument("pattern is not eligible: need branches B1 and "
                              "B2 = (B21, B22) with 1 <= |B1|,|B21|,|B22| <= 3");
}

PatternSpec PatternSpec::parse(const std::string& name) {
  if (name == "A5") return a5();
  if (name == "CD22") return cd22();
  if (name == "Q4") return q4();
  if (name == "S3") return s3();
  if (name.rfind("Sk:", 0) == 0) return star_k(std::stoi(name.substr(3)));
  if (name.rfind("Qk:", 0) == 0) return q_k(std::stoi(name.substr(3)));
  TreePtr t = parse_tree(name);
  if (t->key() == a5_key()) return a5();
  if (t->key() == cd22_key()) return cd22();
  if (t->key() == q_tree(4)->key()) return q4();
  if (t->key() == star(3)->key()) return s3();
  if (is_binary(t) && !t->is_leaf()) return general(t);
  throw std::invalid_argument("no counting route for pattern " + name);
}

std::string PatternSpec::name() const {
  switch (id) {
    case Id::A5: return "A5";
    case Id::CD22: return "CD22";
    case Id::Q4: return "Q4";
    case Id::S3: return "S3";
    case Id::Star: return "Sk:" + std::to_string(k);
    case Id::Qk: return "Qk:" + std::to_string(k);
    case Id::GeneralEligible: return pattern->key();
  }
  return "?";
}

BigInt count_by_subsets(const TreePtr& pattern, const TreePtr& tree) {
  long n = tree->leaf_count();
  long k = pattern->leaf_count();
  if (k > n) return 0;
  if (n > 16) throw std::invalid_argument("tree too large for subset enumeration");
  BigInt count = 0;
  std::vector<long> cur;
  combinations_rec(n, k, 0, cur, [&](const std::vector<long>& sel) {
    if (induced_subtree(tree, sel)->key() == pattern->key()) ++count;
  });
  return count;
}

BigInt count_a5(const TreePtr& tree) { return a5_pair(tree).first; }
BigInt count_cd22(const TreePtr& tree) { return a5_pair(tree).second; }
BigInt count_q4(const TreePtr& tree) { return q4_pair(tree).first; }
BigInt count_s3(const TreePtr& tree) { return q4_pair(tree).second; }

std::pair<BigInt, BigInt> count_general(const PatternSpec& spec, const TreePtr& tree) {
  if (spec.id != PatternSpec::Id::GeneralEligible &&
      spec.id != PatternSpec::Id::A5) {
    throw std::invalid_argument("count_general requires an eligible binary pattern");
  }
  const TreePtr& b = spec.pattern;
  const TreePtr& b2 = spec.companion;
  const TreePtr b1 = (b->children()[1]->key() == b2->key()) ? b->children()[0]
                                                            : b->children()[1];
  long s1 = b1->leaf_count();
  long s2 = b2->leaf_count();
  long s21 = b2->children()[0]->leaf_count();
  long s22 = b2->children()[1]->leaf_count();
  bool b1_eq_b2 = b1->key() == b2->key();
  bool b21_eq_b22 = b2->children()[0]->key() == b2->children()[1]->key();

  struct Counter {
    long s1, s2, s21, s22;
    bool b1_eq_b2, b21_eq_b22;
    std::unordered_map<std::string, std::pair<BigInt, BigInt>> memo;

    // returns (c(B,T), c(B2,T))
    std::pair<BigInt, BigInt> run(const TreePtr& t) {
      if (t->is_leaf()) return {0, 0};
      if (t->children().size() != 2) {
        throw std::invalid_argument("general recursion requires a binary tree");
      }
      auto it = memo.find(t->key());
      if (it != memo.end()) return it->second;
      auto [p1, q1] = run(t->children()[0]);
      auto [p2, q2] = run(t->children()[1]);
      long n1 = t->children()[0]->leaf_count();
      long n2 = t->children()[1]->leaf_count();
      BigInt cb2;
      if (s2 <= 3) {
        cb2 = binomial(t->leaf_count(), s2);
      } else {
        cb2 = q1 + q2 + binomial(n1, s21) * binomial(n2, s22);
        if (!b21_eq_b22) cb2 += binomial(n1, s22) * binomial(n2, s21);
      }
      BigInt cb = p1 + p2 + binomial(n1, s1) * q2;
      if (!b1_eq_b2) cb += binomial(n2, s1) * q1;
      // the stored companion value must be c(B2, .) even when s2 <= 3
      std::pair<BigInt, BigInt> result{cb, cb2};
      memo.emplace(t->key(), result);
      return result;
    }
  };

  Counter counter{s1, s2, s21, s22, b1_eq_b2, b21_eq_b22, {}};
  return counter.run(tree);
}

BigInt count_star_complete(int d, int k, int h) {
  if (d < 2 || k < 2 || h < 0) {
    throw std::invalid_argument("count_star_complete: need d >= 2, k >= 2, h >= 0");
  }
  BigInt dk, dh;
  mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(k) * h);
  mpz_ui_pow_ui(dh.get_mpz_t(), d, h);
  BigInt dpk;
  mpz_ui_pow_ui(dpk.get_mpz_t(), d, k);
  BigInt num = binomial(d, k) * (dk - dh);
  BigInt den = dpk - d;
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw std::logic_error("star closed form is not integral");
  return q;
}

BigInt count_qk_complete(int d, int k, int h) {
  if (d < 2 || k < 3 || h < 0) {
    throw std::invalid_argument("count_qk_complete: need d >= 2, k >= 3, h >= 0");
  }
  if (d < k - 1 || h <= 1) return 0;
  auto pow = [&](long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), d, static_cast<unsigned long>(e));
    return r;
  };
  Rational front = make_rational((d - 1) * binomial(d, k - 1), pow(k - 1) - d);
  Rational inner = make_rational(pow(static_cast<long>(k - 1) * h) - pow(k - 1),
                                 pow(k - 1) - 1) -
                   make_rational(pow(h) - d, d - 1);
  Rational value = front * pow(h) * inner;
  if (value.get_den() != 1) throw std::logic_error("Qk closed form is not integral");
  return value.get_num();
}

std::pair<BigInt, BigInt> even_tree_counts(int d, long n) {
  if (d != 2 && d != 3) throw std::invalid_argument("even_tree_counts: d must be 2 or 3");
  if (n < 1) throw std::invalid_argument("even_tree_counts: n must be positive");
  static std::map<std::pair<int, long>, std::pair<BigInt, BigInt>> memo;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find({d, n});
    if (it != memo.end()) return it->second;
  }
  std::pair<BigInt, BigInt> result{0, 0};
  if (d == 2 && n > 1) {
    long n1 = n / 2, n2 = (n + 1) / 2;
    auto [a1, c1] = even_tree_counts(2, n1);
    auto [a2, c2] = even_tree_counts(2, n2);
    result.first = a1 + a2 + n1 * c2 + n2 * c1;
    result.second = c1 + c2 + binomial(n1, 2) * binomial(n2, 2);
  } else if (d == 3 && n > 2) {
    long k1 = n / 3, k2 = (n + 1) / 3, k3 = (n + 2) / 3;
    auto [q1, s1] = even_tree_counts(3, k1);
    auto [q2, s2] = even_tree_counts(3, k2);
    auto [q3, s3] = even_tree_counts(3, k3);
    result.first = q1 + q2 + q3 + k1 * (s2 + s3) + k2 * (s1 + s3) + k3 * (s1 + s2);
    result.second = s1 + s2 + s3 + BigInt(k1) * k2 * k3;
  }
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(std::make_pair(d, n), result);
  return result;
}

BigInt count_pattern(const PatternSpec& spec, const TreePtr& tree) {
  if (spec.pattern->leaf_count() > tree->leaf_count()) return 0;
  switch (spec.id) {
    case PatternSpec::Id::A5:
      if (is_binary(tree)) return count_a5(tree);
      break;
    case PatternSpec::Id::CD22:
      if (is_binary(tree)) return count_cd22(tree);
      break;
    case PatternSpec::Id::Q4:
      if (tree->max_outdegree() <= 3) return count_q4(tree);
      break;
    case PatternSpec::Id::S3:
      if (tree->max_outdegree() <= 3) return count_s3(tree);
      break;
    case PatternSpec::Id::GeneralEligible:
      if (is_binary(tree)) return count_general(spec, tree).first;
      break;
    default:
      break;
  }
  return count_by_subsets(spec.pattern, tree);
}

Rational density(const PatternSpec& spec, const TreePtr& tree) {
  long k = spec.pattern->leaf_count();
  if (k > tree->leaf_count()) return Rational(0);
  return make_rational(count_pattern(spec, tree), binomial(tree->leaf_count(), k));
}

Rational density(const TreePtr& pattern, const TreePtr& tree) {
  long k = pattern->leaf_count();
  if (k > tree->leaf_count()) return Rational(0);
  BigInt c;
  if (pattern->key() == a5_key() && is_binary(tree)) {
    c = count_a5(tree);
  } else if (pattern->key() == cd22_key() && is_binary(tree)) {
    c = count_cd22(tree);
  } else if (pattern->key() == q_tree(4)->key() && tree->max_outdegree() <= 3) {
    c = count_q4(tree);
  } else if (pattern->key() == star(3)->key() && tree->max_outdegree() <= 3) {
    c = count_s3(tree);
  } else {
    c = count_by_subsets(pattern, tree);
  }
  return make_rational(c, binomial(tree->leaf_count(), k));
}

}  // namespace inducibility
