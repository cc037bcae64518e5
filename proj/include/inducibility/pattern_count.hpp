#pragma once

#include <optional>
#include <string>
#include <utility>

#include "inducibility/numeric.hpp"
#include "inducibility/tree.hpp"

namespace inducibility {

// Identifies a countable pattern together with the companion pattern used by
// the two-coordinate counting recursions.
struct PatternSpec {
  enum class Id { A5, CD22, Q4, S3, Star, Qk, GeneralEligible };

  Id id;
  int k = 0;            // for Star / Qk
  TreePtr pattern;      // the pattern tree itself
  TreePtr companion;    // cross-term pattern (A5 -> CD22, Q4 -> S3, B -> B2)

  static PatternSpec a5();
  static PatternSpec cd22();
  static PatternSpec q4();
  static PatternSpec s3();
  static PatternSpec star_k(int k);
  static PatternSpec q_k(int k);
  // General eligible binary pattern B: branches B1 and B2 = (B21, B22) with
  // 1 <= |B1|, |B21|, |B22| <= 3. The larger branch plays the role of B2.
  // Throws std::invalid_argument when B is not eligible.
  static PatternSpec general(const TreePtr& b);

  // Accepts "A5", "CD22", "Q4", "S3", "Sk:<k>", "Qk:<k>", or a tree in the
  // parentheses format (routed through general() when binary and eligible).
  static PatternSpec parse(const std::string& name);

  std::string name() const;
};

// Brute-force oracle: number of |pattern|-subsets of tree's leaves whose
// induced subtree is isomorphic to pattern. Zero when |pattern| > |tree|.
// Throws std::invalid_argument when |tree| exceeds the subset cap (16).
BigInt count_by_subsets(const TreePtr& pattern, const TreePtr& tree);

// Counting recursions, memoized on canonical keys. Binary input required for
// the A5/CD22 pair, max outdegree 3 for the Q4/S3 pair.
BigInt count_a5(const TreePtr& tree);
BigInt count_cd22(const TreePtr& tree);
BigInt count_q4(const TreePtr& tree);
BigInt count_s3(const TreePtr& tree);

// (c(B, tree), c(B2, tree)) for a general eligible pattern; tree must be
// binary.
std::pair<BigInt, BigInt> count_general(const PatternSpec& spec, const TreePtr& tree);

// c(S_k, CD^d_h) = C(d,k) (d^{kh} - d^h) / (d^k - d).
BigInt count_star_complete(int d, int k, int h);

// c(Q_k, CD^d_h), the closed form; zero for d < k-1 and for h = 1.
BigInt count_qk_complete(int d, int k, int h);

// (pattern count, companion count) of the even d-ary tree E^d_n, computed by
// the size recursion alone. d = 2 counts (A5, CD22), d = 3 counts (Q4, S3).
std::pair<BigInt, BigInt> even_tree_counts(int d, long n);

// c(pattern, tree) via the best available route: specialized recursion when
// the pattern is one of the recursion pairs, general recursion for eligible
// binary patterns, subset enumeration otherwise.
BigInt count_pattern(const PatternSpec& spec, const TreePtr& tree);

// c(pattern, tree) / C(|tree|, |pattern|); zero when |pattern| > |tree|.
Rational density(const PatternSpec& spec, const TreePtr& tree);
Rational density(const TreePtr& pattern, const TreePtr& tree);

}  // namespace inducibility
