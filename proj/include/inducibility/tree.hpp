#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace inducibility {

// A rooted tree with no vertex of outdegree 1, stored in canonical form:
// children are sorted by canonical key, so two trees are isomorphic exactly
// when their keys compare equal.
class CanonicalTree;
using TreePtr = std::shared_ptr<const CanonicalTree>;

class CanonicalTree {
 public:
  // Leaf constructor.
  CanonicalTree();
  // Internal vertex; children must already be canonical and there must be
  // at least two of them. Throws std::invalid_argument otherwise.
  explicit CanonicalTree(std::vector<TreePtr> children);

  bool is_leaf() const { return children_.empty(); }
  const std::vector<TreePtr>& children() const { return children_; }
  long leaf_count() const { return leaf_count_; }
  const std::string& key() const { return key_; }

  // Largest outdegree anywhere in the tree.
  int max_outdegree() const;

  bool operator==(const CanonicalTree& other) const { return key_ == other.key_; }

 private:
  std::vector<TreePtr> children_;
  long leaf_count_ = 1;
  std::string key_;
};

TreePtr make_leaf();
TreePtr make_node(std::vector<TreePtr> children);

// Parses the nested-parentheses text format: leaf = "*", internal vertex =
// "(" children ")". Child order in the input is arbitrary; the result is
// canonical. Throws std::invalid_argument on malformed input or on a vertex
// of outdegree 1.
TreePtr parse_tree(std::string_view text);

// Canonical text form (children in canonical order).
std::string format_tree(const CanonicalTree& tree);

// Subtree induced by a set of leaves, addressed by left-to-right index in
// the canonical form. The minimal spanning subtree is taken and outdegree-1
// vertices are suppressed. Throws std::invalid_argument on an empty subset
// or an out-of-range index.
TreePtr induced_subtree(const TreePtr& tree, const std::vector<long>& leaves);

// --- named constructions -------------------------------------------------

// Even d-ary tree E^d_n, d in {2,3}: branch sizes as equal as possible.
TreePtr even_tree(int d, long n);
// Complete d-ary tree of height h (d^h leaves).
TreePtr complete_tree(int d, int h);
// Star with k leaves.
TreePtr star(int k);
// Binary caterpillar with n leaves.
TreePtr caterpillar(long n);
// The tree Q_k: branches are S_{k-1} and a single leaf.
TreePtr q_tree(int k);
// Binary tree with even binary trees of sizes n1..n4 hanging off a path of
// three binary internal vertices below the root (n1 attached at the root).
TreePtr s_construction(long n1, long n2, long n3, long n4);
// Ternary tree joining complete ternary trees of heights h and h+1;
// height 0 gives Q_4.
TreePtr w_tree(int h);

// --- enumeration ---------------------------------------------------------

enum class Arity { Binary = 2, Ternary = 3, Unbounded = 0 };

// All isomorphism classes of n-leaf topological trees with the given arity
// bound, in canonical order. Throws std::invalid_argument beyond the
// enumeration cap (binary: 14, otherwise 10).
std::vector<TreePtr> enumerate_trees(long n, Arity arity);

}  // namespace inducibility
