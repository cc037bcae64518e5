#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "inducibility/tree.hpp"

using namespace inducibility;

namespace {

// Rebuilds the tree with children inserted in a random order; the canonical
// form must be unaffected.
TreePtr shuffled_copy(const TreePtr& t, std::mt19937& rng) {
  if (t->is_leaf()) return make_leaf();
  std::vector<TreePtr> kids;
  for (const auto& c : t->children()) kids.push_back(shuffled_copy(c, rng));
  std::shuffle(kids.begin(), kids.end(), rng);
  return make_node(std::move(kids));
}

long total_leaves(const TreePtr& t) {
  if (t->is_leaf()) return 1;
  long s = 0;
  for (const auto& c : t->children()) s += total_leaves(c);
  return s;
}

bool no_outdegree_one(const TreePtr& t) {
  if (t->children().size() == 1) return false;
  for (const auto& c : t->children()) {
    if (!no_outdegree_one(c)) return false;
  }
  return true;
}

std::vector<long> all_leaf_indices(const TreePtr& t) {
  std::vector<long> idx(t->leaf_count());
  for (long i = 0; i < t->leaf_count(); ++i) idx[i] = i;
  return idx;
}

}  // namespace

TEST_CASE("leaf and cherry basics") {
  TreePtr leaf = make_leaf();
  CHECK(leaf->is_leaf());
  CHECK(leaf->leaf_count() == 1);
  CHECK(format_tree(*leaf) == "*");

  TreePtr cherry = make_node({make_leaf(), make_leaf()});
  CHECK(cherry->leaf_count() == 2);
  CHECK(format_tree(*cherry) == "(**)");
}

TEST_CASE("outdegree-1 vertices are rejected, not repaired") {
  CHECK_THROWS_AS(make_node({make_leaf()}), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("(*)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("((**))"), std::invalid_argument);
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_tree(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("("), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("(**"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("(**)*"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tree("(a b)"), std::invalid_argument);
}

TEST_CASE("mirror orderings canonicalize to the same key") {
  TreePtr a = parse_tree("(*((**)(**)))");
  TreePtr b = parse_tree("(((**)(**))*)");
  CHECK(a->key() == b->key());
  CHECK(*a == *b);
  CHECK(a->leaf_count() == 5);
}

TEST_CASE("parse/format round trip is the identity on canonical text") {
  for (long n = 1; n <= 7; ++n) {
    for (const auto& t : enumerate_trees(n, Arity::Unbounded)) {
      TreePtr back = parse_tree(format_tree(*t));
      CHECK(back->key() == t->key());
      CHECK(format_tree(*back) == format_tree(*t));
    }
  }
}

TEST_CASE("isomorphism soundness: keys distinct per class, shuffle-invariant") {
  std::mt19937 rng(12345);
  for (long n = 2; n <= 8; ++n) {
    auto trees = enumerate_trees(n, Arity::Unbounded);
    std::set<std::string> keys;
    for (const auto& t : trees) keys.insert(t->key());
    CHECK(keys.size() == trees.size());
    for (const auto& t : trees) {
      for (int rep = 0; rep < 25; ++rep) {
        CHECK(shuffled_copy(t, rng)->key() == t->key());
      }
    }
  }
}

TEST_CASE("leaf counts are additive") {
  for (long n = 1; n <= 8; ++n) {
    for (const auto& t : enumerate_trees(n, Arity::Unbounded)) {
      CHECK(t->leaf_count() == n);
      CHECK(total_leaves(t) == n);
    }
  }
}

TEST_CASE("enumeration counts match reference sequences") {
  // binary: Wedderburn-Etherington numbers
  const long binary[] = {1, 1, 1, 2, 3, 6, 11, 23, 46, 98, 207, 451};
  for (long n = 1; n <= 12; ++n) {
    CHECK(enumerate_trees(n, Arity::Binary).size() == (size_t)binary[n - 1]);
  }
  const long ternary[] = {1, 1, 2, 4, 9, 23, 58, 156, 426};
  for (long n = 1; n <= 9; ++n) {
    CHECK(enumerate_trees(n, Arity::Ternary).size() == (size_t)ternary[n - 1]);
  }
  CHECK(enumerate_trees(4, Arity::Unbounded).size() == 5);
  CHECK(enumerate_trees(5, Arity::Unbounded).size() == 12);
  CHECK(enumerate_trees(5, Arity::Binary).size() == 3);
}

TEST_CASE("enumeration caps throw") {
  CHECK_THROWS_AS(enumerate_trees(15, Arity::Binary), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_trees(11, Arity::Ternary), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_trees(11, Arity::Unbounded), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_trees(0, Arity::Binary), std::invalid_argument);
}

TEST_CASE("induced subtrees") {
  TreePtr cd22 = parse_tree("((**)(**))");
  SUBCASE("full subset returns the tree itself") {
    CHECK(induced_subtree(cd22, {0, 1, 2, 3})->key() == cd22->key());
  }
  SUBCASE("any 3 of CD22's 4 leaves give the unique 3-leaf binary tree") {
    TreePtr three = parse_tree("(*(**))");
    for (long skip = 0; skip < 4; ++skip) {
      std::vector<long> sel;
      for (long i = 0; i < 4; ++i) {
        if (i != skip) sel.push_back(i);
      }
      CHECK(induced_subtree(cd22, sel)->key() == three->key());
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(induced_subtree(cd22, {}), std::invalid_argument);
    CHECK_THROWS_AS(induced_subtree(cd22, {4}), std::invalid_argument);
    CHECK_THROWS_AS(induced_subtree(cd22, {-1}), std::invalid_argument);
  }
  SUBCASE("size and topological condition on all subsets of small trees") {
    for (long n = 2; n <= 7; ++n) {
      for (const auto& t : enumerate_trees(n, Arity::Unbounded)) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          std::vector<long> sel;
          for (long i = 0; i < n; ++i) {
            if (mask & (1u << i)) sel.push_back(i);
          }
          TreePtr s = induced_subtree(t, sel);
          CHECK(s->leaf_count() == (long)sel.size());
          CHECK(no_outdegree_one(s));
        }
      }
    }
  }
}

TEST_CASE("named constructions") {
  SUBCASE("even binary trees") {
    CHECK(even_tree(2, 1)->is_leaf());
    CHECK(format_tree(*even_tree(2, 2)) == "(**)");
    CHECK(even_tree(2, 4)->key() == parse_tree("((**)(**))")->key());
    CHECK(even_tree(2, 4)->key() == complete_tree(2, 2)->key());
    // E^2_7 splits into branches of sizes 3 and 4
    TreePtr e7 = even_tree(2, 7);
    CHECK(e7->children().size() == 2);
    long a = e7->children()[0]->leaf_count();
    long b = e7->children()[1]->leaf_count();
    CHECK(std::min(a, b) == 3);
    CHECK(std::max(a, b) == 4);
    CHECK(even_tree(2, 1024)->key() == complete_tree(2, 10)->key());
  }
  SUBCASE("even ternary trees") {
    CHECK(even_tree(3, 1)->is_leaf());
    CHECK(format_tree(*even_tree(3, 2)) == "(**)");
    CHECK(even_tree(3, 3)->key() == star(3)->key());
    TreePtr e10 = even_tree(3, 10);
    CHECK(e10->children().size() == 3);
    std::vector<long> sizes;
    for (const auto& c : e10->children()) sizes.push_back(c->leaf_count());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<long>{3, 3, 4});
    CHECK(even_tree(3, 9)->key() == complete_tree(3, 2)->key());
  }
  SUBCASE("complete trees and stars") {
    CHECK(complete_tree(2, 0)->is_leaf());
    CHECK(complete_tree(3, 2)->leaf_count() == 9);
    CHECK(complete_tree(3, 3)->leaf_count() == 27);
    CHECK(star(4)->children().size() == 4);
    CHECK(star(4)->max_outdegree() == 4);
  }
  SUBCASE("caterpillar") {
    CHECK(caterpillar(2)->key() == parse_tree("(**)")->key());
    CHECK(caterpillar(5)->key() == parse_tree("(*(*(*(**))))")->key());
    CHECK(caterpillar(9)->leaf_count() == 9);
  }
  SUBCASE("Q_k and W-trees") {
    CHECK(q_tree(4)->key() == parse_tree("(*(***))")->key());
    CHECK(q_tree(4)->leaf_count() == 4);
    CHECK(w_tree(0)->key() == q_tree(4)->key());
    CHECK(w_tree(2)->leaf_count() == 9 + 27);
    CHECK(w_tree(1)->children().size() == 2);
  }
  SUBCASE("S-construction") {
    TreePtr s = s_construction(2, 3, 4, 5);
    CHECK(s->leaf_count() == 14);
    CHECK(s->max_outdegree() == 2);
    // root branches: E^2_2 and the rest
    CHECK(s->children().size() == 2);
    CHECK(s_construction(1, 1, 1, 1)->leaf_count() == 4);
    CHECK(s_construction(1, 1, 1, 1)->key() == parse_tree("(*(*(**)))")->key());
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(even_tree(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(even_tree(2, 0), std::invalid_argument);
    CHECK(star(1)->is_leaf());
    CHECK_THROWS_AS(star(0), std::invalid_argument);
    CHECK_THROWS_AS(s_construction(0, 1, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("canonical order of enumeration is deterministic") {
  auto a = enumerate_trees(6, Arity::Binary);
  auto b = enumerate_trees(6, Arity::Binary);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i]->key() == b[i]->key());
  CHECK(std::is_sorted(a.begin(), a.end(), [](const TreePtr& x, const TreePtr& y) {
    return x->key() < y->key();
  }));
}
