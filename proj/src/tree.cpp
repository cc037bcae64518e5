#include "inducibility/tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace inducibility {

CanonicalTree::CanonicalTree() : leaf_count_(1), key_("*") {}

CanonicalTree::CanonicalTree(std::vector<TreePtr> children)
    : children_(std::move(children)) {
  if (children_.size() == 1) {
    throw std::invalid_argument("vertex of outdegree 1 is not allowed");
  }
  if (children_.empty()) {
    leaf_count_ = 1;
    key_ = "*";
    return;
  }
  std::sort(children_.begin(), children_.end(),
            [](const TreePtr& a, const TreePtr& b) { return a->key() < b->key(); });
  leaf_count_ = 0;
  key_ = "(";
  for (const auto& c : children_) {
    leaf_count_ += c->leaf_count();
    key_ += c->key();
  }
  key_ += ")";
}

int CanonicalTree::max_outdegree() const {
  int deg = static_cast<int>(children_.size());
  for (const auto& c : children_) deg = std::max(deg, c->max_outdegree());
  return deg;
}

TreePtr make_leaf() {
  static const TreePtr leaf = std::make_shared<CanonicalTree>();
  return leaf;
}

TreePtr make_node(std::vector<TreePtr> children) {
  if (children.empty()) return make_leaf();
  return std::make_shared<CanonicalTree>(std::move(children));
}

namespace {

TreePtr parse_rec(std::string_view text, size_t& pos) {
  if (pos >= text.size()) throw std::invalid_argument("unexpected end of tree text");
  if (text[pos] == '*') {
    ++pos;
    return make_leaf();
  }
  if (text[pos] != '(') {
    throw std::invalid_argument(std::string("unexpected character '") + text[pos] +
                                "' in tree text");
  }
  ++pos;
  std::vector<TreePtr> children;
  while (pos < text.size() && text[pos] != ')') {
    children.push_back(parse_rec(text, pos));
  }
  if (pos >= text.size()) throw std::invalid_argument("unbalanced '(' in tree text");
  ++pos;  // ')'
  if (children.size() < 2) {
    throw std::invalid_argument("internal vertex must have at least two children");
  }
  return make_node(std::move(children));
}

}  // namespace

TreePtr parse_tree(std::string_view text) {
  size_t pos = 0;
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  TreePtr t = parse_rec(text, pos);
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                               text[pos] == '\n' || text[pos] == '\r'))
    ++pos;
  if (pos != text.size()) throw std::invalid_argument("trailing characters in tree text");
  return t;
}

std::string format_tree(const CanonicalTree& tree) { return tree.key(); }

namespace {

// Returns nullptr when no selected leaf falls into this subtree; otherwise
// the induced (already canonical) subtree. `lo` is the index of the leftmost
// leaf of `tree` in the whole tree's canonical order; `sel` is sorted.
TreePtr induce_rec(const TreePtr& tree, long lo, const std::vector<long>& sel) {
  long hi = lo + tree->leaf_count();  // exclusive
  auto first = std::lower_bound(sel.begin(), sel.end(), lo);
  if (first == sel.end() || *first >= hi) return nullptr;
  if (tree->is_leaf()) return tree;
  std::vector<TreePtr> parts;
  long offset = lo;
  for (const auto& c : tree->children()) {
    if (TreePtr p = induce_rec(c, offset, sel)) parts.push_back(std::move(p));
    offset += c->leaf_count();
  }
  if (parts.size() == 1) return parts.front();  // suppress outdegree 1
  return make_node(std::move(parts));
}

}  // namespace

TreePtr induced_subtree(const TreePtr& tree, const std::vector<long>& leaves) {
  if (leaves.empty()) throw std::invalid_argument("leaf subset must be nonempty");
  std::vector<long> sel = leaves;
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  if (sel.front() < 0 || sel.back() >= tree->leaf_count()) {
    throw std::invalid_argument("leaf index out of range");
  }
  return induce_rec(tree, 0, sel);
}

TreePtr even_tree(int d, long n) {
  if (d != 2 && d != 3) throw std::invalid_argument("even_tree: d must be 2 or 3");
  if (n < 1) throw std::invalid_argument("even_tree: n must be positive");
  if (n == 1) return make_leaf();
  if (d == 2) {
    return make_node({even_tree(2, n / 2), even_tree(2, (n + 1) / 2)});
  }
  if (n == 2) return make_node({make_leaf(), make_leaf()});
  long k1 = n / 3, k2 = (n + 1) / 3, k3 = (n + 2) / 3;
  return make_node({even_tree(3, k1), even_tree(3, k2), even_tree(3, k3)});
}

TreePtr complete_tree(int d, int h) {
  if (d < 2 || h < 0) throw std::invalid_argument("complete_tree: need d >= 2, h >= 0");
  if (h == 0) return make_leaf();
  TreePtr sub = complete_tree(d, h - 1);
  return make_node(std::vector<TreePtr>(d, sub));
}

TreePtr star(int k) {
  if (k < 1) throw std::invalid_argument("star: k must be positive");
  if (k == 1) return make_leaf();
  return make_node(std::vector<TreePtr>(k, make_leaf()));
}

TreePtr caterpillar(long n) {
  if (n < 1) throw std::invalid_argument("caterpillar: n must be positive");
  TreePtr t = make_leaf();
  for (long i = 2; i <= n; ++i) t = make_node({t, make_leaf()});
  return t;
}

TreePtr q_tree(int k) {
  if (k < 3) throw std::invalid_argument("q_tree: k must be at least 3");
  return make_node({star(k - 1), make_leaf()});
}

TreePtr s_construction(long n1, long n2, long n3, long n4) {
  if (n1 < 1 || n2 < 1 || n3 < 1 || n4 < 1) {
    throw std::invalid_argument("s_construction: all sizes must be positive");
  }
  TreePtr bottom = make_node({even_tree(2, n3), even_tree(2, n4)});
  TreePtr mid = make_node({even_tree(2, n2), bottom});
  return make_node({even_tree(2, n1), mid});
}

TreePtr w_tree(int h) {
  if (h < 0) throw std::invalid_argument("w_tree: h must be nonnegative");
  return make_node({complete_tree(3, h), complete_tree(3, h + 1)});
}

namespace {

using EnumKey = std::pair<long, int>;

void partitions_rec(long n, long max_part, int parts_left_min, int parts_left_max,
                    std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (n == 0) {
    if (parts_left_min <= 0) out.push_back(cur);
    return;
  }
  if (parts_left_max == 0) return;
  for (long p = std::min(n, max_part); p >= 1; --p) {
    if (p * parts_left_max < n) break;
    cur.push_back(p);
    partitions_rec(n - p, p, parts_left_min - 1, parts_left_max - 1, cur, out);
    cur.pop_back();
  }
}

// Multisets of size `count` drawn from `pool`, as index vectors i1 <= i2 <= ...
void multisets_rec(size_t count, size_t from, size_t pool_size,
                   std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == count) {
    out.push_back(cur);
    return;
  }
  for (size_t i = from; i < pool_size; ++i) {
    cur.push_back(i);
    multisets_rec(count, i, pool_size, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<TreePtr> enumerate_trees(long n, Arity arity) {
  static std::map<EnumKey, std::vector<TreePtr>> memo;
  long cap = (arity == Arity::Binary) ? 14 : 10;
  if (n < 1) throw std::invalid_argument("enumerate_trees: n must be positive");
  if (n > cap) throw std::invalid_argument("enumerate_trees: n exceeds enumeration cap");
  EnumKey mk{n, static_cast<int>(arity)};
  auto it = memo.find(mk);
  if (it != memo.end()) return it->second;

  std::vector<TreePtr> result;
  if (n == 1) {
    result.push_back(make_leaf());
  } else {
    int max_parts = (arity == Arity::Unbounded) ? static_cast<int>(n)
                                                : static_cast<int>(arity);
    std::vector<std::vector<long>> parts;
    std::vector<long> cur;
    partitions_rec(n, n - 1, 2, max_parts, cur, parts);
    for (const auto& partition : parts) {
      // Group equal part sizes; pick a multiset of branch shapes per group.
      std::vector<std::vector<std::vector<TreePtr>>> group_choices;
      size_t i = 0;
      while (i < partition.size()) {
        size_t j = i;
        while (j < partition.size() && partition[j] == partition[i]) ++j;
        auto pool = enumerate_trees(partition[i], arity);
        std::vector<std::vector<size_t>> sets;
        std::vector<size_t> tmp;
        multisets_rec(j - i, 0, pool.size(), tmp, sets);
        std::vector<std::vector<TreePtr>> choices;
        for (const auto& s : sets) {
          std::vector<TreePtr> pick;
          for (size_t idx : s) pick.push_back(pool[idx]);
          choices.push_back(std::move(pick));
        }
        group_choices.push_back(std::move(choices));
        i = j;
      }
      // Cross product over groups.
      std::vector<size_t> sel(group_choices.size(), 0);
      while (true) {
        std::vector<TreePtr> children;
        for (size_t g = 0; g < group_choices.size(); ++g) {
          const auto& pick = group_choices[g][sel[g]];
          children.insert(children.end(), pick.begin(), pick.end());
        }
        result.push_back(make_node(std::move(children)));
        size_t g = 0;
        while (g < sel.size() && ++sel[g] == group_choices[g].size()) {
          sel[g] = 0;
          ++g;
        }
        if (g == sel.size()) break;
      }
    }
    std::sort(result.begin(), result.end(),
              [](const TreePtr& a, const TreePtr& b) { return a->key() < b->key(); });
  }
  memo[mk] = result;
  return result;
}

}  // namespace inducibility
