#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inducibility/numeric.hpp"
#include "inducibility/pattern_count.hpp"
#include "inducibility/tree.hpp"

namespace inducibility {

// The pair P(T) = (pattern count, companion count) of an n-leaf tree.
struct CountPoint {
  long n = 1;
  BigInt primary;
  BigInt companion;

  bool operator==(const CountPoint& o) const {
    return n == o.n && primary == o.primary && companion == o.companion;
  }
};

// Where a point came from: branch sizes and the indices of the branch points
// inside the envelopes of those sizes. k3 = 0 means a two-branch combination.
struct Backref {
  long k1 = 0, k2 = 0, k3 = 0;
  int i1 = 0, i2 = 0, i3 = 0;
};

// The set L(n): points sorted by strictly increasing companion count,
// strictly decreasing primary count, strictly decreasing consecutive slopes.
struct EnvelopeList {
  long n = 0;
  std::vector<CountPoint> points;
  std::vector<Backref> backrefs;  // parallel to points; empty unless witness mode
};

// Counting mode of the dynamic program.
class Mode {
 public:
  static Mode a5_binary();
  static Mode q4_ternary();
  static Mode general(const PatternSpec& spec);
  // "a5", "q4", or a tree in parentheses format (general mode).
  static Mode parse(const std::string& text);

  bool ternary() const { return ternary_; }
  int pattern_size() const { return pattern_size_; }
  const std::string& tag() const { return tag_; }
  const PatternSpec& spec() const { return spec_; }

  CountPoint combine2(const CountPoint& a, const CountPoint& b) const;
  // Three branches; Q4 mode only.
  CountPoint combine3(const CountPoint& a, const CountPoint& b,
                      const CountPoint& c) const;

 private:
  Mode() : spec_(PatternSpec::a5()) {}

  enum class Kind { A5, Q4, General } kind_ = Kind::A5;
  bool ternary_ = false;
  int pattern_size_ = 5;
  std::string tag_;
  PatternSpec spec_;
  // general-mode combine data
  long s1_ = 0, s2_ = 0, s21_ = 0, s22_ = 0;
  bool b1_eq_b2_ = false, b21_eq_b22_ = false;
};

// Index of the first allowed branch point of an envelope of size m when
// building trees with target_n leaves: the suffix where the outgoing slope
// is strictly below m - target_n; the last point is always allowed.
size_t branch_filter_start(const EnvelopeList& envelope, long target_n);

// Removes dominated points and collapses exact duplicates (keeping the first
// in sorted order). `order` receives the surviving original indices.
std::vector<CountPoint> pareto_prune(std::vector<CountPoint> points,
                                     std::vector<size_t>* order = nullptr);

// Upper envelope of a Pareto-pruned, companion-sorted point list; collinear
// middle points are removed. `keep` receives surviving positions within the
// input.
std::vector<CountPoint> upper_envelope(const std::vector<CountPoint>& points,
                                       std::vector<size_t>* keep = nullptr);

struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Envelope cache file, one per (mode, n). Format: a header line
// "mode=<tag> n=<n> version=1 count=<r>", r lines "<companion> <primary>",
// then "checksum=<hex>". Writes are atomic (temp file + rename); a checksum
// mismatch on load raises CacheError.
void save_envelope(const std::filesystem::path& file, const std::string& tag,
                   const EnvelopeList& envelope);
EnvelopeList load_envelope(const std::filesystem::path& file, const std::string& tag,
                           long n);

// Serialized form (identical to the cache file contents).
std::string serialize_envelope(const std::string& tag, const EnvelopeList& envelope);

// The dynamic program: builds L(1..n) bottom-up with the slope filter,
// dominance pruning and the upper envelope, caching per level when a cache
// directory is set.
class EnvelopeEngine {
 public:
  explicit EnvelopeEngine(Mode mode, std::filesystem::path cache_dir = {},
                          bool witness = false, int threads = 1);

  const Mode& mode() const { return mode_; }

  // L(n); computes (or loads) all levels up to n on first use.
  const EnvelopeList& envelope(long n);

  // max over |T| = n of the pattern count: the primary count of the first
  // envelope point.
  BigInt max_count(long n);
  Rational max_density(long n);

  // max_density as a certified upper bound; asserts nonincreasing behavior
  // against every previously computed level (throws std::logic_error on a
  // violation).
  Rational upper_bound(long n);

  // One optimal tree for level n, rebuilt from backrefs (witness mode only).
  TreePtr witness_tree(long n);

  // Disables pruning steps for cross-checking; dominance pruning always runs.
  void set_pruning(bool slope_filter, bool envelope_step);

  long max_level() const { return static_cast<long>(levels_.size()) - 1; }

 private:
  void compute_level(long n);
  TreePtr rebuild(long n, int index);

  Mode mode_;
  std::filesystem::path cache_dir_;
  bool witness_ = false;
  int threads_ = 1;
  bool slope_filter_ = true;
  bool envelope_step_ = true;
  std::vector<EnvelopeList> levels_;  // levels_[n]; index 0 unused
  std::map<long, Rational> density_seen_;
};

// Exhaustive oracle: max pattern count over all n-leaf trees of the mode's
// arity. Throws beyond the enumeration cap (binary 12, ternary 9).
BigInt brute_max(long n, const Mode& mode);

}  // namespace inducibility
