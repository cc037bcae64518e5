#include "inducibility/envelope.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace inducibility {

namespace {

std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string sanitize_tag(const std::string& tag) {
  std::string out;
  for (char c : tag) {
    switch (c) {
      case '(': out += 'L'; break;
      case ')': out += 'R'; break;
      case '*': out += 'x'; break;
      case ':': out += '-'; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Mode Mode::a5_binary() {
  Mode m;
  m.kind_ = Kind::A5;
  m.ternary_ = false;
  m.pattern_size_ = 5;
  m.tag_ = "A5";
  m.spec_ = PatternSpec::a5();
  return m;
}

Mode Mode::q4_ternary() {
  Mode m;
  m.kind_ = Kind::Q4;
  m.ternary_ = true;
  m.pattern_size_ = 4;
  m.tag_ = "Q4";
  m.spec_ = PatternSpec::q4();
  return m;
}

Mode Mode::general(const PatternSpec& spec) {
  if (spec.id != PatternSpec::Id::GeneralEligible) {
    throw std::invalid_argument("Mode::general requires an eligible pattern");
  }
  Mode m;
  m.kind_ = Kind::General;
  m.ternary_ = false;
  m.pattern_size_ = static_cast<int>(spec.pattern->leaf_count());
  m.tag_ = "GEN:" + spec.pattern->key();
  m.spec_ = spec;
  const TreePtr& b2 = spec.companion;
  const TreePtr b1 = (spec.pattern->children()[1]->key() == b2->key())
                         ? spec.pattern->children()[0]
                         : spec.pattern->children()[1];
  m.s1_ = b1->leaf_count();
  m.s2_ = b2->leaf_count();
  m.s21_ = b2->children()[0]->leaf_count();
  m.s22_ = b2->children()[1]->leaf_count();
  m.b1_eq_b2_ = b1->key() == b2->key();
  m.b21_eq_b22_ = b2->children()[0]->key() == b2->children()[1]->key();
  return m;
}

Mode Mode::parse(const std::string& text) {
  if (text == "a5" || text == "A5") return a5_binary();
  if (text == "q4" || text == "Q4") return q4_ternary();
  return general(PatternSpec::general(parse_tree(text)));
}

CountPoint Mode::combine2(const CountPoint& a, const CountPoint& b) const {
  CountPoint r;
  r.n = a.n + b.n;
  switch (kind_) {
    case Kind::A5:
      r.primary = a.primary + b.primary + a.n * b.companion + b.n * a.companion;
      r.companion = a.companion + b.companion + binomial(a.n, 2) * binomial(b.n, 2);
      break;
    case Kind::Q4:
      r.primary = a.primary + b.primary + a.n * b.companion + b.n * a.companion;
      r.companion = a.companion + b.companion;
      break;
    case Kind::General:
      r.primary = a.primary + b.primary + binomial(a.n, s1_) * b.companion;
      if (!b1_eq_b2_) r.primary += binomial(b.n, s1_) * a.companion;
      if (s2_ <= 3) {
        r.companion = binomial(r.n, s2_);
      } else {
        r.companion = a.companion + b.companion +
                      binomial(a.n, s21_) * binomial(b.n, s22_);
        if (!b21_eq_b22_)
          r.companion += binomial(a.n, s22_) * binomial(b.n, s21_);
      }
      break;
  }
  return r;
}

CountPoint Mode::combine3(const CountPoint& a, const CountPoint& b,
                          const CountPoint& c) const {
  if (kind_ != Kind::Q4) {
    throw std::invalid_argument("three-branch combination only exists in the "
                                "ternary mode");
  }
  CountPoint r;
  r.n = a.n + b.n + c.n;
  r.primary = a.primary + b.primary + c.primary + a.n * (b.companion + c.companion) +
              b.n * (a.companion + c.companion) + c.n * (a.companion + b.companion);
  r.companion = a.companion + b.companion + c.companion + BigInt(a.n) * b.n * c.n;
  return r;
}

size_t branch_filter_start(const EnvelopeList& envelope, long target_n) {
  const auto& pts = envelope.points;
  if (pts.size() <= 1) return 0;
  if (target_n <= envelope.n) {
    throw std::invalid_argument("branch filter requires target_n > branch size");
  }
  BigInt t = envelope.n - target_n;
  // slope(j) = (p[j+1]-p[j]) / (c[j+1]-c[j]) is strictly decreasing, so the
  // condition slope(j) < t defines a suffix.
  size_t lo = 0, hi = pts.size() - 1;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    BigInt dp = pts[mid + 1].primary - pts[mid].primary;
    BigInt dc = pts[mid + 1].companion - pts[mid].companion;
    if (dp < t * dc) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;  // == size-1 when no slope is below the threshold
}

std::vector<CountPoint> pareto_prune(std::vector<CountPoint> points,
                                     std::vector<size_t>* order) {
  std::vector<size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (points[a].companion != points[b].companion)
      return points[a].companion < points[b].companion;
    return points[a].primary > points[b].primary;
  });
  // Within an equal-companion group only the first (largest-primary) point
  // can survive: the others are dominated, and exact duplicates collapse to
  // the first in sorted order.
  std::vector<size_t> uniq;
  for (size_t i : idx) {
    if (!uniq.empty() && points[uniq.back()].companion == points[i].companion)
      continue;
    uniq.push_back(i);
  }
  std::vector<size_t> kept;
  BigInt best = -1;
  for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
    if (points[*it].primary > best) {
      kept.push_back(*it);
      best = points[*it].primary;
    }
  }
  std::reverse(kept.begin(), kept.end());
  std::vector<CountPoint> out;
  out.reserve(kept.size());
  for (size_t i : kept) out.push_back(points[i]);
  if (order) *order = std::move(kept);
  return out;
}

std::vector<CountPoint> upper_envelope(const std::vector<CountPoint>& points,
                                       std::vector<size_t>* keep) {
  std::vector<size_t> stack;
  for (size_t i = 0; i < points.size(); ++i) {
    while (stack.size() >= 2) {
      const CountPoint& a = points[stack[stack.size() - 2]];
      const CountPoint& b = points[stack.back()];
      const CountPoint& c = points[i];
      // remove b when slope(a,b) <= slope(b,c): convex or collinear middle
      BigInt lhs = (b.primary - a.primary) * (c.companion - b.companion);
      BigInt rhs = (c.primary - b.primary) * (b.companion - a.companion);
      if (lhs <= rhs) {
        stack.pop_back();
      } else {
        break;
      }
    }
    stack.push_back(i);
  }
  std::vector<CountPoint> out;
  out.reserve(stack.size());
  for (size_t i : stack) out.push_back(points[i]);
  if (keep) *keep = std::move(stack);
  return out;
}

std::string serialize_envelope(const std::string& tag, const EnvelopeList& envelope) {
  std::ostringstream os;
  os << "mode=" << tag << " n=" << envelope.n << " version=1 count="
     << envelope.points.size() << "\n";
  for (const auto& p : envelope.points) {
    os << p.companion.get_str() << " " << p.primary.get_str() << "\n";
  }
  std::string body = os.str();
  return body + "checksum=" + fnv1a_hex(body) + "\n";
}

void save_envelope(const std::filesystem::path& file, const std::string& tag,
                   const EnvelopeList& envelope) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CacheError("cannot write cache file " + tmp.string());
    os << serialize_envelope(tag, envelope);
  }
  std::filesystem::rename(tmp, file);
}

EnvelopeList load_envelope(const std::filesystem::path& file, const std::string& tag,
                           long n) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw CacheError("cannot read cache file " + file.string());
  std::string header;
  if (!std::getline(is, header)) throw CacheError("empty cache file " + file.string());
  std::string body = header + "\n";
  std::string expect = "mode=" + tag + " n=" + std::to_string(n) + " version=1 count=";
  if (header.rfind(expect, 0) != 0) {
    throw CacheError("cache header mismatch in " + file.string());
  }
  size_t count = std::stoul(header.substr(expect.size()));
  EnvelopeList env;
  env.n = n;
  env.points.reserve(count);
  std::string line;
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw CacheError("truncated cache file " + file.string());
    body += line + "\n";
    std::istringstream ls(line);
    std::string comp, prim;
    if (!(ls >> comp >> prim)) throw CacheError("bad point line in " + file.string());
    CountPoint p;
    p.n = n;
    p.companion = BigInt(comp);
    p.primary = BigInt(prim);
    env.points.push_back(std::move(p));
  }
  if (!std::getline(is, line) || line.rfind("checksum=", 0) != 0) {
    throw CacheError("missing checksum in " + file.string());
  }
  if (line.substr(9) != fnv1a_hex(body)) {
    throw CacheError("checksum mismatch in " + file.string());
  }
  return env;
}

EnvelopeEngine::EnvelopeEngine(Mode mode, std::filesystem::path cache_dir,
                               bool witness, int threads)
    : mode_(std::move(mode)),
      cache_dir_(std::move(cache_dir)),
      witness_(witness),
      threads_(std::max(1, threads)) {
  levels_.resize(2);
  levels_[1].n = 1;
  levels_[1].points.push_back(CountPoint{1, 0, 0});
  levels_[1].backrefs.push_back(Backref{});
}

const EnvelopeList& EnvelopeEngine::envelope(long n) {
  if (n < 1) throw std::invalid_argument("envelope level must be positive");
  for (long m = static_cast<long>(levels_.size()); m <= n; ++m) {
    bool loaded = false;
    if (!cache_dir_.empty() && !witness_) {
      std::filesystem::path file =
          cache_dir_ / (sanitize_tag(mode_.tag()) + "_n" + std::to_string(m) + ".env");
      if (std::filesystem::exists(file)) {
        levels_.push_back(load_envelope(file, mode_.tag(), m));
        loaded = true;
      }
    }
    if (!loaded) {
      compute_level(m);
      if (!cache_dir_.empty() && slope_filter_ && envelope_step_) {
        std::filesystem::create_directories(cache_dir_);
        std::filesystem::path file =
            cache_dir_ / (sanitize_tag(mode_.tag()) + "_n" + std::to_string(m) + ".env");
        if (!std::filesystem::exists(file)) save_envelope(file, mode_.tag(), levels_[m]);
      }
    }
  }
  return levels_[n];
}

void EnvelopeEngine::compute_level(long n) {
  struct Split {
    long k1, k2, k3;  // k3 = 0 for two branches
  };
  std::vector<Split> splits;
  for (long k = 1; k <= n / 2; ++k) splits.push_back({k, n - k, 0});
  if (mode_.ternary()) {
    for (long k1 = 1; 3 * k1 <= n; ++k1) {
      for (long k2 = k1; k1 + 2 * k2 <= n; ++k2) {
        long k3 = n - k1 - k2;
        splits.push_back({k1, k2, k3});
      }
    }
  }

  auto allowed_start = [&](long m) -> size_t {
    if (!slope_filter_) return 0;
    return branch_filter_start(levels_[m], n);
  };

  using Item = std::pair<CountPoint, Backref>;
  auto process = [&](const Split& s, std::vector<Item>& out) {
    const auto& l1 = levels_[s.k1].points;
    const auto& l2 = levels_[s.k2].points;
    size_t a1 = allowed_start(s.k1);
    size_t a2 = allowed_start(s.k2);
    if (s.k3 == 0) {
      for (size_t i = a1; i < l1.size(); ++i) {
        size_t jstart = (s.k1 == s.k2) ? std::max(a2, i) : a2;
        for (size_t j = jstart; j < l2.size(); ++j) {
          out.emplace_back(mode_.combine2(l1[i], l2[j]),
                           Backref{s.k1, s.k2, 0, static_cast<int>(i),
                                   static_cast<int>(j), 0});
        }
      }
    } else {
      const auto& l3 = levels_[s.k3].points;
      size_t a3 = allowed_start(s.k3);
      for (size_t i = a1; i < l1.size(); ++i) {
        size_t jstart = (s.k1 == s.k2) ? std::max(a2, i) : a2;
        for (size_t j = jstart; j < l2.size(); ++j) {
          size_t lstart = (s.k2 == s.k3) ? std::max(a3, j) : a3;
          for (size_t l = lstart; l < l3.size(); ++l) {
            out.emplace_back(mode_.combine3(l1[i], l2[j], l3[l]),
                             Backref{s.k1, s.k2, s.k3, static_cast<int>(i),
                                     static_cast<int>(j), static_cast<int>(l)});
          }
        }
      }
    }
  };

  std::vector<std::vector<Item>> chunks(splits.size());
  if (threads_ > 1 && splits.size() > 1) {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i; (i = next.fetch_add(1)) < splits.size();) {
        process(splits[i], chunks[i]);
      }
    };
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads_; ++t) {
      futures.push_back(std::async(std::launch::async, worker));
    }
    for (auto& f : futures) f.get();
  } else {
    for (size_t i = 0; i < splits.size(); ++i) process(splits[i], chunks[i]);
  }

  std::vector<CountPoint> cands;
  std::vector<Backref> backs;
  for (auto& chunk : chunks) {
    for (auto& item : chunk) {
      cands.push_back(std::move(item.first));
      backs.push_back(item.second);
    }
  }

  std::vector<size_t> order;
  std::vector<CountPoint> pruned = pareto_prune(std::move(cands), &order);
  std::vector<size_t> keep;
  std::vector<CountPoint> final_points =
      envelope_step_ ? upper_envelope(pruned, &keep) : std::move(pruned);
  if (!envelope_step_) {
    keep.resize(final_points.size());
    std::iota(keep.begin(), keep.end(), 0);
  }

  EnvelopeList env;
  env.n = n;
  env.points = std::move(final_points);
  if (witness_) {
    for (size_t pos : keep) env.backrefs.push_back(backs[order[pos]]);
  }
  if (env.points.empty()) {
    throw std::logic_error("empty envelope at level " + std::to_string(n));
  }
  levels_.push_back(std::move(env));
}

BigInt EnvelopeEngine::max_count(long n) { return envelope(n).points.front().primary; }

Rational EnvelopeEngine::max_density(long n) {
  if (n < mode_.pattern_size()) return Rational(0);
  return make_rational(max_count(n), binomial(n, mode_.pattern_size()));
}

Rational EnvelopeEngine::upper_bound(long n) {
  if (n < mode_.pattern_size()) {
    throw std::invalid_argument("upper bound needs n >= pattern size");
  }
  Rational d = max_density(n);
  for (const auto& [m, dm] : density_seen_) {
    if ((m < n && dm < d) || (m > n && dm > d)) {
      throw std::logic_error("upper bound monotonicity violated between n=" +
                             std::to_string(m) + " and n=" + std::to_string(n));
    }
  }
  density_seen_[n] = d;
  return d;
}

TreePtr EnvelopeEngine::rebuild(long n, int index) {
  if (n == 1) return make_leaf();
  const EnvelopeList& env = levels_[n];
  if (env.backrefs.empty()) throw std::logic_error("witness data not recorded");
  const Backref& b = env.backrefs[index];
  std::vector<TreePtr> children{rebuild(b.k1, b.i1), rebuild(b.k2, b.i2)};
  if (b.k3 > 0) children.push_back(rebuild(b.k3, b.i3));
  return make_node(std::move(children));
}

TreePtr EnvelopeEngine::witness_tree(long n) {
  if (!witness_) throw std::logic_error("engine not in witness mode");
  envelope(n);
  return rebuild(n, 0);
}

void EnvelopeEngine::set_pruning(bool slope_filter, bool envelope_step) {
  slope_filter_ = slope_filter;
  envelope_step_ = envelope_step;
}

BigInt brute_max(long n, const Mode& mode) {
  long cap = mode.ternary() ? 9 : 12;
  if (n > cap) throw std::invalid_argument("brute_max: n exceeds enumeration cap");
  auto trees = enumerate_trees(n, mode.ternary() ? Arity::Ternary : Arity::Binary);
  BigInt best = 0;
  for (const auto& t : trees) {
    BigInt c = mode.ternary() ? count_q4(t) : count_general(mode.spec(), t).first;
    if (c > best) best = c;
  }
  return best;
}

}  // namespace inducibility
