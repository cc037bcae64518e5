// Command-line front end: envelope search, table emission, oracle
// verification, bounds, construction densities, enumeration and counting.

#include <cstdlib>
#include <iostream>
#include <thread>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inducibility/bounds.hpp"
#include "inducibility/envelope.hpp"
#include "inducibility/numeric.hpp"
#include "inducibility/pattern_count.hpp"
#include "inducibility/tree.hpp"

namespace ind = inducibility;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string cache_dir;
  std::string format = "table";
  int threads = 1;
  int digits = 50;
};

// "5..10,15,20" -> {5,6,7,8,9,10,15,20}
std::vector<long> parse_n_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stol(item));
    } else {
      long lo = std::stol(item.substr(0, dots));
      long hi = std::stol(item.substr(dots + 2));
      for (long n = lo; n <= hi; ++n) out.push_back(n);
    }
  }
  if (out.empty()) throw CLI::ValidationError("--n-list", "empty range");
  return out;
}

long default_cap(const ind::Mode& mode) { return mode.ternary() ? 200 : 300; }

struct TableRow {
  long n;
  ind::BigInt max_count;
  ind::Rational density;
};

void emit_table(const std::vector<TableRow>& rows, const std::string& format,
                bool truncated, long truncated_at) {
  if (format == "json") {
    json doc;
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      doc["rows"].push_back({{"n", r.n},
                             {"max_count", r.max_count.get_str()},
                             {"density_exact", r.density.get_str()},
                             {"density_decimal", ind::decimal_string(r.density, 6)}});
    }
    doc["truncated"] = truncated;
    if (truncated) doc["truncated_at"] = truncated_at;
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    std::cout << "n,max_count,density_exact,density_decimal\n";
    for (const auto& r : rows) {
      std::cout << r.n << "," << r.max_count.get_str() << ","
                << r.density.get_str() << "," << ind::decimal_string(r.density, 6)
                << "\n";
    }
    if (truncated) std::cout << "# truncated at n=" << truncated_at << "\n";
    return;
  }
  std::cout << "n\tmax_count\tdensity_exact\tdensity_decimal\n";
  for (const auto& r : rows) {
    std::cout << r.n << "\t" << r.max_count.get_str() << "\t"
              << r.density.get_str() << "\t" << ind::decimal_string(r.density, 6)
              << "\n";
  }
  if (truncated) std::cout << "# truncated at n=" << truncated_at << "\n";
}

int run_envelope(const GlobalOptions& g, const std::string& mode_text, long n,
                 bool witness, bool unsafe_large) {
  ind::Mode mode = ind::Mode::parse(mode_text);
  if (!unsafe_large && n > default_cap(mode)) {
    std::cerr << "error: n=" << n << " exceeds the default cap "
              << default_cap(mode) << " for this mode; pass --unsafe-large\n";
    return 2;
  }
  ind::EnvelopeEngine engine(mode, g.cache_dir, witness, g.threads);
  const ind::EnvelopeList& env = engine.envelope(n);
  ind::Rational d = engine.max_density(n);
  if (g.format == "json") {
    json doc{{"mode", mode.tag()},
             {"n", n},
             {"size", env.points.size()},
             {"max_count", engine.max_count(n).get_str()},
             {"density_exact", d.get_str()},
             {"density_decimal", ind::decimal_string(d, 6)}};
    doc["points"] = json::array();
    for (const auto& p : env.points) {
      doc["points"].push_back({p.companion.get_str(), p.primary.get_str()});
    }
    if (witness) doc["witness"] = ind::format_tree(*engine.witness_tree(n));
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "mode=" << mode.tag() << " n=" << n << " size=" << env.points.size()
              << "\nmax_count=" << engine.max_count(n).get_str()
              << "\ndensity=" << d.get_str() << " (" << ind::decimal_string(d, 6)
              << ")\n";
    if (witness) {
      std::cout << "witness=" << ind::format_tree(*engine.witness_tree(n)) << "\n";
    }
  }
  return 0;
}

int run_table(const GlobalOptions& g, const std::string& mode_text,
              const std::string& n_list, bool unsafe_large) {
  ind::Mode mode = ind::Mode::parse(mode_text);
  std::vector<long> ns = parse_n_list(n_list);
  long cap = unsafe_large ? std::numeric_limits<long>::max() : default_cap(mode);
  std::vector<TableRow> rows;
  bool truncated = false;
  long truncated_at = 0;
  ind::EnvelopeEngine engine(mode, g.cache_dir, false, g.threads);
  for (long n : ns) {
    if (n > cap) {
      truncated = true;
      truncated_at = n;
      break;
    }
    rows.push_back({n, engine.max_count(n), engine.max_density(n)});
  }
  emit_table(rows, g.format, truncated, truncated_at);
  return truncated ? 3 : 0;
}

int run_verify(const GlobalOptions& g, const std::string& mode_text, long max_n,
               const std::string& formula, int d, int k, int h) {
  int failures = 0;
  auto report = [&](const std::string& what, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << what << "\n";
    if (!ok) ++failures;
  };

  if (!formula.empty()) {
    ind::TreePtr cdh = ind::complete_tree(d, h);
    if (formula == "qk") {
      ind::BigInt closed = ind::count_qk_complete(d, k, h);
      ind::BigInt brute = ind::count_by_subsets(ind::q_tree(k), cdh);
      report("count_Qk_complete(" + std::to_string(d) + "," + std::to_string(k) +
                 "," + std::to_string(h) + ") = " + closed.get_str() +
                 " == subsets " + brute.get_str(),
             closed == brute);
    } else if (formula == "sk") {
      ind::BigInt closed = ind::count_star_complete(d, k, h);
      ind::BigInt brute = ind::count_by_subsets(ind::star(k), cdh);
      report("count_Sk_complete(" + std::to_string(d) + "," + std::to_string(k) +
                 "," + std::to_string(h) + ") = " + closed.get_str() +
                 " == subsets " + brute.get_str(),
             closed == brute);
    } else {
      std::cerr << "error: unknown --formula " << formula << " (qk|sk)\n";
      return 2;
    }
    return failures == 0 ? 0 : 1;
  }

  ind::Mode mode = ind::Mode::parse(mode_text);
  ind::EnvelopeEngine engine(mode, "", false, g.threads);
  long start = mode.pattern_size();
  for (long n = start; n <= max_n; ++n) {
    ind::BigInt dp = engine.max_count(n);
    ind::BigInt brute = ind::brute_max(n, mode);
    report("envelope max == brute-force max at n=" + std::to_string(n) + " (" +
               dp.get_str() + ")",
           dp == brute);
  }
  // recursion vs subset oracle on every enumerable tree
  long oracle_cap = std::min<long>(max_n, mode.ternary() ? 9 : 10);
  bool rec_ok = true;
  for (long n = 1; n <= oracle_cap; ++n) {
    for (const auto& t :
         ind::enumerate_trees(n, mode.ternary() ? ind::Arity::Ternary
                                                : ind::Arity::Binary)) {
      ind::BigInt lhs = mode.ternary() ? ind::count_q4(t)
                                       : ind::count_general(mode.spec(), t).first;
      if (lhs != ind::count_by_subsets(mode.spec().pattern, t)) rec_ok = false;
    }
  }
  report("recursion == subset oracle on all trees with <= " +
             std::to_string(oracle_cap) + " leaves",
         rec_ok);
  return failures == 0 ? 0 : 1;
}

int run_bounds_summary(const GlobalOptions& g, const std::string& mode_text) {
  ind::Mode mode = ind::Mode::parse(mode_text);
  // the largest cached level, or the default cap when nothing is cached
  long best_n = 0;
  if (!g.cache_dir.empty()) {
    ind::EnvelopeEngine probe(mode, g.cache_dir, false, g.threads);
    for (long n = 2;; ++n) {
      try {
        std::filesystem::path dir(g.cache_dir);
        // a level is usable only when every level below it is cached too
        probe.envelope(n);
      } catch (...) {
        break;
      }
      best_n = n;
      std::filesystem::path next;
      bool have_next = false;
      for (const auto& e : std::filesystem::directory_iterator(g.cache_dir)) {
        if (e.path().filename().string().find("_n" + std::to_string(n + 1) + ".env") !=
            std::string::npos) {
          have_next = true;
        }
      }
      if (!have_next) break;
    }
  }
  if (best_n < mode.pattern_size()) best_n = default_cap(mode);
  ind::EnvelopeEngine engine(mode, g.cache_dir, false, g.threads);
  ind::Rational upper = engine.max_density(best_n);
  json doc;
  doc["mode"] = mode.tag();
  if (mode.ternary()) {
    ind::Rational lower = ind::lower_bound_q4();
    doc["lower_bound"] = {{"value_exact", lower.get_str()},
                          {"value_decimal", ind::decimal_string(lower, 12)},
                          {"source", "bounds q4-lower"}};
  } else {
    mpf_class lower = ind::lower_bound_a5(1000, g.digits);
    doc["lower_bound"] = {{"value_decimal", ind::mpf_to_string(lower, 12)},
                          {"source", "bounds a5-lower"}};
  }
  doc["upper_bound"] = {{"n", best_n},
                        {"value_exact", upper.get_str()},
                        {"value_decimal", ind::decimal_string(upper, 6)},
                        {"source", "envelope --mode " + mode_text + " --n " +
                                       std::to_string(best_n)}};
  if (best_n < (mode.ternary() ? 500 : 2000)) {
    doc["note"] = "upper bound reported at the largest available n=" +
                  std::to_string(best_n) +
                  "; run envelope with --unsafe-large for the full bound";
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_bounds(const GlobalOptions& g, const std::string& which, int starts) {
  json doc;
  if (which == "a5-lower") {
    ind::ObjectiveF f;
    ind::MaximizeResult r = ind::maximize_objective(f, starts, g.digits);
    doc["value_decimal"] = ind::mpf_to_string(120 * r.max_value, 12);
    doc["value_full"] = ind::mpf_to_string(120 * r.max_value, g.digits);
    doc["argmax"] = {ind::mpf_to_string(r.argmax[0], 12),
                     ind::mpf_to_string(r.argmax[1], 12),
                     ind::mpf_to_string(r.argmax[2], 12)};
    doc["argmax_mirror"] = {ind::mpf_to_string(r.argmax_mirror[0], 12),
                            ind::mpf_to_string(r.argmax_mirror[1], 12),
                            ind::mpf_to_string(r.argmax_mirror[2], 12)};
    doc["residuals"] = {{"gradient_norm", ind::mpf_to_string(r.gradient_norm, 3)}};
    doc["starts"] = r.starts;
  } else if (which == "q4-lower") {
    ind::SmallMaximizeResult r = ind::maximize_f_small();
    ind::Rational lb = ind::lower_bound_q4();
    doc["value_exact"] = lb.get_str();
    doc["value_decimal"] = ind::decimal_string(lb, 12);
    doc["argmax"] = r.argmax.get_str();
    doc["max_f"] = r.max_value.get_str();
    doc["residuals"] = json::object();
  } else if (which == "verify-minpoly") {
    mpf_class candidate = ind::lower_bound_a5(starts, g.digits);
    ind::MinimalPolynomial poly = ind::MinimalPolynomial::load_default();
    ind::MinPolyReport report = ind::verify_minimal_polynomial(poly, candidate);
    doc["candidate"] = ind::mpf_to_string(candidate, g.digits);
    doc["residuals"] = {
        {"newton_residual", ind::mpf_to_string(report.newton_residual, 3)}};
    doc["sign_change"] = report.sign_change;
    doc["pass"] = report.pass;
    std::cout << doc.dump(2) << "\n";
    return report.pass ? 0 : 1;
  } else if (which == "limits") {
    ind::Rational q4 = ind::limit_density_complete(ind::PatternSpec::Id::Q4);
    ind::Rational a5 = ind::limit_density_complete(ind::PatternSpec::Id::A5);
    doc["q4_complete_ternary"] = {{"value_exact", q4.get_str()},
                                  {"value_decimal", ind::decimal_string(q4, 12)}};
    doc["a5_complete_binary"] = {{"value_exact", a5.get_str()},
                                 {"value_decimal", ind::decimal_string(a5, 12)}};
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_density(const GlobalOptions& g, const std::string& construction,
                const std::string& pattern_name) {
  ind::PatternSpec pattern = ind::PatternSpec::parse(pattern_name);
  ind::Rational d = ind::construction_density(construction, pattern);
  if (g.format == "json") {
    json doc{{"construction", construction},
             {"pattern", pattern.name()},
             {"value_exact", d.get_str()},
             {"value_decimal", ind::decimal_string(d, 12)}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << d.get_str() << " (" << ind::decimal_string(d, 12) << ")\n";
  }
  return 0;
}

int run_enumerate(const GlobalOptions& g, long n, int arity) {
  ind::Arity a = arity == 2   ? ind::Arity::Binary
                 : arity == 3 ? ind::Arity::Ternary
                              : ind::Arity::Unbounded;
  std::vector<ind::TreePtr> trees = ind::enumerate_trees(n, a);
  if (g.format == "json") {
    json doc{{"n", n}, {"count", trees.size()}};
    doc["trees"] = json::array();
    for (const auto& t : trees) doc["trees"].push_back(ind::format_tree(*t));
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& t : trees) std::cout << ind::format_tree(*t) << "\n";
    std::cout << "# " << trees.size() << " trees\n";
  }
  return 0;
}

int run_count(const GlobalOptions& g, const std::string& pattern_name,
              const std::string& tree_text) {
  ind::PatternSpec pattern = ind::PatternSpec::parse(pattern_name);
  ind::TreePtr tree = ind::build_construction(tree_text);
  ind::BigInt c = ind::count_pattern(pattern, tree);
  ind::Rational d = ind::density(pattern, tree);
  if (g.format == "json") {
    json doc{{"pattern", pattern.name()},
             {"tree_leaves", tree->leaf_count()},
             {"count", c.get_str()},
             {"density_exact", d.get_str()},
             {"density_decimal", ind::decimal_string(d, 6)}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "count=" << c.get_str() << " density=" << d.get_str() << " ("
              << ind::decimal_string(d, 6) << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact pattern densities in rooted topological trees"};
  app.require_subcommand(1);

  GlobalOptions g;
  if (const char* env = std::getenv("INDUCIBILITY_CACHE_DIR")) g.cache_dir = env;
  app.add_option("--cache", g.cache_dir, "Envelope cache directory");
  app.add_option("--format", g.format, "Output format: table, csv, json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads (0 = auto)");
  app.add_option("--digits", g.digits, "Decimal working precision (>= 15)")
      ->check(CLI::Range(15, 1000));

  std::string mode_text = "a5";
  long n = 0;
  bool witness = false, unsafe_large = false;
  std::string n_list;
  long max_n = 11;
  std::string formula;
  int fd = 3, fk = 4, fh = 2;
  std::string bounds_which;
  int starts = 1000;
  std::string construction, pattern_name = "A5", tree_text;
  int arity = 0;

  CLI::App* envelope = app.add_subcommand("envelope", "Compute the pruned set L(n)");
  envelope->add_option("--mode", mode_text, "a5, q4, or a tree pattern")->required();
  envelope->add_option("--n", n, "Leaf count")->required();
  envelope->add_flag("--witness", witness, "Reconstruct one optimal tree");
  envelope->add_flag("--unsafe-large", unsafe_large, "Lift the default n cap");

  CLI::App* table = app.add_subcommand("table", "Emit a max-density table");
  table->add_option("--mode", mode_text)->required();
  table->add_option("--n-list", n_list, "e.g. 5..100,150,200")->required();
  table->add_flag("--unsafe-large", unsafe_large);

  CLI::App* verify = app.add_subcommand("verify", "Run oracle comparisons");
  verify->add_option("--mode", mode_text);
  verify->add_option("--max-n", max_n);
  verify->add_option("--formula", formula, "qk or sk closed-form check");
  verify->add_option("--d", fd);
  verify->add_option("--k", fk);
  verify->add_option("--height", fh);

  CLI::App* bounds = app.add_subcommand("bounds", "Lower/upper bound reports");
  bounds->add_option("which", bounds_which,
                     "a5-lower, q4-lower, verify-minpoly, limits, summary");
  bounds->add_option("--mode", mode_text, "mode for the summary report");
  bounds->add_option("--starts", starts, "Multi-start count for the optimizer");

  CLI::App* density = app.add_subcommand("density", "Exact construction density");
  density->add_option("--construction", construction,
                      "E2:n, E3:n, CD:d,h, S:n1,n2,n3,n4, W:h, Star:k, F:n, Q:k, "
                      "or a literal tree")
      ->required();
  density->add_option("--pattern", pattern_name)->required();

  CLI::App* enumerate = app.add_subcommand("enumerate", "List n-leaf trees");
  enumerate->add_option("--n", n)->required();
  enumerate->add_option("--arity", arity, "2, 3, or 0 (unbounded)");

  CLI::App* count = app.add_subcommand("count", "Count pattern copies in a tree");
  count->add_option("--pattern", pattern_name)->required();
  count->add_option("--tree", tree_text, "Tree text or construction")->required();

  CLI11_PARSE(app, argc, argv);
  if (g.threads == 0) {
    g.threads = static_cast<int>(std::thread::hardware_concurrency());
    if (g.threads < 1) g.threads = 1;
  }

  try {
    if (envelope->parsed()) return run_envelope(g, mode_text, n, witness, unsafe_large);
    if (table->parsed()) return run_table(g, mode_text, n_list, unsafe_large);
    if (verify->parsed())
      return run_verify(g, mode_text, max_n, formula, fd, fk, fh);
    if (bounds->parsed()) {
      if (bounds_which == "summary" || bounds_which.empty())
        return run_bounds_summary(g, mode_text);
      return run_bounds(g, bounds_which, starts);
    }
    if (density->parsed()) return run_density(g, construction, pattern_name);
    if (enumerate->parsed()) return run_enumerate(g, n, arity);
    if (count->parsed()) return run_count(g, pattern_name, tree_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
