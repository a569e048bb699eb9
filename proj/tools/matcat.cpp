// matcat: enumerate, tabulate and query the catalogue of small matroids.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "matcat/catalogue.hpp"
#include "matcat/errors.hpp"
#include "matcat/orderly.hpp"
#include "matcat/paving.hpp"
#include "matcat/properties.hpp"

namespace {

using namespace matcat;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kBudget = 3, kMismatch = 4, kIo = 5 };

constexpr int kDeskMaxN = 8;
constexpr int kExtendedMaxN = 9;
constexpr const char* kJobsEnv = "MATCAT_JOBS";

struct CommandConfig {
  int jobs = 0;
  bool extended = false;
  bool verbose = false;
  int max_n = kDeskMaxN;
  std::string catalogue = "matroids.cat";
  std::string table = "properties.tsv";
  std::string checkpoint;
  double time_budget = 0;
  bool full_extension = false;

  std::string expr;
  bool count = false;
  std::string count_distinct;
  std::vector<std::string> group_by;
  bool missing_bases = false;

  int johnson_n = 8;
  int johnson_k = 4;
  bool selfdual = false;
  bool nonsparse = false;
  bool estimate = false;
  int prefix = 5;
  double fraction = 0.25;
  std::uint64_t seed = 1;

  int field = 2;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class Mismatch : public Error {
 public:
  using Error::Error;
};

using Grid = std::vector<std::vector<std::uint64_t>>;

// Rows are ranks, columns sizes, closed by a totals row.
void print_grid(const std::string& title, const Grid& by_size_rank) {
  const int max_n = static_cast<int>(by_size_rank.size()) - 1;
  std::cout << title << '\n' << std::setw(6) << "r\\n";
  for (int n = 0; n <= max_n; ++n) std::cout << std::setw(9) << n;
  std::cout << '\n';
  for (int r = 0; r <= max_n; ++r) {
    std::cout << std::setw(6) << r;
    for (int n = 0; n <= max_n; ++n) {
      if (r > n) {
        std::cout << std::setw(9) << "";
      } else {
        std::cout << std::setw(9) << by_size_rank[n][r];
      }
    }
    std::cout << '\n';
  }
  std::cout << std::setw(6) << "Total";
  for (int n = 0; n <= max_n; ++n) {
    std::uint64_t total = 0;
    for (std::uint64_t c : by_size_rank[n]) total += c;
    std::cout << std::setw(9) << total;
  }
  std::cout << "\n\n";
}

Grid empty_grid(int max_n) {
  Grid g(max_n + 1);
  for (int n = 0; n <= max_n; ++n) g[n].assign(n + 1, 0);
  return g;
}

void configure_jobs(const CommandConfig& cfg) {
  int jobs = cfg.jobs;
  if (jobs == 0) {
    if (const char* env = std::getenv(kJobsEnv)) jobs = std::atoi(env);
  }
  if (jobs < 0) throw UsageError("--jobs must be positive");
  if (jobs > 0) omp_set_num_threads(jobs);
}

void require_extended(const CommandConfig& cfg, bool needed, const std::string& what) {
  if (needed && !cfg.extended) throw UsageError(what + " is an extended run; pass --extended");
}

std::vector<std::vector<Matroid>> load_levels(const std::string& path) {
  auto levels = levels_by_size(read_catalogue(path));
  for (std::size_t n = 0; n < levels.size(); ++n) {
    if (levels[n].empty()) throw FormatError(0, "catalogue has no matroids on " + std::to_string(n) + " elements");
  }
  return levels;
}

int cmd_enum(const CommandConfig& cfg) {
  if (cfg.max_n < 0 || cfg.max_n > kExtendedMaxN) throw UsageError("--max-n must lie in 0.." + std::to_string(kExtendedMaxN));
  require_extended(cfg, cfg.max_n > kDeskMaxN, "enumeration beyond " + std::to_string(kDeskMaxN) + " elements");
  EnumOptions options;
  options.checkpoint_path = cfg.checkpoint.empty() ? cfg.catalogue + ".ckpt" : cfg.checkpoint;
  const auto start = std::chrono::steady_clock::now();
  int level_n = 0;
  options.progress = [&](std::size_t done, std::size_t total) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cfg.verbose) std::cerr << "n=" << level_n << ": " << done << "/" << total << " parents, " << elapsed << " s\n";
    if (cfg.time_budget > 0 && elapsed > cfg.time_budget && done < total) {
      throw BudgetExceeded("time budget exhausted at n=" + std::to_string(level_n) + "; rerun to resume from " +
                           options.checkpoint_path + ".n" + std::to_string(level_n));
    }
  };
  std::vector<std::vector<Matroid>> levels{{Matroid()}};
  for (level_n = 1; level_n <= cfg.max_n; ++level_n) {
    EnumOptions level_options = options;
    level_options.checkpoint_path += ".n" + std::to_string(level_n);
    level_options.dual_completion = level_n > kDeskMaxN && !cfg.full_extension;
    levels.push_back(next_level(levels.back(), level_options));
  }
  std::vector<Matroid> all;
  for (const auto& level : levels) all.insert(all.end(), level.begin(), level.end());
  write_catalogue(all, cfg.catalogue);
  for (int n = 1; n <= cfg.max_n; ++n) std::filesystem::remove(options.checkpoint_path + ".n" + std::to_string(n));

  Grid grid = empty_grid(cfg.max_n);
  for (const Matroid& m : all) ++grid[m.size()][m.rank()];
  print_grid("All matroids", grid);
  std::cerr << "wrote " << all.size() << " matroids to " << cfg.catalogue << '\n';
  return kOk;
}

int cmd_props(const CommandConfig& cfg) {
  const auto records = read_catalogue(cfg.catalogue);
  const int max_n = records.empty() ? 0 : records.back().size();
  require_extended(cfg, max_n > kDeskMaxN, "a property pass beyond " + std::to_string(kDeskMaxN) + " elements");
  const auto rows = build_property_table(records);
  const Table table = to_table(rows);
  write_property_tsv(table, cfg.table);

  Grid simple = empty_grid(max_n), simple_cosimple = empty_grid(max_n), simple_paving = empty_grid(max_n);
  Grid all = empty_grid(max_n), bo = empty_grid(max_n), sbo = empty_grid(max_n), tr = empty_grid(max_n);
  for (const PropertyRow& r : rows) {
    simple[r.n][r.rank] += r.flags.simple;
    simple_cosimple[r.n][r.rank] += r.flags.simple && r.flags.cosimple;
    simple_paving[r.n][r.rank] += r.flags.simple && r.flags.paving;
    ++all[r.n][r.rank];
    bo[r.n][r.rank] += r.base_orderable;
    sbo[r.n][r.rank] += r.strongly_base_orderable;
    tr[r.n][r.rank] += r.transversal;
  }
  print_grid("Simple matroids", simple);
  print_grid("Simple and cosimple matroids", simple_cosimple);
  print_grid("Simple paving matroids", simple_paving);

  std::cout << "All / base-orderable / strongly base-orderable / transversal\n" << std::setw(6) << "r\\n";
  for (int n = 0; n <= max_n; ++n) std::cout << std::setw(9) << n;
  std::cout << '\n';
  for (int r = 0; r <= max_n; ++r) {
    for (const Grid* g : {&all, &bo, &sbo, &tr}) {
      std::cout << std::setw(6) << (g == &all ? std::to_string(r) : "");
      for (int n = 0; n <= max_n; ++n) {
        if (r > n) {
          std::cout << std::setw(9) << "";
        } else {
          std::cout << std::setw(9) << (*g)[n][r];
        }
      }
      std::cout << '\n';
    }
  }
  std::cerr << "wrote " << rows.size() << " rows to " << cfg.table << '\n';
  return kOk;
}

int cmd_query(const CommandConfig& cfg) {
  const Table table = read_property_tsv(cfg.table);
  if (cfg.missing_bases) {
    for (const auto& [n, r, b] : missing_base_triples(table, cfg.max_n)) {
      std::cout << '(' << n << ',' << r << ',' << b << ")\n";
    }
    return kOk;
  }
  if (cfg.count && !cfg.count_distinct.empty()) throw UsageError("--count and --count-distinct are exclusive");
  QueryExpr expr;
  expr.where = parse_conditions(cfg.expr);
  expr.group_by = cfg.group_by;
  if (cfg.count) {
    expr.aggregate = Aggregate::Count;
  } else if (!cfg.count_distinct.empty()) {
    expr.aggregate = Aggregate::CountDistinct;
    expr.distinct_column = cfg.count_distinct;
  } else if (!cfg.group_by.empty()) {
    expr.aggregate = Aggregate::Count;
  }
  std::cout << format_result(query(table, expr));
  return kOk;
}

int cmd_johnson(const CommandConfig& cfg) {
  const int n = cfg.johnson_n;
  const int k = cfg.johnson_k;
  if (n < 1 || n > kMaxGround || k < 1 || k >= n) throw UsageError("need 1 <= k < n <= " + std::to_string(kMaxGround));
  require_extended(cfg, n > kDeskMaxN && !cfg.estimate, "independent-set enumeration beyond J(8,k)");
  const JohnsonGraph g = johnson_graph(n, k);

  if (cfg.estimate) {
    const EstimateReport report = estimate_iset_count(g, cfg.prefix, cfg.fraction, cfg.seed);
    std::cout << "J(" << n << "," << k << ") estimate " << std::fixed << std::setprecision(1) << report.estimate
              << " (exact below size " << cfg.prefix << ": " << report.exact_below_prefix << ", sampled "
              << report.sampled << " of " << report.prefix_classes << " size-" << cfg.prefix << " classes, seed "
              << report.seed << ")\n";
    return kOk;
  }
  if (cfg.nonsparse) {
    const PavingBuckets buckets = count_nonsparse_paving(n, k);
    boost::rational<std::int64_t> total = 0;
    std::cout << "Non-sparse paving matroids of rank " << k << " on " << n << " elements\n"
              << "max hyperplane size\thyperplanes of that size\tmatroids\n";
    for (const auto& [key, count] : buckets) {
      if (count.denominator() != 1) throw Mismatch("non-integral bucket count " + std::to_string(count.numerator()) +
                                                   "/" + std::to_string(count.denominator()));
      std::cout << key.first << '\t' << key.second << '\t' << count.numerator() << '\n';
      total += count;
    }
    std::cout << "Total\t\t" << total.numerator() << '\n';
    return kOk;
  }
  if (cfg.selfdual) {
    if (n != 2 * k) throw UsageError("--selfdual needs n = 2k");
    const SelfDualCount sd = count_self_dual_sparse(n);
    std::cout << "sparse paving rank " << k << " on " << n << ": " << sd.total_classes << " classes, self-dual "
              << sd.by_certificate << " (certificate) " << sd.by_complement << " (complement)\n";
    bool ok = sd.by_certificate == sd.by_complement;
    if (std::filesystem::exists(cfg.catalogue)) {
      const auto levels = load_levels(cfg.catalogue);
      if (static_cast<int>(levels.size()) > n) {
        std::uint64_t from_catalogue = 0;
        std::uint64_t sparse = 0;
        for (const Matroid& m : levels[n]) {
          if (m.rank() != k || !classify(m).sparse_paving) continue;
          ++sparse;
          from_catalogue += canonical_form(dual(m)) == m;
        }
        std::cout << "catalogue: " << sparse << " classes, self-dual " << from_catalogue << '\n';
        ok = ok && sparse == sd.total_classes && from_catalogue == sd.by_certificate;
      }
    }
    std::cout << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kOk : kMismatch;
  }

  IsetOptions options;
  options.checkpoint_path = cfg.checkpoint;
  const IsetEnumeration result = enumerate_isets_orderly(g, options);
  std::cout << "Independent sets in J(" << n << "," << k << ") up to symmetry\nsize\tnumber\n";
  for (std::size_t s = 0; s < result.classes_by_size.size(); ++s) {
    std::cout << s << '\t' << result.classes_by_size[s] << '\n';
  }
  std::cout << "Total\t" << result.total() << '\n';
  if (g.has_complementation()) {
    const ComplementPairing pairing = pair_by_complement(g, result);
    std::uint64_t paired = 0;
    for (std::uint64_t c : pairing.paired_classes_by_size) paired += c;
    std::cout << "with complementation\t" << paired << '\n';
  }
  if (!cfg.checkpoint.empty()) std::filesystem::remove(cfg.checkpoint);
  return kOk;
}

int cmd_exminors(const CommandConfig& cfg) {
  const int q = cfg.field;
  if (q < 2 || q > 5) throw UsageError("--field must be 2, 3, 4 or 5");
  if (cfg.max_n < 0 || cfg.max_n > kExtendedMaxN) throw UsageError("--max-n must lie in 0.." + std::to_string(kExtendedMaxN));
  require_extended(cfg, cfg.max_n > kDeskMaxN || (q == 5 && cfg.max_n >= kDeskMaxN),
                   "GF(" + std::to_string(q) + ") excluded minors on " + std::to_string(cfg.max_n) + " elements");
  std::vector<std::vector<Matroid>> levels;
  if (std::filesystem::exists(cfg.catalogue)) {
    levels = load_levels(cfg.catalogue);
    if (static_cast<int>(levels.size()) <= cfg.max_n) throw UsageError("catalogue stops below --max-n; run enum first");
    levels.resize(cfg.max_n + 1);
  } else {
    levels = enumerate(cfg.max_n);
  }
  const auto minors = excluded_minors(levels, q);
  std::map<std::pair<int, int>, int> by_size_rank;
  for (const Matroid& m : minors) ++by_size_rank[{m.size(), m.rank()}];
  std::cout << "Excluded minors for GF(" << q << ") on at most " << cfg.max_n << " elements\nsize\trank\tnumber\n";
  for (const auto& [key, count] : by_size_rank) std::cout << key.first << '\t' << key.second << '\t' << count << '\n';
  std::cout << "Total\t\t" << minors.size() << '\n';
  if (cfg.verbose) {
    for (const Matroid& m : minors) std::cerr << describe(m) << '\n';
  }
  return kOk;
}

int cmd_oracle(const CommandConfig& cfg) {
  if (cfg.max_n < 0 || cfg.max_n > 5) throw UsageError("the brute-force oracle covers n <= 5");
  const auto levels = enumerate(cfg.max_n);
  bool ok = true;
  for (int n = 0; n <= cfg.max_n; ++n) {
    std::uint64_t labelled = 0;
    const auto brute = brute_force_enumerate(n, &labelled);
    const bool same = brute == levels[n];
    ok = ok && same;
    std::cout << "n=" << n << " orderly " << levels[n].size() << " brute-force " << brute.size() << " (from "
              << labelled << " labelled) " << (same ? "PASS" : "FAIL") << '\n';
  }
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Catalogue of small matroids: enumeration, properties and queries"};
  app.require_subcommand(1);
  CommandConfig cfg;
  app.add_option("-j,--jobs", cfg.jobs, std::string("Worker threads (default from ") + kJobsEnv + " or OpenMP)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--extended", cfg.extended, "Allow runs beyond desk scale");
  app.add_flag("-v,--verbose", cfg.verbose, "Progress and detail on stderr");

  auto* enum_cmd = app.add_subcommand("enum", "Enumerate all matroids and write the catalogue");
  enum_cmd->add_option("--max-n", cfg.max_n, "Largest ground set");
  enum_cmd->add_option("-o,--out", cfg.catalogue, "Catalogue file");
  enum_cmd->add_option("--checkpoint", cfg.checkpoint, "Checkpoint prefix (default <out>.ckpt)");
  enum_cmd->add_option("--time-budget", cfg.time_budget, "Stop with a checkpoint after this many seconds");
  enum_cmd->add_flag("--full-extension", cfg.full_extension,
                     "Extend every parent beyond 8 elements instead of completing the upper ranks by duality");

  auto* props_cmd = app.add_subcommand("props", "Compute the property table of a catalogue");
  props_cmd->add_option("-c,--catalogue", cfg.catalogue, "Catalogue file");
  props_cmd->add_option("-o,--out", cfg.table, "Property TSV");

  auto* query_cmd = app.add_subcommand("query", "Query the property table");
  query_cmd->add_option("expr", cfg.expr, "Conditions, e.g. \"n=6 and rank=3\"");
  query_cmd->add_option("-t,--table", cfg.table, "Property TSV");
  query_cmd->add_flag("--count", cfg.count, "Count matching rows");
  query_cmd->add_option("--count-distinct", cfg.count_distinct, "Count distinct values of a column");
  query_cmd->add_option("--group-by", cfg.group_by, "Group counts by these columns")->delimiter(',');
  query_cmd->add_flag("--missing-bases", cfg.missing_bases, "List (n, rank, bases) triples no matroid realises");
  query_cmd->add_option("--max-n", cfg.max_n, "Largest size for --missing-bases");

  auto* johnson_cmd = app.add_subcommand("johnson", "Independent sets of Johnson graphs and paving counts");
  johnson_cmd->add_option("--n", cfg.johnson_n, "Points");
  johnson_cmd->add_option("--k", cfg.johnson_k, "Subset size (the rank)");
  johnson_cmd->add_flag("--selfdual", cfg.selfdual, "Count self-dual sparse paving matroids (n = 2k)");
  johnson_cmd->add_flag("--nonsparse", cfg.nonsparse, "Count non-sparse paving matroids of rank k");
  johnson_cmd->add_flag("--estimate", cfg.estimate, "Sampled estimate of the class count");
  johnson_cmd->add_option("--prefix", cfg.prefix, "Exact levels below this size when estimating");
  johnson_cmd->add_option("--fraction", cfg.fraction, "Sampling fraction")->check(CLI::Range(0.0, 1.0));
  johnson_cmd->add_option("--seed", cfg.seed, "Sampling seed");
  johnson_cmd->add_option("-c,--catalogue", cfg.catalogue, "Catalogue for the self-dual cross-check");
  johnson_cmd->add_option("--checkpoint", cfg.checkpoint, "Checkpoint file");

  auto* exminors_cmd = app.add_subcommand("exminors", "Excluded minors for GF(q)-representability");
  exminors_cmd->add_option("--field", cfg.field, "Field order q");
  exminors_cmd->add_option("--max-n", cfg.max_n, "Largest ground set");
  exminors_cmd->add_option("-c,--catalogue", cfg.catalogue, "Catalogue (enumerated on the fly when absent)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare orderly output with brute force");
  oracle_cmd->add_option("--max-n", cfg.max_n, "Largest ground set (at most 5)")->default_val(5);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    configure_jobs(cfg);
    if (*enum_cmd) return cmd_enum(cfg);
    if (*props_cmd) return cmd_props(cfg);
    if (*query_cmd) return cmd_query(cfg);
    if (*johnson_cmd) return cmd_johnson(cfg);
    if (*exminors_cmd) return cmd_exminors(cfg);
    if (*oracle_cmd) return cmd_oracle(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "query error at " << e.what() << '\n';
    return kUsage;
  } catch (const UnknownColumn& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const TypeMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const Mismatch& e) {
    std::cerr << "mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kIo;
  } catch (const ChecksumMismatch& e) {
    std::cerr << "checksum error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
