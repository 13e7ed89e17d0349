#include "deltagraph/cli.hpp"

#include "deltagraph/decompose.hpp"
#include "deltagraph/oracle.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

namespace deltagraph {

namespace {

struct RunConfig {
  std::uint64_t q = 0;
  std::uint64_t n_begin = 0;
  std::uint64_t n_end = 0;
  std::string format = "text";
  std::optional<std::string> cache_path;
  std::uint64_t rho_budget = 100'000'000;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t oracle_limit = kDefaultOracleLimit;
  std::optional<std::string> dot_out;
};

void resolve_range(const std::optional<std::uint64_t>& n,
                   const std::optional<std::string>& range, RunConfig& cfg) {
  if (n.has_value() == range.has_value())
    throw CLI::ValidationError("exactly one of --n and --n-range is required");
  if (n) {
    if (*n < 1) throw CLI::ValidationError("--n must be >= 1");
    cfg.n_begin = cfg.n_end = *n;
    return;
  }
  const std::size_t dots = range->find("..");
  if (dots == std::string::npos)
    throw CLI::ValidationError("--n-range must look like A..B");
  std::uint64_t a = 0, b = 0;
  try {
    a = std::stoull(range->substr(0, dots));
    b = std::stoull(range->substr(dots + 2));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--n-range must look like A..B with integer bounds");
  }
  if (a < 1 || a > b) throw CLI::ValidationError("--n-range needs 1 <= A <= B");
  cfg.n_begin = a;
  cfg.n_end = b;
}

class RowPrinter {
 public:
  RowPrinter(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err), row_count_(cfg.n_end - cfg.n_begin + 1) {}

  void emit(const RowReport& r) {
    if (r.status != "ok")
      err_ << "n=" << r.n << ": rho budget exceeded on composite "
           << r.blocking_composite.str() << "\n";
    if (cfg_.format == "text") {
      out_ << render_row_text(r) << "\n";
    } else if (cfg_.format == "json") {
      if (row_count_ == 1) {
        out_ << render_row_json(r) << "\n";
      } else {
        out_ << (emitted_ == 0 ? "[" : ",") << "\n  " << render_row_json(r);
      }
    } else {  // csv
      if (emitted_ == 0) out_ << csv_header() << "\n";
      if (r.status == "ok") out_ << render_row_csv(r) << "\n";
    }
    ++emitted_;
  }

  void finish() {
    if (cfg_.format == "json" && row_count_ > 1) out_ << (emitted_ ? "\n]" : "[]") << "\n";
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::uint64_t row_count_;
  std::uint64_t emitted_ = 0;
};

int cmd_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<FactorCache> cache;
  if (cfg.cache_path) cache.emplace(*cfg.cache_path);

  DecomposeOptions opts;
  opts.cache = cache ? &*cache : nullptr;
  opts.factor.rho_budget = cfg.rho_budget;
  opts.seed = cfg.seed;

  const std::uint64_t rows = cfg.n_end - cfg.n_begin + 1;
  std::vector<std::optional<RowReport>> results(rows);
  std::atomic<std::uint64_t> next{0};
  std::mutex emit_mu;
  std::uint64_t emitted = 0;
  RowPrinter printer(cfg, out, err);
  std::atomic<bool> any_incomplete{false};

  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= rows) return;
      try {
        RowReport r = decompose_row(cfg.q, cfg.n_begin + i, opts);
        if (r.status != "ok") any_incomplete = true;
        std::lock_guard lock(emit_mu);
        results[i] = std::move(r);
        while (emitted < rows && results[emitted]) {
          printer.emit(*results[emitted]);
          results[emitted].reset();  // free finished rows early
          ++emitted;
        }
      } catch (...) {
        std::lock_guard lock(emit_mu);
        if (!failure) failure = std::current_exception();
        next = rows;  // stop handing out work
        return;
      }
    }
  };

  const unsigned nthreads = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, cfg.workers), rows));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  printer.finish();
  return any_incomplete ? kExitBudgetExceeded : kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<FactorCache> cache;
  if (cfg.cache_path) cache.emplace(*cfg.cache_path);

  DecomposeOptions opts;
  opts.cache = cache ? &*cache : nullptr;
  opts.factor.rho_budget = cfg.rho_budget;
  opts.seed = cfg.seed;

  if (cfg.dot_out && cfg.n_begin != cfg.n_end) {
    err << "--dot-out requires a single --n\n";
    return kExitUsage;
  }

  bool all_pass = true;
  bool budget_hit = false;
  for (std::uint64_t n = cfg.n_begin; n <= cfg.n_end; ++n) {
    try {
      const Decomposition predicted = decompose(cfg.q, n, opts);
      const OracleResult measured = enumerate_graph(cfg.q, n, cfg.oracle_limit);
      std::string why;
      if (measured.decomposition.h != predicted.h)
        why = "tree height mismatch";
      else if (measured.decomposition.tree_size != predicted.tree_size)
        why = "tree size mismatch";
      else if (measured.decomposition.components != predicted.components)
        why = "component multiset mismatch";
      else {
        TreeViolation v;
        if (!verify_trees(measured.graph, predicted.h, &v))
          why = "tree structure violation at vertex " + std::to_string(v.vertex) + ": " +
                v.reason;
      }
      if (cfg.dot_out) {
        std::ofstream dot(*cfg.dot_out);
        if (!dot) {
          err << "cannot write " << *cfg.dot_out << "\n";
          return kExitUsage;
        }
        write_dot(measured.graph, dot);
      }
      if (why.empty()) {
        out << "PASS n=" << n << " " << render(predicted) << "\n";
      } else {
        out << "FAIL n=" << n << " " << why << "\n";
        all_pass = false;
      }
    } catch (const BudgetExceeded& e) {
      err << "n=" << n << ": " << e.what() << "\n";
      budget_hit = true;
    } catch (const LimitExceeded& e) {
      err << "n=" << n << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (!all_pass) return kExitVerifyFailed;
  if (budget_hit) return kExitBudgetExceeded;
  return kExitOk;
}

int cmd_cache_show(const std::string& path, std::ostream& out) {
  const FactorCache cache(path);
  for (const auto& f : cache.entries()) out << format_cache_line(f) << "\n";
  return kExitOk;
}

int cmd_cache_import(const std::string& path, const std::string& file, std::ostream& out,
                     std::ostream& err) {
  std::ifstream in(file);
  if (!in) {
    err << "cannot read " << file << "\n";
    return kExitUsage;
  }
  // parse everything first so a bad line rejects the whole import
  std::vector<IntFactorization> pending;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    const std::size_t b = body.find_first_not_of(" \t\r");
    body = b == std::string::npos ? "" : body.substr(b);
    if (body.empty() || body[0] == '#') continue;
    try {
      pending.push_back(parse_cache_line(body));
    } catch (const std::invalid_argument& e) {
      err << file << ":" << lineno << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }
  FactorCache cache(path);
  std::size_t added = 0;
  for (const auto& f : pending) {
    if (!cache.find(f.value)) ++added;
    cache.store(f);
  }
  out << "imported " << added << " new entries (" << pending.size() << " parsed)\n";
  return kExitOk;
}

int cmd_cache_clear(const std::string& path, std::ostream& out) {
  FactorCache cache(path);
  const std::size_t had = cache.size();
  cache.clear();
  out << "cleared " << had << " entries\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"connected components of the difference map on cyclic sequences over F_q"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<std::uint64_t> n_opt;
  std::optional<std::string> range_opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--q", cfg.q, "field size, a prime")->required();
    cmd->add_option("--n", n_opt, "sequence length");
    cmd->add_option("--n-range", range_opt, "inclusive range of lengths, A..B");
    cmd->add_option("--cache", cfg.cache_path, "factorization cache file");
    cmd->add_option("--rho-budget", cfg.rho_budget,
                    "Pollard rho iterations allowed per composite");
    cmd->add_option("--seed", cfg.seed, "extra seed for the randomized factor splitter");
  };

  CLI::App* dec = app.add_subcommand("decompose", "compute the component decomposition");
  add_common(dec);
  dec->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  dec->add_option("--workers", cfg.workers, "rows computed in parallel");

  CLI::App* ver = app.add_subcommand("verify", "check the formula against brute force");
  add_common(ver);
  ver->add_option("--oracle-limit", cfg.oracle_limit, "max q^n states to enumerate");
  ver->add_option("--dot-out", cfg.dot_out, "write the state graph as GraphViz dot");

  CLI::App* cache_cmd = app.add_subcommand("cache", "inspect the factorization cache");
  cache_cmd->require_subcommand(1);
  std::string cache_file;
  std::string import_file;
  CLI::App* show = cache_cmd->add_subcommand("show", "list cached factorizations");
  show->add_option("--cache", cache_file, "factorization cache file")->required();
  CLI::App* import_sub = cache_cmd->add_subcommand("import", "merge entries from a file");
  import_sub->add_option("--cache", cache_file, "factorization cache file")->required();
  import_sub->add_option("file", import_file, "file of factorization lines")->required();
  CLI::App* clear = cache_cmd->add_subcommand("clear", "drop all cached factorizations");
  clear->add_option("--cache", cache_file, "factorization cache file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (dec->parsed() || ver->parsed()) resolve_range(n_opt, range_opt, cfg);
    if (dec->parsed()) return cmd_decompose(cfg, out, err);
    if (ver->parsed()) return cmd_verify(cfg, out, err);
    if (show->parsed()) return cmd_cache_show(cache_file, out);
    if (import_sub->parsed()) return cmd_cache_import(cache_file, import_file, out, err);
    if (clear->parsed()) return cmd_cache_clear(cache_file, out);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const CacheParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const LimitExceeded& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace deltagraph
