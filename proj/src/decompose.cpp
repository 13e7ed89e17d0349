#include "deltagraph/decompose.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace deltagraph {

Decomposition decompose(std::uint64_t q, std::uint64_t n, const DecomposeOptions& opts) {
  if (q >= (1ull << 31)) throw std::invalid_argument("decompose: q out of range");
  const PrimeField field(static_cast<std::uint32_t>(q));
  if (n < 1) throw std::invalid_argument("decompose: n must be >= 1");

  std::optional<std::uint64_t> seed;
  if (opts.seed) seed = mix_seed(q, n) ^ *opts.seed;
  const FactorizationOfCyclic fc = factor_cyclic(n, field, seed);

  std::vector<CycleSum> contribs;
  contribs.reserve(fc.factors.size());
  for (const auto& cf : fc.factors)
    contribs.push_back(factor_contribution(cf.f, cf.degree, cf.multiplicity, opts.cache,
                                           opts.factor, opts.collect_orders));
  const CycleSum sum = product_all(contribs);

  Decomposition d;
  d.q = q;
  d.n = n;
  d.h = fc.h;
  d.tree_size = pow_big(BigNat(q), fc.h);
  for (const auto& [m, c] : sum.terms()) d.components.push_back({m, c});
  std::sort(d.components.begin(), d.components.end(),
            [](const ComponentClass& a, const ComponentClass& b) {
              return a.cycle_len > b.cycle_len;
            });
  d.total_components = sum.total();

  // every vertex lives in exactly one tree hanging off exactly one cycle
  if (sum.mass() * d.tree_size != pow_big(BigNat(q), n))
    throw std::logic_error("decompose: cycle mass times tree size misses q^n");
  if (sum.coeff(1) < 1)
    throw std::logic_error("decompose: missing the fixed-point component");
  return d;
}

BigNat total_components(const Decomposition& d) {
  BigNat t = 0;
  for (const auto& cc : d.components) t += cc.count;
  return t;
}

std::string render(const Decomposition& d) {
  std::ostringstream os;
  bool first = true;
  for (const auto& cc : d.components) {
    if (!first) os << "+";
    first = false;
    if (cc.count != 1) os << cc.count.str();
    os << "(O_" << cc.cycle_len.str() << "*T_" << d.tree_size.str() << ")";
  }
  return os.str();
}

namespace {

BigNat parse_big(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument("empty " + what);
  for (char c : s)
    if (c < '0' || c > '9') throw std::invalid_argument("bad " + what + " '" + s + "'");
  return BigNat(s);
}

std::string strip_ws(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out += c;
  return out;
}

}  // namespace

Decomposition parse_components(const std::string& expr, std::uint64_t q, std::uint64_t n) {
  Decomposition d;
  d.q = q;
  d.n = n;
  const std::string text = strip_ws(expr);
  if (text.empty()) throw std::invalid_argument("empty component expression");

  std::optional<BigNat> tree_size;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find('(', pos);
    if (open == std::string::npos)
      throw std::invalid_argument("expected '(' in component term");
    BigNat count = 1;
    if (open != pos) count = parse_big(text.substr(pos, open - pos), "component count");
    std::size_t close = text.find(')', open);
    if (close == std::string::npos)
      throw std::invalid_argument("unterminated component term");
    const std::string body = text.substr(open + 1, close - open - 1);
    if (body.rfind("O_", 0) != 0)
      throw std::invalid_argument("component term must start with O_");
    const std::size_t star = body.find("*T_");
    if (star == std::string::npos)
      throw std::invalid_argument("component term must contain *T_");
    const BigNat m = parse_big(body.substr(2, star - 2), "cycle length");
    const BigNat s = parse_big(body.substr(star + 3), "tree size");
    if (tree_size && *tree_size != s)
      throw std::invalid_argument("inconsistent tree sizes in expression");
    tree_size = s;
    d.components.push_back({m, count});
    pos = close + 1;
    if (pos < text.size()) {
      if (text[pos] != '+') throw std::invalid_argument("expected '+' between terms");
      ++pos;
      if (pos == text.size()) throw std::invalid_argument("trailing '+' in expression");
    }
  }

  // recover h from tree size = q^h
  BigNat probe = 1;
  std::uint64_t h = 0;
  while (probe < *tree_size) {
    probe *= q;
    ++h;
  }
  if (probe != *tree_size)
    throw std::invalid_argument("tree size " + tree_size->str() + " is not a power of q");
  d.h = h;
  d.tree_size = *tree_size;
  std::sort(d.components.begin(), d.components.end(),
            [](const ComponentClass& a, const ComponentClass& b) {
              return a.cycle_len > b.cycle_len;
            });
  d.total_components = total_components(d);
  return d;
}

RowReport decompose_row(std::uint64_t q, std::uint64_t n, const DecomposeOptions& opts) {
  RowReport r;
  r.q = q;
  r.n = n;
  r.mr_rounds = opts.factor.mr_rounds;

  DecomposeOptions local = opts;
  FactorStats stats;
  local.factor.stats = &stats;

  const auto start = std::chrono::steady_clock::now();
  try {
    r.result = decompose(q, n, local);
    r.status = "ok";
  } catch (const BudgetExceeded& e) {
    r.status = "incomplete";
    r.blocking_composite = e.cofactor();
  }
  const auto stop = std::chrono::steady_clock::now();
  r.timing_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count());
  r.cache_hits = stats.cache_hits;
  if (opts.factor.stats) {
    opts.factor.stats->cache_hits += stats.cache_hits;
    opts.factor.stats->factored += stats.factored;
    opts.factor.stats->rho_iterations += stats.rho_iterations;
  }
  return r;
}

std::string render_row_text(const RowReport& r) {
  std::ostringstream os;
  if (r.status == "ok") {
    os << r.n << " | " << r.result->total_components.str() << " | " << render(*r.result);
  } else {
    os << r.n << " | incomplete | rho budget exceeded on composite "
       << r.blocking_composite.str();
  }
  return os.str();
}

Decomposition parse_row_text(const std::string& line, std::uint64_t q) {
  const std::size_t p1 = line.find('|');
  const std::size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('|', p1 + 1);
  if (p2 == std::string::npos)
    throw std::invalid_argument("row must have three '|'-separated fields");
  const std::string n_str = strip_ws(line.substr(0, p1));
  const std::string total_str = strip_ws(line.substr(p1 + 1, p2 - p1 - 1));
  const std::string expr = line.substr(p2 + 1);
  const BigNat n_big = parse_big(n_str, "n");
  Decomposition d = parse_components(expr, q, n_big.convert_to<std::uint64_t>());
  if (d.total_components != parse_big(total_str, "total"))
    throw std::invalid_argument("row total does not match its component counts");
  return d;
}

std::string render_row_json(const RowReport& r) {
  nlohmann::json j;
  j["q"] = std::to_string(r.q);
  j["n"] = std::to_string(r.n);
  j["status"] = r.status;
  j["timing_ms"] = std::to_string(r.timing_ms);
  j["cache_hits"] = std::to_string(r.cache_hits);
  j["mr_rounds"] = std::to_string(r.mr_rounds);
  if (r.status == "ok") {
    const Decomposition& d = *r.result;
    j["h"] = std::to_string(d.h);
    j["tree_size"] = d.tree_size.str();
    j["total_components"] = d.total_components.str();
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& cc : d.components) {
      comps.push_back({{"m", cc.cycle_len.str()}, {"count", cc.count.str()}});
    }
    j["components"] = std::move(comps);
  } else {
    j["blocking_composite"] = r.blocking_composite.str();
  }
  return j.dump();
}

std::string csv_header() { return "q,n,h,tree_size,m,count"; }

std::string render_row_csv(const RowReport& r) {
  if (r.status != "ok")
    throw std::invalid_argument("csv output is only defined for complete rows");
  std::ostringstream os;
  const Decomposition& d = *r.result;
  bool first = true;
  for (const auto& cc : d.components) {
    if (!first) os << "\n";
    first = false;
    os << d.q << "," << d.n << "," << d.h << "," << d.tree_size.str() << ","
       << cc.cycle_len.str() << "," << cc.count.str();
  }
  return os.str();
}

}  // namespace deltagraph
