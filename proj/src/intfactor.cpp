#include "deltagraph/intfactor.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace deltagraph {

namespace {

constexpr std::uint32_t kTrialLimit = 100'000;
constexpr std::uint64_t kU64Max = ~0ull;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> ps;
    for (std::uint32_t i = 2; i <= kTrialLimit; ++i) {
      if (composite[i]) continue;
      ps.push_back(i);
      for (std::uint64_t j = std::uint64_t(i) * i; j <= kTrialLimit; j += i)
        composite[j] = true;
    }
    return ps;
  }();
  return primes;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t addmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  // both inputs already reduced; avoids overflow when m > 2^63
  return a >= m - b ? a - (m - b) : a + b;
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool mr_witness_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  // true iff a proves n composite
  std::uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this witness set is deterministic for all n < 2^64
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (mr_witness_u64(n, a, d, s)) return false;
  }
  return true;
}

bool mr_witness_big(const BigNat& n, const BigNat& a, const BigNat& d, std::uint64_t s) {
  BigNat x = boost::multiprecision::powm(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (std::uint64_t i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;
}

BigNat random_below(const BigNat& bound, std::mt19937_64& rng) {
  // value in [0, bound); slight modular bias is fine for randomized search
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  BigNat v = 0;
  for (std::size_t got = 0; got < bits; got += 64) {
    v <<= 64;
    v += rng();
  }
  return v % bound;
}

bool is_probable_prime_big(const BigNat& n, unsigned rounds) {
  BigNat d = n - 1;
  std::uint64_t s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (mr_witness_big(n, BigNat(a), d, s)) return false;
  }
  std::mt19937_64 rng(mix_seed(stable_hash(n), 0x6d72));
  for (unsigned i = 0; i < rounds; ++i) {
    BigNat a = 2 + random_below(n - 3, rng);
    if (mr_witness_big(n, a, d, s)) return false;
  }
  return true;
}

// Brent-cycle Pollard rho with gcds batched 128 at a time. Returns a
// nontrivial factor of composite odd n, or 0 once `budget` steps run out.
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t& budget, std::mt19937_64& rng,
                      std::uint64_t* iterations) {
  while (budget > 0) {
    const std::uint64_t c = 1 + rng() % (n - 1);
    std::uint64_t y = 1 + rng() % (n - 1);
    std::uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1 && budget > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r && budget > 0; ++i) {
        y = addmod_u64(mulmod_u64(y, y, n), c, n);
        --budget;
        if (iterations) ++*iterations;
      }
      std::uint64_t k = 0;
      while (k < r && g == 1 && budget > 0) {
        ys = y;
        const std::uint64_t steps = std::min<std::uint64_t>(128, r - k);
        for (std::uint64_t i = 0; i < steps && budget > 0; ++i) {
          y = addmod_u64(mulmod_u64(y, y, n), c, n);
          --budget;
          if (iterations) ++*iterations;
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += steps;
      }
      r *= 2;
    }
    if (g == n) {
      // the batch overshot the collision; replay it one gcd at a time
      g = 1;
      while (g == 1) {
        ys = addmod_u64(mulmod_u64(ys, ys, n), c, n);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

BigNat rho_big(const BigNat& n, std::uint64_t& budget, std::mt19937_64& rng,
               std::uint64_t* iterations) {
  while (budget > 0) {
    const BigNat c = 1 + random_below(n - 1, rng);
    BigNat y = 1 + random_below(n - 1, rng);
    BigNat g = 1, q = 1, x = 0, ys = 0;
    std::uint64_t r = 1;
    while (g == 1 && budget > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r && budget > 0; ++i) {
        y = (y * y + c) % n;
        --budget;
        if (iterations) ++*iterations;
      }
      std::uint64_t k = 0;
      while (k < r && g == 1 && budget > 0) {
        ys = y;
        const std::uint64_t steps = std::min<std::uint64_t>(128, r - k);
        for (std::uint64_t i = 0; i < steps && budget > 0; ++i) {
          y = (y * y + c) % n;
          --budget;
          if (iterations) ++*iterations;
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = gcd_big(q, n);
        k += steps;
      }
      r *= 2;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd_big(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

bool certified_prime(const BigNat& m, unsigned rounds) {
  if (m <= kU64Max) return is_prime_u64(m.convert_to<std::uint64_t>());
  return is_probable_prime_big(m, rounds);
}

}  // namespace

BigNat IntFactorization::recombine() const {
  BigNat r = 1;
  for (const auto& pp : primes) r *= pow_big(pp.prime, pp.exponent);
  return r;
}

BudgetExceeded::BudgetExceeded(BigNat value, std::vector<PrimePower> partial, BigNat cofactor)
    : std::runtime_error("rho budget exceeded on composite " + cofactor.str() +
                         " while factoring " + value.str()),
      value_(std::move(value)),
      partial_(std::move(partial)),
      cofactor_(std::move(cofactor)) {}

CacheParseError::CacheParseError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

bool is_probable_prime(const BigNat& n, unsigned rounds) {
  if (n < 2) return false;
  if (n <= kU64Max) return is_prime_u64(n.convert_to<std::uint64_t>());
  if ((n & 1) == 0) return false;
  return is_probable_prime_big(n, rounds);
}

IntFactorization factorize(const BigNat& n, FactorCache* cache, const FactorOptions& opts) {
  if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
  if (cache) {
    if (auto hit = cache->find(n)) {
      if (opts.stats) ++opts.stats->cache_hits;
      return *hit;
    }
  }
  if (opts.stats) ++opts.stats->factored;

  std::map<BigNat, std::uint64_t> acc;
  std::vector<BigNat> work;  // composite (or unknown) chunks awaiting rho

  if (n <= kU64Max) {
    std::uint64_t m = n.convert_to<std::uint64_t>();
    for (std::uint32_t p : small_primes()) {
      if (std::uint64_t(p) * p > m) break;
      while (m % p == 0) {
        ++acc[BigNat(p)];
        m /= p;
      }
    }
    if (m > 1) {
      if (m < std::uint64_t(kTrialLimit) * kTrialLimit || is_prime_u64(m))
        ++acc[BigNat(m)];
      else
        work.push_back(BigNat(m));
    }
  } else {
    BigNat m = n;
    for (std::uint32_t p : small_primes()) {
      if (BigNat(p) * p > m) break;
      while (m % p == 0) {
        ++acc[BigNat(p)];
        m /= p;
      }
    }
    if (m > 1) {
      if (BigNat(kTrialLimit) * kTrialLimit > m || certified_prime(m, opts.mr_rounds))
        ++acc[m];
      else
        work.push_back(m);
    }
  }

  while (!work.empty()) {
    BigNat m = work.back();
    work.pop_back();
    if (m == 1) continue;
    if (certified_prime(m, opts.mr_rounds)) {
      ++acc[m];
      continue;
    }
    std::mt19937_64 rng(mix_seed(stable_hash(m), 0x72686f));
    std::uint64_t budget = opts.rho_budget;
    std::uint64_t* iters = opts.stats ? &opts.stats->rho_iterations : nullptr;
    BigNat f;
    if (m <= kU64Max)
      f = BigNat(rho_u64(m.convert_to<std::uint64_t>(), budget, rng, iters));
    else
      f = rho_big(m, budget, rng, iters);
    if (f == 0 || f == m) {
      // fold what remains: primes join the certified list, the rest the cofactor
      BigNat cof = m;
      for (const BigNat& rest : work) {
        if (rest == 1) continue;
        if (certified_prime(rest, opts.mr_rounds))
          ++acc[rest];
        else
          cof *= rest;
      }
      std::vector<PrimePower> partial;
      for (const auto& [p, e] : acc) partial.push_back({p, e});
      throw BudgetExceeded(n, std::move(partial), cof);
    }
    work.push_back(f);
    work.push_back(m / f);
  }

  IntFactorization out;
  out.value = n;
  for (const auto& [p, e] : acc) out.primes.push_back({p, e});
  if (out.recombine() != n)
    throw std::logic_error("factorize: recombination mismatch for " + n.str());
  if (cache) cache->store(out);
  return out;
}

BigNat gcd_big(const BigNat& a, const BigNat& b) {
  return boost::multiprecision::gcd(a, b);
}

BigNat lcm_big(const BigNat& a, const BigNat& b) {
  if (a == 0 && b == 0) throw std::invalid_argument("lcm_big: lcm(0, 0) is undefined");
  return boost::multiprecision::lcm(a, b);
}

std::string format_cache_line(const IntFactorization& f) {
  std::ostringstream os;
  os << f.value.str() << " =";
  bool first = true;
  for (const auto& pp : f.primes) {
    os << (first ? " " : " * ") << pp.prime.str();
    if (pp.exponent != 1) os << "^" << pp.exponent;
    first = false;
  }
  if (f.primes.empty()) os << " 1";  // the n = 1 entry
  return os.str();
}

namespace {

BigNat parse_nat(const std::string& tok, const std::string& line) {
  if (tok.empty()) throw std::invalid_argument("empty number in cache line: " + line);
  for (char c : tok)
    if (c < '0' || c > '9')
      throw std::invalid_argument("bad number '" + tok + "' in cache line: " + line);
  return BigNat(tok);
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IntFactorization parse_cache_line(const std::string& line) {
  const std::size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("missing '=' in cache line: " + line);
  IntFactorization f;
  f.value = parse_nat(trimmed(line.substr(0, eq)), line);
  std::string rhs = trimmed(line.substr(eq + 1));
  if (rhs.empty()) throw std::invalid_argument("empty factor list in cache line: " + line);
  if (rhs == "1") {
    if (f.value != 1)
      throw std::invalid_argument("recombination mismatch in cache line: " + line);
    return f;
  }
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    std::size_t star = rhs.find('*', pos);
    std::string tok = trimmed(star == std::string::npos ? rhs.substr(pos)
                                                        : rhs.substr(pos, star - pos));
    pos = star == std::string::npos ? std::string::npos : star + 1;
    PrimePower pp;
    const std::size_t caret = tok.find('^');
    if (caret == std::string::npos) {
      pp.prime = parse_nat(tok, line);
      pp.exponent = 1;
    } else {
      pp.prime = parse_nat(trimmed(tok.substr(0, caret)), line);
      BigNat e = parse_nat(trimmed(tok.substr(caret + 1)), line);
      if (e < 1 || e > kU64Max)
        throw std::invalid_argument("bad exponent in cache line: " + line);
      pp.exponent = e.convert_to<std::uint64_t>();
    }
    f.primes.push_back(std::move(pp));
  }
  validate_factorization(f);
  return f;
}

void validate_factorization(const IntFactorization& f, unsigned mr_rounds) {
  if (f.value < 1) throw std::invalid_argument("factorization value must be >= 1");
  const BigNat* prev = nullptr;
  for (const auto& pp : f.primes) {
    if (pp.exponent < 1) throw std::invalid_argument("factor exponent must be >= 1");
    if (prev && !(*prev < pp.prime))
      throw std::invalid_argument("factors must be strictly increasing");
    if (!is_probable_prime(pp.prime, mr_rounds))
      throw std::invalid_argument("factor " + pp.prime.str() + " is not prime");
    prev = &pp.prime;
  }
  if (f.recombine() != f.value)
    throw std::invalid_argument("factors do not recombine to " + f.value.str());
}

FactorCache::FactorCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // created on first store
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trimmed(line);
    if (body.empty() || body[0] == '#') continue;
    try {
      IntFactorization f = parse_cache_line(body);
      map_.emplace(f.value, std::move(f));
    } catch (const std::invalid_argument& e) {
      throw CacheParseError(path_, lineno, e.what());
    }
  }
}

std::optional<IntFactorization> FactorCache::find(const BigNat& n) const {
  std::lock_guard lock(mu_);
  auto it = map_.find(n);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void FactorCache::store(const IntFactorization& f) {
  validate_factorization(f);
  std::lock_guard lock(mu_);
  auto [it, inserted] = map_.emplace(f.value, f);
  if (inserted) append_locked(f);
}

void FactorCache::append_locked(const IntFactorization& f) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot write factor cache: " + path_);
  out << format_cache_line(f) << '\n';
}

void FactorCache::clear() {
  std::lock_guard lock(mu_);
  map_.clear();
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot truncate factor cache: " + path_);
  }
}

std::size_t FactorCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

std::vector<IntFactorization> FactorCache::entries() const {
  std::lock_guard lock(mu_);
  std::vector<IntFactorization> out;
  out.reserve(map_.size());
  for (const auto& [k, v] : map_) out.push_back(v);
  return out;
}

}  // namespace deltagraph
