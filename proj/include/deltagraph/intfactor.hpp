#pragma once

#include "deltagraph/bignat.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltagraph {

struct PrimePower {
  BigNat prime;
  std::uint64_t exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

struct IntFactorization {
  BigNat value;
  std::vector<PrimePower> primes;  // strictly increasing by prime, exponents >= 1

  BigNat recombine() const;

  bool operator==(const IntFactorization&) const = default;
};

// Thrown when the per-composite Pollard rho budget runs out. Carries the
// certified prime factors found so far and the product of everything left
// unfactored.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(BigNat value, std::vector<PrimePower> partial, BigNat cofactor);

  const BigNat& value() const { return value_; }
  const std::vector<PrimePower>& partial() const { return partial_; }
  const BigNat& cofactor() const { return cofactor_; }

 private:
  BigNat value_;
  std::vector<PrimePower> partial_;
  BigNat cofactor_;
};

class CacheParseError : public std::runtime_error {
 public:
  CacheParseError(const std::string& path, std::size_t line, const std::string& what);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct FactorStats {
  std::uint64_t cache_hits = 0;
  std::uint64_t factored = 0;  // values factored from scratch
  std::uint64_t rho_iterations = 0;
};

struct FactorOptions {
  std::uint64_t rho_budget = 100'000'000;  // rho iterations per composite
  unsigned mr_rounds = 40;                 // extra random witnesses past 2^64
  FactorStats* stats = nullptr;
};

// Deterministic (correct) for n < 2^64; Miller-Rabin with `rounds` random
// witnesses on top of a fixed witness set above that.
bool is_probable_prime(const BigNat& n, unsigned rounds = 40);

// Complete factorization of n >= 1. Trial division by primes below 1e5, then
// Pollard rho (Brent) on what remains. Consults and populates `cache` when
// given. Throws BudgetExceeded if some composite survives its rho budget.
IntFactorization factorize(const BigNat& n, class FactorCache* cache = nullptr,
                           const FactorOptions& opts = {});

BigNat gcd_big(const BigNat& a, const BigNat& b);
BigNat lcm_big(const BigNat& a, const BigNat& b);  // throws if both zero

// One entry per line: "N = p1^e1 * p2^e2 * ..." with "^1" omitted.
std::string format_cache_line(const IntFactorization& f);
IntFactorization parse_cache_line(const std::string& line);  // std::invalid_argument on bad input

// Persistent factorization table. File-backed when constructed with a path
// (loaded eagerly, appended on store), purely in-memory otherwise. Lines
// starting with '#' and blank lines are ignored on load; anything else that
// fails to parse or validate is a hard error naming the line.
class FactorCache {
 public:
  FactorCache() = default;
  explicit FactorCache(std::string path);

  std::optional<IntFactorization> find(const BigNat& n) const;
  void store(const IntFactorization& f);
  void clear();  // drops memory and truncates the backing file
  std::size_t size() const;
  std::vector<IntFactorization> entries() const;  // ascending by value
  const std::string& path() const { return path_; }

 private:
  void append_locked(const IntFactorization& f);

  mutable std::mutex mu_;
  std::map<BigNat, IntFactorization> map_;
  std::string path_;
};

// Validates primality of each factor, sortedness, and recombination.
// Throws std::invalid_argument describing the first violation.
void validate_factorization(const IntFactorization& f, unsigned mr_rounds = 40);

}  // namespace deltagraph
