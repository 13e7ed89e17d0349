#pragma once

#include "deltagraph/bignat.hpp"
#include "deltagraph/orders.hpp"

#include <map>
#include <string>
#include <vector>

namespace deltagraph {

// Formal non-negative combination sum_m c_m o[m] of cycle classes: o[m] means
// one cycle of length m, c_m counts how many. Multiplication follows the
// cycle product rule o[a] o[b] = gcd(a, b) o[lcm(a, b)], extended bilinearly.
class CycleSum {
 public:
  CycleSum() = default;  // additive zero, no terms

  static CycleSum one() { return single(1, 1); }  // multiplicative identity
  static CycleSum single(const BigNat& m, const BigNat& c);

  void add_term(const BigNat& m, const BigNat& c);
  const std::map<BigNat, BigNat>& terms() const { return terms_; }
  BigNat coeff(const BigNat& m) const;
  bool empty() const { return terms_.empty(); }
  BigNat total() const;  // sum of coefficients: number of cycles
  BigNat mass() const;   // sum of c*m: number of cycle vertices

  bool operator==(const CycleSum&) const = default;

 private:
  std::map<BigNat, BigNat> terms_;
};

CycleSum add(const CycleSum& a, const CycleSum& b);
CycleSum mul(const CycleSum& a, const CycleSum& b);
// product over all entries; empty input gives one()
CycleSum product_all(const std::vector<CycleSum>& factors);

// The cycle classes contributed by one irreducible factor f (degree d,
// f != x - 1) appearing with multiplicity e: o[1] plus, for each level
// j = 1..e, count_j copies of o[order_j] from unit_order(f, d, j).
// Appends each LevelOrder to *collect when given.
CycleSum factor_contribution(const Poly& f, std::uint64_t d, std::uint64_t e,
                             FactorCache* cache = nullptr, const FactorOptions& opts = {},
                             std::vector<LevelOrder>* collect = nullptr);

// "o[1] + 2 o[121] + 243 o[242]"; ascending m, unit coefficients omitted
std::string to_string(const CycleSum& s);

}  // namespace deltagraph
