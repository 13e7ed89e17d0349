#pragma once

#include "deltagraph/gfpoly.hpp"
#include "deltagraph/intfactor.hpp"

#include <stdexcept>

namespace deltagraph {

class NotInvertible : public std::invalid_argument {
 public:
  explicit NotInvertible(const std::string& what) : std::invalid_argument(what) {}
};

// Order data for x - 1 in the unit group of F_q[x]/(f^j), f irreducible of
// degree d, f != x - 1. group_size = q^{d(j-1)} (q^d - 1) and count is the
// number of elements the level contributes per cycle, group_size / order.
struct LevelOrder {
  Poly f;
  std::uint64_t degree = 0;
  std::uint64_t level = 0;  // j
  BigNat group_size;
  BigNat order;
  BigNat count;
};

// Computes the multiplicative order of x - 1 modulo f^j by prime-by-prime
// exponent reduction from group_size. Throws NotInvertible when f = x - 1.
LevelOrder unit_order(const Poly& f, std::uint64_t d, std::uint64_t j,
                      FactorCache* cache = nullptr, const FactorOptions& opts = {});

// Re-derives the minimality certificate: (x-1)^order = 1 mod f^j and
// (x-1)^(order/p) != 1 for every prime p | order. Also recomputes group_size.
bool check_order_certificate(const LevelOrder& lo, FactorCache* cache = nullptr,
                             const FactorOptions& opts = {});

}  // namespace deltagraph
