#pragma once

#include "deltagraph/bignat.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deltagraph {

class FieldMismatch : public std::invalid_argument {
 public:
  FieldMismatch() : std::invalid_argument("operands live in different prime fields") {}
};

// F_q for prime q < 2^31. Elements are least non-negative residues.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t(a) * b) % q_);
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t inv(std::uint32_t a) const;  // throws on a == 0

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t q_;
};

// Dense polynomial over F_q, coefficients in ascending degree order with no
// trailing zeros. The zero polynomial has an empty coefficient list.
class Poly {
 public:
  explicit Poly(PrimeField field) : field_(field) {}
  Poly(PrimeField field, std::vector<std::uint32_t> coeffs);

  static Poly one(PrimeField field) { return Poly(field, {1}); }
  static Poly monomial(PrimeField field, std::uint64_t degree, std::uint32_t coeff = 1);
  static Poly x_minus_one(PrimeField field);

  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial
  std::int64_t degree() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
  std::uint32_t coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
  std::uint32_t leading() const;
  const std::vector<std::uint32_t>& coeffs() const { return coeffs_; }
  const PrimeField& field() const { return field_; }

  bool operator==(const Poly&) const = default;

 private:
  PrimeField field_;
  std::vector<std::uint32_t> coeffs_;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
// quotient and remainder; throws std::domain_error when m is zero
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& m);
Poly poly_rem(const Poly& a, const Poly& m);
// base^e mod m by square-and-multiply; e is arbitrary-precision
Poly poly_powmod(const Poly& base, const BigNat& e, const Poly& m);
// unreduced power, small exponents only
Poly poly_pow(const Poly& base, std::uint64_t e);
// monic gcd; gcd(0, 0) is an error
Poly poly_gcd(const Poly& a, const Poly& b);
Poly make_monic(const Poly& a);

// "2 + 2*x + x^2 + 2*x^3 + x^5"; zero terms omitted, zero polynomial is "0"
std::string to_string(const Poly& p);
Poly parse_poly(const std::string& text, PrimeField field);

// Sizes of the orbits of multiplication by q on (Z/n') \ {0}; requires
// gcd(n', q) = 1. Sorted ascending. These are the degrees of the irreducible
// factors of (x^n' - 1)/(x - 1) over F_q.
std::vector<std::uint64_t> cyclotomic_cosets(std::uint64_t n_prime, std::uint64_t q);

struct CyclicFactor {
  Poly f;  // monic irreducible, distinct from x - 1
  std::uint64_t degree = 0;
  std::uint64_t multiplicity = 0;
};

struct FactorizationOfCyclic {
  std::uint64_t n = 0;
  std::uint64_t h = 0;  // q^{v_q(n)}; the (x - 1) part appears as (x - 1)^h
  std::vector<CyclicFactor> factors;  // sorted by (degree, coefficient list)
};

// Full factorization of x^n - 1 over F_q: peels off (x - 1)^h, then splits the
// remaining squarefree part by distinct-degree + equal-degree factorization.
// Every returned factor carries multiplicity h. Factors are certified
// irreducible and their degree multiset is checked against cyclotomic_cosets.
FactorizationOfCyclic factor_cyclic(std::uint64_t n, PrimeField field,
                                    std::optional<std::uint64_t> seed = std::nullopt);

// Rabin's criterion, complete test
bool is_irreducible(const Poly& f);

// x^n - 1
Poly cyclic_poly(std::uint64_t n, PrimeField field);

}  // namespace deltagraph
