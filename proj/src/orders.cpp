#include "deltagraph/orders.hpp"

namespace deltagraph {

namespace {

void check_args(const Poly& f, std::uint64_t d, std::uint64_t j) {
  if (j < 1) throw std::invalid_argument("unit_order: level j must be >= 1");
  if (f.is_zero() || f.degree() < 1 || static_cast<std::uint64_t>(f.degree()) != d)
    throw std::invalid_argument("unit_order: degree mismatch");
  if (f == Poly::x_minus_one(f.field()))
    throw NotInvertible("unit_order: x - 1 is not a unit modulo powers of itself");
}

// factorization of group_size = q^{d(j-1)} (q^d - 1); q never divides q^d - 1
IntFactorization group_size_factors(std::uint64_t q, std::uint64_t d, std::uint64_t j,
                                    FactorCache* cache, const FactorOptions& opts) {
  const BigNat qd1 = pow_big(BigNat(q), d) - 1;
  IntFactorization base = factorize(qd1, cache, opts);
  IntFactorization out;
  out.value = pow_big(BigNat(q), d * (j - 1)) * qd1;
  out.primes = base.primes;
  if (j > 1) {
    PrimePower qp{BigNat(q), d * (j - 1)};
    auto it = out.primes.begin();
    while (it != out.primes.end() && it->prime < qp.prime) ++it;
    out.primes.insert(it, std::move(qp));
  }
  return out;
}

}  // namespace

LevelOrder unit_order(const Poly& f, std::uint64_t d, std::uint64_t j, FactorCache* cache,
                      const FactorOptions& opts) {
  check_args(f, d, j);
  const PrimeField field = f.field();
  const IntFactorization m = group_size_factors(field.q(), d, j, cache, opts);

  const Poly modulus = poly_pow(make_monic(f), j);
  const Poly base = Poly::x_minus_one(field);
  const Poly one = Poly::one(field);

  BigNat order = m.value;
  for (const auto& pp : m.primes) {
    for (std::uint64_t i = 0; i < pp.exponent; ++i) {
      const BigNat reduced = order / pp.prime;
      if (poly_powmod(base, reduced, modulus) == one)
        order = reduced;
      else
        break;
    }
  }
  if (poly_powmod(base, order, modulus) != one)
    throw std::logic_error("unit_order: computed order fails its own certificate");

  LevelOrder lo{make_monic(f), d, j, m.value, order, m.value / order};
  if (lo.count * order != m.value)
    throw std::logic_error("unit_order: order does not divide the group size");
  return lo;
}

bool check_order_certificate(const LevelOrder& lo, FactorCache* cache,
                             const FactorOptions& opts) {
  const PrimeField field = lo.f.field();
  if (lo.f == Poly::x_minus_one(field)) return false;
  const IntFactorization m = group_size_factors(field.q(), lo.degree, lo.level, cache, opts);
  if (m.value != lo.group_size) return false;
  if (lo.order < 1 || m.value % lo.order != 0) return false;
  if (lo.count * lo.order != lo.group_size) return false;

  const Poly modulus = poly_pow(lo.f, lo.level);
  const Poly base = Poly::x_minus_one(field);
  const Poly one = Poly::one(field);
  if (poly_powmod(base, lo.order, modulus) != one) return false;
  // minimality: stepping down by any prime of the order must leave 1
  for (const auto& pp : m.primes) {
    if (lo.order % pp.prime != 0) continue;
    if (poly_powmod(base, lo.order / pp.prime, modulus) == one) return false;
  }
  return true;
}

}  // namespace deltagraph
