#include "deltagraph/gfpoly.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace deltagraph {

namespace {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_divisors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

void check_same_field(const Poly& a, const Poly& b) {
  if (!(a.field() == b.field())) throw FieldMismatch();
}

}  // namespace

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= (1u << 31) || !is_prime_u32(q))
    throw std::invalid_argument("PrimeField: q must be a prime below 2^31, got " +
                                std::to_string(q));
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  a %= q_;
  if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  return static_cast<std::uint32_t>(t < 0 ? t + q_ : t);
}

Poly::Poly(PrimeField field, std::vector<std::uint32_t> coeffs)
    : field_(field), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= field_.q();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::monomial(PrimeField field, std::uint64_t degree, std::uint32_t coeff) {
  if (coeff % field.q() == 0) return Poly(field);
  std::vector<std::uint32_t> c(degree + 1, 0);
  c[degree] = coeff % field.q();
  return Poly(field, std::move(c));
}

Poly Poly::x_minus_one(PrimeField field) {
  return Poly(field, {field.q() - 1, 1});
}

std::uint32_t Poly::leading() const {
  if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
  return coeffs_.back();
}

Poly poly_add(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const PrimeField& f = a.field();
  std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a.coeff(i), b.coeff(i));
  return Poly(f, std::move(c));
}

Poly poly_sub(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const PrimeField& f = a.field();
  std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sub(a.coeff(i), b.coeff(i));
  return Poly(f, std::move(c));
}

Poly poly_mul(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  const PrimeField& f = a.field();
  if (a.is_zero() || b.is_zero()) return Poly(f);
  const std::uint64_t q = f.q();
  std::vector<std::uint64_t> acc(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    const std::uint64_t ai = a.coeffs()[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      acc[i + j] = (acc[i + j] + ai * b.coeffs()[j]) % q;
    }
  }
  std::vector<std::uint32_t> c(acc.begin(), acc.end());
  return Poly(f, std::move(c));
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& m) {
  check_same_field(a, m);
  const PrimeField& f = a.field();
  if (m.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < m.degree()) return {Poly(f), a};
  const std::uint32_t lead_inv = f.inv(m.leading());
  std::vector<std::uint32_t> rem(a.coeffs());
  std::vector<std::uint32_t> quot(a.coeffs().size() - m.coeffs().size() + 1, 0);
  const std::size_t dm = m.coeffs().size() - 1;
  for (std::size_t i = rem.size(); i-- > dm;) {
    const std::uint32_t c = f.mul(rem[i], lead_inv);
    if (c == 0) continue;
    quot[i - dm] = c;
    for (std::size_t j = 0; j <= dm; ++j)
      rem[i - dm + j] = f.sub(rem[i - dm + j], f.mul(c, m.coeffs()[j]));
  }
  rem.resize(dm);
  return {Poly(f, std::move(quot)), Poly(f, std::move(rem))};
}

Poly poly_rem(const Poly& a, const Poly& m) { return poly_divmod(a, m).second; }

Poly poly_powmod(const Poly& base, const BigNat& e, const Poly& m) {
  check_same_field(base, m);
  if (m.is_zero()) throw std::domain_error("polynomial division by zero");
  if (e < 0) throw std::invalid_argument("poly_powmod: negative exponent");
  Poly result = poly_rem(Poly::one(base.field()), m);
  Poly b = poly_rem(base, m);
  if (e == 0) return result;
  const std::size_t bits = boost::multiprecision::msb(e) + 1;
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_rem(poly_mul(result, result), m);
    if (boost::multiprecision::bit_test(e, static_cast<unsigned>(i)))
      result = poly_rem(poly_mul(result, b), m);
  }
  return result;
}

Poly poly_pow(const Poly& base, std::uint64_t e) {
  Poly result = Poly::one(base.field());
  Poly b = base;
  while (e != 0) {
    if (e & 1) result = poly_mul(result, b);
    e >>= 1;
    if (e != 0) b = poly_mul(b, b);
  }
  return result;
}

Poly make_monic(const Poly& a) {
  if (a.is_zero()) throw std::domain_error("cannot make zero polynomial monic");
  if (a.leading() == 1) return a;
  const PrimeField& f = a.field();
  const std::uint32_t s = f.inv(a.leading());
  std::vector<std::uint32_t> c(a.coeffs());
  for (auto& v : c) v = f.mul(v, s);
  return Poly(f, std::move(c));
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  check_same_field(a, b);
  if (a.is_zero() && b.is_zero())
    throw std::invalid_argument("poly_gcd: gcd of two zero polynomials");
  Poly r0 = a, r1 = b;
  while (!r1.is_zero()) {
    Poly r2 = poly_rem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r2);
  }
  return make_monic(r0);
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const std::uint32_t c = p.coeffs()[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

namespace {

void parse_term(const std::string& term, PrimeField field,
                std::vector<std::pair<std::uint64_t, std::uint32_t>>& out) {
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < term.size() && std::isspace(static_cast<unsigned char>(term[i]))) ++i;
  };
  const auto read_number = [&]() -> std::uint64_t {
    std::size_t start = i;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    if (start == i) throw std::invalid_argument("expected number in term '" + term + "'");
    return std::stoull(term.substr(start, i - start));
  };
  skip_ws();
  if (i == term.size()) throw std::invalid_argument("empty term in polynomial");
  std::uint64_t coeff = 1;
  bool saw_coeff = false;
  if (std::isdigit(static_cast<unsigned char>(term[i]))) {
    coeff = read_number();
    saw_coeff = true;
    skip_ws();
    if (i < term.size() && term[i] == '*') {
      ++i;
      skip_ws();
    }
  }
  std::uint64_t deg = 0;
  if (i < term.size() && term[i] == 'x') {
    ++i;
    deg = 1;
    skip_ws();
    if (i < term.size() && term[i] == '^') {
      ++i;
      skip_ws();
      deg = read_number();
      skip_ws();
    }
  } else if (!saw_coeff) {
    throw std::invalid_argument("bad term '" + term + "' in polynomial");
  }
  skip_ws();
  if (i != term.size())
    throw std::invalid_argument("trailing characters in term '" + term + "'");
  out.emplace_back(deg, static_cast<std::uint32_t>(coeff % field.q()));
}

}  // namespace

Poly parse_poly(const std::string& text, PrimeField field) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> terms;
  std::size_t pos = 0;
  bool any = false;
  while (pos <= text.size()) {
    std::size_t plus = text.find('+', pos);
    const std::string term =
        plus == std::string::npos ? text.substr(pos) : text.substr(pos, plus - pos);
    parse_term(term, field, terms);
    any = true;
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  if (!any) throw std::invalid_argument("empty polynomial text");
  std::uint64_t max_deg = 0;
  for (const auto& [d, c] : terms) max_deg = std::max(max_deg, d);
  std::vector<std::uint32_t> coeffs(max_deg + 1, 0);
  for (const auto& [d, c] : terms) coeffs[d] = field.add(coeffs[d], c);
  return Poly(field, std::move(coeffs));
}

std::vector<std::uint64_t> cyclotomic_cosets(std::uint64_t n_prime, std::uint64_t q) {
  if (n_prime == 0) throw std::invalid_argument("cyclotomic_cosets: n' must be >= 1");
  if (std::gcd(n_prime, q) != 1)
    throw std::invalid_argument("cyclotomic_cosets: requires gcd(n', q) = 1");
  std::vector<std::uint64_t> sizes;
  std::vector<bool> seen(n_prime, false);
  for (std::uint64_t r = 1; r < n_prime; ++r) {
    if (seen[r]) continue;
    std::uint64_t size = 0;
    std::uint64_t cur = r;
    do {
      seen[cur] = true;
      ++size;
      cur = static_cast<std::uint64_t>((static_cast<unsigned __int128>(cur) * q) % n_prime);
    } while (cur != r);
    sizes.push_back(size);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

Poly cyclic_poly(std::uint64_t n, PrimeField field) {
  if (n == 0) throw std::invalid_argument("cyclic_poly: n must be >= 1");
  std::vector<std::uint32_t> c(n + 1, 0);
  c[0] = field.q() - 1;
  c[n] = field.add(c[n], 1);  // n could collide with 0 only if n = 0
  return Poly(field, std::move(c));
}

namespace {

Poly random_poly_below(PrimeField field, std::int64_t degree_bound, std::mt19937_64& rng) {
  // uniform polynomial of degree < degree_bound
  std::uniform_int_distribution<std::uint32_t> dist(0, field.q() - 1);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(degree_bound));
  for (auto& v : c) v = dist(rng);
  return Poly(field, std::move(c));
}

Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = poly_divmod(a, b);
  if (!r.is_zero()) throw std::logic_error("exact_div: division was not exact");
  return q;
}

// Cantor-Zassenhaus split of a monic product of irreducibles all of degree d.
void equal_degree_split(const Poly& g, std::uint64_t d, std::mt19937_64& rng,
                        std::vector<Poly>& out) {
  if (static_cast<std::uint64_t>(g.degree()) == d) {
    out.push_back(g);
    return;
  }
  const PrimeField field = g.field();
  const std::uint64_t q = field.q();
  for (;;) {
    Poly a = random_poly_below(field, g.degree(), rng);
    if (a.is_zero()) continue;
    Poly b(field);
    if (q == 2) {
      // trace map of a over F_{2^d}
      Poly t = poly_rem(a, g);
      b = t;
      for (std::uint64_t i = 1; i < d; ++i) {
        t = poly_rem(poly_mul(t, t), g);
        b = poly_add(b, t);
      }
    } else {
      const BigNat e = (pow_big(BigNat(q), d) - 1) / 2;
      b = poly_sub(poly_powmod(a, e, g), Poly::one(field));
    }
    if (b.is_zero()) continue;
    Poly s = poly_gcd(b, g);
    if (s.degree() > 0 && s.degree() < g.degree()) {
      equal_degree_split(s, d, rng, out);
      equal_degree_split(make_monic(exact_div(g, s)), d, rng, out);
      return;
    }
  }
}

// Distinct-degree factorization of a monic squarefree f with no root at 1.
std::vector<Poly> factor_squarefree(Poly f, std::mt19937_64& rng) {
  const PrimeField field = f.field();
  std::vector<Poly> out;
  const Poly x = Poly::monomial(field, 1);
  Poly xq = poly_rem(x, f);  // x^{q^d} mod f, advanced each round
  for (std::uint64_t d = 1; f.degree() > 0 && 2 * d <= static_cast<std::uint64_t>(f.degree());
       ++d) {
    xq = poly_powmod(xq, BigNat(field.q()), f);
    Poly g = poly_gcd(poly_sub(xq, poly_rem(x, f)), f);
    if (g.degree() > 0) {
      equal_degree_split(g, d, rng, out);
      f = make_monic(exact_div(f, g));
      xq = poly_rem(xq, f);
    }
  }
  if (f.degree() > 0) out.push_back(f);
  return out;
}

}  // namespace

bool is_irreducible(const Poly& f0) {
  if (f0.is_zero() || f0.degree() < 1) return false;
  const Poly f = make_monic(f0);
  const std::uint64_t d = static_cast<std::uint64_t>(f.degree());
  if (d == 1) return true;
  const PrimeField field = f.field();
  const Poly x = Poly::monomial(field, 1);
  const Poly xmod = poly_rem(x, f);
  const auto divisors = prime_divisors_u64(d);
  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t r : divisors) checkpoints.push_back(d / r);
  Poly xq = xmod;
  for (std::uint64_t k = 1; k <= d; ++k) {
    xq = poly_powmod(xq, BigNat(field.q()), f);
    if (std::find(checkpoints.begin(), checkpoints.end(), k) != checkpoints.end()) {
      // x^{q^{d/r}} - x must be coprime to f for every prime r | d
      Poly g = poly_gcd(poly_sub(xq, xmod), f);
      if (g.degree() != 0) return false;
    }
  }
  return xq == xmod;  // x^{q^d} = x (mod f)
}

FactorizationOfCyclic factor_cyclic(std::uint64_t n, PrimeField field,
                                    std::optional<std::uint64_t> seed) {
  if (n == 0) throw std::invalid_argument("factor_cyclic: n must be >= 1");
  const std::uint64_t q = field.q();
  std::uint64_t h = 1, n_prime = n;
  while (n_prime % q == 0) {
    n_prime /= q;
    h *= q;
  }
  FactorizationOfCyclic out{n, h, {}};
  if (n_prime == 1) return out;  // x^n - 1 = (x - 1)^n

  // (x^{n'} - 1)/(x - 1) = 1 + x + ... + x^{n'-1}, squarefree since gcd(n', q) = 1
  Poly f(field, std::vector<std::uint32_t>(n_prime, 1));
  std::mt19937_64 rng(seed.value_or(mix_seed(q, n)));
  std::vector<Poly> irreducibles = factor_squarefree(std::move(f), rng);

  std::sort(irreducibles.begin(), irreducibles.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.coeffs() < b.coeffs();
  });
  for (Poly& p : irreducibles) {
    const std::uint64_t d = static_cast<std::uint64_t>(p.degree());
    out.factors.push_back({std::move(p), d, h});
  }

  // degree multiset must match the cyclotomic coset sizes
  std::vector<std::uint64_t> degrees;
  for (const auto& cf : out.factors) degrees.push_back(cf.degree);
  std::sort(degrees.begin(), degrees.end());
  if (degrees != cyclotomic_cosets(n_prime, q))
    throw std::logic_error("factor_cyclic: factor degrees disagree with cyclotomic cosets");
  for (const auto& cf : out.factors)
    if (!is_irreducible(cf.f))
      throw std::logic_error("factor_cyclic: reducible factor " + to_string(cf.f));
  return out;
}

}  // namespace deltagraph
