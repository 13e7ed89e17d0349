#include "deltagraph/osum.hpp"

#include <sstream>

namespace deltagraph {

CycleSum CycleSum::single(const BigNat& m, const BigNat& c) {
  CycleSum s;
  s.add_term(m, c);
  return s;
}

void CycleSum::add_term(const BigNat& m, const BigNat& c) {
  if (m < 1) throw std::invalid_argument("CycleSum: cycle length must be >= 1");
  if (c < 0) throw std::invalid_argument("CycleSum: coefficient must be >= 0");
  if (c == 0) return;
  terms_[m] += c;
}

BigNat CycleSum::coeff(const BigNat& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? BigNat(0) : it->second;
}

BigNat CycleSum::total() const {
  BigNat t = 0;
  for (const auto& [m, c] : terms_) t += c;
  return t;
}

BigNat CycleSum::mass() const {
  BigNat t = 0;
  for (const auto& [m, c] : terms_) t += c * m;
  return t;
}

CycleSum add(const CycleSum& a, const CycleSum& b) {
  CycleSum out = a;
  for (const auto& [m, c] : b.terms()) out.add_term(m, c);
  return out;
}

CycleSum mul(const CycleSum& a, const CycleSum& b) {
  CycleSum out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      // gcd(a,b) lcm(a,b) = ab, so each pair contributes ca*cb*gcd cycles
      const BigNat g = gcd_big(ma, mb);
      out.add_term((ma / g) * mb, ca * cb * g);
    }
  }
  return out;
}

CycleSum product_all(const std::vector<CycleSum>& factors) {
  CycleSum out = CycleSum::one();
  for (const CycleSum& f : factors) out = mul(out, f);
  return out;
}

CycleSum factor_contribution(const Poly& f, std::uint64_t d, std::uint64_t e,
                             FactorCache* cache, const FactorOptions& opts,
                             std::vector<LevelOrder>* collect) {
  if (e < 1) throw std::invalid_argument("factor_contribution: multiplicity must be >= 1");
  CycleSum out = CycleSum::one();
  for (std::uint64_t j = 1; j <= e; ++j) {
    LevelOrder lo = unit_order(f, d, j, cache, opts);
    out.add_term(lo.order, lo.count);
    if (collect) collect->push_back(lo);
  }
  // the contribution enumerates F_q[x]/(f^e), so its mass is q^{d e}
  if (out.mass() != pow_big(BigNat(f.field().q()), d * e))
    throw std::logic_error("factor_contribution: mass mismatch for " + to_string(f));
  return out;
}

std::string to_string(const CycleSum& s) {
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : s.terms()) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c.str() << " ";
    os << "o[" << m.str() << "]";
  }
  return os.str();
}

}  // namespace deltagraph
