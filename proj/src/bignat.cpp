#include "deltagraph/bignat.hpp"

namespace deltagraph {

BigNat pow_big(const BigNat& base, std::uint64_t exp) {
  BigNat result = 1;
  BigNat b = base;
  while (exp != 0) {
    if (exp & 1) result *= b;
    exp >>= 1;
    if (exp != 0) b *= b;
  }
  return result;
}

std::uint64_t stable_hash(const BigNat& v) {
  const std::string s = v.str();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ull + b + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace deltagraph
