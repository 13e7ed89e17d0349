#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace deltagraph {

// Exact non-negative integer. All arithmetic in this project is exact;
// nothing is ever rounded through floating point.
using BigNat = boost::multiprecision::cpp_int;

// base^exp, exact.
BigNat pow_big(const BigNat& base, std::uint64_t exp);

// FNV-1a over the decimal rendering; stable across platforms and runs.
std::uint64_t stable_hash(const BigNat& v);

// SplitMix-style combiner for deriving per-(q,n) RNG seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace deltagraph
