#pragma once

#include "deltagraph/osum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace deltagraph {

struct ComponentClass {
  BigNat cycle_len;  // m: the component is a cycle of length m with trees attached
  BigNat count;

  bool operator==(const ComponentClass&) const = default;
};

// Connected components of the difference map on length-n cyclic sequences
// over F_q: `count` components of shape (O_m * T_{q^h}) per entry.
struct Decomposition {
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::uint64_t h = 0;   // common tree height
  BigNat tree_size;      // q^h
  std::vector<ComponentClass> components;  // descending cycle_len
  BigNat total_components;

  bool operator==(const Decomposition&) const = default;
};

struct DecomposeOptions {
  FactorCache* cache = nullptr;
  FactorOptions factor;
  std::optional<std::uint64_t> seed;  // extra entropy for the polynomial splitter
  std::vector<LevelOrder>* collect_orders = nullptr;
};

// Exact decomposition via factorization of x^n - 1 and unit orders. Verifies
// the vertex-count identities internally before returning.
Decomposition decompose(std::uint64_t q, std::uint64_t n, const DecomposeOptions& opts = {});

BigNat total_components(const Decomposition& d);

enum class OutputFormat { text, json, csv };

// "9(O_7*T_2)+(O_1*T_2)": descending m, unit counts omitted
std::string render(const Decomposition& d);
// inverse of render; needs q and n to rebuild the context
Decomposition parse_components(const std::string& expr, std::uint64_t q, std::uint64_t n);

// One computed table row. `result` is absent when the factor budget ran out,
// in which case status is "incomplete" and blocking_composite names the value
// that could not be factored; no partial decomposition is ever reported.
struct RowReport {
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::optional<Decomposition> result;
  std::string status = "ok";  // "ok" | "incomplete"
  BigNat blocking_composite;  // meaningful when status == "incomplete"
  std::uint64_t timing_ms = 0;
  std::uint64_t cache_hits = 0;
  unsigned mr_rounds = 0;
};

RowReport decompose_row(std::uint64_t q, std::uint64_t n, const DecomposeOptions& opts = {});

// "7 | 10 | 9(O_7*T_2)+(O_1*T_2)"
std::string render_row_text(const RowReport& r);
// inverse of render_row_text for complete rows; q must be supplied
Decomposition parse_row_text(const std::string& line, std::uint64_t q);
// JSON object with every numeric value as a decimal string
std::string render_row_json(const RowReport& r);
// header "q,n,h,tree_size,m,count", then one line per component class
std::string csv_header();
std::string render_row_csv(const RowReport& r);

}  // namespace deltagraph
