#pragma once

#include "deltagraph/decompose.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace deltagraph {

class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultOracleLimit = 1ull << 20;

// One-step difference map on a cyclic sequence: out_i = seq_{i+1} - seq_i mod q
// with the index wrapping. Entries must already be reduced mod q.
std::vector<std::uint32_t> delta_step(const std::vector<std::uint32_t>& seq, std::uint64_t q);

// The full functional graph on all q^n sequences. States are indexed by the
// little-endian base-q encoding: digit i of the index is position i.
struct StateGraph {
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::vector<std::uint32_t> successor;
};

StateGraph build_state_graph(std::uint64_t q, std::uint64_t n,
                             std::uint64_t limit = kDefaultOracleLimit);

struct TreeReport {
  std::uint64_t height = 0;     // measured, common to every tree
  BigNat tree_size;             // measured, common to every tree
  std::vector<std::uint8_t> on_cycle;  // per state
};

struct OracleResult {
  Decomposition decomposition;
  StateGraph graph;
  TreeReport trees;
};

// Brute-force ground truth: builds the graph, walks out every cycle, and
// measures the attached trees. Throws LimitExceeded when q^n > limit.
OracleResult enumerate_graph(std::uint64_t q, std::uint64_t n,
                             std::uint64_t limit = kDefaultOracleLimit);

struct TreeViolation {
  std::uint64_t vertex = 0;
  std::string reason;
};

// Structural checks against an expected height h: every non-cycle vertex has
// in-degree 0 or q, every cycle vertex hangs a tree of exactly q^h vertices
// and height exactly h, cycle vertices have q - 1 tree predecessors plus one
// cycle predecessor. Reports the first violation when given somewhere to.
bool verify_trees(const StateGraph& g, std::uint64_t expected_height,
                  TreeViolation* violation = nullptr);

// one "i -> j" line per edge
void write_edge_list(const StateGraph& g, std::ostream& os);
// GraphViz digraph; refuses graphs with more than 4096 states
void write_dot(const StateGraph& g, std::ostream& os);

}  // namespace deltagraph
