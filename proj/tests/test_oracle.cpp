#include "deltagraph/oracle.hpp"

#include <doctest.h>

#include <sstream>

using namespace deltagraph;

namespace {

std::vector<ComponentClass> comps(std::initializer_list<std::pair<int, long long>> pairs) {
  std::vector<ComponentClass> out;
  for (const auto& [m, c] : pairs) out.push_back({BigNat(m), BigNat(c)});
  return out;
}

}  // namespace

TEST_CASE("delta_step") {
  CHECK(delta_step({1, 2}, 3) == std::vector<std::uint32_t>{1, 2});  // a fixed point
  CHECK(delta_step({0, 0}, 3) == std::vector<std::uint32_t>{0, 0});
  CHECK(delta_step({1, 0, 0}, 2) == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(delta_step({2}, 5) == std::vector<std::uint32_t>{0});  // n = 1 collapses
  CHECK_THROWS_AS(delta_step({}, 2), std::invalid_argument);
  CHECK_THROWS_AS(delta_step({2, 0}, 2), std::invalid_argument);  // entry out of range
  CHECK_THROWS_AS(delta_step({0, 0}, 1), std::invalid_argument);
}

TEST_CASE("state graph layout") {
  const StateGraph g = build_state_graph(2, 2);
  CHECK(g.successor == std::vector<std::uint32_t>{0, 3, 3, 0});
  const StateGraph g1 = build_state_graph(2, 1);
  CHECK(g1.successor == std::vector<std::uint32_t>{0, 0});
}

TEST_CASE("enumerate_graph on hand-checkable sizes") {
  SUBCASE("q=2 n=3") {
    const OracleResult r = enumerate_graph(2, 3);
    CHECK(r.decomposition.h == 1);
    CHECK(r.decomposition.tree_size == 2);
    CHECK(r.decomposition.components == comps({{3, 1}, {1, 1}}));
    CHECK(r.decomposition.total_components == 2);
  }
  SUBCASE("q=2 n=6") {
    const OracleResult r = enumerate_graph(2, 6);
    CHECK(r.decomposition.h == 2);
    CHECK(r.decomposition.tree_size == 4);
    CHECK(r.decomposition.components == comps({{6, 2}, {3, 1}, {1, 1}}));
  }
  SUBCASE("q=3 n=5") {
    const OracleResult r = enumerate_graph(3, 5);
    CHECK(r.decomposition.components == comps({{80, 1}, {1, 1}}));
  }
  SUBCASE("q=3 n=2") {
    const OracleResult r = enumerate_graph(3, 2);
    CHECK(r.decomposition.h == 1);
    CHECK(r.decomposition.tree_size == 3);
    CHECK(r.decomposition.components == comps({{1, 3}}));
  }
  SUBCASE("q=2 n=4 is one giant tree on a fixed point") {
    const OracleResult r = enumerate_graph(2, 4);
    CHECK(r.decomposition.h == 4);
    CHECK(r.decomposition.tree_size == 16);
    CHECK(r.decomposition.components == comps({{1, 1}}));
    CHECK(r.trees.height == 4);
  }
}

TEST_CASE("verify_trees accepts the real graph and rejects wrong heights") {
  const OracleResult r = enumerate_graph(2, 6);
  CHECK(verify_trees(r.graph, 2));
  TreeViolation v;
  CHECK_FALSE(verify_trees(r.graph, 3, &v));
  CHECK_FALSE(v.reason.empty());
}

TEST_CASE("every vertex has in-degree 0 or q") {
  for (auto [q, nmax] : std::initializer_list<std::pair<std::uint64_t, std::uint64_t>>{
           {2, 10}, {3, 7}, {5, 4}, {7, 3}}) {
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      const StateGraph g = build_state_graph(q, n);
      std::vector<std::uint64_t> indeg(g.successor.size(), 0);
      for (std::uint32_t to : g.successor) ++indeg[to];
      std::uint64_t bad = 0;
      for (std::uint64_t d : indeg)
        if (d != 0 && d != q) ++bad;
      CHECK_MESSAGE(bad == 0, "q=", q, " n=", n);
    }
  }
}

TEST_CASE("oracle trees are uniform and verified across a sweep") {
  for (auto [q, nmax] : std::initializer_list<std::pair<std::uint64_t, std::uint64_t>>{
           {2, 12}, {3, 8}, {5, 5}, {7, 3}}) {
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      const OracleResult r = enumerate_graph(q, n);
      CHECK(verify_trees(r.graph, r.trees.height));
      CHECK(r.trees.tree_size == pow_big(BigNat(q), r.trees.height));
    }
  }
}

TEST_CASE("measured decompositions match the computed ones on small cases") {
  for (auto [q, nmax] : std::initializer_list<std::pair<std::uint64_t, std::uint64_t>>{
           {2, 12}, {3, 8}}) {
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      const Decomposition predicted = decompose(q, n);
      const OracleResult measured = enumerate_graph(q, n);
      CHECK(measured.decomposition == predicted);
    }
  }
}

TEST_CASE("state limits") {
  CHECK_THROWS_AS(enumerate_graph(2, 25), LimitExceeded);  // 2^25 > 2^20
  CHECK_THROWS_AS(build_state_graph(3, 13), LimitExceeded);
  CHECK(build_state_graph(2, 21, 1ull << 21).successor.size() == (1ull << 21));
  CHECK_THROWS_AS(build_state_graph(2, 1, 1), LimitExceeded);
}

TEST_CASE("edge list and dot export") {
  const StateGraph g = build_state_graph(2, 2);
  std::ostringstream edges;
  write_edge_list(g, edges);
  CHECK(edges.str() == "0 -> 0\n1 -> 3\n2 -> 3\n3 -> 0\n");

  std::ostringstream dot;
  write_dot(g, dot);
  CHECK(dot.str().find("digraph") != std::string::npos);
  CHECK(dot.str().find("1 -> 3;") != std::string::npos);

  const StateGraph big = build_state_graph(2, 13);  // 8192 states
  std::ostringstream sink;
  CHECK_THROWS_AS(write_dot(big, sink), LimitExceeded);

  const StateGraph edge_of_limit = build_state_graph(2, 12);  // exactly 4096
  std::ostringstream ok;
  write_dot(edge_of_limit, ok);
  CHECK(ok.str().size() > 0);
}
