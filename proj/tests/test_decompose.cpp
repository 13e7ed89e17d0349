#include "deltagraph/decompose.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace deltagraph;

namespace {

std::vector<ComponentClass> comps(std::initializer_list<std::pair<int, long long>> pairs) {
  std::vector<ComponentClass> out;
  for (const auto& [m, c] : pairs) out.push_back({BigNat(m), BigNat(c)});
  return out;
}

bool all_strings(const nlohmann::json& j) {
  if (j.is_object() || j.is_array()) {
    for (const auto& item : j)
      if (!all_strings(item)) return false;
    return true;
  }
  return j.is_string();
}

}  // namespace

TEST_CASE("q=2 n=7") {
  const Decomposition d = decompose(2, 7);
  CHECK(d.h == 1);
  CHECK(d.tree_size == 2);
  CHECK(d.components == comps({{7, 9}, {1, 1}}));
  CHECK(d.total_components == 10);
  CHECK(render(d) == "9(O_7*T_2)+(O_1*T_2)");
}

TEST_CASE("q=2 n=15") {
  const Decomposition d = decompose(2, 15);
  CHECK(d.h == 1);
  CHECK(d.components == comps({{15, 1091}, {5, 3}, {3, 1}, {1, 1}}));
  CHECK(d.total_components == 1096);
}

TEST_CASE("q=3 n=12") {
  const Decomposition d = decompose(3, 12);
  CHECK(d.h == 3);
  CHECK(d.tree_size == 27);
  CHECK(d.components == comps({{24, 818}, {8, 3}, {3, 8}, {1, 3}}));
  CHECK(d.total_components == 832);
  CHECK(render(d) == "818(O_24*T_27)+3(O_8*T_27)+8(O_3*T_27)+3(O_1*T_27)");
}

TEST_CASE("q=3 n=11 renders like the published row") {
  CHECK(render(decompose(3, 11)) == "243(O_242*T_3)+2(O_121*T_3)+(O_1*T_3)");
}

TEST_CASE("component totals") {
  CHECK(decompose(2, 31).total_components == 34636834);
  CHECK(decompose(3, 13).total_components == 20469);
  CHECK(decompose(2, 4).total_components == 1);
  CHECK(render(decompose(2, 4)) == "(O_1*T_16)");
}

TEST_CASE("n=1 is a single fixed point with a full tree") {
  CHECK(render(decompose(2, 1)) == "(O_1*T_2)");
  CHECK(render(decompose(5, 1)) == "(O_1*T_5)");
  const Decomposition d = decompose(7, 1);
  CHECK(d.h == 1);
  CHECK(d.total_components == 1);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(decompose(4, 3), std::invalid_argument);  // q must be prime
  CHECK_THROWS_AS(decompose(2, 0), std::invalid_argument);
}

TEST_CASE("vertex-count identities over a sweep") {
  for (std::uint64_t q : {2ull, 3ull}) {
    for (std::uint64_t n = 1; n <= 20; ++n) {
      const Decomposition d = decompose(q, n);
      BigNat cycle_vertices = 0;
      BigNat total = 0;
      const BigNat* prev = nullptr;
      for (const auto& cc : d.components) {
        cycle_vertices += cc.count * cc.cycle_len;
        total += cc.count;
        if (prev) CHECK(cc.cycle_len < *prev);  // strictly descending
        prev = &cc.cycle_len;
      }
      CHECK(cycle_vertices * d.tree_size == pow_big(BigNat(q), n));
      CHECK(cycle_vertices == pow_big(BigNat(q), n - d.h));
      CHECK(total == d.total_components);
      CHECK(total == total_components(d));
      CHECK(d.components.back().cycle_len == 1);  // fixed point always present
      CHECK(d.tree_size == pow_big(BigNat(q), d.h));
    }
  }
}

TEST_CASE("rendered rows parse back to the same decomposition") {
  for (std::uint64_t q : {2ull, 3ull}) {
    for (std::uint64_t n = 1; n <= 18; ++n) {
      const Decomposition d = decompose(q, n);
      CHECK(parse_components(render(d), q, n) == d);
    }
  }
}

TEST_CASE("parse_components validates its input") {
  CHECK_THROWS_AS(parse_components("", 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(parse_components("9(O_7*T_2)+(O_1*T_4)", 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(parse_components("(O_7*T_3)", 2, 7), std::invalid_argument);  // 3 != 2^h
  CHECK_THROWS_AS(parse_components("9(O_7*T_2)+", 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(parse_components("abc", 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(parse_components("9(Q_7*T_2)", 2, 7), std::invalid_argument);
  const Decomposition d = parse_components(" 9(O_7*T_2) + (O_1*T_2) ", 2, 7);
  CHECK(d.total_components == 10);
}

TEST_CASE("row text round-trip") {
  const RowReport r = decompose_row(2, 7);
  CHECK(r.status == "ok");
  CHECK(render_row_text(r) == "7 | 10 | 9(O_7*T_2)+(O_1*T_2)");
  CHECK(parse_row_text(render_row_text(r), 2) == *r.result);
  CHECK_THROWS_AS(parse_row_text("7 | 11 | 9(O_7*T_2)+(O_1*T_2)", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_row_text("no pipes here", 2), std::invalid_argument);
}

TEST_CASE("row json uses decimal strings everywhere") {
  const RowReport r = decompose_row(3, 13);
  const nlohmann::json j = nlohmann::json::parse(render_row_json(r));
  CHECK(all_strings(j));
  CHECK(j["q"] == "3");
  CHECK(j["n"] == "13");
  CHECK(j["h"] == "1");
  CHECK(j["tree_size"] == "3");
  CHECK(j["total_components"] == "20469");
  CHECK(j["status"] == "ok");
  REQUIRE(j["components"].size() == 3);
  CHECK(j["components"][0]["m"] == "26");
  CHECK(j["components"][0]["count"] == "20412");
  CHECK(j["components"][2]["m"] == "1");
}

TEST_CASE("row csv") {
  const RowReport r = decompose_row(3, 12);
  CHECK(csv_header() == "q,n,h,tree_size,m,count");
  CHECK(render_row_csv(r) ==
        "3,12,3,27,24,818\n3,12,3,27,8,3\n3,12,3,27,3,8\n3,12,3,27,1,3");
}

TEST_CASE("budget exhaustion surfaces as an incomplete row, never a wrong row") {
  DecomposeOptions opts;
  opts.factor.rho_budget = 16;
  CHECK_THROWS_AS(decompose(2, 149, opts), BudgetExceeded);

  const RowReport r = decompose_row(2, 149, opts);
  CHECK(r.status == "incomplete");
  CHECK_FALSE(r.result.has_value());
  CHECK(r.blocking_composite > 1);
  CHECK_FALSE(is_probable_prime(r.blocking_composite));
  CHECK(render_row_text(r).find("incomplete") != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(render_row_json(r));
  CHECK(j["status"] == "incomplete");
  CHECK(j["blocking_composite"] == r.blocking_composite.str());
  CHECK(all_strings(j));
  CHECK_THROWS_AS(render_row_csv(r), std::invalid_argument);
}

TEST_CASE("decomposition is independent of the splitter seed") {
  DecomposeOptions s1, s2;
  s1.seed = 1;
  s2.seed = 424242;
  CHECK(decompose(2, 15, s1) == decompose(2, 15, s2));
  CHECK(decompose(2, 15, s1) == decompose(2, 15));
  CHECK(decompose(3, 14, s1) == decompose(3, 14, s2));
}

TEST_CASE("cache hits are reported per row") {
  FactorCache cache;
  DecomposeOptions opts;
  opts.cache = &cache;
  const RowReport first = decompose_row(3, 12, opts);
  const RowReport second = decompose_row(3, 12, opts);
  CHECK(first.result == second.result);
  CHECK(second.cache_hits > 0);
}

TEST_CASE("collected orders cover every level of every factor") {
  std::vector<LevelOrder> orders;
  DecomposeOptions opts;
  opts.collect_orders = &orders;
  decompose(3, 12, opts);
  // factors (x+1)^3 and (x^2+1)^3: three levels each
  CHECK(orders.size() == 6);
  for (const auto& lo : orders) CHECK(check_order_certificate(lo));
}
