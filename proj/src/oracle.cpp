#include "deltagraph/oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace deltagraph {

std::vector<std::uint32_t> delta_step(const std::vector<std::uint32_t>& seq, std::uint64_t q) {
  if (seq.empty()) throw std::invalid_argument("delta_step: empty sequence");
  if (q < 2) throw std::invalid_argument("delta_step: q must be >= 2");
  const std::size_t n = seq.size();
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t a = seq[(i + 1) % n];
    const std::uint32_t b = seq[i];
    if (a >= q || b >= q) throw std::invalid_argument("delta_step: entry out of range");
    out[i] = a >= b ? a - b : static_cast<std::uint32_t>(a + q - b);
  }
  return out;
}

namespace {

std::uint64_t checked_state_count(std::uint64_t q, std::uint64_t n, std::uint64_t limit) {
  if (q < 2) throw std::invalid_argument("state graph: q must be >= 2");
  if (n < 1) throw std::invalid_argument("state graph: n must be >= 1");
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (total > limit / q)
      throw LimitExceeded("state graph would exceed the " + std::to_string(limit) +
                          " state limit for q=" + std::to_string(q) +
                          " n=" + std::to_string(n));
    total *= q;
  }
  if (total > limit)
    throw LimitExceeded("state graph would exceed the " + std::to_string(limit) +
                        " state limit for q=" + std::to_string(q) +
                        " n=" + std::to_string(n));
  if (total >= (1ull << 32))
    throw LimitExceeded("state graph exceeds the addressable state count");
  return total;
}

}  // namespace

StateGraph build_state_graph(std::uint64_t q, std::uint64_t n, std::uint64_t limit) {
  const std::uint64_t total = checked_state_count(q, n, limit);
  StateGraph g;
  g.q = q;
  g.n = n;
  g.successor.resize(total);
  std::vector<std::uint32_t> digits(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::uint64_t i = 0; i < n; ++i) {
      digits[i] = static_cast<std::uint32_t>(rest % q);
      rest /= q;
    }
    const std::vector<std::uint32_t> next = delta_step(digits, q);
    std::uint64_t enc = 0;
    for (std::uint64_t i = n; i-- > 0;) enc = enc * q + next[i];
    g.successor[idx] = static_cast<std::uint32_t>(enc);
  }
  return g;
}

namespace {

std::vector<std::uint8_t> find_cycles(const StateGraph& g,
                                      std::map<std::uint64_t, std::uint64_t>* cycle_counts) {
  const std::uint64_t total = g.successor.size();
  std::vector<std::uint8_t> state(total, 0);  // 0 new, 1 in progress, 2 finished
  std::vector<std::uint8_t> on_cycle(total, 0);
  std::vector<std::uint32_t> path;
  for (std::uint64_t v = 0; v < total; ++v) {
    if (state[v] != 0) continue;
    path.clear();
    std::uint64_t u = v;
    while (state[u] == 0) {
      state[u] = 1;
      path.push_back(static_cast<std::uint32_t>(u));
      u = g.successor[u];
    }
    if (state[u] == 1) {
      // the walk closed on itself: the path suffix starting at u is a new cycle
      std::uint64_t len = 0;
      for (std::size_t i = path.size(); i-- > 0;) {
        on_cycle[path[i]] = 1;
        ++len;
        if (path[i] == u) break;
      }
      if (cycle_counts) ++(*cycle_counts)[len];
    }
    for (std::uint32_t w : path) state[w] = 2;
  }
  return on_cycle;
}

struct PredIndex {
  std::vector<std::uint32_t> offsets;  // size total+1
  std::vector<std::uint32_t> preds;

  explicit PredIndex(const StateGraph& g) {
    const std::uint64_t total = g.successor.size();
    offsets.assign(total + 1, 0);
    for (std::uint32_t to : g.successor) ++offsets[to + 1];
    for (std::uint64_t i = 1; i <= total; ++i) offsets[i] += offsets[i - 1];
    preds.resize(total);
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::uint64_t from = 0; from < total; ++from)
      preds[cursor[g.successor[from]]++] = static_cast<std::uint32_t>(from);
  }
};

// BFS up the predecessor edges from a cycle vertex, never crossing the cycle
void measure_tree(const PredIndex& idx, const std::vector<std::uint8_t>& on_cycle,
                  std::uint32_t root, std::uint64_t& size, std::uint64_t& height,
                  std::vector<std::uint32_t>& queue, std::vector<std::uint32_t>& depth) {
  queue.clear();
  depth.clear();
  queue.push_back(root);
  depth.push_back(0);
  size = 0;
  height = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    const std::uint32_t d = depth[head];
    ++size;
    height = std::max<std::uint64_t>(height, d);
    for (std::uint32_t i = idx.offsets[v]; i < idx.offsets[v + 1]; ++i) {
      const std::uint32_t p = idx.preds[i];
      if (on_cycle[p]) continue;
      queue.push_back(p);
      depth.push_back(d + 1);
    }
  }
}

}  // namespace

OracleResult enumerate_graph(std::uint64_t q, std::uint64_t n, std::uint64_t limit) {
  OracleResult out;
  out.graph = build_state_graph(q, n, limit);
  std::map<std::uint64_t, std::uint64_t> cycle_counts;
  out.trees.on_cycle = find_cycles(out.graph, &cycle_counts);

  const PredIndex idx(out.graph);
  std::uint64_t common_size = 0, common_height = 0;
  bool have_common = false;
  std::vector<std::uint32_t> queue, depth;
  const std::uint64_t total = out.graph.successor.size();
  std::uint64_t cycle_vertices = 0;
  for (std::uint64_t v = 0; v < total; ++v) {
    if (!out.trees.on_cycle[v]) continue;
    ++cycle_vertices;
    std::uint64_t size = 0, height = 0;
    measure_tree(idx, out.trees.on_cycle, static_cast<std::uint32_t>(v), size, height, queue,
                 depth);
    if (!have_common) {
      common_size = size;
      common_height = height;
      have_common = true;
    } else if (size != common_size || height != common_height) {
      throw std::logic_error("oracle: trees are not uniform across cycle vertices");
    }
  }
  if (!have_common) throw std::logic_error("oracle: no cycle found");
  if (cycle_vertices * common_size != total)
    throw std::logic_error("oracle: trees do not partition the state space");

  out.trees.height = common_height;
  out.trees.tree_size = common_size;

  Decomposition d;
  d.q = q;
  d.n = n;
  d.h = common_height;
  d.tree_size = common_size;
  for (const auto& [len, cnt] : cycle_counts) d.components.push_back({BigNat(len), BigNat(cnt)});
  std::sort(d.components.begin(), d.components.end(),
            [](const ComponentClass& a, const ComponentClass& b) {
              return a.cycle_len > b.cycle_len;
            });
  d.total_components = total_components(d);
  out.decomposition = std::move(d);
  return out;
}

bool verify_trees(const StateGraph& g, std::uint64_t expected_height, TreeViolation* violation) {
  const auto fail = [&](std::uint64_t vertex, const std::string& reason) {
    if (violation) *violation = {vertex, reason};
    return false;
  };
  const std::uint64_t total = g.successor.size();
  const std::uint64_t q = g.q;
  BigNat expected_size = pow_big(BigNat(q), expected_height);

  const std::vector<std::uint8_t> on_cycle = find_cycles(g, nullptr);
  const PredIndex idx(g);

  for (std::uint64_t v = 0; v < total; ++v) {
    const std::uint64_t indeg = idx.offsets[v + 1] - idx.offsets[v];
    if (indeg != 0 && indeg != q)
      return fail(v, "in-degree " + std::to_string(indeg) + " is neither 0 nor q");
    if (on_cycle[v]) {
      std::uint64_t cycle_preds = 0;
      for (std::uint32_t i = idx.offsets[v]; i < idx.offsets[v + 1]; ++i)
        if (on_cycle[idx.preds[i]]) ++cycle_preds;
      if (cycle_preds != 1)
        return fail(v, "cycle vertex has " + std::to_string(cycle_preds) +
                           " on-cycle predecessors, wanted 1");
      if (indeg != q)
        return fail(v, "cycle vertex in-degree " + std::to_string(indeg) + ", wanted q");
    }
  }

  std::vector<std::uint32_t> queue, depth;
  for (std::uint64_t v = 0; v < total; ++v) {
    if (!on_cycle[v]) continue;
    std::uint64_t size = 0, height = 0;
    measure_tree(idx, on_cycle, static_cast<std::uint32_t>(v), size, height, queue, depth);
    if (BigNat(size) != expected_size)
      return fail(v, "tree size " + std::to_string(size) + ", wanted " + expected_size.str());
    if (height != expected_height)
      return fail(v, "tree height " + std::to_string(height) + ", wanted " +
                         std::to_string(expected_height));
  }
  return true;
}

void write_edge_list(const StateGraph& g, std::ostream& os) {
  for (std::uint64_t v = 0; v < g.successor.size(); ++v)
    os << v << " -> " << g.successor[v] << "\n";
}

void write_dot(const StateGraph& g, std::ostream& os) {
  if (g.successor.size() > 4096)
    throw LimitExceeded("dot export is limited to 4096 states");
  os << "digraph delta {\n";
  for (std::uint64_t v = 0; v < g.successor.size(); ++v)
    os << "  " << v << " -> " << g.successor[v] << ";\n";
  os << "}\n";
}

}  // namespace deltagraph
