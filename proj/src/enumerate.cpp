#include "pnm/enumerate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "pnm/error.hpp"

namespace pnm {

std::string canonical_form(const Graph& g) {
  const int n = g.node_count();
  // Refine by (degree, sorted neighbour degrees); only orderings that keep
  // this invariant sorted are tried.
  std::vector<std::vector<int>> key(n);
  for (NodeId v = 0; v < n; ++v) {
    key[v].push_back(g.degree(v));
    std::vector<int> nd;
    for (NodeId u : g.neighbors(v)) nd.push_back(g.degree(u));
    std::sort(nd.begin(), nd.end());
    key[v].insert(key[v].end(), nd.begin(), nd.end());
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return key[a] < key[b]; });
  std::vector<std::pair<int, int>> cells;
  for (int s = 0; s < n;) {
    int e = s + 1;
    while (e < n && key[order[e]] == key[order[s]]) ++e;
    cells.emplace_back(s, e);
    s = e;
  }

  std::string best;
  std::string bits(static_cast<std::size_t>(n * (n - 1) / 2), '0');
  auto encode = [&] {
    std::size_t k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) bits[k++] = g.has_edge(order[a], order[b]) ? '1' : '0';
    if (best.empty() || bits < best) best = bits;
  };
  std::function<void(std::size_t)> walk = [&](std::size_t c) {
    if (c == cells.size()) {
      encode();
      return;
    }
    auto [s, e] = cells[c];
    std::sort(order.begin() + s, order.begin() + e);
    do {
      walk(c + 1);
    } while (std::next_permutation(order.begin() + s, order.begin() + e));
  };
  walk(0);

  std::string head = std::to_string(n) + ":";
  for (NodeId v : order) head += std::to_string(g.degree(v)) + ",";
  return head + best;
}

std::vector<Graph> graphs_on(int n, bool connected_only) {
  if (n < 1) return {};
  std::vector<Graph> level{Graph(1)};
  for (int size = 2; size <= n; ++size) {
    std::map<std::string, Graph> next;
    for (const Graph& g : level) {
      const auto base = g.edges();
      for (std::uint32_t mask = 0; mask < (1u << (size - 1)); ++mask) {
        auto edges = base;
        for (int u = 0; u < size - 1; ++u)
          if (mask & (1u << u)) edges.emplace_back(u, size - 1);
        Graph h = Graph::from_edges(size, edges);
        next.try_emplace(canonical_form(h), std::move(h));
      }
    }
    level.clear();
    for (auto& [form, g] : next) level.push_back(std::move(g));
  }
  if (connected_only) std::erase_if(level, [](const Graph& g) { return !is_connected(g); });
  return level;
}

std::vector<Graph> graphs_up_to(int max_n, bool connected_only) {
  std::vector<Graph> all;
  for (int n = 1; n <= max_n; ++n) {
    auto part = graphs_on(n, connected_only);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

Graph random_bounded_graph(int n, int max_degree, Rng& rng) {
  std::vector<Edge> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) candidates.emplace_back(u, v);
  rng.shuffle(std::span<Edge>(candidates));
  std::vector<int> degree(n, 0);
  std::vector<Edge> edges;
  for (auto [u, v] : candidates) {
    if (degree[u] >= max_degree || degree[v] >= max_degree || !rng.coin()) continue;
    ++degree[u];
    ++degree[v];
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

PortNumbering numbering_from_orders(const Graph& g, const std::vector<std::vector<NodeId>>& out_order,
                                    const std::vector<std::vector<NodeId>>& in_order) {
  const int n = g.node_count();
  std::vector<std::vector<Port>> table(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId u : out_order[v]) {
      auto it = std::find(in_order[u].begin(), in_order[u].end(), v);
      table[v].push_back({u, static_cast<int>(it - in_order[u].begin()) + 1});
    }
  return PortNumbering(std::move(table));
}

namespace {

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

bool varies_out(NumberingScope s) { return s != NumberingScope::IncomingOnly; }
bool varies_in(NumberingScope s) { return s == NumberingScope::All || s == NumberingScope::IncomingOnly; }

std::vector<std::vector<NodeId>> sorted_orders(const Graph& g) {
  std::vector<std::vector<NodeId>> orders(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) orders[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  return orders;
}

}  // namespace

std::uint64_t numbering_count(const Graph& g, NumberingScope scope) {
  std::uint64_t per_side = 1;
  for (NodeId v = 0; v < g.node_count(); ++v) per_side = saturating_mul(per_side, factorial(g.degree(v)));
  return scope == NumberingScope::All ? saturating_mul(per_side, per_side) : per_side;
}

void for_each_numbering(const Graph& g, NumberingScope scope,
                        const std::function<bool(const PortNumbering&)>& visit) {
  const int n = g.node_count();
  auto out = sorted_orders(g);
  auto in = sorted_orders(g);
  // Odometer over the permutations that vary: outgoing orders of nodes
  // 0..n-1, then incoming orders.
  std::vector<std::vector<NodeId>*> wheels;
  if (varies_out(scope))
    for (NodeId v = 0; v < n; ++v) wheels.push_back(&out[v]);
  if (varies_in(scope))
    for (NodeId v = 0; v < n; ++v) wheels.push_back(&in[v]);
  for (;;) {
    if (scope == NumberingScope::Consistent) in = out;
    if (!visit(numbering_from_orders(g, out, in))) return;
    std::size_t w = 0;
    while (w < wheels.size() && !std::next_permutation(wheels[w]->begin(), wheels[w]->end())) ++w;
    if (w == wheels.size()) return;
  }
}

std::vector<PortNumbering> numberings(const Graph& g, NumberingScope scope, std::uint64_t cap,
                                      std::uint64_t seed) {
  std::vector<PortNumbering> result;
  if (numbering_count(g, scope) <= cap) {
    for_each_numbering(g, scope, [&](const PortNumbering& p) {
      result.push_back(p);
      return true;
    });
    return result;
  }
  Rng rng(seed);
  for (std::uint64_t k = 0; k < cap; ++k) {
    auto out = sorted_orders(g);
    auto in = sorted_orders(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (varies_out(scope)) rng.shuffle(std::span<NodeId>(out[v]));
      if (varies_in(scope)) rng.shuffle(std::span<NodeId>(in[v]));
    }
    if (scope == NumberingScope::Consistent) in = out;
    result.push_back(numbering_from_orders(g, out, in));
  }
  return result;
}

}  // namespace pnm
