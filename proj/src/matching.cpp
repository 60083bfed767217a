#include "pnm/matching.hpp"

#include <algorithm>
#include <set>

#include "pnm/error.hpp"

namespace pnm {

DoubleCover bipartite_double_cover(const Graph& g) {
  const int n = g.node_count();
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) {
    edges.emplace_back(u, n + v);
    edges.emplace_back(v, n + u);
  }
  DoubleCover cover{Graph::from_edges(2 * n, edges), std::vector<int>(2 * n, 1)};
  std::fill(cover.part.begin() + n, cover.part.end(), 2);
  return cover;
}

namespace {

// Kuhn's augmenting path from left node u; mate[x] = partner or -1.
bool augment(const std::vector<std::vector<NodeId>>& adj, NodeId u, std::vector<NodeId>& mate,
             std::vector<char>& visited) {
  for (NodeId v : adj[u]) {
    if (visited[v]) continue;
    visited[v] = 1;
    if (mate[v] == -1 || augment(adj, mate[v], mate, visited)) {
      mate[v] = u;
      mate[u] = v;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Matching> one_factorization(const Graph& g) {
  const auto k = regular_degree(g);
  if (!k) throw ValidationError("one_factorization needs a regular graph");
  const auto side = bipartition(g);
  if (!side) throw ValidationError("one_factorization needs a bipartite graph");

  const int n = g.node_count();
  std::vector<std::vector<NodeId>> residual(n);
  for (NodeId v = 0; v < n; ++v) residual[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());

  std::vector<Matching> factors;
  for (int round = 0; round < *k; ++round) {
    std::vector<NodeId> mate(n, -1);
    for (NodeId u = 0; u < n; ++u) {
      if ((*side)[u] != 0 || mate[u] != -1) continue;
      std::vector<char> visited(n, 0);
      if (!augment(residual, u, mate, visited))
        throw ValidationError("residual graph has no perfect matching at node " + std::to_string(u));
    }
    Matching m;
    for (NodeId u = 0; u < n; ++u) {
      if ((*side)[u] != 0) continue;
      const NodeId v = mate[u];
      m.edges.emplace_back(std::min(u, v), std::max(u, v));
      std::erase(residual[u], v);
      std::erase(residual[v], u);
    }
    std::sort(m.edges.begin(), m.edges.end());
    factors.push_back(std::move(m));
  }
  return factors;
}

Validation audit_factorization(const Graph& g, const std::vector<Matching>& factors) {
  std::set<Edge> seen;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<char> covered(g.node_count(), 0);
    for (auto [a, b] : factors[f].edges) {
      const Edge e{std::min(a, b), std::max(a, b)};
      if (!g.has_edge(e.first, e.second))
        return {false, "factor " + std::to_string(f) + " uses a non-edge"};
      if (covered[e.first] || covered[e.second])
        return {false, "factor " + std::to_string(f) + " is not a matching"};
      covered[e.first] = covered[e.second] = 1;
      if (!seen.insert(e).second)
        return {false, "edge {" + std::to_string(e.first) + "," + std::to_string(e.second) +
                           "} appears in two factors"};
    }
    if (std::find(covered.begin(), covered.end(), 0) != covered.end())
      return {false, "factor " + std::to_string(f) + " is not perfect"};
  }
  if (seen.size() != g.edge_count()) return {false, "factors do not cover every edge"};
  return {};
}

PortNumbering symmetric_port_numbering(const Graph& g) {
  if (!regular_degree(g)) throw ValidationError("symmetric_port_numbering needs a regular graph");
  const int n = g.node_count();
  const DoubleCover cover = bipartite_double_cover(g);
  const auto factors = one_factorization(cover.graph);
  std::vector<std::vector<Port>> table(n);
  for (NodeId v = 0; v < n; ++v) table[v].resize(g.degree(v));
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const int i = static_cast<int>(f) + 1;
    for (auto [a, b] : factors[f].edges) {
      // a < n is the copy (u,1), b - n is v in the copy (v,2).
      const NodeId u = a, v = b - n;
      table[v][i - 1] = {u, i};
    }
  }
  return PortNumbering(std::move(table));
}

namespace {

bool match_rest(const Graph& g, std::vector<char>& used) {
  auto first = std::find(used.begin(), used.end(), 0);
  if (first == used.end()) return true;
  const NodeId v = static_cast<NodeId>(first - used.begin());
  used[v] = 1;
  for (NodeId u : g.neighbors(v)) {
    if (used[u]) continue;
    used[u] = 1;
    if (match_rest(g, used)) return true;
    used[u] = 0;
  }
  used[v] = 0;
  return false;
}

}  // namespace

bool has_one_factor(const Graph& g, int node_cap) {
  if (g.node_count() > node_cap)
    throw BudgetError("has_one_factor: " + std::to_string(g.node_count()) + " nodes exceeds cap " +
                      std::to_string(node_cap));
  if (g.node_count() % 2 != 0) return false;
  std::vector<char> used(g.node_count(), 0);
  return match_rest(g, used);
}

}  // namespace pnm
