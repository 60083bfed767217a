#include "pnm/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "pnm/error.hpp"
#include "pnm/rng.hpp"

namespace pnm {

Graph::Graph(int node_count) : adjacency_(static_cast<std::size_t>(node_count)) {
  if (node_count < 0) throw ArgumentError("negative node count");
}

Graph Graph::from_edges(int node_count, std::span<const Edge> edges) {
  Graph g(node_count);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count)
      throw ValidationError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                            "} references a node outside 0.." + std::to_string(node_count - 1));
    if (u == v) throw ValidationError("self-loop at node " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (NodeId v = 0; v < node_count; ++v) {
    auto& adj = g.adjacency_[v];
    std::sort(adj.begin(), adj.end());
    auto dup = std::adjacent_find(adj.begin(), adj.end());
    if (dup != adj.end())
      throw ValidationError("repeated edge {" + std::to_string(v) + "," + std::to_string(*dup) + "}");
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

int Graph::max_degree() const {
  int best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, static_cast<int>(adj.size()));
  return best;
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool is_connected(const Graph& g) {
  const int n = g.node_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::queue<NodeId> queue;
  queue.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop();
    for (NodeId u : g.neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        queue.push(u);
      }
  }
  return reached == n;
}

std::optional<int> regular_degree(const Graph& g) {
  if (g.node_count() == 0) return 0;
  const int d = g.degree(0);
  for (NodeId v = 1; v < g.node_count(); ++v)
    if (g.degree(v) != d) return std::nullopt;
  return d;
}

std::optional<std::vector<int>> bipartition(const Graph& g) {
  const int n = g.node_count();
  std::vector<int> side(n, -1);
  for (NodeId s = 0; s < n; ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    std::queue<NodeId> queue;
    queue.push(s);
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop();
      for (NodeId u : g.neighbors(v)) {
        if (side[u] == -1) {
          side[u] = 1 - side[v];
          queue.push(u);
        } else if (side[u] == side[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

namespace {

std::string port_str(Port p) {
  return "(" + std::to_string(p.node) + "," + std::to_string(p.index) + ")";
}

}  // namespace

Validation validate_port_numbering(const Graph& g, const PortNumbering& p) {
  const int n = g.node_count();
  if (p.node_count() != n)
    return {false, "numbering covers " + std::to_string(p.node_count()) + " nodes, graph has " +
                       std::to_string(n)};
  for (NodeId v = 0; v < n; ++v)
    if (p.port_count(v) != g.degree(v))
      return {false, "node " + std::to_string(v) + " owns " + std::to_string(p.port_count(v)) +
                         " ports but has degree " + std::to_string(g.degree(v))};

  std::vector<std::vector<char>> hit(n);
  for (NodeId v = 0; v < n; ++v) hit[v].assign(g.degree(v), 0);
  for (NodeId v = 0; v < n; ++v) {
    for (int i = 1; i <= g.degree(v); ++i) {
      const Port target = p({v, i});
      if (target.node < 0 || target.node >= n || target.index < 1 ||
          target.index > g.degree(target.node))
        return {false, "p" + port_str({v, i}) + " = " + port_str(target) + " is not a port of the graph"};
      if (hit[target.node][target.index - 1])
        return {false, "p is not a bijection: port " + port_str(target) + " is hit twice"};
      hit[target.node][target.index - 1] = 1;
    }
  }

  // Bijection on P(g) gives |A(p)| <= 2|E|; equality with A(g) then needs
  // every arc to be an edge of g and no arc to repeat.
  std::vector<std::vector<char>> arc_used(n);
  for (NodeId v = 0; v < n; ++v) arc_used[v].assign(g.degree(v), 0);
  for (NodeId v = 0; v < n; ++v) {
    for (int i = 1; i <= g.degree(v); ++i) {
      const NodeId u = p({v, i}).node;
      auto adj = g.neighbors(v);
      auto it = std::lower_bound(adj.begin(), adj.end(), u);
      if (it == adj.end() || *it != u)
        return {false, "A(p) != A(G): arc (" + std::to_string(v) + "," + std::to_string(u) +
                           ") from port " + port_str({v, i}) + " is not an edge"};
      auto slot = static_cast<std::size_t>(it - adj.begin());
      if (arc_used[v][slot])
        return {false, "A(p) != A(G): arc (" + std::to_string(v) + "," + std::to_string(u) +
                           ") is produced by two ports"};
      arc_used[v][slot] = 1;
    }
  }
  return {};
}

bool is_consistent(const PortNumbering& p) {
  for (NodeId v = 0; v < p.node_count(); ++v)
    for (int i = 1; i <= p.port_count(v); ++i)
      if (p(p({v, i})) != Port{v, i}) return false;
  return true;
}

PortNumbering random_port_numbering(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  const int n = g.node_count();
  // out[v][i-1]: neighbour reached from port (v,i); in_port[u][k]: port of u
  // that receives from its k-th sorted neighbour.
  std::vector<std::vector<NodeId>> out(n);
  std::vector<std::vector<int>> in_port(n);
  for (NodeId v = 0; v < n; ++v) {
    out[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    rng.shuffle(std::span<NodeId>(out[v]));
    in_port[v].resize(g.degree(v));
    std::iota(in_port[v].begin(), in_port[v].end(), 1);
    rng.shuffle(std::span<int>(in_port[v]));
  }
  std::vector<std::vector<Port>> table(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : out[v]) {
      auto adj = g.neighbors(u);
      auto k = static_cast<std::size_t>(std::lower_bound(adj.begin(), adj.end(), v) - adj.begin());
      table[v].push_back({u, in_port[u][k]});
    }
  }
  return PortNumbering(std::move(table));
}

PortNumbering consistent_port_numbering(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  const int n = g.node_count();
  std::vector<std::vector<NodeId>> order(n);
  for (NodeId v = 0; v < n; ++v) {
    order[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    rng.shuffle(std::span<NodeId>(order[v]));
  }
  auto port_of = [&](NodeId v, NodeId u) {
    auto it = std::find(order[v].begin(), order[v].end(), u);
    return static_cast<int>(it - order[v].begin()) + 1;
  };
  std::vector<std::vector<Port>> table(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId u : order[v]) table[v].push_back({u, port_of(u, v)});
  return PortNumbering(std::move(table));
}

PortedGraph::PortedGraph(Graph graph, PortNumbering numbering)
    : graph_(std::move(graph)), numbering_(std::move(numbering)) {
  Validation check = validate_port_numbering(graph_, numbering_);
  if (!check.ok) throw ValidationError(check.violation);
  inverse_.resize(graph_.node_count());
  for (NodeId v = 0; v < graph_.node_count(); ++v) inverse_[v].resize(graph_.degree(v));
  for (NodeId v = 0; v < graph_.node_count(); ++v)
    for (int i = 1; i <= graph_.degree(v); ++i) {
      const Port target = numbering_({v, i});
      inverse_[target.node][target.index - 1] = {v, i};
    }
}

namespace gen {

Graph star(int k) {
  if (k < 1) throw ArgumentError("star needs k >= 1");
  std::vector<Edge> edges;
  for (int leaf = 1; leaf <= k; ++leaf) edges.emplace_back(0, leaf);
  return Graph::from_edges(k + 1, edges);
}

Graph cycle(int n) {
  if (n < 3) throw ArgumentError("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, edges);
}

Graph path(int n) {
  if (n < 1) throw ArgumentError("path needs n >= 1");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

Graph complete(int n) {
  if (n < 1) throw ArgumentError("complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

Graph no_one_factor_cubic() {
  // Node 0 is the hub. Gadget g occupies ids 1+5g .. 5+5g as a, b, c, d, e:
  // a-b, a-c, a-d, b-c, b-d (K4 minus c-d), c-e, d-e, and e joins the hub.
  std::vector<Edge> edges;
  for (int g = 0; g < 3; ++g) {
    const int a = 1 + 5 * g, b = a + 1, c = a + 2, d = a + 3, e = a + 4;
    edges.insert(edges.end(), {{a, b}, {a, c}, {a, d}, {b, c}, {b, d}, {c, e}, {d, e}, {0, e}});
  }
  return Graph::from_edges(16, edges);
}

}  // namespace gen

}  // namespace pnm
