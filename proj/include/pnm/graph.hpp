#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pnm {

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

/// Simple undirected graph with 0-based node ids and sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int node_count);

  /// Throws ValidationError on loops, repeated edges, or out-of-range ids.
  static Graph from_edges(int node_count, std::span<const Edge> edges);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  bool has_edge(NodeId u, NodeId v) const;
  int max_degree() const;
  std::size_t edge_count() const;
  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
};

bool is_connected(const Graph& g);
/// Common degree when every node has the same degree.
std::optional<int> regular_degree(const Graph& g);
/// Two-colouring (0/1 per node) when one exists.
std::optional<std::vector<int>> bipartition(const Graph& g);

/// A port (v, i); i is 1-based, i in [1, deg(v)].
struct Port {
  NodeId node = 0;
  int index = 0;
  auto operator<=>(const Port&) const = default;
};

/// A map P(G) -> P(G) stored as target(v, i) = p((v, i)). Nothing about the
/// table is checked here; see validate_port_numbering.
class PortNumbering {
 public:
  PortNumbering() = default;
  explicit PortNumbering(std::vector<std::vector<Port>> table) : table_(std::move(table)) {}

  int node_count() const { return static_cast<int>(table_.size()); }
  int port_count(NodeId v) const { return static_cast<int>(table_[v].size()); }
  const Port& operator()(Port port) const { return table_[port.node][port.index - 1]; }
  const std::vector<std::vector<Port>>& table() const { return table_; }

  bool operator==(const PortNumbering&) const = default;

 private:
  std::vector<std::vector<Port>> table_;
};

struct Validation {
  bool ok = true;
  std::string violation;
};

/// Checks that p is a bijection on P(g) owning exactly ports 1..deg(v) at each
/// node and that A(p) = A(g). The report names the first violated condition.
Validation validate_port_numbering(const Graph& g, const PortNumbering& p);

/// p(p(x)) = x for every port. Meaningful only for validated numberings.
bool is_consistent(const PortNumbering& p);

/// Uniform over all valid numberings of g; deterministic per seed.
PortNumbering random_port_numbering(const Graph& g, std::uint64_t seed);

/// Random involutive numbering: each node's incident edges get ports
/// 1..deg in seeded random order and p maps the two ends of an edge onto
/// each other.
PortNumbering consistent_port_numbering(const Graph& g, std::uint64_t seed);

/// A graph together with a validated numbering and its inverse.
class PortedGraph {
 public:
  /// Throws ValidationError when the numbering does not validate.
  PortedGraph(Graph graph, PortNumbering numbering);

  const Graph& graph() const { return graph_; }
  const PortNumbering& numbering() const { return numbering_; }
  int node_count() const { return graph_.node_count(); }
  int degree(NodeId v) const { return graph_.degree(v); }
  int max_degree() const { return graph_.max_degree(); }
  /// p((v, i))
  const Port& forward(Port port) const { return numbering_(port); }
  /// p^{-1}((v, i)): the port whose messages arrive at (v, i).
  const Port& backward(Port port) const { return inverse_[port.node][port.index - 1]; }

 private:
  Graph graph_;
  PortNumbering numbering_;
  std::vector<std::vector<Port>> inverse_;
};

namespace gen {

/// Center 0 with leaves 1..k.
Graph star(int k);
Graph cycle(int n);
Graph path(int n);
Graph complete(int n);
/// Connected 3-regular graph on 16 nodes without a perfect matching: a hub
/// joined to three copies of a 5-node gadget (K4 minus an edge, with the
/// two degree-2 nodes joined to a fresh node that attaches to the hub).
Graph no_one_factor_cubic();

}  // namespace gen

}  // namespace pnm
