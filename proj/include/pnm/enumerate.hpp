#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pnm/graph.hpp"
#include "pnm/rng.hpp"

namespace pnm {

/// One representative per isomorphism class of graphs on exactly n nodes,
/// in a deterministic order. Brute force; intended for n <= 7.
std::vector<Graph> graphs_on(int n, bool connected_only = false);
/// graphs_on(1..max_n) concatenated.
std::vector<Graph> graphs_up_to(int max_n, bool connected_only = false);

/// Canonical adjacency string; equal iff the graphs are isomorphic.
std::string canonical_form(const Graph& g);

/// Random graph on n nodes with every degree at most max_degree.
Graph random_bounded_graph(int n, int max_degree, Rng& rng);

/// Which numberings to walk. A numbering is fixed by an outgoing order at
/// each node (port i reaches out_order[v][i-1]) and an incoming order
/// (messages from in_order[u][j-1] arrive at port j).
enum class NumberingScope {
  All,
  Consistent,    // incoming order equals outgoing order
  OutgoingOnly,  // incoming order fixed to sorted neighbours
  IncomingOnly,  // outgoing order fixed to sorted neighbours
};

/// Number of numberings in scope, saturating at UINT64_MAX.
std::uint64_t numbering_count(const Graph& g, NumberingScope scope);

/// Every numbering in scope when there are at most cap of them; otherwise
/// cap seeded random draws from the scope.
std::vector<PortNumbering> numberings(const Graph& g, NumberingScope scope, std::uint64_t cap,
                                      std::uint64_t seed);

/// Visits every numbering in scope; stops early when visit returns false.
void for_each_numbering(const Graph& g, NumberingScope scope,
                        const std::function<bool(const PortNumbering&)>& visit);

PortNumbering numbering_from_orders(const Graph& g, const std::vector<std::vector<NodeId>>& out_order,
                                    const std::vector<std::vector<NodeId>>& in_order);

}  // namespace pnm
