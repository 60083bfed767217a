#pragma once

#include <vector>

#include "pnm/graph.hpp"

namespace pnm {

struct Matching {
  std::vector<Edge> edges;
};

/// Nodes (v,1) get id v and (v,2) get id n+v; part[x] is 1 or 2.
struct DoubleCover {
  Graph graph;
  std::vector<int> part;
};

DoubleCover bipartite_double_cover(const Graph& g);

/// Splits a k-regular bipartite graph into k disjoint perfect matchings.
/// Throws ValidationError when g is not regular or not bipartite.
std::vector<Matching> one_factorization(const Graph& g);

/// Checks that the matchings are perfect, pairwise disjoint and cover E.
Validation audit_factorization(const Graph& g, const std::vector<Matching>& factors);

/// Port numbering of a regular graph in which only the relations R_(i,i)
/// are nonempty: factor i of the double cover wires port i to port i.
PortNumbering symmetric_port_numbering(const Graph& g);

inline constexpr int kOneFactorNodeCap = 24;

/// Backtracking perfect-matching search. Throws BudgetError above node_cap.
bool has_one_factor(const Graph& g, int node_cap = kOneFactorNodeCap);

}  // namespace pnm
