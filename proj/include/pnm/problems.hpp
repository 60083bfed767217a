#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pnm/graph.hpp"
#include "pnm/machine.hpp"

namespace pnm {

using Solution = std::vector<std::int64_t>;

/// A graph problem given by its verifier: S is a solution on g iff
/// verify(g, S).
struct GraphProblem {
  std::string name;
  std::vector<std::int64_t> outputs;
  std::function<bool(const Graph&, const Solution&)> verify;
};

/// Index of k when g is a k-star with k > 1 (one centre joined to k leaves
/// and nothing else), together with its centre.
struct StarShape {
  int k = 0;
  NodeId center = -1;
};
std::optional<StarShape> star_shape(const Graph& g);

/// On a k-star with k > 1: centre 0 and exactly one leaf 1. Anything else
/// is accepted on other graphs.
GraphProblem leaf_election();
/// Set-class solver: each node sends i through port i; a node outputs 1 iff
/// it has degree 1 and the non-null messages it saw form the set {1}.
MachinePtr leaf_election_machine(int delta);
/// Vector-class solver used with the history wrapper: a degree-1 node
/// outputs 1 iff its neighbour reached it through port 1.
MachinePtr leaf_election_vector_machine(int delta);

/// S(v) = 1 iff v has an odd number of odd-degree neighbours.
GraphProblem odd_odd();
/// Multiset-broadcast solver: broadcast own degree parity, count odd ones.
MachinePtr odd_odd_machine(int delta);

/// Two graphs and nodes u (of a) and w (of b) with odd_odd forcing
/// u -> 1 and w -> 0 although u and w are bisimilar in K_{-,-}.
struct ParityPair {
  Graph a;
  Graph b;
  NodeId u = 0;
  NodeId w = 0;
};
ParityPair parity_separation_pair();

/// Graph with the nodes of b renumbered after those of a.
Graph graph_union(const Graph& a, const Graph& b);

/// t(v) = (j_1, ..., j_delta) with p((v,i)) = (u, j_i), zero above deg(v).
std::vector<int> local_type(const PortedGraph& pg, NodeId v, int delta);
/// Vector-class solver assuming a consistent numbering: learn t(v), swap
/// types, output 1 iff no neighbour has a lexicographically larger type.
MachinePtr symmetry_break_machine(int delta);

/// Connected, k-regular with k odd, and without a perfect matching.
bool is_in_script_G(const Graph& g);
/// Non-constant outputs required on graphs in script G, anything elsewhere.
GraphProblem nonconstant_on_G();

/// Stops at once with output deg mod 2.
MachinePtr degree_parity_machine(int delta);
/// Never stops.
MachinePtr idle_machine(int delta);
/// Vector-inbox machine that forwards port 1's message; useful as a class
/// conformance counterexample when mislabelled.
MachinePtr echo_port1_machine(int delta, ClassTag declared);

/// Machine with seeded random finite tables: states and messages are small
/// integers, each state stops with some probability, and by the given
/// horizon every node has stopped. The inbox is read through the declared
/// discipline so the machine belongs to its class.
MachinePtr random_machine(std::uint64_t seed, int delta, ClassTag tag, int horizon, int states = 6,
                          int messages = 3);

/// Machines by CLI name: odd_odd, leaf_election, leaf_election_vector,
/// symmetry_break, degree_parity, idle.
MachinePtr named_machine(const std::string& name, int delta);
std::vector<std::string> machine_names();
/// Problems by CLI name: leaf_election, odd_odd, nonconstant.
GraphProblem named_problem(const std::string& name);

}  // namespace pnm
