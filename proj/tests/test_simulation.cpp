#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnm/compiler.hpp"
#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/problems.hpp"
#include "pnm/simulation.hpp"
#include "support.hpp"

#include <algorithm>
#include <functional>

using namespace pnm;

namespace {

std::vector<PortedGraph> suite(int max_n, int delta, std::uint64_t per_graph) {
  std::vector<PortedGraph> out;
  for (int n = 1; n <= max_n; ++n)
    for (const Graph& g : graphs_on(n)) {
      if (g.max_degree() > delta) continue;
      for (const auto& p : numberings(g, NumberingScope::All, per_graph, 5 + n)) out.emplace_back(g, p);
    }
  return out;
}

Solution solution_of(const RunResult& r) {
  Solution s;
  for (const auto& y : r.outputs) s.push_back(y.value());
  return s;
}

// Every numbering that keeps pg's outgoing ports and permutes the port
// labels each node receives on.
void for_each_incoming_relabel(const PortedGraph& pg, const std::function<bool(const PortedGraph&)>& visit) {
  const int n = pg.node_count();
  std::vector<std::vector<int>> sigma(n);
  for (NodeId v = 0; v < n; ++v)
    for (int j = 1; j <= pg.degree(v); ++j) sigma[v].push_back(j);
  std::function<bool(int)> rec = [&](int v) {
    if (v == n) {
      auto table = pg.numbering().table();
      for (auto& row : table)
        for (Port& to : row) to.index = sigma[to.node][to.index - 1];
      return visit(PortedGraph(pg.graph(), PortNumbering(table)));
    }
    std::sort(sigma[v].begin(), sigma[v].end());
    do {
      if (!rec(v + 1)) return false;
    } while (std::next_permutation(sigma[v].begin(), sigma[v].end()));
    return true;
  };
  rec(0);
}

}  // namespace

TEST_CASE("digests induce the same partitions as exact nested values") {
  for (const PortedGraph& pg : suite(5, 4, 8)) {
    const int delta = std::max(1, pg.max_degree());
    const SymmetryTrace tr = indistinguishability_preprocess(pg, delta);
    const oracle::ExactBeta exact = oracle::exact_beta(pg, delta);
    REQUIRE(tr.beta.size() == exact.beta.size());
    for (std::size_t t = 0; t < tr.beta.size(); ++t) CHECK(oracle::same_partition(tr.beta[t], exact.beta[t]));
  }
}

TEST_CASE("messages at round 2Δ are pairwise distinct at every node") {
  int nodes = 0;
  for (const PortedGraph& pg : suite(6, 5, 4)) {
    const int delta = std::max(1, pg.max_degree());
    const SymmetryTrace tr = indistinguishability_preprocess(pg, delta);
    for (NodeId v = 0; v < pg.node_count(); ++v) {
      CHECK(tr.received[2 * delta][v].size() == static_cast<std::size_t>(pg.degree(v)));
      ++nodes;
    }
  }
  CHECK(nodes > 1000);
}

TEST_CASE("too few rounds leave indistinguishable neighbours") {
  // Star centre: all leaves look alike until port numbers are learnt back.
  const Graph s = gen::star(3);
  const PortedGraph pg(s, PortNumbering({{{1, 1}, {2, 1}, {3, 1}}, {{0, 1}}, {{0, 2}}, {{0, 3}}}));
  const SymmetryTrace tr = indistinguishability_preprocess(pg, 3);
  CHECK(tr.received[1][0].size() == 1);
  CHECK(tr.received[6][0].size() == 3);
  CHECK(tr.message(pg, 1, 1, 0) == tr.message(pg, 1, 2, 0));
  CHECK_THROWS_AS(tr.message(pg, 1, 1, 2), ArgumentError);
}

TEST_CASE("set_from_multiset reproduces odd_odd exactly") {
  const auto a = odd_odd_machine(3);
  const auto b = set_from_multiset(a);
  CHECK(b->tag() == ClassTag{InboxKind::Set, OutboxKind::Vector});
  for (const PortedGraph& pg : suite(5, 3, 20)) {
    const RunResult ra = run(*a, pg, 20, {.record_states = false});
    const RunResult rb = run(*b, pg, 20);
    CHECK(ra.outputs == rb.outputs);
    CHECK(rb.rounds == ra.rounds + 6);
    for (int t = 0; t < 6; ++t) CHECK(rb.trace.states[t][0][0] == 'P');
    CHECK(rb.trace.states[6][0][0] != 'P');
  }
}

TEST_CASE("set_from_multiset on random multiset machines") {
  const auto graphs = suite(4, 3, 10);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto a = random_machine(seed, 3, parse_class(seed % 2 ? "mv" : "mb"), 3);
    const auto b = set_from_multiset(a);
    for (const PortedGraph& pg : graphs) CHECK(run(*a, pg, 10).outputs == run(*b, pg, 20).outputs);
  }
  CHECK_THROWS_AS(set_from_multiset(leaf_election_vector_machine(2)), ArgumentError);
}

TEST_CASE("set_from_multiset belongs to Set") {
  CHECK(check_class_conformance(*set_from_multiset(odd_odd_machine(2)), 200, 1).ok);
  CHECK(check_class_conformance(*set_from_multiset(random_machine(4, 2, parse_class("mv"), 3)), 200, 2).ok);
}

TEST_CASE("multiset_from_vector solves leaf election without extra rounds") {
  const auto a = leaf_election_vector_machine(4);
  const auto b = multiset_from_vector(a);
  CHECK(b->tag() == ClassTag{InboxKind::Multiset, OutboxKind::Vector});
  const GraphProblem problem = leaf_election();
  for (int k = 2; k <= 4; ++k) {
    const Graph s = gen::star(k);
    for_each_numbering(s, NumberingScope::All, [&](const PortNumbering& p) {
      const PortedGraph pg(s, p);
      const RunResult ra = run(*a, pg, 10, {.record_states = false});
      const RunResult rb = run(*b, pg, 10, {.record_states = false});
      CHECK(rb.rounds == ra.rounds);
      CHECK(problem.verify(s, solution_of(rb)));
      return true;
    });
  }
  CHECK(check_class_conformance(*b, 200, 3).ok);
}

TEST_CASE("history wrappers behave like the inner machine on a relabelled input") {
  // The rebuilt inbox is a's inbox under some relabelling of incoming ports,
  // so the wrapped outputs must equal a's outputs on one such numbering.
  const auto graphs = suite(4, 3, 3);
  FormulaFactory F;
  Rng rng(12);
  for (int k = 0; k < 6; ++k) {
    const Signature sig{3, parse_variant(k % 2 ? "++" : "+-"), false};
    const auto a = compile(oracle::random_formula_exact(rng, F, 2, sig), sig);
    const auto b = k % 2 ? multiset_from_vector(a) : bcast_multiset_from_broadcast(a);
    for (const PortedGraph& pg : graphs) {
      const RunResult ra = run(*a, pg, 10, {.record_states = false});
      const RunResult rb = run(*b, pg, 10, {.record_states = false});
      CHECK(rb.rounds == ra.rounds);
      bool realised = false;
      for_each_incoming_relabel(pg, [&](const PortedGraph& q) {
        realised = run(*a, q, 10, {.record_states = false}).outputs == rb.outputs;
        return !realised;
      });
      CHECK(realised);
    }
  }
}

TEST_CASE("broadcast history wrapper stays in Multiset and Broadcast") {
  const Signature sig{2, parse_variant("+-"), false};
  const auto a = compile(parse_formula("<1,*> q1 | <2,*> <1,*> q2"), sig);
  const auto b = bcast_multiset_from_broadcast(a);
  CHECK(b->tag() == ClassTag{InboxKind::Multiset, OutboxKind::Broadcast});
  CHECK(check_class_conformance(*b, 200, 9).ok);
  CHECK_THROWS_AS(bcast_multiset_from_broadcast(leaf_election_vector_machine(2)), ArgumentError);
}

TEST_CASE("committed histories are sorted and grow by one message per round") {
  const auto b = multiset_from_vector(symmetry_break_machine(3));
  const Graph g = gen::complete(4);
  const PortedGraph pg(g, consistent_port_numbering(g, 3));
  const RunResult r = run(*b, pg, 10);
  REQUIRE(r.trace.states.size() >= 2);
  const auto h = committed_histories(*b, r.trace.states[1][0]);
  REQUIRE(h.size() == 3);
  CHECK(std::is_sorted(h.begin(), h.end()));
  for (const auto& one : h) CHECK(one.size() == 1);
  CHECK(committed_histories(*odd_odd_machine(2), "x").empty());
}

TEST_CASE("history budget") {
  const auto b = multiset_from_vector(random_machine(1, 2, parse_class("vv"), 6), 12);
  const PortedGraph pg(gen::cycle(4), random_port_numbering(gen::cycle(4), 1));
  CHECK_THROWS_AS(run(*b, pg, 10), BudgetError);
}
