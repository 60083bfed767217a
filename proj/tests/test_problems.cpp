#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnm/bisim.hpp"
#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/kripke.hpp"
#include "pnm/matching.hpp"
#include "pnm/problems.hpp"
#include "support.hpp"

#include <algorithm>

using namespace pnm;

namespace {

Solution solution_of(const RunResult& r) {
  Solution s;
  for (const auto& y : r.outputs) {
    REQUIRE(y.has_value());
    s.push_back(*y);
  }
  return s;
}

Solution odd_odd_oracle(const Graph& g) {
  Solution s(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    int odd = 0;
    for (NodeId u : g.neighbors(v)) odd += g.degree(u) % 2;
    s[v] = odd % 2;
  }
  return s;
}

bool constant(const Solution& s) { return std::adjacent_find(s.begin(), s.end(), std::not_equal_to<>()) == s.end(); }

}  // namespace

TEST_CASE("star shapes") {
  CHECK(star_shape(gen::star(3))->k == 3);
  CHECK(star_shape(gen::star(3))->center == 0);
  CHECK_FALSE(star_shape(gen::star(1)));
  CHECK_FALSE(star_shape(gen::path(4)));
  CHECK_FALSE(star_shape(graph_union(gen::star(2), gen::path(1))));
  const Graph relabelled = Graph::from_edges(4, std::vector<Edge>{{0, 3}, {1, 3}, {2, 3}});
  CHECK(star_shape(relabelled)->center == 3);
  // path(3) is the 2-star.
  CHECK(star_shape(gen::path(3))->k == 2);
}

TEST_CASE("leaf election verifier") {
  const GraphProblem p = leaf_election();
  const Graph s = gen::star(3);
  CHECK(p.verify(s, {0, 1, 0, 0}));
  CHECK(p.verify(s, {0, 0, 0, 1}));
  CHECK_FALSE(p.verify(s, {0, 1, 1, 0}));
  CHECK_FALSE(p.verify(s, {1, 1, 0, 0}));
  CHECK_FALSE(p.verify(s, {0, 0, 0, 0}));
  CHECK_FALSE(p.verify(s, {0, 2, 0, 0}));
  CHECK_FALSE(p.verify(s, {0, 1, 0}));
  CHECK(p.verify(gen::cycle(4), {1, 1, 1, 1}));
}

TEST_CASE("odd_odd verifier agrees with a direct count") {
  const GraphProblem p = odd_odd();
  for (const Graph& g : graphs_up_to(6)) {
    const Solution s = odd_odd_oracle(g);
    CHECK(p.verify(g, s));
    for (std::size_t v = 0; v < s.size(); ++v) {
      Solution flipped = s;
      flipped[v] ^= 1;
      CHECK_FALSE(p.verify(g, flipped));
    }
  }
}

TEST_CASE("script G membership") {
  CHECK(is_in_script_G(gen::no_one_factor_cubic()));
  CHECK_FALSE(is_in_script_G(gen::complete(4)));
  CHECK_FALSE(is_in_script_G(gen::cycle(5)));
  CHECK_FALSE(is_in_script_G(graph_union(gen::no_one_factor_cubic(), gen::no_one_factor_cubic())));
  for (const Graph& g : graphs_up_to(7, true)) {
    const auto k = regular_degree(g);
    const bool expected = k && *k % 2 == 1 && !oracle::has_perfect_matching_dp(g);
    CHECK(is_in_script_G(g) == expected);
  }
  const GraphProblem p = nonconstant_on_G();
  const Graph h = gen::no_one_factor_cubic();
  Solution s(h.node_count(), 0);
  CHECK_FALSE(p.verify(h, s));
  s[5] = 1;
  CHECK(p.verify(h, s));
  CHECK(p.verify(gen::complete(4), {1, 1, 1, 1}));
}

TEST_CASE("local types") {
  const Graph s = gen::star(3);
  const PortedGraph pg(s, PortNumbering({{{1, 1}, {2, 1}, {3, 1}}, {{0, 2}}, {{0, 3}}, {{0, 1}}}));
  CHECK(local_type(pg, 0, 3) == std::vector<int>{1, 1, 1});
  CHECK(local_type(pg, 1, 3) == std::vector<int>{2, 0, 0});
  CHECK(local_type(pg, 3, 2) == std::vector<int>{1, 0});
}

TEST_CASE("leaf_election_machine solves leaf election on every star numbering") {
  // A Set machine cannot see the order of its incoming ports, so walking
  // outgoing orders covers all behaviours.
  const GraphProblem problem = leaf_election();
  for (int k = 2; k <= 6; ++k) {
    const Graph s = gen::star(k);
    const auto m = leaf_election_machine(k);
    std::uint64_t seen = 0;
    for_each_numbering(s, NumberingScope::OutgoingOnly, [&](const PortNumbering& p) {
      const RunResult r = run(*m, PortedGraph(s, p), 5, {.record_states = false});
      CHECK(r.rounds == 1);
      CHECK(problem.verify(s, solution_of(r)));
      ++seen;
      return true;
    });
    CHECK(seen == numbering_count(s, NumberingScope::OutgoingOnly));
  }
  for (const PortNumbering& p : numberings(gen::star(3), NumberingScope::All, 1000, 1)) {
    const RunResult r = run(*leaf_election_machine(3), PortedGraph(gen::star(3), p), 5);
    CHECK(problem.verify(gen::star(3), solution_of(r)));
  }
}

TEST_CASE("leaf_election_machine stops on every small graph") {
  const GraphProblem problem = leaf_election();
  for (const Graph& g : graphs_up_to(5)) {
    const auto m = leaf_election_machine(std::max(1, g.max_degree()));
    for (const PortNumbering& p : numberings(g, NumberingScope::OutgoingOnly, 24, 3)) {
      const RunResult r = run(*m, PortedGraph(g, p), 5, {.record_states = false});
      CHECK_FALSE(r.timed_out);
      CHECK(problem.verify(g, solution_of(r)));
    }
  }
}

TEST_CASE("odd_odd_machine matches the direct count") {
  int runs = 0;
  for (const Graph& g : graphs_up_to(6)) {
    const auto m = odd_odd_machine(std::max(1, g.max_degree()));
    for (const PortNumbering& p : numberings(g, NumberingScope::All, 3, 11)) {
      const RunResult r = run(*m, PortedGraph(g, p), 5, {.record_states = false});
      CHECK(r.rounds == 1);
      CHECK(solution_of(r) == odd_odd_oracle(g));
      ++runs;
    }
  }
  CHECK(runs > 300);
  // Leaves of a star have one odd neighbour when k is odd.
  const RunResult r = run(*odd_odd_machine(3), PortedGraph(gen::star(3), random_port_numbering(gen::star(3), 1)), 5);
  CHECK(solution_of(r) == Solution{1, 1, 1, 1});
}

TEST_CASE("parity pair") {
  const ParityPair pp = parity_separation_pair();
  CHECK(odd_odd_oracle(pp.a)[pp.u] == 1);
  CHECK(odd_odd_oracle(pp.b)[pp.w] == 0);
  const Graph u = graph_union(pp.a, pp.b);
  const NodeId w = pp.a.node_count() + pp.w;
  const PortedGraph pg(u, random_port_numbering(u, 5));
  const KripkeModel k = kripke_model(pg, parse_variant("--"));
  CHECK(coarsest_bisimulation(k).same_block(pp.u, w));
  CHECK_FALSE(coarsest_graded_bisimulation(k).same_block(pp.u, w));
  const auto z = oracle::naive_bisimilarity(k);
  CHECK(z[pp.u][w]);
  const Refutation r = impossibility_check(u, {pp.u, w}, odd_odd(), "sb", pg.numbering());
  CHECK(r.refuted);
  CHECK(verify_refutation(u, odd_odd(), pg.numbering(), r).ok);
  // Graded modalities see the difference, so MB is not refuted.
  CHECK_THROWS_AS(impossibility_check(u, {pp.u, w}, odd_odd(), "mb", pg.numbering()), ArgumentError);
}

TEST_CASE("independent search finds parity witnesses among small graphs") {
  // Pairs of connected graphs with a pair of K(-,-)-bisimilar nodes on which
  // odd_odd is forced to differ.
  const auto graphs = graphs_up_to(6, true);
  int found = 0;
  for (std::size_t i = 0; i < graphs.size() && !found; ++i)
    for (std::size_t j = i; j < graphs.size() && !found; ++j) {
      const Graph u = graph_union(graphs[i], graphs[j]);
      if (u.node_count() < 2) continue;
      const KripkeModel k = kripke_model(PortedGraph(u, random_port_numbering(u, 1)), parse_variant("--"));
      const auto z = oracle::naive_bisimilarity(k);
      const Solution s = odd_odd_oracle(u);
      for (NodeId a = 0; a < u.node_count(); ++a)
        for (NodeId b = 0; b < u.node_count(); ++b)
          if (z[a][b] && s[a] != s[b]) ++found;
    }
  CHECK(found > 0);
}

TEST_CASE("symmetry_break follows local types") {
  for (const Graph& g : graphs_up_to(6, true)) {
    const int delta = std::max(1, g.max_degree());
    const auto m = symmetry_break_machine(delta);
    for (const PortNumbering& p : numberings(g, NumberingScope::Consistent, 6, 2)) {
      const PortedGraph pg(g, p);
      const RunResult r = run(*m, pg, 10, {.record_states = false});
      CHECK(r.rounds == 2);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        bool top = true;
        for (NodeId u : g.neighbors(v)) top = top && local_type(pg, u, delta) <= local_type(pg, v, delta);
        CHECK(*r.outputs[v] == (top ? 1 : 0));
      }
    }
  }
}

TEST_CASE("symmetry_break is non-constant on the cubic graph without a perfect matching") {
  const Graph g = gen::no_one_factor_cubic();
  const GraphProblem problem = nonconstant_on_G();
  const auto m = symmetry_break_machine(3);
  for (const PortNumbering& p : numberings(g, NumberingScope::Consistent, 30, 7)) {
    const RunResult r = run(*m, PortedGraph(g, p), 10, {.record_states = false});
    CHECK(problem.verify(g, solution_of(r)));
  }
  // The numbering from a one-factorisation of the double cover is not
  // consistent and makes every node look alike.
  const PortNumbering sym = symmetric_port_numbering(g);
  CHECK_FALSE(is_consistent(sym));
  CHECK(constant(solution_of(run(*m, PortedGraph(g, sym), 10))));
}

TEST_CASE("names") {
  for (const std::string& name : machine_names()) CHECK(named_machine(name, 3)->name() == name);
  CHECK_THROWS_AS(named_machine("nope", 3), ArgumentError);
  CHECK(named_problem("odd_odd").name == "odd_odd");
  CHECK_THROWS_AS(named_problem("nope"), ArgumentError);
}
