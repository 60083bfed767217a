#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/graph.hpp"
#include "pnm/graph_io.hpp"
#include "pnm/matching.hpp"
#include "support.hpp"

using namespace pnm;

namespace {

PortNumbering table(std::vector<std::vector<Port>> t) { return PortNumbering(std::move(t)); }

}  // namespace

TEST_CASE("from_edges rejects loops, repeats and bad ids") {
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 1}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph::from_edges(2, std::vector<Edge>{{0, 2}}), ValidationError);
  const Graph g = gen::star(3);
  CHECK(g.node_count() == 4);
  CHECK(g.degree(0) == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.max_degree() == 3);
}

TEST_CASE("validate_port_numbering on the single edge") {
  const Graph g = gen::path(2);
  CHECK(validate_port_numbering(g, table({{{1, 1}}, {{0, 1}}})).ok);
  // Both ports aimed at node 1's port: not a bijection.
  const Validation twice = validate_port_numbering(g, table({{{1, 1}}, {{1, 1}}}));
  CHECK_FALSE(twice.ok);
  CHECK(twice.violation.find("bijection") != std::string::npos);
  // A port mapped back onto its own node.
  CHECK_FALSE(validate_port_numbering(g, table({{{0, 1}}, {{1, 1}}})).ok);
  // Wrong port count.
  CHECK_FALSE(validate_port_numbering(g, table({{{1, 1}, {1, 1}}, {{0, 1}}})).ok);
}

TEST_CASE("arcs must be edges") {
  // Path 0-1-2 with p sending 0's only port to 2: bijective on ports but
  // the arc (0,2) is not an edge.
  const Graph g = gen::path(3);
  const Validation v = validate_port_numbering(g, table({{{2, 1}}, {{0, 1}, {2, 1}}, {{1, 1}}}));
  CHECK_FALSE(v.ok);
}

TEST_CASE("random and consistent numberings validate") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const Graph g = random_bounded_graph(7, 4, rng);
    CHECK(validate_port_numbering(g, random_port_numbering(g, seed)).ok);
    const PortNumbering c = consistent_port_numbering(g, seed);
    CHECK(validate_port_numbering(g, c).ok);
    CHECK(is_consistent(c));
  }
  // Leaf 1 answers on centre port 2 although centre port 1 reaches it.
  const Graph s = gen::star(2);
  const PortNumbering crossed = table({{{1, 1}, {2, 1}}, {{0, 2}}, {{0, 1}}});
  CHECK(validate_port_numbering(s, crossed).ok);
  CHECK_FALSE(is_consistent(crossed));
}

TEST_CASE("PortedGraph inverse") {
  const Graph g = gen::cycle(5);
  const PortedGraph pg(g, random_port_numbering(g, 3));
  for (NodeId v = 0; v < 5; ++v)
    for (int i = 1; i <= 2; ++i) CHECK(pg.backward(pg.forward({v, i})) == Port{v, i});
  CHECK_THROWS_AS(PortedGraph(g, table({{{1, 1}}})), ValidationError);
}

TEST_CASE("generators") {
  CHECK(gen::cycle(6).edge_count() == 6);
  CHECK(gen::complete(5).edge_count() == 10);
  CHECK(regular_degree(gen::complete(5)) == 4);
  CHECK(bipartition(gen::cycle(6)).has_value());
  CHECK_FALSE(bipartition(gen::cycle(5)).has_value());
  const Graph h = gen::no_one_factor_cubic();
  CHECK(h.node_count() == 16);
  CHECK(regular_degree(h) == 3);
  CHECK(is_connected(h));
}

TEST_CASE("text formats round-trip") {
  const Graph g = gen::cycle(4);
  CHECK(parse_graph(format_graph(g)) == g);
  const PortedGraph pg(g, random_port_numbering(g, 11));
  const PortedGraph back = parse_ported_graph(format_ported_graph(pg));
  CHECK(back.graph() == g);
  CHECK(back.numbering() == pg.numbering());
  CHECK(parse_graph("nodes 3 # comment\n\ne 0 1\ne 1 2\n").edge_count() == 2);
}

TEST_CASE("text format errors carry line numbers") {
  try {
    parse_ported_graph("nodes 2\np 0 1 1 1\np 1 1 1 1\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_graph("nodes 2\ne 0 x\n"), ValidationError);
  CHECK_THROWS_AS(parse_graph(""), ValidationError);
  CHECK_THROWS_AS(parse_ported_graph("nodes 2\np 0 1 1 1\n"), ValidationError);
}

TEST_CASE("graph enumeration matches known counts and is duplicate free") {
  // Non-isomorphic graphs on n nodes: 1, 2, 4, 11, 34; connected: 1, 1, 2, 6, 21.
  const std::vector<std::size_t> all{1, 2, 4, 11, 34}, connected{1, 1, 2, 6, 21};
  for (int n = 1; n <= 5; ++n) {
    const auto gs = graphs_on(n);
    CHECK(gs.size() == all[n - 1]);
    CHECK(graphs_on(n, true).size() == connected[n - 1]);
    for (std::size_t a = 0; a < gs.size(); ++a)
      for (std::size_t b = a + 1; b < gs.size(); ++b) CHECK_FALSE(oracle::isomorphic_brute(gs[a], gs[b]));
  }
  CHECK(graphs_on(6).size() == 156);
  CHECK(graphs_on(6, true).size() == 112);
}

TEST_CASE("canonical form is an isomorphism invariant") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_bounded_graph(6, 4, rng);
    std::vector<int> perm{0, 1, 2, 3, 4, 5};
    rng.shuffle(std::span<int>(perm));
    std::vector<Edge> moved;
    for (auto [u, v] : g.edges()) moved.emplace_back(perm[u], perm[v]);
    const Graph h = Graph::from_edges(6, moved);
    CHECK(canonical_form(g) == canonical_form(h));
  }
  CHECK(canonical_form(gen::path(4)) != canonical_form(gen::star(3)));
}

TEST_CASE("numbering walks cover each scope exactly once") {
  const Graph g = gen::path(3);  // degrees 1, 2, 1
  CHECK(numbering_count(g, NumberingScope::All) == 4);
  CHECK(numbering_count(g, NumberingScope::Consistent) == 2);
  for (auto scope : {NumberingScope::All, NumberingScope::Consistent, NumberingScope::OutgoingOnly,
                     NumberingScope::IncomingOnly}) {
    std::set<std::vector<std::vector<Port>>> seen;
    for_each_numbering(g, scope, [&](const PortNumbering& p) {
      CHECK(validate_port_numbering(g, p).ok);
      if (scope == NumberingScope::Consistent) CHECK(is_consistent(p));
      seen.insert(p.table());
      return true;
    });
    CHECK(seen.size() == numbering_count(g, scope));
  }
  // Star with three leaves: 3!^2 numberings in total.
  std::set<std::vector<std::vector<Port>>> star;
  for_each_numbering(gen::star(3), NumberingScope::All, [&](const PortNumbering& p) {
    star.insert(p.table());
    return true;
  });
  CHECK(star.size() == 36);
  const auto sampled = numberings(gen::complete(5), NumberingScope::All, 10, 1);
  CHECK(sampled.size() == 10);
  for (const auto& p : sampled) CHECK(validate_port_numbering(gen::complete(5), p).ok);
}

TEST_CASE("double cover and one-factorization") {
  for (const Graph& g : {gen::cycle(3), gen::cycle(5), gen::complete(4), gen::complete(5), gen::no_one_factor_cubic()}) {
    const DoubleCover dc = bipartite_double_cover(g);
    CHECK(dc.graph.node_count() == 2 * g.node_count());
    CHECK(dc.graph.edge_count() == 2 * g.edge_count());
    CHECK(regular_degree(dc.graph) == regular_degree(g));
    const auto factors = one_factorization(dc.graph);
    CHECK(factors.size() == static_cast<std::size_t>(*regular_degree(g)));
    CHECK(audit_factorization(dc.graph, factors).ok);
  }
  CHECK_THROWS_AS(one_factorization(gen::cycle(5)), ValidationError);
  CHECK_THROWS_AS(one_factorization(gen::path(3)), ValidationError);
}

TEST_CASE("audit catches a broken factorization") {
  const Graph c4 = gen::cycle(4);
  auto factors = one_factorization(c4);
  REQUIRE(factors.size() == 2);
  std::swap(factors[0].edges[0], factors[1].edges[0]);
  CHECK_FALSE(audit_factorization(c4, factors).ok);
  factors = one_factorization(c4);
  factors.pop_back();
  CHECK_FALSE(audit_factorization(c4, factors).ok);
}

TEST_CASE("symmetric numbering wires port i to port i") {
  for (const Graph& g : {gen::cycle(3), gen::cycle(6), gen::complete(4), gen::no_one_factor_cubic()}) {
    const PortNumbering p = symmetric_port_numbering(g);
    REQUIRE(validate_port_numbering(g, p).ok);
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (int i = 1; i <= g.degree(v); ++i) CHECK(p({v, i}).index == i);
  }
  CHECK_THROWS_AS(symmetric_port_numbering(gen::path(3)), ValidationError);
}

TEST_CASE("has_one_factor agrees with the subset oracle") {
  for (int n = 1; n <= 6; ++n)
    for (const Graph& g : graphs_on(n)) CHECK(has_one_factor(g) == oracle::has_perfect_matching_dp(g));
  CHECK_FALSE(has_one_factor(gen::no_one_factor_cubic()));
  CHECK_FALSE(oracle::has_perfect_matching_dp(gen::no_one_factor_cubic()));
  CHECK(has_one_factor(gen::complete(4)));
  CHECK_THROWS_AS(has_one_factor(gen::cycle(26)), BudgetError);
}
