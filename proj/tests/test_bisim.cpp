#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pnm/bisim.hpp"
#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/matching.hpp"
#include "pnm/problems.hpp"
#include "support.hpp"

using namespace pnm;

namespace {

const std::vector<std::string> kVariants{"++", "-+", "+-", "--"};

std::vector<KripkeModel> models(int max_n, std::uint64_t per_graph) {
  std::vector<KripkeModel> out;
  for (int n = 1; n <= max_n; ++n)
    for (const Graph& g : graphs_on(n))
      for (const auto& p : numberings(g, NumberingScope::All, per_graph, n)) {
        const PortedGraph pg(g, p);
        for (const auto& code : kVariants) out.push_back(kripke_model(pg, parse_variant(code), std::max(1, g.max_degree())));
      }
  return out;
}

}  // namespace

TEST_CASE("plain partition is exactly bisimilarity") {
  for (const KripkeModel& k : models(5, 3)) {
    const Partition p = coarsest_bisimulation(k);
    const auto z = oracle::naive_bisimilarity(k);
    for (int v = 0; v < k.worlds; ++v)
      for (int w = 0; w < k.worlds; ++w) CHECK(p.same_block(v, w) == static_cast<bool>(z[v][w]));
  }
}

TEST_CASE("graded partition matches the counting oracle and refines the plain one") {
  for (const KripkeModel& k : models(5, 3)) {
    const Partition g = coarsest_graded_bisimulation(k);
    CHECK(oracle::same_partition(g.block, oracle::naive_graded_classes(k)));
    CHECK(refines(g, coarsest_bisimulation(k)));
    CHECK(verify_partition(k, g, true).ok);
  }
}

TEST_CASE("partitions verify and are maximal") {
  for (const KripkeModel& k : models(4, 2)) {
    const Partition p = coarsest_bisimulation(k);
    REQUIRE(verify_partition(k, p, false).ok);
    for (int a = 0; a < p.block_count; ++a)
      for (int b = a + 1; b < p.block_count; ++b) CHECK_FALSE(verify_partition(k, merge_blocks(p, a, b), false).ok);
  }
}

TEST_CASE("block ids follow first occurrence") {
  Partition p;
  p.block = {0, 1, 0, 2};
  p.block_count = 3;
  CHECK(p.blocks() == std::vector<std::vector<int>>{{0, 2}, {1}, {3}});
  const Partition m = merge_blocks(p, 1, 2);
  CHECK(m.block == std::vector<int>{0, 1, 0, 1});
  CHECK(m.block_count == 2);
}

TEST_CASE("star leaves and cycles") {
  const PortedGraph star(gen::star(3), random_port_numbering(gen::star(3), 4));
  const Partition ps = coarsest_bisimulation(kripke_model(star, parse_variant("+-")));
  CHECK(ps.blocks() == std::vector<std::vector<int>>{{0}, {1, 2, 3}});
  const PortedGraph c4(gen::cycle(4), symmetric_port_numbering(gen::cycle(4)));
  CHECK(coarsest_bisimulation(kripke_model(c4, parse_variant("++"))).block_count == 1);
  const PortedGraph c4r(gen::cycle(4), random_port_numbering(gen::cycle(4), 1));
  CHECK(coarsest_bisimulation(kripke_model(c4r, parse_variant("--"))).block_count == 1);
}

TEST_CASE("verify_bisimulation names the broken clause") {
  const PortedGraph pg(gen::path(3), random_port_numbering(gen::path(3), 1));
  const KripkeModel k = kripke_model(pg, parse_variant("--"));
  const BisimCheck b1 = verify_bisimulation(k, k, {{0, 1}}, false);
  CHECK_FALSE(b1.ok);
  CHECK(b1.clause == "B1");
  // Leaves 0 and 2 related, but their successor 1 is not related to itself.
  const BisimCheck b2 = verify_bisimulation(k, k, {{0, 2}}, false);
  CHECK_FALSE(b2.ok);
  CHECK(b2.clause == "B2");
  CHECK_FALSE(verify_bisimulation(k, k, {{0, 2}, {1, 1}}, false).ok);
  CHECK(verify_bisimulation(k, k, {{0, 2}, {2, 0}, {1, 1}}, false).ok);
  CHECK(verify_bisimulation(k, k, {{0, 2}, {2, 0}, {1, 1}}, true).ok);
  // (0,0), (0,2), (2,0) put 0, 2, 0', 2' in one class, so (2,2') is implied.
  CHECK_THROWS_AS(verify_bisimulation(k, k, {{0, 0}, {0, 2}, {2, 0}, {1, 1}}, true), ArgumentError);
  CHECK(verify_bisimulation(k, k, {{0, 2}, {2, 0}, {0, 0}, {2, 2}, {1, 1}}, true).ok);
}

TEST_CASE("graded bisimulation counts successors") {
  // Centre 0 has two leaves and one degree-2 neighbour; centre 5 has one
  // leaf and two degree-2 neighbours.
  const std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}, {3, 4}, {5, 6}, {5, 7}, {5, 8}, {7, 9}, {8, 10}};
  const Graph g = Graph::from_edges(11, edges);
  const KripkeModel k = kripke_model(PortedGraph(g, random_port_numbering(g, 1)), parse_variant("--"));
  CHECK(coarsest_bisimulation(k).same_block(0, 5));
  const Partition graded = coarsest_graded_bisimulation(k);
  CHECK_FALSE(graded.same_block(0, 5));
  const BisimCheck forced = verify_bisimulation(k, k, partition_relation(coarsest_bisimulation(k)), true);
  CHECK_FALSE(forced.ok);
  CHECK(forced.clause.back() == '*');
}

TEST_CASE("bisimilar worlds satisfy the same formulas") {
  FormulaFactory F;
  Rng rng(3);
  for (const KripkeModel& k : models(4, 2)) {
    const Partition plain = coarsest_bisimulation(k);
    const Partition graded = coarsest_graded_bisimulation(k);
    for (int rep = 0; rep < 5; ++rep) {
      const bool g = !k.variant->in && rng.coin();
      const Formula f = oracle::random_formula(rng, F, 3, {k.delta, *k.variant, g});
      const auto truth = eval(k, f);
      const Partition& p = g ? graded : plain;
      for (int v = 0; v < k.worlds; ++v)
        for (int w = 0; w < k.worlds; ++w)
          if (p.same_block(v, w)) CHECK(truth[v] == truth[w]);
    }
  }
}

TEST_CASE("impossibility checks") {
  const Graph s = gen::star(3);
  const PortNumbering p = random_port_numbering(s, 2);
  const Refutation r = impossibility_check(s, {1, 2, 3}, leaf_election(), "vb", p);
  CHECK(r.refuted);
  CHECK(r.audited == 2 * 2);
  CHECK(verify_refutation(s, leaf_election(), p, r).ok);
  // In VV the leaves are told apart by the centre's out-ports.
  const Refutation vv = impossibility_check(s, {1, 2, 3}, leaf_election(), "vv", p);
  CHECK_FALSE(vv.refuted);
  CHECK(vv.reason.find("not bisimilar") != std::string::npos);
  // X inside one block but a solution constant on X exists.
  const Refutation loose = impossibility_check(s, {1}, leaf_election(), "vb", p);
  CHECK_FALSE(loose.refuted);
  CHECK_FALSE(verify_refutation(s, leaf_election(), p, loose).ok);
  Refutation forged = r;
  forged.partition.block = {0, 0, 0, 0};
  forged.partition.block_count = 1;
  CHECK_FALSE(verify_refutation(s, leaf_election(), p, forged).ok);
  CHECK_THROWS_AS(impossibility_check(s, {1}, leaf_election(), "mv", p), ArgumentError);
  CHECK_THROWS_AS(impossibility_check(gen::cycle(30), {0}, odd_odd(), "sb", consistent_port_numbering(gen::cycle(30), 1)),
                  BudgetError);
}
