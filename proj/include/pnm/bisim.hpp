#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pnm/graph.hpp"
#include "pnm/kripke.hpp"
#include "pnm/problems.hpp"

namespace pnm {

/// Block ids are numbered by first occurrence over worlds 0, 1, ...
struct Partition {
  std::vector<int> block;
  int block_count = 0;

  std::vector<std::vector<int>> blocks() const;
  bool same_block(int v, int w) const { return block[v] == block[w]; }
};

Partition coarsest_bisimulation(const KripkeModel& k);
Partition coarsest_graded_bisimulation(const KripkeModel& k);

/// True when every block of fine lies inside a block of coarse.
bool refines(const Partition& fine, const Partition& coarse);
/// Blocks a and b fused into one, ids renumbered.
Partition merge_blocks(const Partition& p, int a, int b);
/// All pairs (v, w) with v and w in the same block.
std::vector<std::pair<int, int>> partition_relation(const Partition& p);

struct BisimCheck {
  bool ok = true;
  std::string clause;  // "B1", "B2", "B3", "B2*", "B3*"
  std::string counterexample;
};

/// Checks that Z ⊆ W×W' is a bisimulation between k1 and k2. With graded
/// set, Z must be an equivalence on the disjoint union restricted to W×W'
/// (otherwise ArgumentError), and successor counts into every class must
/// agree for each pair of Z.
BisimCheck verify_bisimulation(const KripkeModel& k1, const KripkeModel& k2,
                               const std::vector<std::pair<int, int>>& z, bool graded);

/// The partition's relation checked as a bisimulation of k with itself.
BisimCheck verify_partition(const KripkeModel& k, const Partition& p, bool graded);

/// Kripke variant used for a class code: vv -> ++, vb -> +-, sb -> --.
Variant class_variant(const std::string& class_code);

struct Refutation {
  bool refuted = false;
  std::string reason;  // why the check is inconclusive
  std::string class_code;
  Variant variant;
  Partition partition;
  std::vector<NodeId> x;
  /// Assignments constant on X that the verifier examined; all rejected
  /// when refuted.
  std::uint64_t audited = 0;
};

inline constexpr std::uint64_t kSolutionAuditBudget = 1u << 22;

/// If X is one bisimulation class-fragment of K(g, p) and no solution of the
/// problem is constant on X, no algorithm of the class solves the problem.
/// Throws BudgetError when the audit would exceed the budget.
Refutation impossibility_check(const Graph& g, const std::vector<NodeId>& x, const GraphProblem& problem,
                               const std::string& class_code, const PortNumbering& p,
                               std::uint64_t budget = kSolutionAuditBudget);

/// Re-checks a refutation without trusting it: the partition is verified as
/// a bisimulation of K(g, p), X lies in one block, and the audit is redone.
BisimCheck verify_refutation(const Graph& g, const GraphProblem& problem, const PortNumbering& p,
                             const Refutation& r);

}  // namespace pnm
