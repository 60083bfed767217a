#include "pnm/bisim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "pnm/error.hpp"

namespace pnm {

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(block_count);
  for (std::size_t w = 0; w < block.size(); ++w) out[block[w]].push_back(static_cast<int>(w));
  return out;
}

namespace {

template <typename Key>
Partition number_by_first_occurrence(const std::vector<Key>& keys) {
  Partition p;
  std::map<Key, int> ids;
  p.block.resize(keys.size());
  for (std::size_t w = 0; w < keys.size(); ++w) {
    auto [it, fresh] = ids.try_emplace(keys[w], p.block_count);
    if (fresh) ++p.block_count;
    p.block[w] = it->second;
  }
  return p;
}

Partition refine(const KripkeModel& k, bool counting) {
  std::vector<std::vector<char>> profile(k.worlds);
  for (int w = 0; w < k.worlds; ++w)
    for (const auto& val : k.valuation) profile[w].push_back(val[w]);
  Partition p = number_by_first_occurrence(profile);

  std::vector<const Relation*> rels;
  for (const auto& [alpha, r] : k.relations) rels.push_back(&r);
  for (;;) {
    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> sig(k.worlds);
    for (int w = 0; w < k.worlds; ++w) {
      auto& s = sig[w].second;
      sig[w].first = p.block[w];
      for (std::size_t a = 0; a < rels.size(); ++a)
        for (int x : (*rels[a])[w]) s.emplace_back(static_cast<int>(a), p.block[x]);
      std::sort(s.begin(), s.end());
      if (!counting) s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    Partition next = number_by_first_occurrence(sig);
    if (next.block_count == p.block_count) return next;
    p = std::move(next);
  }
}

}  // namespace

Partition coarsest_bisimulation(const KripkeModel& k) { return refine(k, false); }
Partition coarsest_graded_bisimulation(const KripkeModel& k) { return refine(k, true); }

bool refines(const Partition& fine, const Partition& coarse) {
  std::vector<int> image(fine.block_count, -1);
  for (std::size_t w = 0; w < fine.block.size(); ++w) {
    int& c = image[fine.block[w]];
    if (c == -1) c = coarse.block[w];
    else if (c != coarse.block[w]) return false;
  }
  return true;
}

Partition merge_blocks(const Partition& p, int a, int b) {
  std::vector<int> keys = p.block;
  for (int& k : keys)
    if (k == b) k = a;
  return number_by_first_occurrence(keys);
}

std::vector<std::pair<int, int>> partition_relation(const Partition& p) {
  std::vector<std::pair<int, int>> z;
  for (const auto& blk : p.blocks())
    for (int v : blk)
      for (int w : blk) z.emplace_back(v, w);
  return z;
}

namespace {

std::string world_pair(int v, int w) { return "(" + std::to_string(v) + ", " + std::to_string(w) + "')"; }

const std::vector<int>& successors(const KripkeModel& k, Modality alpha, int v) {
  static const std::vector<int> none;
  const Relation* r = k.relation(alpha);
  return r ? (*r)[v] : none;
}

bool prop_at(const KripkeModel& k, int i, int w) {
  return i < static_cast<int>(k.valuation.size()) && k.valuation[i][w];
}

}  // namespace

BisimCheck verify_bisimulation(const KripkeModel& k1, const KripkeModel& k2,
                               const std::vector<std::pair<int, int>>& z, bool graded) {
  BisimCheck check;
  auto fail = [&](std::string clause, std::string what) {
    check.ok = false;
    check.clause = std::move(clause);
    check.counterexample = std::move(what);
    return check;
  };
  if (z.empty()) return fail("B1", "relation is empty");
  std::set<Modality> keys;
  for (const auto& [alpha, r] : k1.relations) keys.insert(alpha);
  for (const auto& [alpha, r] : k2.relations) keys.insert(alpha);
  const int props = std::max(k1.delta, k2.delta);

  for (auto [v, w] : z) {
    if (v < 0 || v >= k1.worlds || w < 0 || w >= k2.worlds)
      throw ArgumentError("relation pair " + world_pair(v, w) + " is outside the models");
    for (int i = 0; i < props; ++i)
      if (prop_at(k1, i, v) != prop_at(k2, i, w))
        return fail("B1", world_pair(v, w) + " disagree on q" + std::to_string(i + 1));
  }

  if (!graded) {
    const std::set<std::pair<int, int>> zs(z.begin(), z.end());
    for (auto [v, w] : z)
      for (Modality alpha : keys) {
        const auto& sv = successors(k1, alpha, v);
        const auto& sw = successors(k2, alpha, w);
        for (int x : sv)
          if (std::none_of(sw.begin(), sw.end(), [&](int y) { return zs.contains({x, y}); }))
            return fail("B2", world_pair(v, w) + ": " + std::to_string(x) + " in R" + modality_key(alpha) + "(" +
                                  std::to_string(v) + ") has no related successor of " + std::to_string(w) + "'");
        for (int y : sw)
          if (std::none_of(sv.begin(), sv.end(), [&](int x) { return zs.contains({x, y}); }))
            return fail("B3", world_pair(v, w) + ": " + std::to_string(y) + "' in R" + modality_key(alpha) + "(" +
                                  std::to_string(w) + "') has no related successor of " + std::to_string(v));
      }
    return check;
  }

  // Graded: classes of the equivalence generated by Z on the disjoint union.
  const int n1 = k1.worlds, total = k1.worlds + k2.worlds;
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (auto [v, w] : z) parent[find(v)] = find(n1 + w);
  std::set<std::pair<int, int>> zs(z.begin(), z.end());
  for (int v = 0; v < n1; ++v)
    for (int w = 0; w < k2.worlds; ++w)
      if (find(v) == find(n1 + w) && !zs.contains({v, w}))
        throw ArgumentError("graded verification needs Z to be an equivalence restricted to W x W'; " +
                            world_pair(v, w) + " is implied but missing");
  for (auto [v, w] : z)
    for (Modality alpha : keys) {
      std::map<int, int> count1, count2;
      for (int x : successors(k1, alpha, v)) ++count1[find(x)];
      for (int y : successors(k2, alpha, w)) ++count2[find(n1 + y)];
      for (auto [cls, c] : count1)
        if (count2[cls] != c)
          return fail("B2*", world_pair(v, w) + ": R" + modality_key(alpha) + " reaches class of world " +
                                 std::to_string(cls) + " " + std::to_string(c) + " times from " + std::to_string(v) +
                                 " but " + std::to_string(count2[cls]) + " times from " + std::to_string(w) + "'");
      for (auto [cls, c] : count2)
        if (count1[cls] != c)
          return fail("B3*", world_pair(v, w) + ": R" + modality_key(alpha) + " reaches class of world " +
                                 std::to_string(cls) + " " + std::to_string(c) + " times from " + std::to_string(w) +
                                 "' but " + std::to_string(count1[cls]) + " times from " + std::to_string(v));
    }
  return check;
}

BisimCheck verify_partition(const KripkeModel& k, const Partition& p, bool graded) {
  return verify_bisimulation(k, k, partition_relation(p), graded);
}

Variant class_variant(const std::string& class_code) {
  if (class_code == "vv") return {true, true};
  if (class_code == "vb") return {true, false};
  if (class_code == "sb") return {false, false};
  throw ArgumentError("impossibility checks cover the classes vv, vb and sb, not '" + class_code + "'");
}

namespace {

// Visits every assignment constant on X; returns the number visited and
// stops at the first accepted one.
std::uint64_t audit(const Graph& g, const std::vector<NodeId>& x, const GraphProblem& problem, bool& found) {
  const int n = g.node_count();
  std::vector<char> in_x(n, 0);
  for (NodeId v : x) in_x[v] = 1;
  std::vector<NodeId> free;
  for (NodeId v = 0; v < n; ++v)
    if (!in_x[v]) free.push_back(v);
  const std::size_t base = problem.outputs.size();
  std::uint64_t visited = 0;
  found = false;
  Solution s(n);
  for (std::size_t xv = 0; xv < base; ++xv) {
    std::vector<std::size_t> digit(free.size(), 0);
    for (;;) {
      for (NodeId v : x) s[v] = problem.outputs[xv];
      for (std::size_t k = 0; k < free.size(); ++k) s[free[k]] = problem.outputs[digit[k]];
      ++visited;
      if (problem.verify(g, s)) {
        found = true;
        return visited;
      }
      std::size_t k = 0;
      while (k < free.size() && ++digit[k] == base) digit[k++] = 0;
      if (k == free.size()) break;
    }
  }
  return visited;
}

std::uint64_t audit_size(const Graph& g, const std::vector<NodeId>& x, const GraphProblem& problem) {
  std::set<NodeId> xs(x.begin(), x.end());
  std::uint64_t total = problem.outputs.size();
  for (int k = 0; k < g.node_count() - static_cast<int>(xs.size()); ++k) {
    if (total > UINT64_MAX / problem.outputs.size()) return UINT64_MAX;
    total *= problem.outputs.size();
  }
  return total;
}

}  // namespace

Refutation impossibility_check(const Graph& g, const std::vector<NodeId>& x, const GraphProblem& problem,
                               const std::string& class_code, const PortNumbering& p, std::uint64_t budget) {
  Refutation r;
  r.class_code = class_code;
  r.variant = class_variant(class_code);
  r.x = x;
  std::sort(r.x.begin(), r.x.end());
  r.x.erase(std::unique(r.x.begin(), r.x.end()), r.x.end());
  if (r.x.empty()) throw ArgumentError("impossibility_check needs a nonempty X");
  for (NodeId v : r.x)
    if (v < 0 || v >= g.node_count()) throw ArgumentError("X contains a node outside the graph");
  const PortedGraph pg(g, p);
  const KripkeModel k = kripke_model(pg, r.variant);
  r.partition = coarsest_bisimulation(k);
  for (NodeId v : r.x)
    if (!r.partition.same_block(v, r.x.front())) {
      r.reason = "nodes " + std::to_string(r.x.front()) + " and " + std::to_string(v) + " are not bisimilar";
      return r;
    }
  if (audit_size(g, r.x, problem) > budget)
    throw BudgetError("impossibility_check: solution audit exceeds " + std::to_string(budget) + " assignments");
  bool found = false;
  r.audited = audit(g, r.x, problem, found);
  if (found) {
    r.reason = "a solution constant on X exists";
    return r;
  }
  r.refuted = true;
  return r;
}

BisimCheck verify_refutation(const Graph& g, const GraphProblem& problem, const PortNumbering& p,
                             const Refutation& r) {
  BisimCheck check;
  auto fail = [&](std::string what) {
    check.ok = false;
    check.clause = "certificate";
    check.counterexample = std::move(what);
    return check;
  };
  if (!r.refuted) return fail("not a refutation: " + r.reason);
  const PortedGraph pg(g, p);
  const KripkeModel k = kripke_model(pg, class_variant(r.class_code));
  if (r.partition.block.size() != static_cast<std::size_t>(g.node_count())) return fail("partition size mismatch");
  const BisimCheck b = verify_partition(k, r.partition, false);
  if (!b.ok) return b;
  for (NodeId v : r.x)
    if (!r.partition.same_block(v, r.x.front())) return fail("X is split by the partition");
  bool found = false;
  const std::uint64_t visited = audit(g, r.x, problem, found);
  if (found) return fail("the verifier accepts an assignment constant on X");
  if (visited != r.audited) return fail("audit count differs: " + std::to_string(visited));
  return check;
}

}  // namespace pnm
