#pragma once

// Reference implementations used as oracles. They work straight from the
// definitions on small inputs and share no code with the library beyond
// the graph and formula data types.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "pnm/enumerate.hpp"
#include "pnm/formula.hpp"
#include "pnm/graph.hpp"
#include "pnm/kripke.hpp"
#include "pnm/rng.hpp"

namespace oracle {

using pnm::Formula;
using pnm::FormulaKind;
using pnm::kAny;
using pnm::NodeId;
using pnm::PortedGraph;

// Successor count of u for modality alpha, read off the port table: v is an
// alpha-successor of u when some port (v,j) is wired to (u,i) with i, j
// matching alpha. In a simple graph at most one port of v reaches u.
inline int successors(const PortedGraph& pg, NodeId u, pnm::Modality alpha, const std::vector<char>& holds) {
  int count = 0;
  for (NodeId v = 0; v < pg.node_count(); ++v)
    for (int j = 1; j <= pg.degree(v); ++j) {
      const pnm::Port t = pg.forward({v, j});
      if (t.node != u) continue;
      if (alpha.in != kAny && t.index != alpha.in) continue;
      if (alpha.out != kAny && j != alpha.out) continue;
      if (holds[v]) ++count;
    }
  return count;
}

inline std::vector<char> eval(const PortedGraph& pg, const Formula& f) {
  const int n = pg.node_count();
  std::vector<char> out(n, 0);
  switch (f->kind) {
    case FormulaKind::Prop:
      for (NodeId v = 0; v < n; ++v) out[v] = pg.degree(v) == f->prop;
      break;
    case FormulaKind::Not: {
      auto a = eval(pg, f->left);
      for (NodeId v = 0; v < n; ++v) out[v] = !a[v];
      break;
    }
    case FormulaKind::And: {
      auto a = eval(pg, f->left), b = eval(pg, f->right);
      for (NodeId v = 0; v < n; ++v) out[v] = a[v] && b[v];
      break;
    }
    case FormulaKind::Dia: {
      auto a = eval(pg, f->left);
      for (NodeId v = 0; v < n; ++v) out[v] = successors(pg, v, f->alpha, a) >= f->grade;
      break;
    }
  }
  return out;
}

// Random formula inside the signature: a '+' position gets a port in
// 1..delta and a '-' position is '*'. Grades appear only when graded.
inline Formula random_formula(pnm::Rng& rng, pnm::FormulaFactory& F, int depth, const pnm::Signature& sig) {
  const auto roll = rng.below(depth == 0 ? 3 : 6);
  if (roll == 0 || (depth == 0 && roll < 3)) {
    if (depth == 0 && roll == 2) return F.neg(F.prop(1 + static_cast<int>(rng.below(sig.delta))));
    return F.prop(1 + static_cast<int>(rng.below(sig.delta)));
  }
  if (roll == 1) return F.neg(random_formula(rng, F, depth, sig));
  if (roll == 2) return F.conj(random_formula(rng, F, depth, sig), random_formula(rng, F, depth - 1, sig));
  if (roll == 3) return F.disj(random_formula(rng, F, depth - 1, sig), random_formula(rng, F, depth, sig));
  pnm::Modality alpha;
  alpha.in = sig.variant.in ? 1 + static_cast<int>(rng.below(sig.delta)) : kAny;
  alpha.out = sig.variant.out ? 1 + static_cast<int>(rng.below(sig.delta)) : kAny;
  const int grade = sig.graded && rng.coin() ? 1 + static_cast<int>(rng.below(3)) : 1;
  return F.dia(alpha, grade, random_formula(rng, F, depth - 1, sig));
}

// Formula of modal depth exactly depth.
inline Formula random_formula_exact(pnm::Rng& rng, pnm::FormulaFactory& F, int depth, const pnm::Signature& sig) {
  for (;;) {
    Formula f = random_formula(rng, F, depth, sig);
    if (pnm::modal_depth(f) == depth) return f;
  }
}

// Largest bisimulation between worlds of one model, by deleting pairs from
// the full same-valuation relation until nothing changes.
inline std::vector<std::vector<char>> naive_bisimilarity(const pnm::KripkeModel& k) {
  const int n = k.worlds;
  std::vector<std::vector<char>> z(n, std::vector<char>(n, 1));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (const auto& val : k.valuation)
        if (val[x] != val[y]) z[x][y] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        if (!z[x][y]) continue;
        bool keep = true;
        for (const auto& [alpha, rel] : k.relations) {
          auto covered = [&](int a, int b) {
            for (int a2 : rel[a]) {
              bool found = false;
              for (int b2 : rel[b]) found = found || z[a2][b2];
              if (!found) return false;
            }
            return true;
          };
          if (!covered(x, y) || !covered(y, x)) keep = false;
        }
        if (!keep) {
          z[x][y] = 0;
          changed = true;
        }
      }
  }
  return z;
}

// Graded bisimilarity classes by plain iteration: two worlds stay together
// while their valuations and, per relation, the multisets of successor
// classes agree.
inline std::vector<int> naive_graded_classes(const pnm::KripkeModel& k) {
  const int n = k.worlds;
  std::vector<int> cls(n, 0);
  for (;;) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(n);
    for (int w = 0; w < n; ++w) {
      std::vector<int> key{cls[w]};
      for (const auto& val : k.valuation) key.push_back(val[w]);
      for (const auto& [alpha, rel] : k.relations) {
        std::vector<int> succ;
        for (int s : rel[w]) succ.push_back(cls[s]);
        std::sort(succ.begin(), succ.end());
        key.push_back(-1);
        key.insert(key.end(), succ.begin(), succ.end());
      }
      next[w] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
    }
    int before = *std::max_element(cls.begin(), cls.end());
    int after = *std::max_element(next.begin(), next.end());
    cls = next;
    if (before == after) return cls;
  }
}

// β_t and B_t with exact nested values: each distinct (β_{t-1}, B_{t-1})
// gets a fresh integer id, so equal ids mean equal structures.
struct ExactBeta {
  std::vector<std::vector<int>> beta;                                  // beta[t][v]
  std::vector<std::vector<std::set<std::tuple<int, int, int>>>> recv;  // recv[t][v]
};

inline ExactBeta exact_beta(const PortedGraph& pg, int delta) {
  const int n = pg.node_count();
  ExactBeta e;
  std::map<std::pair<int, std::set<std::tuple<int, int, int>>>, int> intern;
  e.beta.assign(1, std::vector<int>(n, 0));
  e.recv.assign(1, std::vector<std::set<std::tuple<int, int, int>>>(n));
  intern[{-1, {}}] = 0;
  for (int t = 1; t <= 2 * delta; ++t) {
    std::vector<int> beta(n);
    for (NodeId v = 0; v < n; ++v) {
      auto key = std::make_pair(e.beta[t - 1][v], e.recv[t - 1][v]);
      beta[v] = intern.emplace(key, static_cast<int>(intern.size())).first->second;
    }
    std::vector<std::set<std::tuple<int, int, int>>> got(n);
    for (NodeId v = 0; v < n; ++v)
      for (int i = 1; i <= pg.degree(v); ++i) got[pg.forward({v, i}).node].insert({beta[v], pg.degree(v), i});
    e.beta.push_back(beta);
    e.recv.push_back(got);
  }
  return e;
}

// True when a and b induce the same equivalence on indices.
template <typename A, typename B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

// Perfect matching by subset dynamic programming; independent of the
// library's backtracking search.
inline bool has_perfect_matching_dp(const pnm::Graph& g) {
  const int n = g.node_count();
  if (n % 2) return false;
  std::vector<char> reach(std::size_t{1} << n, 0);
  reach[0] = 1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!reach[mask]) continue;
    int v = 0;
    while (v < n && (mask >> v & 1)) ++v;
    if (v == n) continue;
    for (NodeId u : g.neighbors(v))
      if (!(mask >> u & 1)) reach[mask | 1u << v | 1u << u] = 1;
  }
  return reach[(std::size_t{1} << n) - 1];
}

inline bool isomorphic_brute(const pnm::Graph& a, const pnm::Graph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> perm(a.node_count());
  for (int i = 0; i < a.node_count(); ++i) perm[i] = i;
  do {
    bool ok = true;
    for (auto [u, v] : a.edges())
      if (!b.has_edge(perm[u], perm[v])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace oracle
