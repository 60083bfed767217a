#include "pnm/kripke.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "json.hpp"

#include "pnm/error.hpp"

namespace pnm {

const Relation* KripkeModel::relation(Modality alpha) const {
  auto it = relations.find(alpha);
  return it == relations.end() ? nullptr : &it->second;
}

std::vector<std::pair<int, int>> KripkeModel::pairs(Modality alpha) const {
  std::vector<std::pair<int, int>> out;
  if (const Relation* r = relation(alpha))
    for (int v = 0; v < worlds; ++v)
      for (int w : (*r)[v]) out.emplace_back(v, w);
  return out;
}

KripkeModel kripke_model(const PortedGraph& pg, Variant variant, int delta) {
  if (delta < pg.max_degree())
    throw ArgumentError("model delta " + std::to_string(delta) + " is below the graph's maximum degree");
  const int n = pg.node_count();
  KripkeModel k;
  k.worlds = n;
  k.delta = delta;
  k.variant = variant;
  k.valuation.assign(delta, std::vector<char>(n, 0));
  for (NodeId v = 0; v < n; ++v)
    if (pg.degree(v) >= 1) k.valuation[pg.degree(v) - 1][v] = 1;

  // Relations are keyed by the indices the variant keeps; the other
  // position is collapsed to '*'.
  auto key = [&](int i, int j) {
    return Modality{variant.in ? i : kAny, variant.out ? j : kAny};
  };
  for (int i = 1; i <= delta; ++i)
    for (int j = 1; j <= delta; ++j) k.relations.try_emplace(key(i, j), Relation(n));
  // (u, v) ∈ R_(i,j) iff p((v,j)) = (u,i): walk every port (v,j) of the successor.
  for (NodeId v = 0; v < n; ++v)
    for (int j = 1; j <= pg.degree(v); ++j) {
      const Port target = pg.forward({v, j});
      k.relations[key(target.index, j)][target.node].push_back(v);
    }
  for (auto& [alpha, rel] : k.relations)
    for (auto& succ : rel) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
  return k;
}

KripkeModel kripke_model(const PortedGraph& pg, Variant variant) {
  return kripke_model(pg, variant, std::max(1, pg.max_degree()));
}

KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b) {
  if (a.delta != b.delta || a.variant != b.variant)
    throw ArgumentError("disjoint_union needs models over the same signature");
  KripkeModel k;
  k.worlds = a.worlds + b.worlds;
  k.delta = a.delta;
  k.variant = a.variant;
  k.valuation.assign(k.delta, {});
  for (int i = 0; i < k.delta; ++i) {
    k.valuation[i] = a.valuation[i];
    k.valuation[i].insert(k.valuation[i].end(), b.valuation[i].begin(), b.valuation[i].end());
  }
  std::set<Modality> keys;
  for (const auto& [alpha, r] : a.relations) keys.insert(alpha);
  for (const auto& [alpha, r] : b.relations) keys.insert(alpha);
  for (Modality alpha : keys) {
    Relation rel(k.worlds);
    if (const Relation* ra = a.relation(alpha)) std::copy(ra->begin(), ra->end(), rel.begin());
    if (const Relation* rb = b.relation(alpha))
      for (int w = 0; w < b.worlds; ++w)
        for (int x : (*rb)[w]) rel[a.worlds + w].push_back(a.worlds + x);
    k.relations.emplace(alpha, std::move(rel));
  }
  return k;
}

namespace {

void check_modality(const KripkeModel& k, const FormulaNode& n) {
  const std::string key = modality_key(n.alpha);
  if (k.variant) {
    if (k.variant->in != (n.alpha.in != kAny) || k.variant->out != (n.alpha.out != kAny))
      throw SignatureError("modality " + key + " does not belong to the " + variant_code(*k.variant) +
                           " signature");
    if (n.alpha.in > k.delta || n.alpha.out > k.delta)
      throw SignatureError("modality " + key + " exceeds delta " + std::to_string(k.delta));
  }
}

}  // namespace

std::vector<char> eval(const KripkeModel& k, const Formula& f) {
  std::unordered_map<const FormulaNode*, std::vector<char>> memo;
  std::function<const std::vector<char>&(const Formula&)> go =
      [&](const Formula& g) -> const std::vector<char>& {
    if (auto it = memo.find(g.get()); it != memo.end()) return it->second;
    std::vector<char> out(k.worlds, 0);
    switch (g->kind) {
      case FormulaKind::Prop:
        if (g->prop > k.delta)
          throw SignatureError("q" + std::to_string(g->prop) + " is outside q1..q" + std::to_string(k.delta));
        out = k.valuation[g->prop - 1];
        break;
      case FormulaKind::And: {
        const auto& a = go(g->left);
        const auto& b = go(g->right);
        for (int w = 0; w < k.worlds; ++w) out[w] = a[w] && b[w];
        break;
      }
      case FormulaKind::Not: {
        const auto& a = go(g->left);
        for (int w = 0; w < k.worlds; ++w) out[w] = !a[w];
        break;
      }
      case FormulaKind::Dia: {
        check_modality(k, *g);
        const auto& a = go(g->left);
        if (const Relation* r = k.relation(g->alpha))
          for (int w = 0; w < k.worlds; ++w) {
            int count = 0;
            for (int x : (*r)[w]) count += a[x] ? 1 : 0;
            out[w] = count >= g->grade;
          }
        break;
      }
    }
    return memo.emplace(g.get(), std::move(out)).first->second;
  };
  return go(f);
}

std::string model_json(const KripkeModel& k) {
  nlohmann::ordered_json j;
  j["worlds"] = k.worlds;
  j["delta"] = k.delta;
  if (k.variant) j["variant"] = variant_code(*k.variant);
  nlohmann::ordered_json rels = nlohmann::ordered_json::object();
  for (const auto& [alpha, r] : k.relations) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (auto [v, w] : k.pairs(alpha)) list.push_back({v, w});
    rels[modality_key(alpha)] = list;
  }
  j["relations"] = rels;
  nlohmann::ordered_json val = nlohmann::ordered_json::object();
  for (int i = 0; i < k.delta; ++i) {
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (int w = 0; w < k.worlds; ++w)
      if (k.valuation[i][w]) ws.push_back(w);
    val["q" + std::to_string(i + 1)] = ws;
  }
  j["valuation"] = val;
  return j.dump();
}

}  // namespace pnm
