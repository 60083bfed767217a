#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnm/formula.hpp"
#include "pnm/graph.hpp"

namespace pnm {

/// Successor lists per world, each sorted.
using Relation = std::vector<std::vector<int>>;

/// K = (W, R, τ) with W = {0..worlds-1}. Propositions are q_1..q_delta.
struct KripkeModel {
  int worlds = 0;
  int delta = 0;
  /// Set for models built from a ported graph; eval then rejects formulas
  /// whose modalities have the wrong shape.
  std::optional<Variant> variant;
  std::map<Modality, Relation> relations;
  /// valuation[i-1][w] is true when w ∈ τ(q_i).
  std::vector<std::vector<char>> valuation;

  const Relation* relation(Modality alpha) const;
  std::vector<std::pair<int, int>> pairs(Modality alpha) const;
};

/// K_{a,b}(G, p) for Δ = delta (at least Δ(G)): R_(i,j) = {(u,v) : p((v,j)) = (u,i)},
/// the unions for '*' positions, and τ(q_i) = nodes of degree i. Only the
/// relations of the requested variant are built.
KripkeModel kripke_model(const PortedGraph& pg, Variant variant, int delta);
KripkeModel kripke_model(const PortedGraph& pg, Variant variant);

/// Worlds of b follow those of a. Both must share delta and variant.
KripkeModel disjoint_union(const KripkeModel& a, const KripkeModel& b);

/// ‖φ‖^K as a membership vector. Throws SignatureError when φ uses a
/// proposition above K.delta or a modality shape outside K's variant.
std::vector<char> eval(const KripkeModel& k, const Formula& f);

std::string model_json(const KripkeModel& k);

}  // namespace pnm
