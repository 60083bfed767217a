#pragma once

#include <cstddef>
#include <set>
#include <tuple>
#include <vector>

#include "pnm/graph.hpp"
#include "pnm/machine.hpp"

namespace pnm {

/// 16-byte digest standing for a value of the nested β structure; equal
/// digests mean equal structures (up to BLAKE2b collisions).
using Digest = Bytes;

/// (β_t(u), deg(u), π(u, v)) as received by v.
struct Triple {
  Digest beta;
  int degree = 0;
  int port = 0;
  auto operator<=>(const Triple&) const = default;
};

/// β_t(v) and B_t(v) for t = 0..2Δ of the symmetry-breaking phase.
struct SymmetryTrace {
  int delta = 0;
  std::vector<std::vector<Digest>> beta;           // beta[t][v]
  std::vector<std::vector<std::set<Triple>>> received;  // received[t][v] = B_t(v)

  /// m_t(u, v) for an edge {u, v}, t >= 1.
  Triple message(const PortedGraph& pg, int t, NodeId u, NodeId v) const;
};

Digest beta_empty();
/// β_{t+1} from β_t and B_t.
Digest beta_next(const Digest& beta, const std::set<Triple>& received);

SymmetryTrace indistinguishability_preprocess(const PortedGraph& pg, int delta);

/// Set-class machine simulating a multiset-class one: 2Δ rounds of
/// symmetry breaking, then each message of a is sent tagged with
/// (β_{2Δ}(u), deg(u), port) so the receiver's set determines a's multiset.
MachinePtr set_from_multiset(MachinePtr a);

inline constexpr std::size_t kHistoryBudget = 1u << 20;

/// Multiset-class machine simulating a vector-class one without extra
/// rounds: messages carry the full per-port history and the receiver sorts
/// histories lexicographically to rebuild a's inbox vector. Throws
/// BudgetError once a history message exceeds max_bytes.
MachinePtr multiset_from_vector(MachinePtr a, std::size_t max_bytes = kHistoryBudget);

/// The same construction for broadcast machines; the result is in
/// Multiset ∩ Broadcast.
MachinePtr bcast_multiset_from_broadcast(MachinePtr a, std::size_t max_bytes = kHistoryBudget);

/// Message histories committed by a history wrapper state, in the sorted
/// order used to rebuild the inbox. Empty for other states.
std::vector<std::vector<Bytes>> committed_histories(const Machine& wrapper, const Bytes& state);

}  // namespace pnm
