#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "pnm/formula.hpp"
#include "pnm/machine.hpp"

namespace pnm {

/// Subformulas of ψ in depth-increasing order (children before parents),
/// with the sets whose truth values travel in messages. For a variant with
/// b = '+', out_sets[j-1] holds D_j = {η : <(·,j)>η ∈ Σ}; for b = '-' the
/// single set D = {η : <(·,*)>η ∈ Σ} is out_sets[0]. Entries index sigma.
struct SubformulaClosure {
  std::vector<Formula> sigma;
  std::vector<std::vector<std::size_t>> out_sets;
};

SubformulaClosure closure(const Formula& psi, const Signature& sig);

/// Class tag a compiled machine gets for a signature:
/// ++ VV, -+ MV (graded) or SV, +- VB, -- MB (graded) or SB.
ClassTag compiled_class(const Signature& sig);

/// Machine evaluating ψ node-locally: after round t every subformula of
/// depth <= t has its truth value, and round md(ψ)+1 stops with output
/// f(ψ) in {0, 1}. Throws SignatureError when ψ is outside sig.
MachinePtr compile(const Formula& psi, const Signature& sig);

/// Truth assignment of a compiled machine's state: one of '0', '1', 'U'
/// per member of closure(ψ).sigma; empty for a stopped state.
std::string compiled_assignment(const Bytes& state);

struct DecompileBudget {
  std::size_t max_states_per_level = 4096;
  std::size_t max_inboxes = 2'000'000;
};

/// Formula ψ with md(ψ) = horizon such that, on every ported graph of
/// maximum degree at most delta, a node satisfies ψ in K_{a,b}(G,p) iff m
/// stops within horizon rounds with output 1 there.
///
/// Reachable (degree, state) pairs are closed level by level under the
/// transition over every inbox built from messages of the previous level,
/// so no graph has to be explored. Throws BudgetError when the closure or
/// the inbox enumeration exceeds the budget, ArgumentError when m's class
/// cannot be expressed in the variant or m is still running at horizon.
Formula decompile(const Machine& m, int delta, int horizon, Variant variant,
                  const DecompileBudget& budget = {});

}  // namespace pnm
