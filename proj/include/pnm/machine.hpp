#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pnm/graph.hpp"

namespace pnm {

/// Canonical byte encoding of a state or message. The empty string is the
/// null message m0 for every machine.
using Bytes = std::string;

enum class InboxKind { Vector, Multiset, Set };
enum class OutboxKind { Vector, Broadcast };

struct ClassTag {
  InboxKind inbox = InboxKind::Vector;
  OutboxKind outbox = OutboxKind::Vector;
  bool operator==(const ClassTag&) const = default;
};

/// "VV", "MV", "SV", "VB", "MB" or "SB".
std::string class_name(ClassTag tag);
/// Accepts the lowercase codes vv, mv, sv, vb, mb, sb (and vvc as vv).
ClassTag parse_class(const std::string& code);

using MultisetView = std::map<Bytes, int>;
using SetView = std::set<Bytes>;
using InboxView = std::variant<std::vector<Bytes>, MultisetView, SetView>;

MultisetView multiset_view(std::span<const Bytes> inbox);
SetView set_view(std::span<const Bytes> inbox);
/// The padded inbox as the given discipline sees it.
InboxView inbox_view(ClassTag tag, std::span<const Bytes> inbox);

/// A distributed state machine for graphs of maximum degree delta().
///
/// output() is the stopping test: a state is in Y exactly when it returns
/// a value. transition() receives the full inbox of length delta(), padded
/// with m0; machines of the multiset and set classes must only depend on
/// multiset_view / set_view of it, which check_class_conformance probes.
class Machine {
 public:
  virtual ~Machine() = default;

  virtual int delta() const = 0;
  virtual ClassTag tag() const = 0;
  virtual std::string name() const = 0;

  virtual Bytes init(int degree) const = 0;
  virtual std::optional<std::int64_t> output(const Bytes& state) const = 0;
  /// Message sent from a non-stopped state through port 1..delta().
  virtual Bytes emit(const Bytes& state, int port) const = 0;
  virtual Bytes transition(const Bytes& state, std::span<const Bytes> inbox) const = 0;
};

using MachinePtr = std::shared_ptr<const Machine>;

/// emit() with the stopped-state rule applied: stopped nodes send m0.
Bytes send(const Machine& m, const Bytes& state, int port);
/// transition() with absorption applied: stopped states never change.
Bytes step(const Machine& m, const Bytes& state, std::span<const Bytes> inbox);

struct Trace {
  /// states[t][v] = x_t(v)
  std::vector<std::vector<Bytes>> states;
  /// messages[t-1][u][i-1] = a_t(u, i), recorded on request.
  std::vector<std::vector<std::vector<Bytes>>> messages;
};

struct RunResult {
  bool timed_out = false;
  int rounds = 0;
  /// Empty entries only when timed out.
  std::vector<std::optional<std::int64_t>> outputs;
  Trace trace;
};

struct RunOptions {
  bool record_states = true;
  bool record_messages = false;
};

/// Executes m on pg until every node stops or max_rounds rounds have run.
/// Throws ArgumentError when Δ(pg) exceeds m.delta(), ClassViolation when
/// a broadcast-tagged machine sends different messages on different ports.
RunResult run(const Machine& m, const PortedGraph& pg, int max_rounds, RunOptions options = {});

struct ConformanceReport {
  bool ok = true;
  int probes = 0;
  std::string counterexample;
};

/// Randomised probe of the declared class: inboxes observed while running m
/// on random graphs are permuted (multiset), re-drawn with the same set of
/// elements (set), and emit is compared across ports (broadcast).
ConformanceReport check_class_conformance(const Machine& m, int samples, std::uint64_t seed);

std::string to_hex(const Bytes& bytes);

}  // namespace pnm
