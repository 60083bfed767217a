#include "pnm/machine.hpp"

#include <algorithm>

#include "pnm/enumerate.hpp"
#include "pnm/error.hpp"
#include "pnm/rng.hpp"

namespace pnm {

std::string class_name(ClassTag tag) {
  std::string name;
  switch (tag.inbox) {
    case InboxKind::Vector: name = "V"; break;
    case InboxKind::Multiset: name = "M"; break;
    case InboxKind::Set: name = "S"; break;
  }
  return name + (tag.outbox == OutboxKind::Vector ? "V" : "B");
}

ClassTag parse_class(const std::string& code) {
  if (code == "vv" || code == "vvc") return {InboxKind::Vector, OutboxKind::Vector};
  if (code == "mv") return {InboxKind::Multiset, OutboxKind::Vector};
  if (code == "sv") return {InboxKind::Set, OutboxKind::Vector};
  if (code == "vb") return {InboxKind::Vector, OutboxKind::Broadcast};
  if (code == "mb") return {InboxKind::Multiset, OutboxKind::Broadcast};
  if (code == "sb") return {InboxKind::Set, OutboxKind::Broadcast};
  throw ArgumentError("unknown class '" + code + "' (expected vvc, vv, mv, sv, vb, mb or sb)");
}

MultisetView multiset_view(std::span<const Bytes> inbox) {
  MultisetView view;
  for (const Bytes& m : inbox) ++view[m];
  return view;
}

SetView set_view(std::span<const Bytes> inbox) { return SetView(inbox.begin(), inbox.end()); }

InboxView inbox_view(ClassTag tag, std::span<const Bytes> inbox) {
  switch (tag.inbox) {
    case InboxKind::Vector: return std::vector<Bytes>(inbox.begin(), inbox.end());
    case InboxKind::Multiset: return multiset_view(inbox);
    case InboxKind::Set: return set_view(inbox);
  }
  return {};
}

Bytes send(const Machine& m, const Bytes& state, int port) {
  if (m.output(state)) return Bytes();
  return m.emit(state, port);
}

Bytes step(const Machine& m, const Bytes& state, std::span<const Bytes> inbox) {
  if (m.output(state)) return state;
  return m.transition(state, inbox);
}

std::string to_hex(const Bytes& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

RunResult run(const Machine& m, const PortedGraph& pg, int max_rounds, RunOptions options) {
  const int n = pg.node_count();
  const int delta = m.delta();
  if (pg.max_degree() > delta)
    throw ArgumentError("graph has maximum degree " + std::to_string(pg.max_degree()) +
                        " but machine " + m.name() + " is built for " + std::to_string(delta));
  const bool broadcast = m.tag().outbox == OutboxKind::Broadcast;

  RunResult result;
  std::vector<Bytes> x(n);
  for (NodeId v = 0; v < n; ++v) x[v] = m.init(pg.degree(v));
  if (options.record_states) result.trace.states.push_back(x);

  auto all_stopped = [&] {
    return std::all_of(x.begin(), x.end(), [&](const Bytes& s) { return m.output(s).has_value(); });
  };

  std::vector<std::vector<Bytes>> out(n);
  std::vector<Bytes> inbox(delta);
  while (!all_stopped()) {
    if (result.rounds >= max_rounds) {
      result.timed_out = true;
      result.outputs.assign(n, std::nullopt);
      return result;
    }
    for (NodeId v = 0; v < n; ++v) {
      out[v].resize(pg.degree(v));
      for (int j = 1; j <= pg.degree(v); ++j) out[v][j - 1] = send(m, x[v], j);
      if (broadcast)
        for (int j = 2; j <= pg.degree(v); ++j)
          if (out[v][j - 1] != out[v][0])
            throw ClassViolation(m.name() + " is tagged broadcast but node " + std::to_string(v) +
                                 " sends different messages on ports 1 and " + std::to_string(j));
    }
    std::vector<std::vector<Bytes>> received;
    if (options.record_messages) received.resize(n);
    std::vector<Bytes> next(n);
    for (NodeId u = 0; u < n; ++u) {
      for (int i = 1; i <= delta; ++i) {
        if (i <= pg.degree(u)) {
          const Port from = pg.backward({u, i});
          inbox[i - 1] = out[from.node][from.index - 1];
        } else {
          inbox[i - 1].clear();
        }
      }
      if (options.record_messages) received[u].assign(inbox.begin(), inbox.begin() + pg.degree(u));
      next[u] = step(m, x[u], inbox);
    }
    x = std::move(next);
    ++result.rounds;
    if (options.record_states) result.trace.states.push_back(x);
    if (options.record_messages) result.trace.messages.push_back(std::move(received));
  }
  for (NodeId v = 0; v < n; ++v) result.outputs.push_back(m.output(x[v]));
  return result;
}

namespace {

struct Observation {
  Bytes state;
  std::vector<Bytes> inbox;
};

std::string describe(const std::vector<Bytes>& inbox) {
  std::string s = "(";
  for (std::size_t k = 0; k < inbox.size(); ++k) s += (k ? "," : "") + to_hex(inbox[k]);
  return s + ")";
}

// Runs m on random graphs and records (state, inbox) pairs of live nodes.
std::vector<Observation> observe(const Machine& m, int wanted, Rng& rng) {
  std::vector<Observation> seen;
  const int delta = m.delta();
  for (int attempt = 0; attempt < 200 && (attempt < 30 || static_cast<int>(seen.size()) < wanted); ++attempt) {
    const int n = 1 + static_cast<int>(rng.below(6));
    Graph g = random_bounded_graph(n, delta, rng);
    PortedGraph pg(g, random_port_numbering(g, rng.next()));
    RunResult r;
    try {
      r = run(m, pg, 12, {.record_states = true, .record_messages = true});
    } catch (const ClassViolation&) {
      continue;
    }
    for (std::size_t t = 0; t < r.trace.messages.size(); ++t)
      for (NodeId u = 0; u < n; ++u) {
        const Bytes& z = r.trace.states[t][u];
        if (m.output(z)) continue;
        std::vector<Bytes> inbox = r.trace.messages[t][u];
        inbox.resize(delta);
        seen.push_back({z, std::move(inbox)});
      }
  }
  return seen;
}

}  // namespace

ConformanceReport check_class_conformance(const Machine& m, int samples, std::uint64_t seed) {
  ConformanceReport report;
  Rng rng(seed);
  const ClassTag tag = m.tag();
  const int delta = m.delta();
  const auto seen = observe(m, samples, rng);
  if (seen.empty()) return report;

  for (int probe = 0; probe < samples; ++probe) {
    const Observation& o = seen[rng.below(seen.size())];
    ++report.probes;
    if (tag.outbox == OutboxKind::Broadcast) {
      const Bytes first = m.emit(o.state, 1);
      for (int j = 2; j <= delta; ++j)
        if (m.emit(o.state, j) != first) {
          report.ok = false;
          report.counterexample = "state " + to_hex(o.state) + " emits " + to_hex(first) +
                                  " on port 1 but " + to_hex(m.emit(o.state, j)) + " on port " +
                                  std::to_string(j);
          return report;
        }
    }
    if (tag.inbox == InboxKind::Vector) continue;
    const Bytes expected = m.transition(o.state, o.inbox);
    std::vector<Bytes> other = o.inbox;
    if (tag.inbox == InboxKind::Multiset) {
      rng.shuffle(std::span<Bytes>(other));
    } else {
      // Same set of elements, arbitrary multiplicities and order.
      const SetView elements = set_view(o.inbox);
      std::vector<Bytes> pool(elements.begin(), elements.end());
      std::vector<std::size_t> slots(delta);
      for (int k = 0; k < delta; ++k) slots[k] = static_cast<std::size_t>(k);
      rng.shuffle(std::span<std::size_t>(slots));
      for (std::size_t k = 0; k < pool.size(); ++k) other[slots[k]] = pool[k];
      for (std::size_t k = pool.size(); k < slots.size(); ++k) other[slots[k]] = pool[rng.below(pool.size())];
    }
    const Bytes got = m.transition(o.state, other);
    if (got != expected) {
      report.ok = false;
      report.counterexample = "state " + to_hex(o.state) + ": inbox " + describe(o.inbox) + " gives " +
                              to_hex(expected) + " but " + describe(other) + " gives " + to_hex(got);
      return report;
    }
  }
  return report;
}

}  // namespace pnm
