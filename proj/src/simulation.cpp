#include "pnm/simulation.hpp"

#include <algorithm>
#include <cstring>
#include <sodium.h>

#include "pnm/error.hpp"

namespace pnm {

namespace {

// Length-prefixed fields for canonical state and message encodings.
class Writer {
 public:
  Writer& byte(int b) {
    out.push_back(static_cast<char>(b));
    return *this;
  }
  Writer& field(const Bytes& s) {
    const auto n = static_cast<std::uint32_t>(s.size());
    for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((n >> (8 * k)) & 0xff));
    out += s;
    return *this;
  }
  Bytes out;
};

class Reader {
 public:
  explicit Reader(const Bytes& s, std::size_t pos = 0) : s_(s), pos_(pos) {}
  int byte() {
    need(1);
    return static_cast<unsigned char>(s_[pos_++]);
  }
  Bytes field() {
    need(4);
    std::uint32_t n = 0;
    for (int k = 0; k < 4; ++k) n = (n << 8) | static_cast<unsigned char>(s_[pos_++]);
    need(n);
    Bytes f = s_.substr(pos_, n);
    pos_ += n;
    return f;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > s_.size()) throw ArgumentError("malformed wrapper encoding");
  }
  const Bytes& s_;
  std::size_t pos_;
};

void ensure_sodium() {
  if (sodium_init() < 0) throw Error(ErrorCode::Argument, "libsodium failed to initialise");
}

Digest blake(const Bytes& data) {
  ensure_sodium();
  unsigned char out[16];
  crypto_generichash(out, sizeof out, reinterpret_cast<const unsigned char*>(data.data()), data.size(), nullptr, 0);
  return Digest(reinterpret_cast<const char*>(out), sizeof out);
}

Bytes encode_triple(const Triple& t) {
  Bytes b = t.beta;
  b.push_back(static_cast<char>(t.degree));
  b.push_back(static_cast<char>(t.port));
  return b;
}

Bytes encode_output(std::int64_t y) {
  Bytes b{'Y'};
  for (int k = 7; k >= 0; --k) b.push_back(static_cast<char>((static_cast<std::uint64_t>(y) >> (8 * k)) & 0xff));
  return b;
}

std::optional<std::int64_t> decode_output(const Bytes& s) {
  if (s.size() != 9 || s[0] != 'Y') return std::nullopt;
  std::uint64_t y = 0;
  for (int k = 1; k <= 8; ++k) y = (y << 8) | static_cast<unsigned char>(s[k]);
  return static_cast<std::int64_t>(y);
}

}  // namespace

Digest beta_empty() { return blake("beta0"); }

Digest beta_next(const Digest& beta, const std::set<Triple>& received) {
  Bytes data = "beta" + beta;
  for (const Triple& t : received) data += encode_triple(t);
  return blake(data);
}

Triple SymmetryTrace::message(const PortedGraph& pg, int t, NodeId u, NodeId v) const {
  for (int i = 1; i <= pg.degree(u); ++i)
    if (pg.forward({u, i}).node == v) return {beta[t][u], pg.degree(u), i};
  throw ArgumentError("nodes " + std::to_string(u) + " and " + std::to_string(v) + " are not adjacent");
}

SymmetryTrace indistinguishability_preprocess(const PortedGraph& pg, int delta) {
  const int n = pg.node_count();
  SymmetryTrace tr;
  tr.delta = delta;
  tr.beta.assign(1, std::vector<Digest>(n, beta_empty()));
  tr.received.assign(1, std::vector<std::set<Triple>>(n));
  for (int t = 1; t <= 2 * delta; ++t) {
    std::vector<Digest> beta(n);
    for (NodeId v = 0; v < n; ++v) beta[v] = beta_next(tr.beta[t - 1][v], tr.received[t - 1][v]);
    std::vector<std::set<Triple>> got(n);
    for (NodeId v = 0; v < n; ++v)
      for (int i = 1; i <= pg.degree(v); ++i) got[pg.forward({v, i}).node].insert({beta[v], pg.degree(v), i});
    tr.beta.push_back(std::move(beta));
    tr.received.push_back(std::move(got));
  }
  return tr;
}

// ------------------------------------------------------- set_from_multiset

namespace {

// Phase 1 state: 'P' t deg β_t B_t(triples) ; phase 2: 'Q' deg β inner ;
// stopped: encode_output. Phase 1 message: 'c' β deg i ; phase 2: 'd' β deg i payload.
class SetFromMultiset final : public Machine {
 public:
  explicit SetFromMultiset(MachinePtr a) : a_(std::move(a)) {
    if (a_->tag().inbox == InboxKind::Vector)
      throw ArgumentError("set_from_multiset needs a multiset- or set-tagged machine, got " + class_name(a_->tag()));
  }

  int delta() const override { return a_->delta(); }
  ClassTag tag() const override { return {InboxKind::Set, OutboxKind::Vector}; }
  std::string name() const override { return "set_from_multiset(" + a_->name() + ")"; }

  Bytes init(int degree) const override {
    if (delta() == 0) return phase2(degree, beta_empty(), a_->init(degree));
    return Writer().byte('P').byte(0).byte(degree).field(beta_empty()).field("").out;
  }

  std::optional<std::int64_t> output(const Bytes& s) const override { return decode_output(s); }

  Bytes emit(const Bytes& s, int port) const override {
    Reader r(s);
    const int kind = r.byte();
    if (kind == 'P') {
      r.byte();
      const int degree = r.byte();
      const Digest beta = r.field();
      const auto received = triples(r.field());
      return Writer().byte('c').field(beta_next(beta, received)).byte(degree).byte(port).out;
    }
    const int degree = r.byte();
    const Digest beta = r.field();
    const Bytes inner = r.field();
    return Writer().byte('d').field(beta).byte(degree).byte(port).field(send(*a_, inner, port)).out;
  }

  Bytes transition(const Bytes& s, std::span<const Bytes> inbox) const override {
    Reader r(s);
    const int kind = r.byte();
    if (kind == 'P') {
      const int t = r.byte();
      const int degree = r.byte();
      const Digest beta = r.field();
      const auto before = triples(r.field());
      const Digest next_beta = beta_next(beta, before);
      std::set<Triple> got;
      for (const Bytes& m : set_view(inbox)) {
        if (m.empty()) continue;
        Reader mr(m);
        if (mr.byte() != 'c') continue;
        Triple tr;
        tr.beta = mr.field();
        tr.degree = mr.byte();
        tr.port = mr.byte();
        got.insert(tr);
      }
      if (t + 1 < 2 * delta()) {
        Bytes packed;
        for (const Triple& tr : got) packed += encode_triple(tr);
        return Writer().byte('P').byte(t + 1).byte(degree).field(next_beta).field(packed).out;
      }
      // β_{2Δ} is frozen as the tag of phase 2.
      return phase2(degree, next_beta, a_->init(degree));
    }
    const int degree = r.byte();
    const Digest beta = r.field();
    const Bytes inner = r.field();
    std::vector<Bytes> simulated;
    for (const Bytes& m : set_view(inbox)) {
      if (m.empty()) continue;
      Reader mr(m);
      if (mr.byte() != 'd') continue;
      mr.field();
      mr.byte();
      mr.byte();
      simulated.push_back(mr.field());
    }
    simulated.resize(static_cast<std::size_t>(delta()));  // the rest is m0
    return phase2(degree, beta, step(*a_, inner, simulated));
  }

 private:
  Bytes phase2(int degree, const Digest& beta, const Bytes& inner) const {
    if (auto y = a_->output(inner)) return encode_output(*y);
    return Writer().byte('Q').byte(degree).field(beta).field(inner).out;
  }

  static std::set<Triple> triples(const Bytes& packed) {
    std::set<Triple> out;
    for (std::size_t k = 0; k + 18 <= packed.size(); k += 18)
      out.insert({packed.substr(k, 16), static_cast<unsigned char>(packed[k + 16]),
                  static_cast<unsigned char>(packed[k + 17])});
    return out;
  }

  MachinePtr a_;
};

// ----------------------------------------------------- history wrappers

using History = std::vector<Bytes>;

Bytes encode_history(const History& h) {
  Writer w;
  w.byte('h');
  for (const Bytes& m : h) w.field(m);
  return w.out;
}

History decode_history(const Bytes& s) {
  Reader r(s);
  if (r.byte() != 'h') throw ArgumentError("not a history message");
  History h;
  while (!r.done()) h.push_back(r.field());
  return h;
}

// State: 'H' deg inner, then the sent history of every outgoing port (one
// shared history for broadcast), then the committed received histories.
class HistoryWrapper final : public Machine {
 public:
  HistoryWrapper(MachinePtr a, bool broadcast, std::size_t max_bytes)
      : a_(std::move(a)), broadcast_(broadcast), max_bytes_(max_bytes) {
    if (broadcast_ && a_->tag().outbox != OutboxKind::Broadcast)
      throw ArgumentError("bcast_multiset_from_broadcast needs a broadcast machine, got " + class_name(a_->tag()));
  }

  int delta() const override { return a_->delta(); }
  ClassTag tag() const override {
    return {InboxKind::Multiset, broadcast_ ? OutboxKind::Broadcast : OutboxKind::Vector};
  }
  std::string name() const override {
    return (broadcast_ ? "bcast_multiset_from_broadcast(" : "multiset_from_vector(") + a_->name() + ")";
  }

  Bytes init(int degree) const override {
    State s;
    s.degree = degree;
    s.inner = a_->init(degree);
    if (auto y = a_->output(s.inner)) return encode_output(*y);
    s.sent.assign(broadcast_ ? 1 : static_cast<std::size_t>(degree), History{});
    s.committed.assign(static_cast<std::size_t>(degree), History{});
    return pack(s);
  }

  std::optional<std::int64_t> output(const Bytes& s) const override { return decode_output(s); }

  Bytes emit(const Bytes& raw, int port) const override {
    const State s = unpack(raw);
    const std::size_t slot = broadcast_ ? 0 : static_cast<std::size_t>(port - 1);
    History h = slot < s.sent.size() ? s.sent[slot] : History{};
    h.push_back(send(*a_, s.inner, port));
    Bytes msg = encode_history(h);
    if (msg.size() > max_bytes_)
      throw BudgetError("history message of " + std::to_string(msg.size()) + " bytes exceeds the budget of " +
                        std::to_string(max_bytes_));
    return msg;
  }

  Bytes transition(const Bytes& raw, std::span<const Bytes> inbox) const override {
    State s = unpack(raw);
    // Histories from live neighbours extend a committed prefix; prefixes
    // left over belong to stopped neighbours, whose messages are m0.
    std::vector<History> fresh;
    for (const auto& [m, count] : multiset_view(inbox)) {
      if (m.empty()) continue;
      for (int c = 0; c < count; ++c) fresh.push_back(decode_history(m));
    }
    std::vector<History> old = s.committed;
    std::vector<char> used(old.size(), 0);
    std::vector<History> next;
    for (History& h : fresh) {
      History prefix(h.begin(), h.end() - 1);
      std::size_t k = 0;
      while (k < old.size() && (used[k] || old[k] != prefix)) ++k;
      if (k == old.size()) throw ArgumentError(name() + ": received a history that extends no committed prefix");
      used[k] = 1;
      next.push_back(std::move(h));
    }
    for (std::size_t k = 0; k < old.size(); ++k)
      if (!used[k]) {
        old[k].push_back(Bytes());
        next.push_back(std::move(old[k]));
      }
    std::sort(next.begin(), next.end());
    std::vector<Bytes> vec;
    for (const History& h : next) vec.push_back(h.back());
    vec.resize(static_cast<std::size_t>(delta()));

    for (std::size_t slot = 0; slot < s.sent.size(); ++slot)
      s.sent[slot].push_back(send(*a_, s.inner, static_cast<int>(slot) + 1));
    s.inner = step(*a_, s.inner, vec);
    if (auto y = a_->output(s.inner)) return encode_output(*y);
    s.committed = std::move(next);
    return pack(s);
  }

  std::vector<History> committed(const Bytes& raw) const {
    if (raw.empty() || raw[0] != 'H') return {};
    return unpack(raw).committed;
  }

 private:
  struct State {
    int degree = 0;
    Bytes inner;
    std::vector<History> sent;
    std::vector<History> committed;
  };

  static Bytes pack(const State& s) {
    Writer w;
    w.byte('H').byte(s.degree).field(s.inner);
    w.byte(static_cast<int>(s.sent.size()));
    for (const History& h : s.sent) w.field(encode_history(h));
    w.byte(static_cast<int>(s.committed.size()));
    for (const History& h : s.committed) w.field(encode_history(h));
    return w.out;
  }

  static State unpack(const Bytes& raw) {
    Reader r(raw);
    State s;
    if (r.byte() != 'H') throw ArgumentError("not a history wrapper state");
    s.degree = r.byte();
    s.inner = r.field();
    const int sent = r.byte();
    for (int k = 0; k < sent; ++k) s.sent.push_back(decode_history(r.field()));
    const int committed = r.byte();
    for (int k = 0; k < committed; ++k) s.committed.push_back(decode_history(r.field()));
    return s;
  }

  MachinePtr a_;
  bool broadcast_;
  std::size_t max_bytes_;
};

}  // namespace

MachinePtr set_from_multiset(MachinePtr a) { return std::make_shared<SetFromMultiset>(std::move(a)); }

MachinePtr multiset_from_vector(MachinePtr a, std::size_t max_bytes) {
  return std::make_shared<HistoryWrapper>(std::move(a), false, max_bytes);
}

MachinePtr bcast_multiset_from_broadcast(MachinePtr a, std::size_t max_bytes) {
  return std::make_shared<HistoryWrapper>(std::move(a), true, max_bytes);
}

std::vector<std::vector<Bytes>> committed_histories(const Machine& wrapper, const Bytes& state) {
  if (const auto* w = dynamic_cast<const HistoryWrapper*>(&wrapper)) return w->committed(state);
  return {};
}

}  // namespace pnm
