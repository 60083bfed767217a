#include "pnm/problems.hpp"

#include <algorithm>
#include <sodium.h>

#include "pnm/error.hpp"
#include "pnm/matching.hpp"
#include "pnm/rng.hpp"

namespace pnm {

std::optional<StarShape> star_shape(const Graph& g) {
  const int n = g.node_count();
  if (n < 3 || g.edge_count() != static_cast<std::size_t>(n - 1)) return std::nullopt;
  StarShape s;
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) == n - 1) s.center = v;
    else if (g.degree(v) != 1) return std::nullopt;
  }
  if (s.center < 0) return std::nullopt;
  s.k = n - 1;
  return s;
}

namespace {

bool binary(const Solution& s) {
  return std::all_of(s.begin(), s.end(), [](std::int64_t y) { return y == 0 || y == 1; });
}

Bytes stopped(std::int64_t y) { return Bytes{'Y', y ? '1' : '0'}; }

std::optional<std::int64_t> stopped_output(const Bytes& state) {
  if (state.size() == 2 && state[0] == 'Y') return state[1] == '1' ? 1 : 0;
  return std::nullopt;
}

class LeafElection final : public Machine {
 public:
  LeafElection(int delta, bool vector_inbox) : delta_(delta), vector_(vector_inbox) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override {
    return {vector_ ? InboxKind::Vector : InboxKind::Set, OutboxKind::Vector};
  }
  std::string name() const override { return vector_ ? "leaf_election_vector" : "leaf_election"; }
  Bytes init(int degree) const override { return Bytes{'I', static_cast<char>(degree)}; }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }
  Bytes emit(const Bytes&, int port) const override { return Bytes{'p', static_cast<char>(port)}; }
  Bytes transition(const Bytes& s, std::span<const Bytes> inbox) const override {
    const Bytes one{'p', 1};
    if (s[1] != 1) return stopped(0);
    if (vector_) return stopped(inbox[0] == one);
    SetView seen = set_view(inbox);
    seen.erase(Bytes());
    return stopped(seen.size() == 1 && *seen.begin() == one);
  }

 private:
  int delta_;
  bool vector_;
};

class OddOdd final : public Machine {
 public:
  explicit OddOdd(int delta) : delta_(delta) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override { return {InboxKind::Multiset, OutboxKind::Broadcast}; }
  std::string name() const override { return "odd_odd"; }
  Bytes init(int degree) const override { return Bytes{'P', degree % 2 ? '1' : '0'}; }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }
  Bytes emit(const Bytes& s, int) const override { return Bytes{s[1]}; }
  Bytes transition(const Bytes&, std::span<const Bytes> inbox) const override {
    const MultisetView view = multiset_view(inbox);
    auto it = view.find(Bytes{'1'});
    return stopped(it != view.end() && it->second % 2 == 1);
  }

 private:
  int delta_;
};

// States: 'A' deg | 'B' deg type[delta] | stopped.
class SymmetryBreak final : public Machine {
 public:
  explicit SymmetryBreak(int delta) : delta_(delta) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override { return {InboxKind::Vector, OutboxKind::Vector}; }
  std::string name() const override { return "symmetry_break"; }
  Bytes init(int degree) const override { return Bytes{'A', static_cast<char>(degree)}; }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }
  Bytes emit(const Bytes& s, int port) const override {
    if (s[0] == 'A') return Bytes{'n', static_cast<char>(port)};
    return 't' + s.substr(2);
  }
  Bytes transition(const Bytes& s, std::span<const Bytes> inbox) const override {
    const int degree = s[1];
    if (s[0] == 'A') {
      Bytes next{'B', static_cast<char>(degree)};
      for (int i = 1; i <= delta_; ++i)
        next.push_back(i <= degree && inbox[i - 1].size() == 2 ? inbox[i - 1][1] : char(0));
      return next;
    }
    const Bytes own = s.substr(2);
    for (int i = 1; i <= degree; ++i)
      if (!inbox[i - 1].empty() && inbox[i - 1].substr(1) > own) return stopped(0);
    return stopped(1);
  }

 private:
  int delta_;
};

class DegreeParity final : public Machine {
 public:
  explicit DegreeParity(int delta) : delta_(delta) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override { return {InboxKind::Set, OutboxKind::Broadcast}; }
  std::string name() const override { return "degree_parity"; }
  Bytes init(int degree) const override { return stopped(degree % 2); }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }
  Bytes emit(const Bytes&, int) const override { return {}; }
  Bytes transition(const Bytes& s, std::span<const Bytes>) const override { return s; }

 private:
  int delta_;
};

class Idle final : public Machine {
 public:
  explicit Idle(int delta) : delta_(delta) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override { return {InboxKind::Set, OutboxKind::Broadcast}; }
  std::string name() const override { return "idle"; }
  Bytes init(int) const override { return "idle"; }
  std::optional<std::int64_t> output(const Bytes&) const override { return std::nullopt; }
  Bytes emit(const Bytes&, int) const override { return "z"; }
  Bytes transition(const Bytes& s, std::span<const Bytes>) const override { return s; }

 private:
  int delta_;
};

class EchoPort1 final : public Machine {
 public:
  EchoPort1(int delta, ClassTag declared) : delta_(delta), tag_(declared) {}
  int delta() const override { return delta_; }
  ClassTag tag() const override { return tag_; }
  std::string name() const override { return "echo_port1"; }
  Bytes init(int) const override { return "E"; }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }
  Bytes emit(const Bytes&, int port) const override { return Bytes{static_cast<char>(port)}; }
  Bytes transition(const Bytes&, std::span<const Bytes> inbox) const override {
    return stopped(inbox[0] == Bytes{1});
  }

 private:
  int delta_;
  ClassTag tag_;
};

// Tables are drawn through a keyed hash so the machine is a pure function
// of (seed, state, view) without materialising every entry.
class RandomMachine final : public Machine {
 public:
  RandomMachine(std::uint64_t seed, int delta, ClassTag tag, int horizon, int states, int messages)
      : seed_(seed), delta_(delta), tag_(tag), horizon_(horizon), states_(states), messages_(messages) {
    if (sodium_init() < 0) throw Error(ErrorCode::Argument, "libsodium failed to initialise");
    if (horizon < 1 || states < 1 || messages < 1) throw ArgumentError("random_machine: bad parameters");
    Rng rng(seed);
    for (auto& b : key_) b = static_cast<unsigned char>(rng.next());
  }

  int delta() const override { return delta_; }
  ClassTag tag() const override { return tag_; }
  std::string name() const override {
    return "random[" + class_name(tag_) + "," + std::to_string(seed_) + "]";
  }

  Bytes init(int degree) const override {
    return live(0, static_cast<int>(hash("init" + std::to_string(degree)) % states_));
  }
  std::optional<std::int64_t> output(const Bytes& s) const override { return stopped_output(s); }

  Bytes emit(const Bytes& s, int port) const override {
    std::string what = "emit" + s;
    if (tag_.outbox == OutboxKind::Vector) what += "@" + std::to_string(port);
    const auto k = static_cast<int>(hash(what) % (messages_ + 1));
    if (k == messages_) return {};  // m0 is a possible message too
    return Bytes{'m', static_cast<char>(k)};
  }

  Bytes transition(const Bytes& s, std::span<const Bytes> inbox) const override {
    std::string view = s + "|";
    switch (tag_.inbox) {
      case InboxKind::Vector:
        for (const Bytes& m : inbox) view += m + ";";
        break;
      case InboxKind::Multiset:
        for (const auto& [m, c] : multiset_view(inbox)) view += m + "*" + std::to_string(c) + ";";
        break;
      case InboxKind::Set:
        for (const Bytes& m : set_view(inbox)) view += m + ";";
        break;
    }
    const std::uint64_t h = hash(view);
    const int round = s[1] + 1;
    if (round >= horizon_ || (h >> 8) % 4 == 0) return stopped((h >> 4) & 1);
    return live(round, static_cast<int>(h % states_));
  }

 private:
  static Bytes live(int round, int state) {
    return Bytes{'R', static_cast<char>(round), static_cast<char>(state)};
  }

  std::uint64_t hash(const std::string& data) const {
    unsigned char out[crypto_shorthash_BYTES];
    crypto_shorthash(out, reinterpret_cast<const unsigned char*>(data.data()), data.size(), key_);
    std::uint64_t h = 0;
    for (int k = 0; k < 8; ++k) h = (h << 8) | out[k];
    return h;
  }

  std::uint64_t seed_;
  int delta_;
  ClassTag tag_;
  int horizon_;
  int states_;
  int messages_;
  unsigned char key_[crypto_shorthash_KEYBYTES];
};

}  // namespace

GraphProblem leaf_election() {
  return {"leaf_election", {0, 1}, [](const Graph& g, const Solution& s) {
            if (static_cast<int>(s.size()) != g.node_count() || !binary(s)) return false;
            const auto star = star_shape(g);
            if (!star) return true;
            if (s[star->center] != 0) return false;
            return std::count(s.begin(), s.end(), 1) == 1;
          }};
}

MachinePtr leaf_election_machine(int delta) { return std::make_shared<LeafElection>(delta, false); }
MachinePtr leaf_election_vector_machine(int delta) { return std::make_shared<LeafElection>(delta, true); }

GraphProblem odd_odd() {
  return {"odd_odd", {0, 1}, [](const Graph& g, const Solution& s) {
            if (static_cast<int>(s.size()) != g.node_count()) return false;
            for (NodeId v = 0; v < g.node_count(); ++v) {
              int odd = 0;
              for (NodeId u : g.neighbors(v)) odd += g.degree(u) % 2;
              if (s[v] != odd % 2) return false;
            }
            return true;
          }};
}

MachinePtr odd_odd_machine(int delta) { return std::make_shared<OddOdd>(delta); }

ParityPair parity_separation_pair() {
  // a: centre 0 with leaf 1 and two paths 0-2-4, 0-3-5 (one odd neighbour).
  // b: centre 0 with leaves 1, 2 and the path 0-3-4 (two odd neighbours).
  const std::vector<Edge> ea{{0, 1}, {0, 2}, {0, 3}, {2, 4}, {3, 5}};
  const std::vector<Edge> eb{{0, 1}, {0, 2}, {0, 3}, {3, 4}};
  return {Graph::from_edges(6, ea), Graph::from_edges(5, eb), 0, 0};
}

Graph graph_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (auto [u, v] : b.edges()) edges.emplace_back(u + a.node_count(), v + a.node_count());
  return Graph::from_edges(a.node_count() + b.node_count(), edges);
}

std::vector<int> local_type(const PortedGraph& pg, NodeId v, int delta) {
  std::vector<int> t(delta, 0);
  for (int i = 1; i <= pg.degree(v) && i <= delta; ++i) t[i - 1] = pg.forward({v, i}).index;
  return t;
}

MachinePtr symmetry_break_machine(int delta) { return std::make_shared<SymmetryBreak>(delta); }

bool is_in_script_G(const Graph& g) {
  if (g.node_count() == 0 || !is_connected(g)) return false;
  const auto k = regular_degree(g);
  if (!k || *k % 2 == 0) return false;
  return !has_one_factor(g);
}

GraphProblem nonconstant_on_G() {
  return {"nonconstant", {0, 1}, [](const Graph& g, const Solution& s) {
            if (static_cast<int>(s.size()) != g.node_count() || !binary(s)) return false;
            if (!is_in_script_G(g)) return true;
            return std::any_of(s.begin(), s.end(), [&](std::int64_t y) { return y != s.front(); });
          }};
}

MachinePtr degree_parity_machine(int delta) { return std::make_shared<DegreeParity>(delta); }
MachinePtr idle_machine(int delta) { return std::make_shared<Idle>(delta); }
MachinePtr echo_port1_machine(int delta, ClassTag declared) { return std::make_shared<EchoPort1>(delta, declared); }

MachinePtr random_machine(std::uint64_t seed, int delta, ClassTag tag, int horizon, int states, int messages) {
  return std::make_shared<RandomMachine>(seed, delta, tag, horizon, states, messages);
}

std::vector<std::string> machine_names() {
  return {"odd_odd", "leaf_election", "leaf_election_vector", "symmetry_break", "degree_parity", "idle"};
}

MachinePtr named_machine(const std::string& name, int delta) {
  if (name == "odd_odd") return odd_odd_machine(delta);
  if (name == "leaf_election") return leaf_election_machine(delta);
  if (name == "leaf_election_vector") return leaf_election_vector_machine(delta);
  if (name == "symmetry_break") return symmetry_break_machine(delta);
  if (name == "degree_parity") return degree_parity_machine(delta);
  if (name == "idle") return idle_machine(delta);
  throw ArgumentError("unknown machine '" + name + "'");
}

GraphProblem named_problem(const std::string& name) {
  if (name == "leaf_election") return leaf_election();
  if (name == "odd_odd") return odd_odd();
  if (name == "nonconstant") return nonconstant_on_G();
  throw ArgumentError("unknown problem '" + name + "'");
}

}  // namespace pnm
