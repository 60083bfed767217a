#include "pnm/compiler.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <unordered_map>

#include "pnm/error.hpp"

namespace pnm {

SubformulaClosure closure(const Formula& psi, const Signature& sig) {
  SubformulaClosure c;
  std::unordered_map<const FormulaNode*, std::size_t> seen;
  std::function<void(const Formula&)> post = [&](const Formula& f) {
    if (!f || seen.contains(f.get())) return;
    post(f->left);
    post(f->right);
    seen.emplace(f.get(), c.sigma.size());
    c.sigma.push_back(f);
  };
  post(psi);
  std::stable_sort(c.sigma.begin(), c.sigma.end(),
                   [](const Formula& a, const Formula& b) { return a->depth < b->depth; });
  std::unordered_map<const FormulaNode*, std::size_t> position;
  for (std::size_t k = 0; k < c.sigma.size(); ++k) position[c.sigma[k].get()] = k;

  c.out_sets.assign(sig.variant.out ? static_cast<std::size_t>(sig.delta) : 1, {});
  for (const Formula& f : c.sigma) {
    if (f->kind != FormulaKind::Dia) continue;
    const std::size_t slot = sig.variant.out ? static_cast<std::size_t>(f->alpha.out - 1) : 0;
    if (slot >= c.out_sets.size()) continue;
    auto& set = c.out_sets[slot];
    const std::size_t member = position.at(f->left.get());
    if (std::find(set.begin(), set.end(), member) == set.end()) set.push_back(member);
  }
  for (auto& set : c.out_sets) std::sort(set.begin(), set.end());
  return c;
}

ClassTag compiled_class(const Signature& sig) {
  const OutboxKind out = sig.variant.out ? OutboxKind::Vector : OutboxKind::Broadcast;
  if (sig.variant.in) return {InboxKind::Vector, out};
  return {sig.graded ? InboxKind::Multiset : InboxKind::Set, out};
}

namespace {

// State: 'S' followed by one of '0', '1', 'U' per member of Σ, or 'Y'
// followed by the output digit once stopped.
class CompiledMachine final : public Machine {
 public:
  CompiledMachine(Formula psi, Signature sig, std::string text)
      : psi_(std::move(psi)), sig_(sig), text_(std::move(text)), c_(closure(psi_, sig_)) {
    std::unordered_map<const FormulaNode*, std::size_t> position;
    for (std::size_t k = 0; k < c_.sigma.size(); ++k) position[c_.sigma[k].get()] = k;
    ops_.resize(c_.sigma.size());
    for (std::size_t k = 0; k < c_.sigma.size(); ++k) {
      const Formula& f = c_.sigma[k];
      Op& op = ops_[k];
      op.kind = f->kind;
      if (f->kind == FormulaKind::Prop) op.prop = f->prop;
      if (f->left) op.a = position.at(f->left.get());
      if (f->right) op.b = position.at(f->right.get());
      if (f->kind == FormulaKind::Dia) {
        op.alpha = f->alpha;
        op.grade = f->grade;
        const std::size_t slot = sig_.variant.out ? static_cast<std::size_t>(f->alpha.out - 1) : 0;
        const auto& set = c_.out_sets[slot];
        op.offset = static_cast<std::size_t>(std::find(set.begin(), set.end(), op.a) - set.begin());
      }
    }
  }

  int delta() const override { return sig_.delta; }
  ClassTag tag() const override { return compiled_class(sig_); }
  std::string name() const override { return "compiled[" + variant_code(sig_.variant) + "](" + text_ + ")"; }

  Bytes init(int degree) const override {
    Bytes f(c_.sigma.size() + 1, 'U');
    f[0] = 'S';
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      const Op& op = ops_[k];
      char& v = f[k + 1];
      switch (op.kind) {
        case FormulaKind::Prop: v = op.prop == degree ? '1' : '0'; break;
        case FormulaKind::And: v = both(f[op.a + 1], f[op.b + 1]); break;
        case FormulaKind::Not: v = negate(f[op.a + 1]); break;
        case FormulaKind::Dia: v = 'U'; break;
      }
    }
    return f;
  }

  std::optional<std::int64_t> output(const Bytes& state) const override {
    if (!state.empty() && state[0] == 'Y') return state[1] == '1' ? 1 : 0;
    return std::nullopt;
  }

  Bytes emit(const Bytes& state, int port) const override {
    Bytes msg;
    std::size_t slot = 0;
    if (sig_.variant.out) {
      slot = static_cast<std::size_t>(port - 1);
      msg.push_back(static_cast<char>(port));
    }
    for (std::size_t member : c_.out_sets[slot]) msg.push_back(state[member + 1]);
    return msg;
  }

  Bytes transition(const Bytes& state, std::span<const Bytes> inbox) const override {
    const std::size_t root = c_.sigma.size();  // ψ is last: deepest, and the root of the post-order
    if (state[root] != 'U') return Bytes{'Y', state[root]};
    Bytes g = state;
    for (std::size_t k = 0; k < ops_.size(); ++k) {
      if (state[k + 1] != 'U') continue;
      const Op& op = ops_[k];
      char& v = g[k + 1];
      switch (op.kind) {
        case FormulaKind::Prop: break;
        case FormulaKind::And: v = both(g[op.a + 1], g[op.b + 1]); break;
        case FormulaKind::Not: v = negate(g[op.a + 1]); break;
        case FormulaKind::Dia:
          if (state[op.a + 1] != 'U') v = diamond(op, inbox) ? '1' : '0';
          break;
      }
    }
    return g;
  }

  const SubformulaClosure& sub() const { return c_; }

 private:
  struct Op {
    FormulaKind kind = FormulaKind::Prop;
    int prop = 0;
    std::size_t a = 0, b = 0;
    Modality alpha;
    int grade = 1;
    std::size_t offset = 0;  // position of the operand inside a message
  };

  static char both(char x, char y) {
    if (x == 'U' || y == 'U') return 'U';
    return (x == '1' && y == '1') ? '1' : '0';
  }
  static char negate(char x) { return x == 'U' ? 'U' : (x == '1' ? '0' : '1'); }

  // Truth value of the operand carried by msg, or false for m0 and for a
  // message from a different outgoing port.
  bool carries(const Bytes& msg, const Op& op) const {
    std::size_t at = op.offset;
    if (sig_.variant.out) {
      if (msg.empty() || static_cast<int>(static_cast<unsigned char>(msg[0])) != op.alpha.out) return false;
      ++at;
    }
    return at < msg.size() && msg[at] == '1';
  }

  bool diamond(const Op& op, std::span<const Bytes> inbox) const {
    if (sig_.variant.in) {
      const std::size_t i = static_cast<std::size_t>(op.alpha.in - 1);
      return i < inbox.size() && carries(inbox[i], op);
    }
    int count = 0;
    for (const Bytes& msg : inbox) count += carries(msg, op) ? 1 : 0;
    return count >= op.grade;
  }

  Formula psi_;
  Signature sig_;
  std::string text_;
  SubformulaClosure c_;
  std::vector<Op> ops_;
};

}  // namespace

MachinePtr compile(const Formula& psi, const Signature& sig) {
  validate_signature(psi, sig);
  FormulaFactory factory;
  Formula local = factory.import(psi);
  std::string text;
  try {
    text = print_formula(local, 256);
  } catch (const BudgetError&) {
    text = "...";
  }
  return std::make_shared<CompiledMachine>(local, sig, text);
}

std::string compiled_assignment(const Bytes& state) {
  if (state.empty() || state[0] != 'S') return {};
  return state.substr(1);
}

// ------------------------------------------------------------ decompile

namespace {

struct Level {
  // (degree, state) -> φ_{d,z,t}
  std::map<std::pair<int, Bytes>, Formula> phi;
};

// Every way to put `total` items into `kinds` bins, as count vectors.
void compositions(int kinds, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out,
                  std::size_t limit) {
  if (out.size() > limit) throw BudgetError("decompile: inbox enumeration exceeds budget");
  if (static_cast<int>(cur.size()) == kinds - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= total; ++c) {
    cur.push_back(c);
    compositions(kinds, total - c, cur, out, limit);
    cur.pop_back();
  }
}

struct InboxCase {
  std::vector<Bytes> inbox;  // padded to delta
  Formula formula;
};

}  // namespace

Formula decompile(const Machine& m, int delta, int horizon, Variant variant, const DecompileBudget& budget) {
  if (delta != m.delta())
    throw ArgumentError("decompile: delta " + std::to_string(delta) + " differs from the machine's " +
                        std::to_string(m.delta()));
  if (horizon < 0) throw ArgumentError("decompile: negative horizon");
  const ClassTag tag = m.tag();
  if (!variant.in && tag.inbox == InboxKind::Vector)
    throw ArgumentError("decompile: variant " + variant_code(variant) + " needs a multiset or set machine");
  if (!variant.out && tag.outbox != OutboxKind::Broadcast)
    throw ArgumentError("decompile: variant " + variant_code(variant) + " needs a broadcast machine");
  const bool graded = !variant.in && tag.inbox == InboxKind::Multiset;

  FormulaFactory F;
  Level level;
  for (int d = 0; d <= delta; ++d) {
    Formula deg;
    if (d > 0) {
      deg = F.prop(d);
    } else {
      std::vector<Formula> none;
      for (int i = 1; i <= delta; ++i) none.push_back(F.neg(F.prop(i)));
      deg = F.conj_all(none);
    }
    auto key = std::make_pair(d, m.init(d));
    auto [it, fresh] = level.phi.try_emplace(key, deg);
    if (!fresh) it->second = F.disj(it->second, deg);
  }

  std::size_t inbox_work = 0;
  for (int t = 0; t < horizon; ++t) {
    std::vector<Formula> all;
    for (const auto& [key, f] : level.phi) all.push_back(f);
    const Formula Psi = F.disj_all(all);

    // θ formulas: who sends what. Keyed by (message, outgoing port), with
    // port 0 standing for '*' in broadcast variants.
    std::map<std::pair<Bytes, int>, std::vector<Formula>> senders;
    for (const auto& [key, f] : level.phi) {
      const auto& [d, z] = key;
      if (variant.out) {
        for (int j = 1; j <= d; ++j) senders[{send(m, z, j), j}].push_back(f);
      } else if (d >= 1) {
        const Bytes msg = send(m, z, 1);
        for (int j = 2; j <= d; ++j)
          if (send(m, z, j) != msg)
            throw ClassViolation(m.name() + " is tagged broadcast but emits port-dependent messages");
        senders[{msg, 0}].push_back(f);
      }
    }
    std::map<std::pair<Bytes, int>, Formula> theta;
    std::vector<Bytes> messages;
    for (const auto& [key, fs] : senders) {
      theta.emplace(key, F.disj_all(fs));
      if (messages.empty() || messages.back() != key.first) messages.push_back(key.first);
    }
    std::sort(messages.begin(), messages.end());
    messages.erase(std::unique(messages.begin(), messages.end()), messages.end());

    auto dia = [&](int i, int j, int grade, const Formula& f) { return F.dia({i, j}, grade, f); };
    Formula has_succ;
    {
      std::vector<Formula> parts;
      if (variant.in && variant.out)
        for (int j = 1; j <= delta; ++j) parts.push_back(dia(1, j, 1, Psi));
      else if (!variant.in && variant.out)
        for (int j = 1; j <= delta; ++j) parts.push_back(dia(kAny, j, 1, Psi));
      else if (variant.in)
        parts.push_back(dia(1, kAny, 1, Psi));
      else
        parts.push_back(dia(kAny, kAny, 1, Psi));
      has_succ = F.disj_all(parts);
    }

    // recv(i, m): port i receives m (vector variants); recv(m): some port
    // receives m (set variants).
    std::map<std::pair<int, Bytes>, Formula> recv_memo;
    auto recv = [&](int i, const Bytes& msg) {
      auto key = std::make_pair(i, msg);
      if (auto it = recv_memo.find(key); it != recv_memo.end()) return it->second;
      std::vector<Formula> parts;
      for (const auto& [tk, th] : theta) {
        if (tk.first != msg) continue;
        parts.push_back(dia(i, variant.out ? tk.second : kAny, 1, th));
      }
      return recv_memo.emplace(key, F.disj_all(parts)).first->second;
    };

    // Inbox cases per degree, shared by all states of that degree.
    std::vector<std::vector<InboxCase>> cases(delta + 1);
    for (int d = 1; d <= delta && !messages.empty(); ++d) {
      auto pad = [&](std::vector<Bytes> v) {
        v.resize(delta);
        return v;
      };
      if (variant.in) {
        std::vector<std::size_t> pick(d, 0);
        for (;;) {
          std::vector<Bytes> inbox;
          std::vector<Formula> parts;
          for (int i = 1; i <= d; ++i) {
            inbox.push_back(messages[pick[i - 1]]);
            parts.push_back(recv(i, messages[pick[i - 1]]));
          }
          cases[d].push_back({pad(inbox), F.conj_all(parts)});
          if (++inbox_work > budget.max_inboxes) throw BudgetError("decompile: inbox enumeration exceeds budget");
          int i = 0;
          while (i < d && ++pick[i] == messages.size()) pick[i++] = 0;
          if (i == d) break;
        }
      } else if (graded) {
        // Atoms: (message, sender port) for -+, message for --.
        std::vector<std::pair<Bytes, int>> atoms;
        for (const auto& [tk, th] : theta) atoms.push_back(tk);
        std::vector<std::vector<int>> counts;
        std::vector<int> cur;
        compositions(static_cast<int>(atoms.size()), d, cur, counts, budget.max_inboxes);
        for (const auto& c : counts) {
          std::vector<Bytes> inbox;
          std::vector<Formula> parts;
          for (std::size_t a = 0; a < atoms.size(); ++a) {
            if (c[a] == 0) continue;
            for (int r = 0; r < c[a]; ++r) inbox.push_back(atoms[a].first);
            parts.push_back(dia(kAny, atoms[a].second, c[a], theta.at(atoms[a])));
          }
          cases[d].push_back({pad(inbox), F.conj_all(parts)});
          if (++inbox_work > budget.max_inboxes) throw BudgetError("decompile: inbox enumeration exceeds budget");
        }
      } else {
        const std::size_t k = messages.size();
        if (k > 24) throw BudgetError("decompile: too many distinct messages for set enumeration");
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
          if (std::popcount(mask) > d) continue;
          std::vector<Bytes> inbox;
          std::vector<Formula> parts;
          for (std::size_t a = 0; a < k; ++a) {
            const Formula r = recv(kAny, messages[a]);
            if (mask & (1u << a)) {
              inbox.push_back(messages[a]);
              parts.push_back(r);
            } else {
              parts.push_back(F.neg(r));
            }
          }
          while (static_cast<int>(inbox.size()) < d) inbox.push_back(inbox.front());
          cases[d].push_back({pad(inbox), F.conj_all(parts)});
          if (++inbox_work > budget.max_inboxes) throw BudgetError("decompile: inbox enumeration exceeds budget");
        }
      }
    }

    std::map<std::pair<int, Bytes>, std::vector<Formula>> next;
    const std::vector<Bytes> silent(delta);
    for (const auto& [key, f] : level.phi) {
      const auto& [d, z] = key;
      if (m.output(z) || d == 0) {
        const Bytes z1 = step(m, z, silent);
        next[{d, z1}].push_back(F.conj(f, d == 0 ? F.neg(has_succ) : has_succ));
        continue;
      }
      std::map<Bytes, std::vector<Formula>> by_target;
      for (const InboxCase& c : cases[d]) by_target[m.transition(z, c.inbox)].push_back(c.formula);
      for (auto& [z1, fs] : by_target) next[{d, z1}].push_back(F.conj(f, F.disj_all(fs)));
    }
    if (next.size() > budget.max_states_per_level)
      throw BudgetError("decompile: " + std::to_string(next.size()) + " (degree, state) pairs at level " +
                        std::to_string(t + 1) + " exceed the budget");
    Level fresh;
    for (auto& [key, fs] : next) fresh.phi.emplace(key, F.disj_all(fs));
    level = std::move(fresh);
  }

  std::vector<Formula> accept;
  for (const auto& [key, f] : level.phi) {
    const auto out = m.output(key.second);
    if (!out)
      throw ArgumentError("decompile: " + m.name() + " has not stopped after " + std::to_string(horizon) +
                          " rounds on degree " + std::to_string(key.first));
    if (*out == 1) accept.push_back(f);
  }
  if (accept.empty()) {
    const Formula any = level.phi.begin()->second;
    return F.conj(any, F.neg(any));
  }
  return F.disj_all(accept);
}

}  // namespace pnm
