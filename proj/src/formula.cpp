#include "pnm/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_set>

#include "pnm/error.hpp"

namespace pnm {

std::string modality_key(Modality alpha) {
  auto idx = [](int v) { return v == kAny ? std::string("*") : std::to_string(v); };
  return "(" + idx(alpha.in) + "," + idx(alpha.out) + ")";
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h ^ (h >> 29);
}

std::uint64_t node_hash(const FormulaNode& n) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(n.kind) + 1, static_cast<std::uint64_t>(n.prop));
  h = mix(h, static_cast<std::uint64_t>(n.alpha.in));
  h = mix(h, static_cast<std::uint64_t>(n.alpha.out));
  h = mix(h, static_cast<std::uint64_t>(n.grade));
  h = mix(h, n.left ? n.left->hash : 0);
  return mix(h, n.right ? n.right->hash : 0);
}

}  // namespace

std::size_t FormulaFactory::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = mix(static_cast<std::uint64_t>(k.kind), static_cast<std::uint64_t>(k.prop));
  h = mix(h, static_cast<std::uint64_t>(k.alpha.in) * 131 + static_cast<std::uint64_t>(k.alpha.out));
  h = mix(h, static_cast<std::uint64_t>(k.grade));
  h = mix(h, reinterpret_cast<std::uintptr_t>(k.left));
  return static_cast<std::size_t>(mix(h, reinterpret_cast<std::uintptr_t>(k.right)));
}

Formula FormulaFactory::intern(FormulaNode node) {
  Key key{node.kind, node.prop, node.alpha, node.grade, node.left.get(), node.right.get()};
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  node.hash = node_hash(node);
  auto made = std::make_shared<const FormulaNode>(std::move(node));
  table_.emplace(key, made);
  return made;
}

Formula FormulaFactory::prop(int i) {
  if (i < 1) throw ArgumentError("proposition index must be at least 1");
  FormulaNode n{FormulaKind::Prop};
  n.prop = i;
  return intern(std::move(n));
}

Formula FormulaFactory::conj(const Formula& a, const Formula& b) {
  FormulaNode n{FormulaKind::And};
  n.left = a;
  n.right = b;
  n.depth = std::max(a->depth, b->depth);
  return intern(std::move(n));
}

Formula FormulaFactory::neg(const Formula& a) {
  FormulaNode n{FormulaKind::Not};
  n.left = a;
  n.depth = a->depth;
  return intern(std::move(n));
}

Formula FormulaFactory::dia(Modality alpha, int grade, const Formula& a) {
  if (grade < 1) throw ArgumentError("diamond grade must be at least 1");
  if (alpha.in < 0 || alpha.out < 0) throw ArgumentError("negative modality index");
  FormulaNode n{FormulaKind::Dia};
  n.alpha = alpha;
  n.grade = grade;
  n.left = a;
  n.depth = a->depth + 1;
  return intern(std::move(n));
}

Formula FormulaFactory::disj(const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); }

Formula FormulaFactory::falsum() { return conj(prop(1), neg(prop(1))); }

Formula FormulaFactory::verum() { return neg(falsum()); }

Formula FormulaFactory::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return verum();
  std::function<Formula(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return conj(build(lo, mid), build(mid, hi));
  };
  return build(0, parts.size());
}

Formula FormulaFactory::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return falsum();
  std::function<Formula(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return disj(build(lo, mid), build(mid, hi));
  };
  return build(0, parts.size());
}

Formula FormulaFactory::import(const Formula& f) {
  if (auto it = imported_.find(f.get()); it != imported_.end()) return it->second;
  Formula out;
  switch (f->kind) {
    case FormulaKind::Prop: out = prop(f->prop); break;
    case FormulaKind::And: out = conj(import(f->left), import(f->right)); break;
    case FormulaKind::Not: out = neg(import(f->left)); break;
    case FormulaKind::Dia: out = dia(f->alpha, f->grade, import(f->left)); break;
  }
  imported_.emplace(f.get(), out);
  return out;
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, FormulaFactory& factory) : text_(text), f_(factory) {}

  Formula parse() {
    Formula result = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  int nat() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    if (pos_ - start > 9) {
      pos_ = start;
      fail("number too large");
    }
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  int index() {
    if (accept('*')) return kAny;
    const std::size_t at = (skip_ws(), pos_);
    const int v = nat();
    if (v < 1) {
      pos_ = at;
      fail("port index must be at least 1");
    }
    return v;
  }

  Formula parse_or() {
    Formula left = parse_and();
    while (accept('|')) left = f_.disj(left, parse_and());
    return left;
  }

  Formula parse_and() {
    Formula left = parse_unary();
    while (accept('&')) left = f_.conj(left, parse_unary());
    return left;
  }

  Formula parse_unary() {
    if (accept('!')) return f_.neg(parse_unary());
    if (accept('<')) {
      Modality alpha;
      alpha.in = index();
      expect(',');
      alpha.out = index();
      int grade = 1;
      if (accept(';')) {
        const std::size_t at = (skip_ws(), pos_);
        grade = nat();
        if (grade < 1) {
          pos_ = at;
          fail("grade must be at least 1");
        }
      }
      expect('>');
      return f_.dia(alpha, grade, parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    const char c = text_[pos_];
    if (c == 'q') {
      ++pos_;
      const std::size_t at = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected proposition index after 'q'");
      const int i = nat();
      if (i < 1) {
        pos_ = at;
        fail("proposition index must be at least 1");
      }
      return f_.prop(i);
    }
    if (c == 'T') {
      ++pos_;
      return f_.verum();
    }
    if (c == 'F') {
      ++pos_;
      return f_.falsum();
    }
    if (c == '(') {
      ++pos_;
      Formula inner = parse_or();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  FormulaFactory& f_;
};

}  // namespace

Formula parse_formula(std::string_view text, FormulaFactory& factory) { return Parser(text, factory).parse(); }

Formula parse_formula(std::string_view text) {
  FormulaFactory factory;
  return parse_formula(text, factory);
}

// --------------------------------------------------------------- printer

namespace {

bool is_prop1(const Formula& f) { return f->kind == FormulaKind::Prop && f->prop == 1; }

bool is_false(const Formula& f) {
  return f->kind == FormulaKind::And && is_prop1(f->left) && f->right->kind == FormulaKind::Not &&
         is_prop1(f->right->left);
}

bool is_true(const Formula& f) { return f->kind == FormulaKind::Not && is_false(f->left); }

bool is_or(const Formula& f) {
  return f->kind == FormulaKind::Not && f->left->kind == FormulaKind::And &&
         f->left->left->kind == FormulaKind::Not && f->left->right->kind == FormulaKind::Not;
}

class Printer {
 public:
  explicit Printer(std::size_t max_chars) : max_(max_chars) {}

  void print(const Formula& f, int level) {
    if (is_false(f)) return put("F");
    if (is_true(f)) return put("T");
    if (is_or(f)) {
      if (level > 0) put("(");
      print(f->left->left->left, 0);
      put(" | ");
      print(f->left->right->left, 1);
      if (level > 0) put(")");
      return;
    }
    switch (f->kind) {
      case FormulaKind::Prop:
        put("q" + std::to_string(f->prop));
        return;
      case FormulaKind::And:
        if (level > 1) put("(");
        print(f->left, 1);
        put(" & ");
        print(f->right, 2);
        if (level > 1) put(")");
        return;
      case FormulaKind::Not:
        put("!");
        print(f->left, 2);
        return;
      case FormulaKind::Dia: {
        auto idx = [](int v) { return v == kAny ? std::string("*") : std::to_string(v); };
        std::string head = "<" + idx(f->alpha.in) + "," + idx(f->alpha.out);
        if (f->grade != 1) head += ";" + std::to_string(f->grade);
        put(head + ">");
        print(f->left, 2);
        return;
      }
    }
  }

  std::string out;

 private:
  void put(const std::string& s) {
    out += s;
    if (out.size() > max_) throw BudgetError("formula text exceeds " + std::to_string(max_) + " characters");
  }

  std::size_t max_;
};

}  // namespace

std::string print_formula(const Formula& f, std::size_t max_chars) {
  Printer p(max_chars);
  p.print(f, 0);
  return std::move(p.out);
}

int modal_depth(const Formula& f) { return f->depth; }

bool structurally_equal(const Formula& a, const Formula& b) {
  std::set<std::pair<const FormulaNode*, const FormulaNode*>> known;
  std::function<bool(const Formula&, const Formula&)> eq = [&](const Formula& x, const Formula& y) {
    if (x.get() == y.get()) return true;
    if (!x || !y) return false;
    if (x->hash != y->hash || x->kind != y->kind || x->prop != y->prop || x->alpha != y->alpha ||
        x->grade != y->grade)
      return false;
    if (known.contains({x.get(), y.get()})) return true;
    const bool same = eq(x->left, y->left) && eq(x->right, y->right);
    if (same) known.insert({x.get(), y.get()});
    return same;
  };
  return eq(a, b);
}

std::size_t dag_size(const Formula& f) {
  std::unordered_set<const FormulaNode*> seen;
  std::vector<const FormulaNode*> stack{f.get()};
  while (!stack.empty()) {
    const FormulaNode* n = stack.back();
    stack.pop_back();
    if (!n || !seen.insert(n).second) continue;
    stack.push_back(n->left.get());
    stack.push_back(n->right.get());
  }
  return seen.size();
}

std::string variant_code(Variant v) { return std::string(v.in ? "+" : "-") + (v.out ? "+" : "-"); }

Variant parse_variant(const std::string& code) {
  if (code.size() == 2 && (code[0] == '+' || code[0] == '-') && (code[1] == '+' || code[1] == '-'))
    return {code[0] == '+', code[1] == '+'};
  throw ArgumentError("unknown variant '" + code + "' (expected ++, -+, +- or --)");
}

std::vector<std::string> signature_violations(const Formula& f, const Signature& sig) {
  std::vector<std::string> issues;
  if (sig.graded && sig.variant.in)
    issues.push_back("graded signatures exist only for the variants -+ and --");
  std::unordered_set<const FormulaNode*> seen;
  std::set<std::string> reported;
  auto report = [&](const std::string& s) {
    if (reported.insert(s).second) issues.push_back(s);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!g || !seen.insert(g.get()).second) return;
    if (g->kind == FormulaKind::Prop && g->prop > sig.delta)
      report("q" + std::to_string(g->prop) + " is outside q1..q" + std::to_string(sig.delta));
    if (g->kind == FormulaKind::Dia) {
      const std::string key = modality_key(g->alpha);
      const auto& [in, out] = g->alpha;
      if (sig.variant.in && in == kAny) report(key + ": first index must be a port number");
      if (!sig.variant.in && in != kAny) report(key + ": first index must be *");
      if (sig.variant.out && out == kAny) report(key + ": second index must be a port number");
      if (!sig.variant.out && out != kAny) report(key + ": second index must be *");
      if (in > sig.delta || out > sig.delta) report(key + ": port index exceeds " + std::to_string(sig.delta));
      if (g->grade > 1 && !sig.graded)
        report(key + ";" + std::to_string(g->grade) + ": graded diamond in an ungraded signature");
    }
    walk(g->left);
    walk(g->right);
  };
  walk(f);
  return issues;
}

void validate_signature(const Formula& f, const Signature& sig) {
  const auto issues = signature_violations(f, sig);
  if (issues.empty()) return;
  std::string what = "formula is not in the signature (" + variant_code(sig.variant) +
                     ", delta=" + std::to_string(sig.delta) + (sig.graded ? ", graded" : "") + "): ";
  for (std::size_t k = 0; k < issues.size(); ++k) what += (k ? "; " : "") + issues[k];
  throw SignatureError(what);
}

bool has_grades(const Formula& f) {
  std::unordered_set<const FormulaNode*> seen;
  std::function<bool(const Formula&)> walk = [&](const Formula& g) {
    if (!g || !seen.insert(g.get()).second) return false;
    if (g->kind == FormulaKind::Dia && g->grade > 1) return true;
    return walk(g->left) || walk(g->right);
  };
  return walk(f);
}

}  // namespace pnm
