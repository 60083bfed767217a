#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pnm {

/// Index value standing for `*` in a modality (a, b).
inline constexpr int kAny = 0;

struct Modality {
  int in = kAny;   // a: port at the evaluating world
  int out = kAny;  // b: port at the successor
  auto operator<=>(const Modality&) const = default;
};

/// "(1,2)", "(*,2)", "(*,*)" ...
std::string modality_key(Modality alpha);

enum class FormulaKind { Prop, And, Not, Dia };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/// Immutable formula node. Sharing is allowed, so a formula is a DAG.
/// Or, True and False are encoded with And/Not at construction.
struct FormulaNode {
  FormulaKind kind;
  int prop = 0;        // Prop: i of q_i
  Modality alpha;      // Dia
  int grade = 1;       // Dia: k of <α>_{>=k}; 1 is the plain diamond
  Formula left;        // And, Not, Dia operand
  Formula right;       // And
  int depth = 0;       // modal depth
  std::uint64_t hash = 0;
};

/// Builds formulas with hash-consing: structurally equal formulas built by
/// one factory are the same node.
class FormulaFactory {
 public:
  Formula prop(int i);
  Formula conj(const Formula& a, const Formula& b);
  Formula neg(const Formula& a);
  Formula dia(Modality alpha, int grade, const Formula& a);
  Formula disj(const Formula& a, const Formula& b);
  Formula falsum();
  Formula verum();
  /// Balanced trees; the empty conjunction is T, the empty disjunction F.
  Formula conj_all(const std::vector<Formula>& parts);
  Formula disj_all(const std::vector<Formula>& parts);
  /// Copy of a formula built elsewhere, shared with this factory's nodes.
  Formula import(const Formula& f);

 private:
  Formula intern(FormulaNode node);
  struct Key {
    FormulaKind kind;
    int prop;
    Modality alpha;
    int grade;
    const FormulaNode* left;
    const FormulaNode* right;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  std::unordered_map<Key, Formula, KeyHash> table_;
  std::unordered_map<const FormulaNode*, Formula> imported_;
};

/// Throws ParseError with the offending position.
Formula parse_formula(std::string_view text);
Formula parse_formula(std::string_view text, FormulaFactory& factory);

/// Minimal-parenthesis text in the parse grammar; Or/T/F patterns are
/// printed back as sugar. Throws BudgetError when the tree expansion of
/// the DAG would exceed max_chars.
std::string print_formula(const Formula& f, std::size_t max_chars = 1u << 24);

int modal_depth(const Formula& f);
bool structurally_equal(const Formula& a, const Formula& b);
/// Distinct nodes of the DAG.
std::size_t dag_size(const Formula& f);

/// Variant (a, b): true stands for '+'.
struct Variant {
  bool in = true;
  bool out = true;
  bool operator==(const Variant&) const = default;
};

/// "++", "-+", "+-", "--"
std::string variant_code(Variant v);
Variant parse_variant(const std::string& code);

/// Signature (I^Δ_{a,b}, Φ_Δ). Graded diamonds are only legal in a graded
/// signature, and graded signatures only exist for a = '-'.
struct Signature {
  int delta = 1;
  Variant variant;
  bool graded = false;
};

/// Every violation, empty when φ is in the signature.
std::vector<std::string> signature_violations(const Formula& f, const Signature& sig);
/// Throws SignatureError listing every violation.
void validate_signature(const Formula& f, const Signature& sig);
bool has_grades(const Formula& f);

}  // namespace pnm
