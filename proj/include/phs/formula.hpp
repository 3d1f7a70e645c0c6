#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace phs {

// Interval modality tags. Bar denotes the inverse Allen relation, the _w
// variants are the reflexive closures of Bbar/Ebar.
enum class Rel : uint8_t {
  A, Abar, L, Lbar, B, Bbar, BbarW, E, Ebar, EbarW, D, Dbar, O, Obar
};

const char* rel_name(Rel r);

enum class Cmp : uint8_t { Lt, Le, Gt, Ge };

const char* cmp_name(Cmp c);
bool cmp_holds(long long lhs, Cmp c, long long rhs);
bool cmp_is_upper(Cmp c);  // < or <=

// Length constraint attached to an interval modality: |J| cmp value(param).
struct Constraint {
  Cmp cmp;
  std::string param;
  bool operator==(const Constraint&) const = default;
};

// Upward/downward parameter declarations. The sets must be disjoint.
struct ParamDecl {
  std::vector<std::string> upward;
  std::vector<std::string> downward;

  bool is_upward(const std::string& p) const;
  bool is_downward(const std::string& p) const;
  bool declared(const std::string& p) const;
  void add_upward(const std::string& p);
  void add_downward(const std::string& p);
  void merge(const ParamDecl& other);
  bool empty() const { return upward.empty() && downward.empty(); }
};

enum class Kind : uint8_t {
  True,
  Prop,      // name
  Var,       // HL position variable, name
  Not,
  And,
  Or,
  Implies,
  Modal,     // interval modality: rel, universal, optional constraint
  Next,      // X (strict, PLTL and HL)
  Until,     // U (PLTL)
  Always,    // G (reflexive, PLTL and HL)
  Future,    // F (reflexive; PLTL sugar and HL)
  Past,      // P (reflexive, HL)
  Yesterday, // Y (strict, HL)
  BoundedEventually, // F_{<=u} (PLTL), param in `name`
  BoundedAlways,     // G_{<=l} (PLTL), param in `name`
  Bind,      // down x. phi (HL), variable in `name`
};

struct SourceLoc {
  int offset = -1;
  int line = 0;
  int col = 0;
  bool valid() const { return offset >= 0; }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  std::string name;                     // Prop/Var/Bind/Bounded* payload
  Rel rel = Rel::A;                     // Modal
  bool universal = false;               // Modal: [X] vs <X>
  std::optional<Constraint> constraint; // Modal
  Formula lhs, rhs;                     // children
  SourceLoc loc;
  size_t hash = 0;
};

// Constructors. All nodes are immutable after construction.
Formula mk_true();
Formula mk_false();   // rendered as !true
Formula mk_prop(const std::string& name, SourceLoc loc = {});
Formula mk_var(const std::string& name, SourceLoc loc = {});
Formula mk_not(Formula f, SourceLoc loc = {});
Formula mk_and(Formula a, Formula b, SourceLoc loc = {});
Formula mk_or(Formula a, Formula b, SourceLoc loc = {});
Formula mk_implies(Formula a, Formula b, SourceLoc loc = {});
Formula mk_modal(Rel rel, bool universal, std::optional<Constraint> c,
                 Formula body, SourceLoc loc = {});
Formula mk_next(Formula f, SourceLoc loc = {});
Formula mk_until(Formula a, Formula b, SourceLoc loc = {});
Formula mk_always(Formula f, SourceLoc loc = {});
Formula mk_future(Formula f, SourceLoc loc = {});
Formula mk_past(Formula f, SourceLoc loc = {});
Formula mk_yesterday(Formula f, SourceLoc loc = {});
Formula mk_bounded_eventually(const std::string& param, Formula f, SourceLoc loc = {});
Formula mk_bounded_always(const std::string& param, Formula f, SourceLoc loc = {});
Formula mk_bind(const std::string& var, Formula body, SourceLoc loc = {});

// n-ary conveniences (right-nested).
Formula mk_and_all(const std::vector<Formula>& fs);
Formula mk_or_all(const std::vector<Formula>& fs);
Formula mk_iff(Formula a, Formula b);

bool is_false(const Formula& f);  // structurally !true

bool structurally_equal(const Formula& a, const Formula& b);

// |phi| in the sense used throughout: number of distinct subformulas.
size_t distinct_subformula_count(const Formula& f);
size_t node_count(const Formula& f);

std::vector<std::string> collect_atoms(const Formula& f);
std::vector<std::string> collect_params(const Formula& f);
std::vector<std::string> free_variables(const Formula& f);

// Positive normal form: negation only on propositions (or on true).
bool is_pnf(const Formula& f);

// A formula is well-kinded w.r.t. a declaration if every constrained
// modality respects the grammar: existential upper bounds and universal
// lower bounds take upward parameters; the other two combinations take
// downward parameters. Only meaningful on PNF formulas; negations flip
// polarity and are accounted for.
struct KindError {
  std::string message;
  SourceLoc loc;
};
std::optional<KindError> check_kinds(const Formula& f, const ParamDecl& decl);

// Fragment membership over the interval dialect.
bool uses_only(const Formula& f, const std::vector<Rel>& allowed);
bool in_abbbarw(const Formula& f);           // A, B, Bbar, BbarW
bool in_bbbar_eebar_core(const Formula& f);  // B, Bbar, BbarW, E, Ebar, EbarW
bool is_interval_formula(const Formula& f);  // no point-logic operators
bool is_pltl_formula(const Formula& f);
bool is_hl_formula(const Formula& f);
bool has_parameters(const Formula& f);
// PromptHS: the only parameterized operators are existential upper bounds.
bool is_prompt(const Formula& f);

// Hash/equality functors for using Formula as a map key (structural).
struct FormulaHash {
  size_t operator()(const Formula& f) const { return f ? f->hash : 0; }
};
struct FormulaEq {
  bool operator()(const Formula& a, const Formula& b) const {
    return structurally_equal(a, b);
  }
};

}  // namespace phs
