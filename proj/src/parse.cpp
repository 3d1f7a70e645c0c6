#include "phs/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace phs {

namespace {

enum class Tok {
  End, Ident, LPar, RPar, Bang, Amp, Pipe, Arrow, Lt, Gt, LBrack, RBrack,
  ConstraintOpen,  // "_{"
  RBrace, Comma, Semi, Dot, LBrace,
  CmpLe, CmpGe,  // "<=" ">=" (only meaningful after "_{")
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  SourceLoc loc;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  SourceLoc here() const { return {static_cast<int>(pos), line, col}; }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') { ++line; col = 1; } else ++col;
    }
  }

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance(1);
    Token t;
    t.loc = here();
    if (pos >= src.size()) return t;
    char c = src[pos];
    auto two = [&](char a, char b) {
      return c == a && pos + 1 < src.size() && src[pos + 1] == b;
    };
    if (two('-', '>')) { t.type = Tok::Arrow; advance(2); return t; }
    if (two('_', '{')) { t.type = Tok::ConstraintOpen; advance(2); return t; }
    if (two('<', '=')) { t.type = Tok::CmpLe; advance(2); return t; }
    if (two('>', '=')) { t.type = Tok::CmpGe; advance(2); return t; }
    switch (c) {
      case '(': t.type = Tok::LPar; advance(1); return t;
      case ')': t.type = Tok::RPar; advance(1); return t;
      case '!': t.type = Tok::Bang; advance(1); return t;
      case '&': t.type = Tok::Amp; advance(1); return t;
      case '|': t.type = Tok::Pipe; advance(1); return t;
      case '<': t.type = Tok::Lt; advance(1); return t;
      case '>': t.type = Tok::Gt; advance(1); return t;
      case '[': t.type = Tok::LBrack; advance(1); return t;
      case ']': t.type = Tok::RBrack; advance(1); return t;
      case '{': t.type = Tok::LBrace; advance(1); return t;
      case '}': t.type = Tok::RBrace; advance(1); return t;
      case ',': t.type = Tok::Comma; advance(1); return t;
      case ';': t.type = Tok::Semi; advance(1); return t;
      case '.': t.type = Tok::Dot; advance(1); return t;
      default: break;
    }
    // Identifiers: usual names, plus the trace alphabet atoms #N, $, digits.
    if (c == '$') {
      t.type = Tok::Ident;
      t.text = "$";
      advance(1);
      return t;
    }
    if (c == '#') {
      size_t j = pos + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j == pos + 1) throw ParseError("stray '#'", t.loc);
      t.type = Tok::Ident;
      t.text = src.substr(pos, j - pos);
      advance(j - pos);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = pos;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.type = Tok::Ident;
      t.text = src.substr(pos, j - pos);
      advance(j - pos);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      size_t j = pos;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
              src[j] == '@')) {
        // "_{" always opens a constraint, never continues an identifier.
        if (src[j] == '_' && j + 1 < src.size() && src[j + 1] == '{') break;
        ++j;
      }
      t.type = Tok::Ident;
      t.text = src.substr(pos, j - pos);
      advance(j - pos);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.loc);
  }
};

const std::map<std::string, Rel>& rel_table() {
  static const std::map<std::string, Rel> t = {
      {"A", Rel::A}, {"Abar", Rel::Abar}, {"L", Rel::L}, {"Lbar", Rel::Lbar},
      {"B", Rel::B}, {"Bbar", Rel::Bbar}, {"Bbar_w", Rel::BbarW},
      {"E", Rel::E}, {"Ebar", Rel::Ebar}, {"Ebar_w", Rel::EbarW},
      {"D", Rel::D}, {"Dbar", Rel::Dbar}, {"O", Rel::O}, {"Obar", Rel::Obar}};
  return t;
}

struct Parser {
  Lexer lex;
  Token cur;
  Dialect dialect;
  ParamDecl decl;
  std::vector<std::string> bound_vars;

  Parser(const std::string& text, Dialect d) : lex(text), dialect(d) {
    cur = lex.next();
  }

  void bump() { cur = lex.next(); }

  void expect(Tok t, const char* what) {
    if (cur.type != t) throw ParseError(std::string("expected ") + what, cur.loc);
    bump();
  }

  bool is_ident(const char* s) const {
    return cur.type == Tok::Ident && cur.text == s;
  }

  bool reserved(const std::string& id) const {
    if (id == "true" || id == "upward" || id == "downward") return true;
    if (dialect == Dialect::Pltl)
      return id == "X" || id == "U" || id == "G" || id == "F";
    if (dialect == Dialect::Hl)
      return id == "X" || id == "Y" || id == "G" || id == "F" || id == "P" ||
             id == "down";
    return false;
  }

  void parse_decls() {
    while (is_ident("upward") || is_ident("downward")) {
      bool up = cur.text == "upward";
      bump();
      while (true) {
        if (cur.type != Tok::Ident)
          throw ParseError("expected parameter name", cur.loc);
        const std::string p = cur.text;
        if (up) {
          if (decl.is_downward(p))
            throw ParseError("'" + p + "' declared both upward and downward",
                             cur.loc);
          decl.add_upward(p);
        } else {
          if (decl.is_upward(p))
            throw ParseError("'" + p + "' declared both upward and downward",
                             cur.loc);
          decl.add_downward(p);
        }
        bump();
        if (cur.type == Tok::Comma) { bump(); continue; }
        break;
      }
      expect(Tok::Semi, "';'");
    }
  }

  std::optional<Constraint> parse_constraint_opt() {
    if (cur.type != Tok::ConstraintOpen) return std::nullopt;
    SourceLoc loc = cur.loc;
    bump();
    Cmp cmp;
    switch (cur.type) {
      case Tok::Lt: cmp = Cmp::Lt; break;
      case Tok::CmpLe: cmp = Cmp::Le; break;
      case Tok::Gt: cmp = Cmp::Gt; break;
      case Tok::CmpGe: cmp = Cmp::Ge; break;
      default: throw ParseError("expected comparator in constraint", cur.loc);
    }
    bump();
    if (cur.type != Tok::Ident)
      throw ParseError("expected parameter name in constraint", cur.loc);
    std::string p = cur.text;
    bump();
    if (cur.type != Tok::RBrace)
      throw ParseError("expected '}' closing constraint", cur.loc);
    bump();
    (void)loc;
    return Constraint{cmp, p};
  }

  void check_constraint(const Constraint& c, bool universal, SourceLoc loc) {
    if (!decl.declared(c.param))
      throw ParseError("parameter '" + c.param + "' is not declared", loc);
    bool upper = cmp_is_upper(c.cmp);
    bool wants_upward = (universal != upper);
    if (wants_upward && !decl.is_upward(c.param))
      throw ParseError("ill-kinded parameter: '" + c.param +
                           "' must be upward here",
                       loc);
    if (!wants_upward && !decl.is_downward(c.param))
      throw ParseError("ill-kinded parameter: '" + c.param +
                           "' must be downward here",
                       loc);
  }

  Formula parse_formula() { return parse_implies(); }

  Formula parse_implies() {
    Formula a = parse_or();
    if (cur.type == Tok::Arrow) {
      SourceLoc loc = cur.loc;
      bump();
      return mk_implies(a, parse_implies(), loc);
    }
    return a;
  }

  // & and | associate to the right, matching the n-ary constructors.
  Formula parse_or() {
    Formula a = parse_and();
    if (cur.type == Tok::Pipe) {
      SourceLoc loc = cur.loc;
      bump();
      return mk_or(a, parse_or(), loc);
    }
    return a;
  }

  Formula parse_and() {
    Formula a = parse_until();
    if (cur.type == Tok::Amp) {
      SourceLoc loc = cur.loc;
      bump();
      return mk_and(a, parse_and(), loc);
    }
    return a;
  }

  Formula parse_until() {
    Formula a = parse_unary();
    if (dialect == Dialect::Pltl && is_ident("U")) {
      SourceLoc loc = cur.loc;
      bump();
      return mk_until(a, parse_until(), loc);
    }
    return a;
  }

  Formula parse_unary() {
    SourceLoc loc = cur.loc;
    switch (cur.type) {
      case Tok::Bang:
        bump();
        return mk_not(parse_unary(), loc);
      case Tok::Lt: {
        if (dialect != Dialect::Phs)
          throw ParseError("interval modalities belong to the phs dialect", loc);
        bump();
        Rel r = parse_rel();
        expect(Tok::Gt, "'>'");
        auto c = parse_constraint_opt();
        if (c) check_constraint(*c, false, loc);
        return mk_modal(r, false, c, parse_unary(), loc);
      }
      case Tok::LBrack: {
        if (dialect != Dialect::Phs)
          throw ParseError("interval modalities belong to the phs dialect", loc);
        bump();
        Rel r = parse_rel();
        expect(Tok::RBrack, "']'");
        auto c = parse_constraint_opt();
        if (c) check_constraint(*c, true, loc);
        return mk_modal(r, true, c, parse_unary(), loc);
      }
      case Tok::LPar: {
        bump();
        Formula f = parse_formula();
        expect(Tok::RPar, "')'");
        return f;
      }
      case Tok::Ident:
        break;
      default:
        throw ParseError("expected formula", loc);
    }
    const std::string id = cur.text;
    if (id == "true") { bump(); return mk_true(); }
    if (dialect == Dialect::Pltl) {
      if (id == "X") { bump(); return mk_next(parse_unary(), loc); }
      if (id == "G" || id == "F") {
        bump();
        auto c = parse_constraint_opt();
        if (!c) {
          Formula body = parse_unary();
          return id == "G" ? mk_always(body, loc) : mk_future(body, loc);
        }
        if (c->cmp != Cmp::Le)
          throw ParseError("only <= constraints are allowed on F/G", loc);
        bool upward_wanted = (id == "F");
        if (!decl.declared(c->param))
          throw ParseError("parameter '" + c->param + "' is not declared", loc);
        if (upward_wanted && !decl.is_upward(c->param))
          throw ParseError("ill-kinded parameter: '" + c->param +
                               "' must be upward here",
                           loc);
        if (!upward_wanted && !decl.is_downward(c->param))
          throw ParseError("ill-kinded parameter: '" + c->param +
                               "' must be downward here",
                           loc);
        Formula body = parse_unary();
        return id == "F" ? mk_bounded_eventually(c->param, body, loc)
                         : mk_bounded_always(c->param, body, loc);
      }
      if (id == "U") throw ParseError("'U' is a binary operator", loc);
    }
    if (dialect == Dialect::Hl) {
      if (id == "X") { bump(); return mk_next(parse_unary(), loc); }
      if (id == "Y") { bump(); return mk_yesterday(parse_unary(), loc); }
      if (id == "G") { bump(); return mk_always(parse_unary(), loc); }
      if (id == "F") { bump(); return mk_future(parse_unary(), loc); }
      if (id == "P") { bump(); return mk_past(parse_unary(), loc); }
      if (id == "down") {
        bump();
        if (cur.type != Tok::Ident || reserved(cur.text))
          throw ParseError("expected variable name after 'down'", loc);
        std::string v = cur.text;
        bump();
        expect(Tok::Dot, "'.'");
        bound_vars.push_back(v);
        Formula body = parse_implies();
        bound_vars.pop_back();
        return mk_bind(v, body, loc);
      }
    }
    if (reserved(id)) throw ParseError("'" + id + "' is reserved here", loc);
    bump();
    if (dialect == Dialect::Hl && !id.empty() && id[0] == 'x')
      return mk_var(id, loc);
    return mk_prop(id, loc);
  }

  Rel parse_rel() {
    if (cur.type != Tok::Ident)
      throw ParseError("expected modality name", cur.loc);
    auto it = rel_table().find(cur.text);
    if (it == rel_table().end())
      throw ParseError("unknown modality '" + cur.text + "'", cur.loc);
    bump();
    return it->second;
  }
};

}  // namespace

ParsedFormula parse_formula(const std::string& text, Dialect dialect) {
  Parser p(text, dialect);
  p.parse_decls();
  Formula f = p.parse_formula();
  if (p.cur.type != Tok::End)
    throw ParseError("trailing input after formula", p.cur.loc);
  return {f, p.decl};
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { out.push_back(cur); cur.clear(); }
    } else if (c == '{' || c == '}' || c == ',') {
      if (!cur.empty()) { out.push_back(cur); cur.clear(); }
      out.push_back(std::string(1, c));
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Parses a sequence of {a,b}-style letters starting at tokens[i].
std::vector<std::set<std::string>> parse_letters(
    const std::vector<std::string>& toks, size_t i, int line_no) {
  std::vector<std::set<std::string>> letters;
  while (i < toks.size()) {
    if (toks[i] != "{")
      throw ParseError("expected '{' starting a letter", {0, line_no, 1});
    ++i;
    std::set<std::string> letter;
    while (i < toks.size() && toks[i] != "}") {
      if (toks[i] == ",") { ++i; continue; }
      letter.insert(toks[i]);
      ++i;
    }
    if (i >= toks.size())
      throw ParseError("unterminated letter", {0, line_no, 1});
    ++i;  // '}'
    letters.push_back(std::move(letter));
  }
  return letters;
}

}  // namespace

Kripke parse_kripke(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string> names;
  std::vector<std::set<std::string>> labels;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string init_name;
  bool have_init = false;
  while (std::getline(is, line)) {
    ++line_no;
    auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (toks[0] == "state") {
      if (toks.size() < 2)
        throw ParseError("state needs a name", {0, line_no, 1});
      names.push_back(toks[1]);
      auto letters = parse_letters(toks, 2, line_no);
      if (letters.size() != 1)
        throw ParseError("state needs exactly one label set", {0, line_no, 1});
      labels.push_back(letters[0]);
    } else if (toks[0] == "init") {
      if (toks.size() != 2)
        throw ParseError("init needs a state name", {0, line_no, 1});
      init_name = toks[1];
      have_init = true;
    } else if (toks[0] == "edge") {
      if (toks.size() != 3)
        throw ParseError("edge needs two state names", {0, line_no, 1});
      edges.emplace_back(toks[1], toks[2]);
    } else {
      throw ParseError("unknown directive '" + toks[0] + "'", {0, line_no, 1});
    }
  }
  if (!have_init) throw ParseError("missing init", {0, line_no, 1});
  Kripke k;
  k.state_names = names;
  std::set<std::string> inv;
  for (auto& l : labels) inv.insert(l.begin(), l.end());
  k.atoms.assign(inv.begin(), inv.end());
  for (auto& l : labels) {
    uint32_t m = 0;
    for (auto& a : l) m |= 1u << (std::find(k.atoms.begin(), k.atoms.end(), a) -
                                  k.atoms.begin());
    k.labels.push_back(m);
  }
  k.successors.assign(names.size(), {});
  for (auto& [a, b] : edges) {
    int ia = k.state_index(a), ib = k.state_index(b);
    if (ia < 0) throw ParseError("edge from unknown state '" + a + "'", {0, 0, 0});
    if (ib < 0) throw ParseError("edge to unknown state '" + b + "'", {0, 0, 0});
    k.successors[ia].push_back(ib);
  }
  k.initial = k.state_index(init_name);
  if (k.initial < 0)
    throw ParseError("init references unknown state '" + init_name + "'",
                     {0, 0, 0});
  for (size_t s = 0; s < names.size(); ++s)
    if (k.successors[s].empty())
      throw ParseError("not left-total: state '" + names[s] +
                           "' has no successor",
                       {0, 0, 0});
  return k;
}

Lasso parse_lasso(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  std::vector<std::set<std::string>> stem, loop;
  bool have_stem = false, have_loop = false;
  while (std::getline(is, line)) {
    ++line_no;
    auto toks = tokenize_line(line);
    if (toks.empty()) continue;
    if (toks[0] == "stem") {
      stem = parse_letters(toks, 1, line_no);
      have_stem = true;
    } else if (toks[0] == "loop") {
      loop = parse_letters(toks, 1, line_no);
      have_loop = true;
    } else {
      throw ParseError("unknown directive '" + toks[0] + "'", {0, line_no, 1});
    }
  }
  if (!have_stem || !have_loop)
    throw ParseError("lasso needs 'stem' and 'loop' lines", {0, line_no, 1});
  if (loop.empty()) throw ParseError("loop must be nonempty", {0, line_no, 1});
  return make_lasso(stem, loop);
}

}  // namespace phs
