#pragma once

#include <stdexcept>
#include <string>

#include "phs/formula.hpp"
#include "phs/trace.hpp"

namespace phs {

enum class Dialect { Phs, Pltl, Hl };

struct ParseError : std::runtime_error {
  SourceLoc loc;
  ParseError(const std::string& msg, SourceLoc l)
      : std::runtime_error(msg + " at line " + std::to_string(l.line) +
                           ", column " + std::to_string(l.col)),
        loc(l) {}
};

struct ParsedFormula {
  Formula formula;
  ParamDecl decl;
};

// Parses optional parameter declarations followed by a formula. Rejects
// ill-kinded parameter constraints and overlapping upward/downward
// declarations. In the HL dialect identifiers starting with 'x' denote
// position variables; everything else is a proposition.
ParsedFormula parse_formula(const std::string& text, Dialect dialect);

Kripke parse_kripke(const std::string& text);
Lasso parse_lasso(const std::string& text);

}  // namespace phs
