#pragma once

#include <string>

#include "phs/formula.hpp"
#include "phs/trace.hpp"

namespace phs {

// Infers parameter kinds from constrained operators, taking negation parity
// into account. Fails (returns nullopt) if usage is contradictory.
std::optional<ParamDecl> infer_param_kinds(const Formula& f);

// Renders the formula body only (no declarations).
std::string render_formula_body(const Formula& f);

// Renders parameter declarations followed by the formula; the inverse of
// parse_formula for every dialect (round-trip law). If decl is empty it is
// inferred from the formula.
std::string render_formula(const Formula& f, const ParamDecl& decl = {});

std::string render_kripke(const Kripke& k);
std::string render_lasso(const Lasso& w);

}  // namespace phs
