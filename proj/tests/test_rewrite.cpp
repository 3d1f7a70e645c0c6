#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "phs/parse.hpp"
#include "phs/print.hpp"
#include "phs/rewrite.hpp"
#include "phs/semantics.hpp"
#include "support.hpp"

using namespace phs;

namespace {

Formula phs_f(const std::string& s) {
  return parse_formula(s, Dialect::Phs).formula;
}

bool same(const Formula& a, const Formula& b) {
  return structurally_equal(a, b);
}

// Walks the tree looking for a universal modality with a lower-bound
// constraint (the shape drop_universal_upward must eliminate).
bool has_universal_lower(const Formula& f) {
  if (!f) return false;
  if (f->kind == Kind::Modal && f->universal && f->constraint &&
      !cmp_is_upper(f->constraint->cmp))
    return true;
  return has_universal_lower(f->lhs) || has_universal_lower(f->rhs);
}

constexpr long long kHorizon = 40;

TriBool oracle(const Lasso& w, Interval iv, const Valuation& a,
               const Formula& f) {
  EvalOptions opt;
  opt.horizon = kHorizon;
  return eval_interval(w, iv, a, f, opt);
}

}  // namespace

TEST_CASE("positive normal form pinned shapes") {
  CHECK(same(to_pnf(phs_f("!<B> p")), phs_f("[B] !p")));
  CHECK(same(to_pnf(phs_f("!!p")), phs_f("p")));
  CHECK(same(to_pnf(phs_f("!(p & q)")), phs_f("!p | !q")));
  CHECK(same(to_pnf(phs_f("p -> q")), phs_f("!p | q")));

  // Negating an upper-bounded existential turns the parameter downward.
  Formula g = to_pnf(phs_f("upward u; !<A>_{<=u} p"));
  CHECK(same(g, parse_formula("downward u; [A]_{<=u} !p", Dialect::Phs).formula));
  auto kinds = infer_param_kinds(g);
  REQUIRE(kinds.has_value());
  CHECK(kinds->is_downward("u"));
  CHECK(is_pnf(g));
}

TEST_CASE("length selector formulas") {
  CHECK_THROWS(len_formula(0));
  CHECK(same(len_formula(1), phs_f("[B] !true")));
  CHECK(same(len_formula(2), phs_f("<B> true & [B][B] !true")));

  Lasso w = parse_lasso("stem\nloop {p}");
  for (long long i = 0; i <= 6; ++i)
    for (long long j = i; j <= 6; ++j) {
      CHECK(oracle(w, {i, j}, {}, len_formula(2)) == tri_of(j == i + 1));
    }
  CHECK(oracle(w, {2, 4}, {}, len_formula(3)) == TriBool::True);
  CHECK(oracle(w, {2, 3}, {}, len_formula(3)) == TriBool::False);
}

TEST_CASE("universal lower-bound elimination pinned shapes") {
  Formula f1 = phs_f("upward u; [Bbar]_{>=u} p");
  CHECK(same(drop_universal_upward(f1),
             phs_f("upward u; <Bbar>_{<u} [Bbar] p | [Bbar] p")));

  Formula f2 = phs_f("upward u; [A]_{>u} p");
  CHECK(same(drop_universal_upward(f2), phs_f("upward u; <A>_{<=u} [Bbar] p")));

  Formula f3 = phs_f("upward u; [B]_{>=u} p");
  CHECK(same(drop_universal_upward(f3),
             phs_f("upward u; [B] (p | <Bbar_w>_{<u} true)")));

  Formula f4 = phs_f("upward u; <A>_{<=u} p & [B] p");
  CHECK(same(drop_universal_upward(f4), f4));
}

TEST_CASE("core fragment expansion pinned shapes") {
  Formula o = phs_f("upward u; <O>_{<=u} p");
  CHECK(same(to_core_fragment(o, CoreTarget::BBbarEEbar),
             phs_f("upward u; <E> (<B> true & <Bbar>_{<=u} p)")));

  Formula a = phs_f("<A> p");
  CHECK(same(to_core_fragment(a, CoreTarget::BBbarEEbar),
             phs_f("([E] !true & (p | <Bbar> p)) | "
                   "<E> ([E] !true & (p | <Bbar> p))")));

  Formula p = phs_f("p");
  CHECK(same(to_core_fragment(p, CoreTarget::BBbarEEbar), p));

  // The A/B/Bbar target only validates membership.
  Formula ab = phs_f("<A> p & [Bbar_w] q");
  CHECK(same(to_core_fragment(ab, CoreTarget::ABBbar), ab));
  CHECK_THROWS_WITH((void)to_core_fragment(phs_f("<E> p"), CoreTarget::ABBbar),
                    doctest::Contains("fragment violation"));

  // Idempotence on expanded output.
  Formula once = to_core_fragment(o, CoreTarget::BBbarEEbar);
  CHECK(same(to_core_fragment(once, CoreTarget::BBbarEEbar), once));
}

TEST_CASE("downward parameter elimination pinned shapes") {
  CHECK(same(to_prompt(phs_f("downward l; [B]_{<l} p")), phs_f("true")));
  CHECK(same(to_prompt(phs_f("downward l; <E>_{>l} p")),
             phs_f("<E> (<B> true & p)")));
  CHECK(same(to_prompt(phs_f("downward l; <E>_{>=l} p")), phs_f("<E> p")));
  CHECK(same(to_prompt(phs_f("downward l; [B]_{<=l} p")),
             phs_f("[B] (<B> true | p)")));
  Formula up = phs_f("upward u; <A>_{<=u} p");
  CHECK(same(to_prompt(up), up));
  CHECK(is_prompt(to_prompt(phs_f("downward l; <E>_{>l} p"))));
  CHECK_THROWS_WITH((void)to_prompt(phs_f("upward u; [B]_{>=u} p")),
                    doctest::Contains("drop_universal_upward"));
}

TEST_CASE("point-to-interval embedding pinned shapes") {
  auto pltl = [](const std::string& s) {
    return parse_formula(s, Dialect::Pltl).formula;
  };
  CHECK(same(pltl_to_pab(pltl("X p")),
             phs_f("<A> ((<B> true & [B][B] !true) & <A> ([B] !true & p))")));
  CHECK(same(pltl_to_pab(pltl("p U q")),
             phs_f("<A> (<A> ([B] !true & q) & [B] <A> ([B] !true & p))")));
  CHECK(same(pltl_to_pab(pltl("G p")), phs_f("[A] <A> ([B] !true & p)")));
  CHECK(same(pltl_to_pab(pltl("F p")), phs_f("<A> <A> ([B] !true & p)")));
  CHECK(same(
      pltl_to_pab(pltl("upward u; F_{<=u} p")),
      phs_f("upward u; <A> ([B] !true & p) | <A> ((<B> true & [B][B] !true) "
            "& <A>_{<=u} <A> ([B] !true & p))")));
  CHECK(same(
      pltl_to_pab(pltl("downward l; G_{<=l} p")),
      phs_f("downward l; <A> ([B] !true & p) & <A> ((<B> true & [B][B] !true) "
            "& [A]_{<=l} <A> ([B] !true & p))")));
}

TEST_CASE("alternating-color transformation pinned shapes") {
  std::string theta_c =
      "<A> ([B] !true & c) & "
      "[B] (<A> ([B] !true & !c) -> [B] <A> ([B] !true & !c))";
  std::string theta_nc =
      "<A> ([B] !true & !c) & "
      "[B] (<A> ([B] !true & c) -> [B] <A> ([B] !true & c))";
  Formula in = phs_f("upward u; <A>_{<u} p");
  Formula rel = colorize_rel(in, "c");
  CHECK(same(rel, phs_f("<A> (p & ((" + theta_c + ") | (" + theta_nc + ")))")));

  Formula alt = alt_formula("c");
  CHECK(same(alt, phs_f("[A] <A> <A> ([B] !true & c) & "
                        "[A] <A> <A> ([B] !true & !c)")));

  Formula free = phs_f("p & q");
  CHECK(same(colorize(free), mk_and(free, alt_formula("c"))));
  CHECK(!has_parameters(colorize(in)));
  CHECK(in_abbbarw(colorize(in)));

  CHECK_THROWS_WITH((void)colorize(phs_f("p & c")),
                    doctest::Contains("collides"));
  CHECK_THROWS_WITH((void)colorize(phs_f("upward u; [B] ([A]_{>=u} p)")),
                    doctest::Contains("PromptHS"));
}

TEST_CASE("strong equivalence of the rewrites on sampled traces") {
  std::mt19937_64 rng(20260825);
  int conclusive_pnf = 0, conclusive_drop = 0, conclusive_core = 0;
  for (int it = 0; it < 160; ++it) {
    Lasso w = sampling::random_lasso(rng);
    Formula f = sampling::random_phs(rng, 3);
    Valuation a = sampling::random_valuation(rng);
    std::uniform_int_distribution<long long> pt(0, 8);
    long long i = pt(rng), j = pt(rng);
    if (i > j) std::swap(i, j);
    Interval iv{i, j};

    TriBool base = oracle(w, iv, a, f);
    Formula pnf = to_pnf(f);
    TriBool r1 = oracle(w, iv, a, pnf);
    if (base != TriBool::Unknown && r1 != TriBool::Unknown) {
      ++conclusive_pnf;
      CHECK(base == r1);
    }
    Formula dropped = drop_universal_upward(pnf);
    CHECK(!has_universal_lower(dropped));
    TriBool r2 = oracle(w, iv, a, dropped);
    if (base != TriBool::Unknown && r2 != TriBool::Unknown) {
      ++conclusive_drop;
      CHECK(base == r2);
    }
    Formula core = to_core_fragment(pnf, CoreTarget::BBbarEEbar);
    CHECK(in_bbbar_eebar_core(core));
    TriBool r3 = oracle(w, iv, a, core);
    if (base != TriBool::Unknown && r3 != TriBool::Unknown) {
      ++conclusive_core;
      CHECK(base == r3);
    }
  }
  CHECK(conclusive_pnf >= 60);
  CHECK(conclusive_drop >= 60);
  CHECK(conclusive_core >= 60);
}

TEST_CASE("all-ones downward valuation law for the prompt rewrite") {
  std::mt19937_64 rng(17);
  int conclusive = 0;
  for (int it = 0; it < 160; ++it) {
    Lasso w = sampling::random_lasso(rng);
    Formula f = sampling::random_phs(rng, 3);
    Valuation a = sampling::random_valuation(rng);
    a["l"] = 1;  // the rewrite instantiates downward parameters at one
    Formula g = to_prompt(drop_universal_upward(to_pnf(f)));
    CHECK(is_prompt(g));
    std::uniform_int_distribution<long long> pt(0, 8);
    long long i = pt(rng), j = pt(rng);
    if (i > j) std::swap(i, j);
    TriBool lhs = oracle(w, {i, j}, a, f);
    TriBool rhs = oracle(w, {i, j}, a, g);
    if (lhs != TriBool::Unknown && rhs != TriBool::Unknown) {
      ++conclusive;
      CHECK(lhs == rhs);
    }
  }
  CHECK(conclusive >= 60);
}

TEST_CASE("point evaluator agreement for the embedding") {
  std::mt19937_64 rng(99);
  int conclusive = 0;
  for (int it = 0; it < 200; ++it) {
    Lasso w = sampling::random_lasso(rng);
    Formula f = sampling::random_pltl(rng, 3);
    Valuation a = sampling::random_valuation(rng);
    std::uniform_int_distribution<long long> pt(0, 4);
    long long i = pt(rng);
    TriBool lhs = eval_pltl(w, i, a, f);
    TriBool rhs = oracle(w, {i, i}, a, pltl_to_pab(f));
    REQUIRE(lhs != TriBool::Unknown);
    if (rhs != TriBool::Unknown) {
      ++conclusive;
      CHECK(lhs == rhs);
    }
  }
  CHECK(conclusive >= 80);
}

TEST_CASE("upward parameters are upward closed on samples") {
  std::mt19937_64 rng(4242);
  int tested = 0;
  for (int it = 0; it < 250 && tested < 40; ++it) {
    Lasso w = sampling::random_lasso(rng);
    Formula f = sampling::random_phs(rng, 3);
    Valuation a = sampling::random_valuation(rng, 3);
    Valuation b = a;
    std::uniform_int_distribution<long long> bump(0, 2);
    b["u"] = a["u"] + bump(rng);
    b["l"] = std::max<long long>(1, a["l"] - bump(rng));
    std::uniform_int_distribution<long long> pt(0, 6);
    long long i = pt(rng), j = pt(rng);
    if (i > j) std::swap(i, j);
    TriBool at_a = oracle(w, {i, j}, a, f);
    TriBool at_b = oracle(w, {i, j}, b, f);
    if (at_a == TriBool::True && at_b != TriBool::Unknown) {
      ++tested;
      CHECK(at_b == TriBool::True);
    }
  }
  CHECK(tested >= 40);
}

TEST_CASE("single rule applications grow formulas at most linearly") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    Formula body = to_pnf(sampling::random_phs(rng, 2, false, 0.0));
    size_t n = node_count(body);
    // One elimination step per shape; constants cover the fixed scaffolding.
    const Formula shapes[] = {
        drop_universal_upward(
            mk_modal(Rel::Bbar, true, Constraint{Cmp::Ge, "u"}, body)),
        drop_universal_upward(
            mk_modal(Rel::A, true, Constraint{Cmp::Gt, "u"}, body)),
        drop_universal_upward(
            mk_modal(Rel::B, true, Constraint{Cmp::Ge, "u"}, body)),
        to_prompt(mk_modal(Rel::E, false, Constraint{Cmp::Gt, "l"}, body)),
        to_pnf(mk_not(mk_modal(Rel::B, false, std::nullopt, body))),
    };
    for (const Formula& out : shapes)
      CHECK(node_count(out) <= 4 * n + 24);
    CHECK(node_count(to_pnf(body)) <= 3 * n + 3);
  }
}

TEST_CASE("recorded traces replay to the same output") {
  std::mt19937_64 rng(321);
  for (int it = 0; it < 80; ++it) {
    Formula f = sampling::random_phs(rng, 3);
    auto pnf = to_pnf_traced(f);
    CHECK(same(replay_trace(f, pnf.trace), pnf.formula));
    auto dropped = drop_universal_upward_traced(pnf.formula);
    CHECK(same(replay_trace(pnf.formula, dropped.trace), dropped.formula));
    auto core = to_core_fragment_traced(pnf.formula, CoreTarget::BBbarEEbar);
    CHECK(same(replay_trace(pnf.formula, core.trace), core.formula));
    auto prompt = to_prompt_traced(dropped.formula);
    CHECK(same(replay_trace(dropped.formula, prompt.trace), prompt.formula));
  }
  Formula g = parse_formula("X p", Dialect::Pltl).formula;
  auto emb = pltl_to_pab_traced(g);
  CHECK(same(replay_trace(g, emb.trace), emb.formula));
  Formula pr = phs_f("upward u; <A>_{<u} p");
  auto col = colorize_traced(pr);
  CHECK(same(replay_trace(pr, col.trace), col.formula));
}
