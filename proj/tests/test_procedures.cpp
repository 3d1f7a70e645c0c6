#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "phs/procedures.hpp"
#include "phs/print.hpp"
#include "phs/rewrite.hpp"
#include "support.hpp"

using namespace phs;

namespace {

Formula eventually_within(const std::string& p) {
  // <A>_{<=u} <A> (len_1 & p)
  return mk_modal(Rel::A, false, Constraint{Cmp::Le, "u"},
                  mk_modal(Rel::A, false, {},
                           mk_and(len_formula(1), mk_prop(p))));
}

Formula trace_always(const std::string& p) {
  // [A]<A>(len_1 & p): G p as a trace property.
  return mk_modal(Rel::A, true, {},
                  mk_modal(Rel::A, false, {},
                           mk_and(len_formula(1), mk_prop(p))));
}

Kripke self_loop_kripke() {
  Kripke k;
  k.atoms = {"p"};
  k.state_names = {"s"};
  k.labels = {1u};
  k.successors = {{0}};
  k.initial = 0;
  return k;
}

}  // namespace

TEST_CASE("satisfiability: bounded eventuality is satisfiable") {
  SatResult r = check_sat(eventually_within("p"));
  REQUIRE(r.verdict == SatResult::Verdict::Nonempty);
  REQUIRE(r.witness.has_value());
  CHECK(r.k == 2 * r.automaton_states + 1);
  CHECK(r.valuation.at("u") == 2 * r.k);
  CHECK(r.witness_verified);
  // The witness itself satisfies the formula already at alpha(u) = 1.
  auto min_alpha = min_upward_alpha(eventually_within("p"), *r.witness, 8);
  REQUIRE(min_alpha.has_value());
  CHECK(*min_alpha == 1);
}

TEST_CASE("satisfiability: contradiction is empty") {
  SatResult r = check_sat(mk_and(mk_prop("p"), mk_not(mk_prop("p"))));
  CHECK(r.verdict == SatResult::Verdict::Empty);
  CHECK(!r.witness.has_value());
}

TEST_CASE("satisfiability: non-parametric formulas round through the pipeline") {
  SatResult r = check_sat(trace_always("p"));
  REQUIRE(r.verdict == SatResult::Verdict::Nonempty);
  CHECK(eval_trace(*r.witness, {}, trace_always("p")) == TriBool::True);
}

TEST_CASE("model checking: always-p holds on the p-loop") {
  Kripke k = self_loop_kripke();
  McResult r = check_mc(k, trace_always("p"));
  CHECK(r.verdict == McResult::Verdict::Holds);
  // Brute force: the structure has a unique trace; the oracle agrees.
  std::vector<Lasso> traces = kripke_lassos(k, 3, 3);
  REQUIRE(traces.size() == 1);
  CHECK(eval_trace(traces[0], {}, trace_always("p")) == TriBool::True);
}

TEST_CASE("model checking: unreachable q gives a pumpable counterexample") {
  Kripke k = self_loop_kripke();
  Formula f = eventually_within("q");
  McResult r = check_mc(k, f);
  REQUIRE(r.verdict == McResult::Verdict::Empty);
  REQUIRE(r.counterexample.has_value());
  CHECK(!r.counterexample->loop_states.empty());
  // No alpha can help: q never occurs.
  for (long long a : {1, 2, 5}) {
    Valuation v{{"u", a}};
    CHECK(eval_trace(kripke_lassos(k, 2, 2)[0], v, f) == TriBool::False);
  }
}

TEST_CASE("model checking: valuation law on holds") {
  Kripke k = self_loop_kripke();
  Formula f = eventually_within("p");
  McResult r = check_mc(k, f);
  REQUIRE(r.verdict == McResult::Verdict::Holds);
  CHECK(r.valuation.at("u") ==
        2 * (r.automaton_states * r.kripke_states + 1));
}

TEST_CASE("coloring lemma verifier on a concrete instance") {
  Formula f = mk_modal(Rel::A, false, Constraint{Cmp::Lt, "u"}, mk_prop("p"));
  Lasso w = make_lasso({}, {{"p"}}, {"p"});
  Lemma2Report rep = verify_lemma2(f, w, {{"u", 2}}, 20, 5);
  CHECK(rep.part1_checked >= 1);
  CHECK(rep.part1_violations == 0);
  CHECK(rep.part2_checked >= 1);
  CHECK(rep.part2_violations == 0);
}

TEST_CASE("spaced coloring has exact blocks") {
  Lasso w = make_lasso({{"p"}, {}}, {{"p"}}, {"p"});
  Lasso wc = spaced_coloring(w, 3, true);
  int c = wc.atom_index("c");
  REQUIRE(c >= 0);
  for (long long i = 0; i < 30; ++i)
    CHECK(wc.holds_at(i, c) == (((i / 3) % 2) == 0));
  // Underlying letters are untouched.
  int p = wc.atom_index("p");
  for (long long i = 0; i < 30; ++i)
    CHECK(wc.holds_at(i, p) == w.holds_at(i, w.atom_index("p")));
}

TEST_CASE("minimality sweep is monotone-safe") {
  // G_{<=l}-style: needs p on a long prefix; min alpha reflects where p stops.
  Formula f = mk_modal(Rel::A, false, Constraint{Cmp::Ge, "u"},
                       mk_modal(Rel::A, false, {},
                                mk_and(len_formula(1), mk_prop("p"))));
  // p holds from position 4 onward only; <A>_{>=u} from [0,0] must span at
  // least u+... the oracle decides; just check the sweep returns the first
  // conclusive-true value and that it is minimal.
  Lasso w = make_lasso({{}, {}, {}, {}}, {{"p"}}, {"p"});
  auto m = min_upward_alpha(f, w, 10);
  if (m) {
    Valuation below;
    below["u"] = *m - 1;
    if (*m > 1) CHECK(eval_trace(w, below, f) != TriBool::True);
  }
}
