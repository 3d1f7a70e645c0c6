#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "phs/corpus.hpp"
#include "phs/parse.hpp"
#include "phs/print.hpp"
#include "phs/rewrite.hpp"
#include "phs/semantics.hpp"
#include "phs/sweep.hpp"

using namespace phs;

namespace {

TriBool eval_at(const Lasso& w, const Formula& f, long long horizon,
                const Valuation& alpha = {}) {
  EvalOptions opt;
  opt.horizon = horizon;
  return eval_trace(w, alpha, f, opt);
}

}  // namespace

TEST_CASE("counting word: exact shape for n=1 and n=2") {
  Lasso w1 = yardstick_trace(1);
  CHECK(w1.stem.size() == 16);
  CHECK(w1.loop.size() == 1);
  CHECK(w1.letter_set(0) == std::set<std::string>{"b0", "h1", "h2"});
  CHECK(w1.letter_set(16) == std::set<std::string>{"dollar"});
  // Block 0 has contents 0,0 at sub-block starts 0 and 2.
  CHECK(w1.letter_set(2) == std::set<std::string>{"b0", "h1"});
  CHECK(w1.letter_set(1) == std::set<std::string>{"b0"});
  CHECK(w1.letter_set(3) == std::set<std::string>{"b1"});

  Lasso w2 = yardstick_trace(2);
  CHECK(w2.stem.size() == 192);
  YardstickSpec s3 = yardstick_spec(3);
  CHECK(s3.prefix_len == 4LL * 8 * 256);
  CHECK_THROWS_WITH_AS(yardstick_trace(3), doctest::Contains("budget"),
                       std::runtime_error);
  CHECK(yardstick_trace(3, 10000).stem.size() == 8192);
}

TEST_CASE("counting word: content bits enumerate all block indices") {
  Lasso w = yardstick_trace(1);
  int b1 = w.atom_index("b1");
  // Sub-block i of block v starts at (2*v + i)*2; content = bit i of v.
  for (long long v = 0; v < 4; ++v)
    for (long long i = 0; i < 2; ++i)
      CHECK(w.holds_at((2 * v + i) * 2, b1) == (((v >> i) & 1) != 0));
}

TEST_CASE("order-1 formula holds on the order-1 word") {
  Lasso w = yardstick_trace(1);
  Formula f = yardstick_formula(1);
  CHECK(eval_at(w, f, 40) == TriBool::True);
  // The two conjuncts separately, for localized diagnostics.
  CHECK(eval_at(w, pltl_to_pab(yardstick_block_ltl(1)), 40) == TriBool::True);
}

TEST_CASE("single-letter mutations falsify the order-1 formula") {
  Lasso base = yardstick_trace(1);
  Formula f = yardstick_formula(1);
  std::mt19937_64 rng(7);
  int done = 0, falsified = 0;
  std::set<std::pair<size_t, uint32_t>> used;
  while (done < 20) {
    size_t pos = rng() % base.stem.size();
    uint32_t letter = static_cast<uint32_t>(rng() % 32);
    if (letter == base.stem[pos]) continue;
    if (!used.insert({pos, letter}).second) continue;
    Lasso mut = base;
    mut.stem[pos] = letter;
    ++done;
    if (eval_at(mut, f, 40) == TriBool::False) ++falsified;
  }
  CHECK(done == 20);
  CHECK(falsified == 20);
}

TEST_CASE("content comparison helper on crafted positions") {
  Lasso w = yardstick_trace(1);
  // Position 0: sub-block 0 of block 0 (content 0); in block 1 that
  // sub-block has content 1.
  CHECK(eval_interval(w, {0, 0}, {}, yardstick_eq(1, 0, 1), {40}) ==
        TriBool::True);
  CHECK(eval_interval(w, {0, 0}, {}, yardstick_eq(1, 1, 0), {40}) ==
        TriBool::False);
  // Position 2: sub-block 1 of block 0 (content 0), stays 0 in block 1.
  CHECK(eval_interval(w, {2, 2}, {}, yardstick_eq(1, 0, 0), {40}) ==
        TriBool::True);
  CHECK(eval_interval(w, {2, 2}, {}, yardstick_eq(1, 0, 1), {40}) ==
        TriBool::False);
  // Non-sub-block-start positions satisfy every variant vacuously.
  CHECK(eval_interval(w, {1, 1}, {}, yardstick_eq(1, 1, 0), {40}) ==
        TriBool::True);
}

TEST_CASE("parametric lower-bound formula: minimal value is 17 on the word") {
  Lasso w = yardstick_trace(1);
  Formula f = sat_lowerbound_formula(1);
  for (long long v = 15; v <= 18; ++v)
    CHECK(eval_at(w, f, 60, {{"u", v}}) == tri_of(v >= 17));
  // With a mutated word the formula fails even at the minimal value.
  Lasso mut = w;
  mut.stem[1] ^= 0x18;  // flip both bit letters at position 1
  CHECK(eval_at(mut, f, 60, {{"u", 17}}) == TriBool::False);
}

TEST_CASE("model-checking lower-bound instance") {
  auto [k, f] = mc_lowerbound_instance(1);
  REQUIRE(k.state_names.size() == 32);
  for (const auto& succ : k.successors) CHECK(succ.size() == 32);
  // The counting word is a labeling of a path of K: every letter is the
  // label of some state and the initial label matches position 0.
  Lasso w = yardstick_trace(1);
  std::set<uint32_t> labels(k.labels.begin(), k.labels.end());
  REQUIRE(w.atoms == k.atoms);
  for (size_t i = 0; i < w.stem.size(); ++i) CHECK(labels.count(w.stem[i]));
  CHECK(k.labels[k.initial] == w.stem[0]);
  // On a trace violating the block structure the implication is vacuous.
  Lasso junk = make_lasso({}, {{"b0"}}, counting_atoms());
  CHECK(eval_at(junk, f, 30, {{"u", 1}}) == TriBool::True);
  // Kripke structures round-trip through render/parse.
  Kripke back = parse_kripke(render_kripke(k));
  CHECK(back.state_names == k.state_names);
  CHECK(back.successors == k.successors);
  CHECK(back.initial == k.initial);
  auto label_set = [](const Kripke& kk, int s) {
    std::set<std::string> out;
    for (size_t a = 0; a < kk.atoms.size(); ++a)
      if ((kk.labels[s] >> a) & 1u) out.insert(kk.atoms[a]);
    return out;
  };
  for (int s = 0; s < 32; ++s) CHECK(label_set(back, s) == label_set(k, s));
}

TEST_CASE("succinctness family: pinned members and non-members") {
  Lasso member = make_lasso({}, {{"p0", "p1"}, {}}, {"p0", "p1"});
  CHECK(membership_check(member, 1));
  Lasso non = make_lasso({{"p0", "p1"}, {"p1"}}, {{}}, {"p0", "p1"});
  CHECK_FALSE(membership_check(non, 1));
  Formula f1 = succinct_family(1);
  CHECK(eval_at(member, f1, 30) == TriBool::True);
  CHECK(eval_at(non, f1, 30) == TriBool::False);
}

TEST_CASE("succinctness family agrees with the brute-force language check") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 2; ++n) {
    Formula f = succinct_family(n);
    std::vector<std::string> atoms;
    for (int i = 0; i <= n; ++i) atoms.push_back("p" + std::to_string(i));
    int checked = 0;
    for (int it = 0; it < 120; ++it) {
      std::vector<std::set<std::string>> stem, loop;
      int sl = static_cast<int>(rng() % 3);
      int ll = 1 + static_cast<int>(rng() % 3);
      auto letter = [&] {
        std::set<std::string> out;
        for (const std::string& a : atoms)
          if (rng() % 2) out.insert(a);
        return out;
      };
      for (int i = 0; i < sl; ++i) stem.push_back(letter());
      for (int i = 0; i < ll; ++i) loop.push_back(letter());
      Lasso w = make_lasso(stem, loop, atoms);
      TriBool got = eval_at(w, f, 40);
      if (got == TriBool::Unknown) continue;
      ++checked;
      CHECK((got == TriBool::True) == membership_check(w, n));
    }
    CHECK(checked >= 100);
  }
}

TEST_CASE("succinctness family grows linearly in n") {
  size_t c1 = distinct_subformula_count(succinct_family(1));
  size_t c2 = distinct_subformula_count(succinct_family(2));
  size_t c3 = distinct_subformula_count(succinct_family(3));
  CHECK(c2 - c1 == c3 - c2);
  CHECK(c2 > c1);
}

TEST_CASE("generated formulas parse-render round-trip") {
  for (int n = 1; n <= 2; ++n) {
    for (const Formula& f :
         {yardstick_formula(n), sat_lowerbound_formula(n), succinct_family(n),
          mc_lowerbound_instance(n).second}) {
      ParsedFormula back = parse_formula(render_formula(f), Dialect::Phs);
      CHECK(structurally_equal(back.formula, f));
    }
  }
}

TEST_CASE("batch evaluation: parallel kernel matches the serial reference") {
  std::vector<SweepTask> tasks;
  for (const RandomInstance& inst :
       random_instances(5, RandomProfile::tiny(), 300))
    tasks.push_back({inst.formula, inst.word, inst.valuation, -1});
  std::vector<TriBool> a = sweep_serial(tasks);
  std::vector<TriBool> b = sweep_parallel(tasks);
  REQUIRE(a.size() == tasks.size());
  CHECK(a == b);
  CHECK(sweep_threads() >= 1);
  // Minimality sweeps agree as well and find the pinned value 17.
  Lasso w = yardstick_trace(1);
  Formula f = sat_lowerbound_formula(1);
  CHECK(min_value_sweep_serial(f, w, "u", 20) == 17);
  CHECK(min_value_sweep_parallel(f, w, "u", 20) == 17);
}

TEST_CASE("random instances: reproducible, bounded, well-kinded") {
  RandomProfile tiny = RandomProfile::tiny();
  auto a = random_instances(42, tiny, 50);
  auto b = random_instances(42, tiny, 50);
  REQUIRE(a.size() == 50);
  ParamDecl decl;
  decl.add_upward("u");
  decl.add_downward("l");
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(structurally_equal(a[i].formula, b[i].formula));
    CHECK(a[i].word.stem == b[i].word.stem);
    CHECK(a[i].word.loop == b[i].word.loop);
    CHECK(a[i].valuation == b[i].valuation);
    CHECK(collect_atoms(a[i].formula).size() <= 2);
    CHECK(is_pnf(a[i].formula));
    CHECK_FALSE(check_kinds(a[i].formula, decl).has_value());
    for (const auto& [p, v] : a[i].valuation) CHECK(v >= 1);
  }
  auto c = random_instances(43, tiny, 50);
  bool differs = false;
  for (size_t i = 0; i < c.size(); ++i)
    if (!structurally_equal(a[i].formula, c[i].formula)) differs = true;
  CHECK(differs);
}
