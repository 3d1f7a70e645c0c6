#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "phs/nba.hpp"
#include "phs/fairproduct.hpp"
#include "phs/parse.hpp"
#include "support.hpp"

using namespace phs;

namespace {

// "Eventually p": guesses the witness position.
NBA eventually_p() {
  NBA a;
  a.atoms = {"p"};
  a.add_state(false);
  a.add_state(true);
  a.add_edge(0, Guard::tt(), 0);
  a.add_edge(0, Guard::atom(0, true), 1);
  a.add_edge(1, Guard::tt(), 1);
  return a;
}

NBA never_p() {
  NBA a;
  a.atoms = {"p"};
  a.add_state(true);
  a.add_edge(0, Guard::atom(0, false), 0);
  return a;
}

NBA random_nba(std::mt19937_64& rng, const std::vector<std::string>& atoms,
               int max_states) {
  std::uniform_int_distribution<int> ns(1, max_states);
  int n = ns(rng);
  NBA a;
  a.atoms = atoms;
  std::bernoulli_distribution acc(0.4), has_edge(0.7), lit(0.5);
  for (int q = 0; q < n; ++q) a.add_state(acc(rng));
  std::uniform_int_distribution<int> st(0, n - 1);
  a.initial = st(rng);
  int n_atoms = static_cast<int>(atoms.size());
  for (int q = 0; q < n; ++q) {
    int degree = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    for (int e = 0; e < degree; ++e) {
      Cube c;
      for (int b = 0; b < n_atoms; ++b) {
        int mode = std::uniform_int_distribution<int>(0, 2)(rng);
        if (mode == 0) c.pos |= 1u << b;
        if (mode == 1) c.neg |= 1u << b;
      }
      a.add_edge(q, Guard{{c}}, st(rng));
    }
  }
  return a;
}

// Longest color block of the infinite word; -1 encodes an infinite block.
long long max_block(const Lasso& w, const std::string& color) {
  int c = w.atom_index(color);
  bool uniform = true;
  for (size_t i = 0; i + 1 < w.loop.size(); ++i)
    if (w.holds_at(w.stem.size() + i, c) !=
        w.holds_at(w.stem.size() + i + 1, c))
      uniform = false;
  if (w.loop.size() >= 1 && uniform &&
      (w.stem.empty() ||
       w.holds_at(w.stem.size(), c) ==
           w.holds_at(w.stem.size() + w.loop.size() - 1, c)))
    ;  // may still be finite if the loop is uniform but differs from stem end
  long long total = static_cast<long long>(w.stem.size() + 4 * w.loop.size());
  // Infinite block iff the loop is color-uniform.
  bool loop_uniform = true;
  for (size_t i = 0; i < w.loop.size(); ++i)
    if (w.holds_at(w.stem.size() + i, c) != w.holds_at(w.stem.size(), c))
      loop_uniform = false;
  if (loop_uniform) return -1;
  long long best = 0, cur = 1;
  for (long long i = 1; i < total; ++i) {
    if (w.holds_at(i, c) == w.holds_at(i - 1, c))
      ++cur;
    else {
      best = std::max(best, cur);
      cur = 1;
    }
  }
  return std::max(best, cur);
}

Lasso mk_word(const std::vector<std::string>& atoms,
              const std::vector<std::set<std::string>>& stem,
              const std::vector<std::set<std::string>>& loop) {
  return make_lasso(stem, loop, atoms);
}

}  // namespace

TEST_CASE("intersection and union behave set-theoretically on examples") {
  NBA a = eventually_p(), b = never_p();
  NBA both = intersect(a, b);
  CHECK(!is_empty(both).has_value());
  CHECK(both.size() <= 2 * a.size() * b.size());
  NBA either = nba_union(a, b);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    Lasso w = sampling::random_lasso_over(rng, {"p"});
    CHECK(membership(either, w));
  }
}

TEST_CASE("boolean algebra laws by sampled membership") {
  std::mt19937_64 rng(20260825);
  for (int round = 0; round < 12; ++round) {
    NBA a = random_nba(rng, {"p"}, 4);
    NBA b = random_nba(rng, {"p"}, 4);
    NBA ab = intersect(a, b);
    NBA ob = nba_union(a, b);
    NBA ca = complement(a);
    CHECK(!is_empty(intersect(a, ca)).has_value());
    for (int it = 0; it < 25; ++it) {
      Lasso w = sampling::random_lasso_over(rng, {"p"});
      bool ma = membership(a, w), mb = membership(b, w);
      CHECK(membership(ab, w) == (ma && mb));
      CHECK(membership(ob, w) == (ma || mb));
      CHECK(membership(ca, w) == !ma);
    }
  }
}

TEST_CASE("complement of universal and empty automata") {
  NBA u = nba_true({"p"});
  CHECK(!is_empty(complement(u)).has_value());
  NBA e = nba_false({"p"});
  NBA ce = complement(e);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 30; ++it)
    CHECK(membership(ce, sampling::random_lasso_over(rng, {"p"})));
}

TEST_CASE("complement is exact on random small automata") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 25; ++round) {
    NBA a = random_nba(rng, {"p"}, 5);
    NBA ca = complement(a);
    for (int it = 0; it < 8; ++it) {
      Lasso w = sampling::random_lasso_over(rng, {"p"});
      CHECK(membership(a, w) != membership(ca, w));
    }
  }
}

TEST_CASE("complement budget error names the context") {
  // Nondeterministic, with accepting and rejecting cycles in one strongly
  // connected component: forces the ranking construction.
  NBA a;
  a.atoms = {"p"};
  a.add_state(true);
  a.add_state(false);
  a.add_edge(0, Guard::tt(), 0);
  a.add_edge(0, Guard::tt(), 1);
  a.add_edge(1, Guard::tt(), 1);
  a.add_edge(1, Guard::tt(), 0);
  ComplementOptions opts;
  opts.state_budget = 1;
  opts.context = "the offending subformula";
  CHECK_THROWS_WITH((void)complement(a, opts),
                    doctest::Contains("blow-up budget"));
  CHECK_THROWS_WITH((void)complement(a, opts),
                    doctest::Contains("the offending subformula"));
}

TEST_CASE("quotient preserves the language on samples") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    NBA a = random_nba(rng, {"p"}, 5);
    NBA q = quotient_bisim(a);
    CHECK(q.size() <= std::max(1, prune(a).size()));
    for (int it = 0; it < 20; ++it) {
      Lasso w = sampling::random_lasso_over(rng, {"p"});
      CHECK(membership(a, w) == membership(q, w));
    }
  }
}

TEST_CASE("marker retargeting") {
  // A: the marked position carries p.
  NBA a;
  a.atoms = {"p", "m"};
  a.add_state(false);
  a.add_state(true);
  a.add_edge(0, Guard::atom(1, false), 0);
  a.add_edge(0, Guard::atom(1, true).conj(Guard::atom(0, true)), 1);
  a.add_edge(1, Guard::atom(1, false), 1);

  NBA fut = retarget_marker(a, "m", MarkerMove::Future);
  // marked at 1, p first at 3 -> some position >= mark has p.
  CHECK(membership(fut, mk_word({"p", "m"}, {{}, {"m"}, {}, {"p"}}, {{}})));
  // p only strictly before the mark.
  CHECK(!membership(fut, mk_word({"p", "m"}, {{"p"}, {}, {"m"}}, {{}})));
  // reflexive: p at the mark itself.
  CHECK(membership(fut, mk_word({"p", "m"}, {{}, {"p", "m"}}, {{}})));

  NBA pst = retarget_marker(a, "m", MarkerMove::Past);
  CHECK(membership(pst, mk_word({"p", "m"}, {{"p"}, {}, {"m"}}, {{}})));
  CHECK(!membership(pst, mk_word({"p", "m"}, {{}, {"m"}, {"p"}}, {{}})));
  CHECK(membership(pst, mk_word({"p", "m"}, {{}, {"p", "m"}}, {{}})));

  NBA nxt = retarget_marker(a, "m", MarkerMove::Next);
  CHECK(membership(nxt, mk_word({"p", "m"}, {{}, {"m"}, {"p"}}, {{}})));
  CHECK(!membership(nxt, mk_word({"p", "m"}, {{}, {"m"}, {}, {"p"}}, {{}})));

  NBA prv = retarget_marker(a, "m", MarkerMove::Previous);
  CHECK(membership(prv, mk_word({"p", "m"}, {{}, {"p"}, {"m"}}, {{}})));
  CHECK(!membership(prv, mk_word({"p", "m"}, {{"p"}, {}, {"m"}}, {{}})));

  CHECK_THROWS_WITH((void)retarget_marker(a, "nope", MarkerMove::Next),
                    doctest::Contains("unknown marker"));
}

TEST_CASE("next then previous is the identity on well-marked words") {
  std::mt19937_64 rng(13);
  NBA a;
  a.atoms = {"p", "m"};
  a.add_state(false);
  a.add_state(true);
  a.add_edge(0, Guard::atom(1, false), 0);
  a.add_edge(0, Guard::atom(1, true).conj(Guard::atom(0, true)), 1);
  a.add_edge(1, Guard::atom(1, false), 1);
  NBA back = retarget_marker(retarget_marker(a, "m", MarkerMove::Next), "m",
                             MarkerMove::Previous);
  for (int it = 0; it < 60; ++it) {
    // Build a well-marked word: exactly one m, in the stem.
    Lasso w = sampling::random_lasso_over(rng, {"p", "m"}, 4, 3);
    for (auto& l : w.stem) l &= 1u;
    for (auto& l : w.loop) l &= 1u;
    while (w.stem.size() < 2) w.stem.push_back(0);
    // Positions >= 1 only: moving the marker forward and back again needs a
    // predecessor to exist.
    size_t at = std::uniform_int_distribution<size_t>(1, w.stem.size() - 1)(rng);
    w.stem[at] |= 2u;
    CHECK(membership(a, w) == membership(back, w));
  }
}

TEST_CASE("binding a marker to the evaluation point") {
  // A: the x mark and the e mark coincide.
  NBA a;
  a.atoms = {"@e", "@v_x"};
  a.add_state(false);
  a.add_state(true);
  Guard neither = Guard::atom(0, false).conj(Guard::atom(1, false));
  a.add_edge(0, neither, 0);
  a.add_edge(0, Guard::atom(0, true).conj(Guard::atom(1, true)), 1);
  a.add_edge(1, neither, 1);
  NBA bound = retarget_marker(a, "@v_x", MarkerMove::BindToE, "@e");
  std::mt19937_64 rng(17);
  for (int it = 0; it < 40; ++it) {
    Lasso w = sampling::random_lasso_over(rng, {"@e", "@v_x"}, 4, 3);
    for (auto& l : w.stem) l = 0;
    for (auto& l : w.loop) l = 0;
    if (w.stem.empty()) w.stem.push_back(0);
    size_t at = std::uniform_int_distribution<size_t>(0, w.stem.size() - 1)(rng);
    w.stem[at] |= 1u;  // one evaluation mark; x track left empty
    CHECK(membership(bound, w));
  }
}

TEST_CASE("marker projection") {
  // m_e at 0 and p at m_e.
  NBA a;
  a.atoms = {"p", "@e"};
  a.add_state(false);
  a.add_state(true);
  a.add_edge(0, Guard::atom(1, true).conj(Guard::atom(0, true)), 1);
  a.add_edge(1, Guard::atom(1, false), 1);
  NBA proj = project_markers(a, {"@e"});
  CHECK(proj.atoms == std::vector<std::string>{"p"});
  CHECK(membership(proj, mk_word({"p"}, {{"p"}}, {{}})));
  CHECK(!membership(proj, mk_word({"p"}, {{}}, {{"p"}})));

  std::mt19937_64 rng(19);
  NBA b = random_nba(rng, {"p", "unused"}, 4);
  NBA pb = project_markers(b, {"zz"});  // not in the inventory
  for (int it = 0; it < 20; ++it) {
    Lasso w = sampling::random_lasso_over(rng, {"p", "unused"});
    CHECK(membership(b, w) == membership(pb, w));
  }
}

TEST_CASE("emptiness witnesses replay") {
  NBA u = nba_true({"p"});
  auto wit = is_empty(u);
  REQUIRE(wit.has_value());
  CHECK(replay_witness(prune(u), *wit));
  CHECK(!is_empty(nba_false({"p"})).has_value());

  std::mt19937_64 rng(23);
  int nonempty = 0;
  for (int round = 0; round < 30; ++round) {
    NBA a = random_nba(rng, {"p"}, 5);
    auto w = is_empty(a);
    if (w.has_value()) {
      ++nonempty;
      CHECK(replay_witness(prune(a), *w));
      CHECK(membership(a, w->word));
    }
  }
  CHECK(nonempty >= 5);
}

TEST_CASE("color-block bounding") {
  NBA u = nba_true({"c"});
  NBA b2 = bound_counter(u, 2, "c");
  CHECK(membership(b2, mk_word({"c"}, {}, {{"c"}, {}})));
  CHECK(membership(b2, mk_word({"c"}, {}, {{"c"}, {"c"}, {}, {}})));
  CHECK(!membership(b2, mk_word({"c"}, {{"c"}, {"c"}, {"c"}}, {{"c"}, {}})));
  CHECK(!membership(b2, mk_word({"c"}, {}, {{"c"}})));  // infinite block
  NBA b1 = bound_counter(u, 1, "c");
  CHECK(membership(b1, mk_word({"c"}, {}, {{"c"}, {}})));
  CHECK(!membership(b1, mk_word({"c"}, {}, {{"c"}, {"c"}, {}})));
  CHECK(b2.size() <= u.size() * 2 * 2 + 1);
  CHECK_THROWS((void)bound_counter(u, 0, "c"));

  // Restriction property: member of bound_counter => member of A and
  // k-bounded; witness is k-bounded.
  std::mt19937_64 rng(29);
  for (int round = 0; round < 10; ++round) {
    NBA a = random_nba(rng, {"c"}, 4);
    int k = 1 + std::uniform_int_distribution<int>(0, 2)(rng);
    NBA bk = bound_counter(a, k, "c");
    auto wit = is_empty(bk);
    if (wit.has_value()) {
      long long mb = max_block(wit->word, "c");
      CHECK(mb >= 1);
      CHECK(mb <= k);
      CHECK(membership(a, wit->word));
    }
    for (int it = 0; it < 15; ++it) {
      Lasso w = sampling::random_lasso_over(rng, {"c"});
      if (membership(bk, w)) {
        CHECK(membership(a, w));
        long long mb = max_block(w, "c");
        CHECK(mb >= 1);
        CHECK(mb <= k);
      }
    }
  }
}

TEST_CASE("fair product construction and pumpable search") {
  // Single p-labeled self-loop against the universal automaton over {p,c}.
  Kripke k = parse_kripke("state s0 {p}\ninit s0\nedge s0 s0\n");
  NBA u = nba_true({"p", "c"});
  FairProduct prod = product_with_kripke(k, u, "c");
  CHECK(prod.size() == 1 * 1 * 2);
  CHECK(prod.initial == prod.id(0, 0, 0));
  auto wit = find_pumpable_fair_path(prod);
  REQUIRE(wit.has_value());
  CHECK(replay_pumpable(prod, *wit));

  NBA wrong = nba_true({"p"});
  CHECK_THROWS_WITH((void)product_with_kripke(k, wrong, "c"),
                    doctest::Contains("inventory mismatch"));

  // Automaton forcing color change at every step: every block has length 1,
  // so no block can revisit a state.
  NBA alt;
  alt.atoms = {"p", "c"};
  alt.add_state(true);
  alt.add_state(true);
  alt.add_edge(0, Guard::atom(1, false), 1);
  alt.add_edge(1, Guard::atom(1, true), 0);
  FairProduct p2 = product_with_kripke(k, alt, "c");
  CHECK(!find_pumpable_fair_path(p2).has_value());
}

TEST_CASE("pumpable search agrees with brute force on small products") {
  // Brute force: enumerate fair lassos up to length 8 over the product and
  // test the pumpability condition directly.
  std::mt19937_64 rng(31);
  for (int round = 0; round < 8; ++round) {
    Kripke k = parse_kripke(round % 2 == 0
                                ? "state a {p}\nstate b {}\ninit a\n"
                                  "edge a b\nedge b a\nedge a a\n"
                                : "state a {p}\ninit a\nedge a a\n");
    NBA a = random_nba(rng, {"c", "p"}, 3);
    FairProduct prod = product_with_kripke(k, a, "c");
    auto wit = find_pumpable_fair_path(prod);
    // Brute force over state sequences from the initial state.
    bool found = false;
    std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& path) {
      if (found || path.size() > 8) return;
      int last = path.back();
      for (int nxt : prod.succ[last]) {
        auto it = std::find(path.begin(), path.end(), nxt);
        if (it != path.end()) {
          size_t s = it - path.begin();
          LassoWitness cand;
          cand.word.atoms = prod.atoms;
          for (size_t i = 0; i < s; ++i) {
            cand.stem_states.push_back(path[i]);
            cand.word.stem.push_back(prod.letter[path[i]]);
          }
          for (size_t i = s; i < path.size(); ++i) {
            cand.loop_states.push_back(path[i]);
            cand.word.loop.push_back(prod.letter[path[i]]);
          }
          if (replay_pumpable(prod, cand)) found = true;
        }
        if (!found) {
          path.push_back(nxt);
          rec(path);
          path.pop_back();
        }
      }
    };
    std::vector<int> path{prod.initial};
    rec(path);
    CHECK(wit.has_value() == found);
    if (wit) CHECK(replay_pumpable(prod, *wit));
  }
}

TEST_CASE("textual round trips") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 10; ++round) {
    NBA a = random_nba(rng, {"p", "q"}, 4);
    NBA back = from_hoa(to_hoa(a));
    CHECK(back.size() == a.size());
    CHECK(back.atoms == a.atoms);
    CHECK(back.initial == a.initial);
    for (int it = 0; it < 15; ++it) {
      Lasso w = sampling::random_lasso_over(rng, {"p", "q"});
      CHECK(membership(a, w) == membership(back, w));
    }
    CHECK(to_dot(a).find("digraph") == 0);
  }
  CHECK_THROWS((void)from_hoa("HOA: v1\nStates: 1\n"));
}
