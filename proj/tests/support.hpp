#pragma once

// Random sampling helpers shared by the property-test suites: lassos with
// bounded stem/loop, well-kinded interval formulas (parameter kinds chosen
// per negation parity so "u" is always upward and "l" always downward), and
// point-logic formulas.

#include <random>
#include <string>
#include <vector>

#include "phs/formula.hpp"
#include "phs/trace.hpp"

namespace phs::sampling {

inline Lasso random_lasso_over(std::mt19937_64& rng,
                               std::vector<std::string> atoms,
                               int max_stem = 4, int max_loop = 3) {
  Lasso w;
  w.atoms = std::move(atoms);
  int n_atoms = static_cast<int>(w.atoms.size());
  std::uniform_int_distribution<int> sd(0, max_stem), ld(1, max_loop);
  std::uniform_int_distribution<uint32_t> letter(0, (1u << n_atoms) - 1);
  int s = sd(rng), l = ld(rng);
  for (int i = 0; i < s; ++i) w.stem.push_back(letter(rng));
  for (int i = 0; i < l; ++i) w.loop.push_back(letter(rng));
  return w;
}

inline Lasso random_lasso(std::mt19937_64& rng, int max_stem = 4,
                          int max_loop = 3, int n_atoms = 2) {
  static const char* names[] = {"p", "q", "r"};
  Lasso w;
  w.atoms.assign(names, names + n_atoms);
  std::uniform_int_distribution<int> sd(0, max_stem), ld(1, max_loop);
  std::uniform_int_distribution<uint32_t> letter(0, (1u << n_atoms) - 1);
  int s = sd(rng), l = ld(rng);
  for (int i = 0; i < s; ++i) w.stem.push_back(letter(rng));
  for (int i = 0; i < l; ++i) w.loop.push_back(letter(rng));
  return w;
}

inline Valuation random_valuation(std::mt19937_64& rng, long long max = 4) {
  std::uniform_int_distribution<long long> v(1, max);
  return {{"u", v(rng)}, {"l", v(rng)}};
}

// `neg_parity` tracks whether the node sits under an odd number of
// negations (antecedents of -> count as one); constrained modalities pick
// the parameter whose declared kind matches the effective kind there.
inline Formula random_phs(std::mt19937_64& rng, int depth,
                          bool neg_parity = false,
                          double p_constraint = 0.4) {
  std::uniform_int_distribution<int> leaf(0, 2);
  if (depth <= 0) {
    switch (leaf(rng)) {
      case 0: return mk_prop("p");
      case 1: return mk_prop("q");
      default: return mk_true();
    }
  }
  std::uniform_int_distribution<int> pick(0, 9);
  int c = pick(rng);
  if (c <= 1) return random_phs(rng, 0, neg_parity, p_constraint);
  if (c == 2)
    return mk_not(random_phs(rng, depth - 1, !neg_parity, p_constraint));
  if (c == 3)
    return mk_and(random_phs(rng, depth - 1, neg_parity, p_constraint),
                  random_phs(rng, depth - 1, neg_parity, p_constraint));
  if (c == 4)
    return mk_or(random_phs(rng, depth - 1, neg_parity, p_constraint),
                 random_phs(rng, depth - 1, neg_parity, p_constraint));
  if (c == 5)
    return mk_implies(random_phs(rng, depth - 1, !neg_parity, p_constraint),
                      random_phs(rng, depth - 1, neg_parity, p_constraint));
  std::uniform_int_distribution<int> rd(0, 13);
  Rel rel = static_cast<Rel>(rd(rng));
  bool universal = std::bernoulli_distribution(0.5)(rng);
  std::optional<Constraint> con;
  if (std::bernoulli_distribution(p_constraint)(rng)) {
    std::uniform_int_distribution<int> cd(0, 3);
    Cmp cmp = static_cast<Cmp>(cd(rng));
    bool wants_up = (universal != cmp_is_upper(cmp));
    if (neg_parity) wants_up = !wants_up;
    con = Constraint{cmp, wants_up ? std::string("u") : std::string("l")};
  }
  return mk_modal(rel, universal, con,
                  random_phs(rng, depth - 1, neg_parity, p_constraint));
}

inline Formula random_pltl(std::mt19937_64& rng, int depth,
                           bool neg_parity = false) {
  std::uniform_int_distribution<int> leaf(0, 2);
  if (depth <= 0) {
    switch (leaf(rng)) {
      case 0: return mk_prop("p");
      case 1: return mk_prop("q");
      default: return mk_true();
    }
  }
  std::uniform_int_distribution<int> pick(0, 9);
  switch (pick(rng)) {
    case 0: return random_pltl(rng, 0, neg_parity);
    case 1: return mk_not(random_pltl(rng, depth - 1, !neg_parity));
    case 2:
      return mk_and(random_pltl(rng, depth - 1, neg_parity),
                    random_pltl(rng, depth - 1, neg_parity));
    case 3:
      return mk_or(random_pltl(rng, depth - 1, neg_parity),
                   random_pltl(rng, depth - 1, neg_parity));
    case 4: return mk_next(random_pltl(rng, depth - 1, neg_parity));
    case 5:
      return mk_until(random_pltl(rng, depth - 1, neg_parity),
                      random_pltl(rng, depth - 1, neg_parity));
    case 6: return mk_future(random_pltl(rng, depth - 1, neg_parity));
    case 7: return mk_always(random_pltl(rng, depth - 1, neg_parity));
    default: {
      bool ev = std::bernoulli_distribution(0.5)(rng);
      bool wants_up = ev != neg_parity;
      std::string param = wants_up ? "u" : "l";
      Formula body = random_pltl(rng, depth - 1, neg_parity);
      return ev ? mk_bounded_eventually(param, body)
                : mk_bounded_always(param, body);
    }
  }
}

}  // namespace phs::sampling
