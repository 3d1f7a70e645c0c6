#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "phs/formula.hpp"
#include "phs/semantics.hpp"
#include "phs/trace.hpp"

namespace phs {

// Atom inventory of the counting family. h1 marks the first position of a
// sub-block, h2 additionally marks the first sub-block of a block, dollar is
// the absorbing tail letter, b0/b1 are the bit letters.
std::vector<std::string> counting_atoms();

// Exact size parameters of the order-n counting word.
struct YardstickSpec {
  int n = 1;
  long long subblock_len = 0;  // n+1
  long long block_len = 0;     // (n+1)*2^n
  long long prefix_len = -1;   // (n+1)*2^n*2^(2^n); -1 when it overflows
};
YardstickSpec yardstick_spec(int n);

// The order-n counting word: all 2^(2^n) blocks in increasing index order,
// followed by the dollar tail. Throws when the prefix exceeds the budget.
Lasso yardstick_trace(int n, long long budget = 4096);

// LTL formula enforcing the local block structure (sub-block alignment,
// index increment modulo 2^n with h2 exactly at index 0, block 0 all-zero,
// tail right after an all-ones sub-block index, dollar absorbing).
Formula yardstick_block_ltl(int n);

// Interval formula whose intended model is yardstick_trace(n): the LTL
// block-structure formula embedded into the A/B fragment, conjoined with the
// content-increment formula.
Formula yardstick_formula(int n);

// Content-comparison helper: at a singleton on a sub-block start, the
// content bit here is b and the content of the index-matched sub-block in
// the next block is b2.
Formula yardstick_eq(int n, int b, int b2);

// yardstick_formula(n) /\ <A>_{<=u} <A>(len_1 /\ dollar): the minimal value
// of u on the counting word is the prefix length + 1.
Formula sat_lowerbound_formula(int n);

// Complete 32-state structure (one state per letter over the counting
// atoms, initial state labeled {h1,h2,b0}) with the parametric formula
// yardstick_formula(n) -> <A>_{<=u} <A>(len_1 /\ dollar).
std::pair<Kripke, Formula> mc_lowerbound_instance(int n);

// Linear-size interval formula over {p0,...,pn} capturing the words where
// any two positions agreeing on p1..pn also agree on p0.
Formula succinct_family(int n);

// Brute-force check of that language on an ultimately periodic word.
bool membership_check(const Lasso& w, int n);

// Reproducible randomized instances for cross-checking the oracles.
struct RandomProfile {
  int max_depth = 2;
  int max_atoms = 2;
  int max_params = 1;  // 0..2: upward "u" first, then downward "l"
  int max_stem = 3;
  int max_loop = 3;
  int max_value = 4;
  static RandomProfile tiny() { return {}; }
};
struct RandomInstance {
  Formula formula;
  Lasso word;
  Valuation valuation;
};
std::vector<RandomInstance> random_instances(uint64_t seed,
                                             const RandomProfile& profile,
                                             int count);

}  // namespace phs
