#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phs/nba.hpp"
#include "phs/trace.hpp"

namespace phs {

// Synchronous product of a Kripke structure with a Büchi automaton whose
// inventory is AP(K) plus one color atom. Product states are triples
// (s, q, C) with C the guessed color of s's letter; the guard of the
// automaton edge is evaluated on Lab(s) together with C. The initial state
// carries C = empty, so the color never holds at the first position.
struct FairProduct {
  int n_states = 0;  // Kripke states
  int n_auto = 0;    // automaton states
  int initial = 0;
  std::vector<std::string> atoms;          // automaton atom order
  int color_bit = 0;                       // index of the color atom
  std::vector<std::vector<int>> succ;      // adjacency over product ids
  std::vector<char> fair;                  // q in F
  std::vector<uint32_t> letter;            // Lab(s) | C per product state
  std::vector<char> colored;               // the C component

  int size() const { return n_states * n_auto * 2; }
  int id(int s, int q, int c) const { return (s * n_auto + q) * 2 + c; }
};

FairProduct product_with_kripke(const Kripke& k, const NBA& a,
                                const std::string& color_atom);

// Searches for a fair lasso in which every color block of the induced
// labeling revisits some product state, via the augmented graph with states
// (vertex, guessed repeat vertex or none, repeated flag): a color-change
// edge is enabled only with the flag set. Witness states are product ids.
std::optional<LassoWitness> find_pumpable_fair_path(const FairProduct& p);

// Replay check: valid edges, fairness inside the loop, and a repeated
// product state inside every complete color block.
bool replay_pumpable(const FairProduct& p, const LassoWitness& w);

}  // namespace phs
