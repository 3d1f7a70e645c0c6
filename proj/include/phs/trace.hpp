#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace phs {

// Three-valued logic for horizon-bounded evaluation.
enum class TriBool : uint8_t { False = 0, True = 1, Unknown = 2 };

TriBool tri_of(bool b);
TriBool tri_not(TriBool a);
TriBool tri_and(TriBool a, TriBool b);
TriBool tri_or(TriBool a, TriBool b);
const char* tri_name(TriBool t);

// Parameter valuation, values are positive naturals.
using Valuation = std::map<std::string, long long>;

struct Interval {
  long long lo = 0, hi = 0;  // inclusive endpoints, lo <= hi
  long long length() const { return hi - lo + 1; }
  bool operator==(const Interval&) const = default;
};

// Ultimately periodic word over 2^AP: stem . loop^omega. Letters are bitmasks
// over `atoms`; position i carries letter_at(i).
struct Lasso {
  std::vector<std::string> atoms;
  std::vector<uint32_t> stem;
  std::vector<uint32_t> loop;  // nonempty

  int atom_index(const std::string& a) const;  // -1 if absent
  uint32_t letter_at(long long i) const;
  bool holds_at(long long i, int atom) const;
  // Homogeneity: atom holds on [lo,hi] iff it holds at every position.
  bool holds_on(const Interval& iv, int atom) const;
  size_t period_start() const { return stem.size(); }
  size_t period() const { return loop.size(); }

  std::set<std::string> letter_set(long long i) const;
  uint32_t mask_of(const std::set<std::string>& letter) const;  // atoms must exist
};

// Builds a lasso from string letters, inferring the atom inventory (sorted
// union) unless an explicit inventory is given.
Lasso make_lasso(const std::vector<std::set<std::string>>& stem,
                 const std::vector<std::set<std::string>>& loop,
                 std::vector<std::string> atoms = {});

// Finite total Kripke structure.
struct Kripke {
  std::vector<std::string> atoms;
  std::vector<std::string> state_names;
  std::vector<uint32_t> labels;             // per state, mask over atoms
  std::vector<std::vector<int>> successors; // per state
  int initial = 0;

  int state_index(const std::string& name) const;  // -1 if absent
};

// All distinct initial lassos of K with |stem| <= max_stem and primitive
// loop length <= max_loop, canonicalized: the loop is primitive (not a
// proper power) and rolled back into the stem as far as the stem repeats it.
struct StateLasso {
  std::vector<int> stem_states;  // starts at K.initial
  std::vector<int> loop_states;  // nonempty
  bool operator<(const StateLasso& o) const {
    if (stem_states != o.stem_states) return stem_states < o.stem_states;
    return loop_states < o.loop_states;
  }
};
std::vector<StateLasso> kripke_state_lassos(const Kripke& k, int max_stem,
                                            int max_loop);

// Trace of K induced by a state lasso (labels of the visited states).
Lasso lasso_trace(const Kripke& k, const StateLasso& sl);

// Traces of the state lassos, duplicate-free and canonicalized (primitive
// loop, loop repetitions at the stem end folded away).
std::vector<Lasso> kripke_lassos(const Kripke& k, int max_stem, int max_loop);

// Canonical form of a lasso word (primitive loop, folded stem end).
Lasso canonical_lasso(const Lasso& w);

}  // namespace phs
