#include "phs/trace.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace phs {

TriBool tri_of(bool b) { return b ? TriBool::True : TriBool::False; }

TriBool tri_not(TriBool a) {
  if (a == TriBool::Unknown) return TriBool::Unknown;
  return tri_of(a == TriBool::False);
}

TriBool tri_and(TriBool a, TriBool b) {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::True && b == TriBool::True) return TriBool::True;
  return TriBool::Unknown;
}

TriBool tri_or(TriBool a, TriBool b) {
  if (a == TriBool::True || b == TriBool::True) return TriBool::True;
  if (a == TriBool::False && b == TriBool::False) return TriBool::False;
  return TriBool::Unknown;
}

const char* tri_name(TriBool t) {
  switch (t) {
    case TriBool::False: return "false";
    case TriBool::True: return "true";
    case TriBool::Unknown: return "unknown";
  }
  return "?";
}

int Lasso::atom_index(const std::string& a) const {
  auto it = std::find(atoms.begin(), atoms.end(), a);
  return it == atoms.end() ? -1 : static_cast<int>(it - atoms.begin());
}

uint32_t Lasso::letter_at(long long i) const {
  if (i < static_cast<long long>(stem.size())) return stem[i];
  return loop[(i - stem.size()) % loop.size()];
}

bool Lasso::holds_at(long long i, int atom) const {
  return atom >= 0 && (letter_at(i) >> atom) & 1u;
}

bool Lasso::holds_on(const Interval& iv, int atom) const {
  if (atom < 0) return false;
  long long period_end = static_cast<long long>(stem.size() + loop.size());
  for (long long i = iv.lo; i <= iv.hi; ++i) {
    if (!holds_at(i, atom)) return false;
    // Once inside the loop a full period suffices.
    if (i >= period_end && i - iv.lo >= static_cast<long long>(loop.size()))
      break;
  }
  return true;
}

std::set<std::string> Lasso::letter_set(long long i) const {
  std::set<std::string> s;
  uint32_t m = letter_at(i);
  for (size_t a = 0; a < atoms.size(); ++a)
    if ((m >> a) & 1u) s.insert(atoms[a]);
  return s;
}

uint32_t Lasso::mask_of(const std::set<std::string>& letter) const {
  uint32_t m = 0;
  for (auto& a : letter) {
    int idx = atom_index(a);
    if (idx < 0) throw std::runtime_error("unknown atom in letter: " + a);
    m |= 1u << idx;
  }
  return m;
}

Lasso make_lasso(const std::vector<std::set<std::string>>& stem,
                 const std::vector<std::set<std::string>>& loop,
                 std::vector<std::string> atoms) {
  Lasso w;
  if (atoms.empty()) {
    std::set<std::string> inv;
    for (auto& l : stem) inv.insert(l.begin(), l.end());
    for (auto& l : loop) inv.insert(l.begin(), l.end());
    w.atoms.assign(inv.begin(), inv.end());
  } else {
    w.atoms = std::move(atoms);
  }
  if (loop.empty()) throw std::runtime_error("lasso loop must be nonempty");
  for (auto& l : stem) w.stem.push_back(w.mask_of(l));
  for (auto& l : loop) w.loop.push_back(w.mask_of(l));
  return w;
}

int Kripke::state_index(const std::string& name) const {
  auto it = std::find(state_names.begin(), state_names.end(), name);
  return it == state_names.end() ? -1 : static_cast<int>(it - state_names.begin());
}

namespace {

// Canonical form: make the loop primitive, then absorb any trailing stem
// repetition of the loop back into the stem... rather, roll the loop left
// while the last stem state equals the last loop state, then drop matched
// stem suffixes. Canonicalization used: (1) replace the loop by its
// primitive root; (2) while the stem is nonempty and its last state equals
// the last loop state, rotate the loop right and shrink the stem.
StateLasso canonicalize(std::vector<int> stem, std::vector<int> loop) {
  // primitive root
  for (size_t d = 1; d <= loop.size() / 2; ++d) {
    if (loop.size() % d) continue;
    bool rep = true;
    for (size_t i = d; i < loop.size() && rep; ++i)
      if (loop[i] != loop[i % d]) rep = false;
    if (rep) {
      loop.resize(d);
      break;
    }
  }
  while (!stem.empty() && stem.back() == loop.back()) {
    stem.pop_back();
    std::rotate(loop.begin(), loop.end() - 1, loop.end());
  }
  StateLasso sl;
  sl.stem_states = std::move(stem);
  sl.loop_states = std::move(loop);
  return sl;
}

}  // namespace

std::vector<StateLasso> kripke_state_lassos(const Kripke& k, int max_stem,
                                            int max_loop) {
  if (max_stem < 1 || max_loop < 1)
    throw std::invalid_argument("lasso enumeration bounds must be >= 1");
  std::set<StateLasso> out;
  // Enumerate paths from the initial state of length up to max_stem+max_loop
  // and close a loop at every revisit-able split.
  std::vector<int> path{k.initial};
  std::function<void(void)> extend = [&]() {
    int n = static_cast<int>(path.size());
    // Try closing: suffix starting at position s forms the loop.
    for (int s = 0; s < n; ++s) {
      int loop_len = n - s;
      if (s > max_stem || loop_len > max_loop) continue;
      int last = path.back();
      int first_of_loop = path[s];
      auto& succ = k.successors[last];
      if (std::find(succ.begin(), succ.end(), first_of_loop) != succ.end()) {
        out.insert(canonicalize(std::vector<int>(path.begin(), path.begin() + s),
                                std::vector<int>(path.begin() + s, path.end())));
      }
    }
    if (n >= max_stem + max_loop) return;
    for (int nxt : k.successors[path.back()]) {
      path.push_back(nxt);
      extend();
      path.pop_back();
    }
  };
  extend();
  return {out.begin(), out.end()};
}

Lasso lasso_trace(const Kripke& k, const StateLasso& sl) {
  Lasso w;
  w.atoms = k.atoms;
  for (int s : sl.stem_states) w.stem.push_back(k.labels[s]);
  for (int s : sl.loop_states) w.loop.push_back(k.labels[s]);
  return w;
}

Lasso canonical_lasso(const Lasso& w) {
  Lasso c = w;
  for (size_t d = 1; d <= c.loop.size() / 2; ++d) {
    if (c.loop.size() % d) continue;
    bool rep = true;
    for (size_t i = d; i < c.loop.size() && rep; ++i)
      if (c.loop[i] != c.loop[i % d]) rep = false;
    if (rep) {
      c.loop.resize(d);
      break;
    }
  }
  while (!c.stem.empty() && c.stem.back() == c.loop.back()) {
    c.stem.pop_back();
    std::rotate(c.loop.begin(), c.loop.end() - 1, c.loop.end());
  }
  return c;
}

std::vector<Lasso> kripke_lassos(const Kripke& k, int max_stem, int max_loop) {
  auto cmp = [](const Lasso& a, const Lasso& b) {
    if (a.stem != b.stem) return a.stem < b.stem;
    return a.loop < b.loop;
  };
  std::vector<Lasso> out;
  for (auto& sl : kripke_state_lassos(k, max_stem, max_loop)) {
    Lasso w = canonical_lasso(lasso_trace(k, sl));
    bool dup = false;
    for (auto& v : out)
      if (!cmp(v, w) && !cmp(w, v)) { dup = true; break; }
    if (!dup) out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end(), cmp);
  return out;
}

}  // namespace phs
