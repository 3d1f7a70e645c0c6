#include "phs/nba.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

namespace phs {

// ---- guards ----

bool Guard::sat(uint32_t letter) const {
  for (const Cube& c : cubes)
    if (c.sat(letter)) return true;
  return false;
}

bool Guard::is_false() const {
  for (const Cube& c : cubes)
    if (!c.contradictory()) return false;
  return true;
}

Guard Guard::tt() { return Guard{{Cube{}}}; }
Guard Guard::ff() { return Guard{}; }

Guard Guard::atom(int bit, bool positive) {
  Cube c;
  (positive ? c.pos : c.neg) = 1u << bit;
  return Guard{{c}};
}

Guard Guard::conj(const Guard& other) const {
  Guard out;
  for (const Cube& a : cubes)
    for (const Cube& b : other.cubes) {
      Cube c{a.pos | b.pos, a.neg | b.neg};
      if (!c.contradictory()) out.cubes.push_back(c);
    }
  return out;
}

Guard Guard::disj(const Guard& other) const {
  Guard out = *this;
  for (const Cube& b : other.cubes) {
    if (std::find(out.cubes.begin(), out.cubes.end(), b) == out.cubes.end())
      out.cubes.push_back(b);
  }
  return out;
}

Guard Guard::without_bits(uint32_t bits) const {
  Guard out;
  for (const Cube& c : cubes) {
    if (c.contradictory()) continue;
    Cube d{c.pos & ~bits, c.neg & ~bits};
    if (std::find(out.cubes.begin(), out.cubes.end(), d) == out.cubes.end())
      out.cubes.push_back(d);
  }
  return out;
}

Guard Guard::with_bit(int bit, bool value) const {
  uint32_t m = 1u << bit;
  Guard out;
  for (const Cube& c : cubes) {
    if (c.contradictory()) continue;
    // A literal contradicted by the constant kills the cube.
    if (value ? (c.neg & m) : (c.pos & m)) continue;
    Cube d{c.pos & ~m, c.neg & ~m};
    if (std::find(out.cubes.begin(), out.cubes.end(), d) == out.cubes.end())
      out.cubes.push_back(d);
  }
  return out;
}

Guard Guard::remap(const std::vector<int>& bit_map) const {
  Guard out;
  for (const Cube& c : cubes) {
    if (c.contradictory()) continue;
    Cube d;
    bool ok = true;
    for (size_t i = 0; i < bit_map.size() && ok; ++i) {
      uint32_t m = 1u << i;
      if ((c.pos & m) == 0 && (c.neg & m) == 0) continue;
      if (bit_map[i] < 0) {
        ok = false;
        break;
      }
      if (c.pos & m) d.pos |= 1u << bit_map[i];
      if (c.neg & m) d.neg |= 1u << bit_map[i];
    }
    if (ok && !d.contradictory()) out.cubes.push_back(d);
  }
  return out;
}

// ---- basic automaton helpers ----

int NBA::atom_index(const std::string& a) const {
  auto it = std::find(atoms.begin(), atoms.end(), a);
  return it == atoms.end() ? -1 : static_cast<int>(it - atoms.begin());
}

int NBA::add_state(bool acc) {
  accepting.push_back(acc ? 1 : 0);
  trans.emplace_back();
  return size() - 1;
}

void NBA::add_edge(int src, Guard g, int dst) {
  if (g.is_false()) return;
  for (Edge& e : trans[src])
    if (e.dst == dst) {
      e.guard = e.guard.disj(g);
      return;
    }
  trans[src].push_back({std::move(g), dst});
}

NBA nba_true(const std::vector<std::string>& atoms) {
  NBA a;
  a.atoms = atoms;
  a.add_state(true);
  a.add_edge(0, Guard::tt(), 0);
  return a;
}

NBA nba_false(const std::vector<std::string>& atoms) {
  NBA a;
  a.atoms = atoms;
  a.add_state(false);
  return a;
}

uint32_t project_letter(const NBA& a, const Lasso& w, long long pos) {
  uint32_t letter = 0;
  for (size_t i = 0; i < a.atoms.size(); ++i) {
    int wi = w.atom_index(a.atoms[i]);
    if (wi >= 0 && ((w.letter_at(pos) >> wi) & 1u)) letter |= 1u << i;
  }
  return letter;
}

namespace {

// Tarjan strongly connected components; returns component index per state
// (components numbered in reverse topological order).
struct SccResult {
  std::vector<int> comp;
  int count = 0;
};

SccResult tarjan(int n, const std::function<const std::vector<int>&(int)>& adj) {
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on(n, 0);
  int next_index = 0;
  // Iterative DFS to avoid recursion depth issues.
  struct Frame {
    int v;
    size_t ei;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on[root] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      const std::vector<int>& succ = adj(fr.v);
      if (fr.ei < succ.size()) {
        int w = succ[fr.ei++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on[w] = 1;
          frames.push_back({w, 0});
        } else if (on[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          int c = res.count++;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = 0;
            res.comp[w] = c;
          } while (w != fr.v);
        }
        int v = fr.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return res;
}

std::vector<std::vector<int>> successor_lists(const NBA& a) {
  std::vector<std::vector<int>> succ(a.size());
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q])
      if (!e.guard.is_false()) succ[q].push_back(e.dst);
  return succ;
}

// States lying in a "good" SCC: one containing an accepting state and an
// internal cycle.
std::vector<char> good_scc_states(const NBA& a,
                                  const std::vector<std::vector<int>>& succ,
                                  const SccResult& scc) {
  std::vector<char> nontrivial(scc.count, 0), has_acc(scc.count, 0);
  for (int q = 0; q < a.size(); ++q) {
    for (int d : succ[q])
      if (scc.comp[d] == scc.comp[q]) nontrivial[scc.comp[q]] = 1;
    if (a.accepting[q]) has_acc[scc.comp[q]] = 1;
  }
  std::vector<char> good(a.size(), 0);
  for (int q = 0; q < a.size(); ++q)
    if (nontrivial[scc.comp[q]] && has_acc[scc.comp[q]]) good[q] = 1;
  return good;
}

}  // namespace

NBA prune(const NBA& a) {
  int n = a.size();
  std::vector<char> reach(n, 0);
  std::queue<int> bfs;
  reach[a.initial] = 1;
  bfs.push(a.initial);
  auto succ = successor_lists(a);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int d : succ[q])
      if (!reach[d]) {
        reach[d] = 1;
        bfs.push(d);
      }
  }
  SccResult scc = tarjan(n, [&](int v) -> const std::vector<int>& { return succ[v]; });
  std::vector<char> good = good_scc_states(a, succ, scc);
  // live = can reach a good SCC (backward closure).
  std::vector<std::vector<int>> pred(n);
  for (int q = 0; q < n; ++q)
    for (int d : succ[q]) pred[d].push_back(q);
  std::vector<char> live = good;
  for (int q = 0; q < n; ++q)
    if (live[q]) bfs.push(q);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int p : pred[q])
      if (!live[p]) {
        live[p] = 1;
        bfs.push(p);
      }
  }
  std::vector<int> keep(n, -1);
  NBA out;
  out.atoms = a.atoms;
  if (!reach[a.initial] || !live[a.initial]) return nba_false(a.atoms);
  for (int q = 0; q < n; ++q)
    if (reach[q] && live[q]) keep[q] = out.add_state(a.accepting[q]);
  out.initial = keep[a.initial];
  for (int q = 0; q < n; ++q) {
    if (keep[q] < 0) continue;
    for (const Edge& e : a.trans[q])
      if (keep[e.dst] >= 0 && !e.guard.is_false())
        out.add_edge(keep[q], e.guard, keep[e.dst]);
  }
  return out;
}

namespace {

std::vector<uint32_t> all_letters(const NBA& a) {
  if (a.atoms.size() > 12)
    throw std::runtime_error("letter enumeration capped at 12 atoms");
  std::vector<uint32_t> ls(1u << a.atoms.size());
  for (uint32_t i = 0; i < ls.size(); ++i) ls[i] = i;
  return ls;
}

}  // namespace

NBA quotient_bisim_bwd(const NBA& a0) {
  NBA a = prune(a0);
  int n = a.size();
  if (n <= 1) return a;
  std::vector<uint32_t> letters = all_letters(a);
  // Predecessor lists per state.
  std::vector<std::vector<std::pair<int, const Guard*>>> preds(n);
  for (int q = 0; q < n; ++q)
    for (const Edge& e : a.trans[q]) preds[e.dst].push_back({q, &e.guard});
  std::vector<int> cls(n);
  // Initial-state and acceptance flags must survive a merge: acceptance on
  // a merged cycle would otherwise change the accepted language.
  for (int q = 0; q < n; ++q)
    cls[q] = (q == a.initial ? 2 : 0) + (a.accepting[q] ? 1 : 0);
  for (;;) {
    std::map<std::pair<int, std::vector<std::vector<int>>>, int> sig_to_new;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<std::vector<int>> sig;
      for (uint32_t l : letters) {
        std::vector<int> srcs;
        for (auto& [p, g] : preds[q])
          if (g->sat(l)) srcs.push_back(cls[p]);
        std::sort(srcs.begin(), srcs.end());
        srcs.erase(std::unique(srcs.begin(), srcs.end()), srcs.end());
        sig.push_back(std::move(srcs));
      }
      auto key = std::make_pair(cls[q], std::move(sig));
      auto [it, fresh] = sig_to_new.emplace(std::move(key),
                                            static_cast<int>(sig_to_new.size()));
      next[q] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  int classes = *std::max_element(cls.begin(), cls.end()) + 1;
  NBA out;
  out.atoms = a.atoms;
  for (int c = 0; c < classes; ++c) out.add_state(false);
  for (int q = 0; q < n; ++q)
    if (a.accepting[q]) out.accepting[cls[q]] = 1;
  out.initial = cls[a.initial];
  for (int q = 0; q < n; ++q)
    for (const Edge& e : a.trans[q]) out.add_edge(cls[q], e.guard, cls[e.dst]);
  return prune(out);
}

NBA reduce_nba(const NBA& a0) {
  NBA a = quotient_bisim(prune(a0));
  for (;;) {
    int before = a.size();
    a = quotient_bisim(quotient_bisim_bwd(a));
    if (a.size() >= before) return a;
  }
}

NBA quotient_bisim(const NBA& a0) {
  NBA a = prune(a0);
  int n = a.size();
  if (n <= 1) return a;
  std::vector<uint32_t> letters = all_letters(a);
  std::vector<int> cls(n);
  for (int q = 0; q < n; ++q) cls[q] = a.accepting[q] ? 1 : 0;
  for (;;) {
    // Signature: class + per-letter successor class set.
    std::map<std::pair<int, std::vector<std::vector<int>>>, int> sig_to_new;
    std::vector<int> next(n);
    for (int q = 0; q < n; ++q) {
      std::vector<std::vector<int>> sig;
      for (uint32_t l : letters) {
        std::vector<int> dsts;
        for (const Edge& e : a.trans[q])
          if (e.guard.sat(l)) dsts.push_back(cls[e.dst]);
        std::sort(dsts.begin(), dsts.end());
        dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
        sig.push_back(std::move(dsts));
      }
      auto key = std::make_pair(cls[q], std::move(sig));
      auto [it, fresh] = sig_to_new.emplace(std::move(key),
                                            static_cast<int>(sig_to_new.size()));
      next[q] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  int classes = *std::max_element(cls.begin(), cls.end()) + 1;
  NBA out;
  out.atoms = a.atoms;
  for (int c = 0; c < classes; ++c) out.add_state(false);
  for (int q = 0; q < n; ++q)
    if (a.accepting[q]) out.accepting[cls[q]] = 1;
  out.initial = cls[a.initial];
  for (int q = 0; q < n; ++q)
    for (const Edge& e : a.trans[q]) out.add_edge(cls[q], e.guard, cls[e.dst]);
  return prune(out);
}

NBA intersect(const NBA& a, const NBA& b) {
  if (a.atoms != b.atoms)
    throw std::runtime_error("inventory mismatch in intersection");
  // Degeneralized two-phase product: phase 1 waits for an accepting state of
  // `a`, phase 2 for one of `b`.
  auto id = [&](int qa, int qb, int ph) {
    return (qa * b.size() + qb) * 2 + ph;
  };
  NBA out;
  out.atoms = a.atoms;
  for (int qa = 0; qa < a.size(); ++qa)
    for (int qb = 0; qb < b.size(); ++qb)
      for (int ph = 0; ph < 2; ++ph)
        out.add_state(ph == 0 && a.accepting[qa]);
  out.initial = id(a.initial, b.initial, 0);
  for (int qa = 0; qa < a.size(); ++qa)
    for (int qb = 0; qb < b.size(); ++qb)
      for (const Edge& ea : a.trans[qa])
        for (const Edge& eb : b.trans[qb]) {
          Guard g = ea.guard.conj(eb.guard);
          if (g.is_false()) continue;
          int from0 = id(qa, qb, 0), from1 = id(qa, qb, 1);
          out.add_edge(from0, g, id(ea.dst, eb.dst, a.accepting[qa] ? 1 : 0));
          out.add_edge(from1, g, id(ea.dst, eb.dst, b.accepting[qb] ? 0 : 1));
        }
  return prune(out);
}

NBA nba_union(const NBA& a, const NBA& b) {
  if (a.atoms != b.atoms)
    throw std::runtime_error("inventory mismatch in union");
  NBA out;
  out.atoms = a.atoms;
  int init = out.add_state(false);
  int offa = out.size();
  for (int q = 0; q < a.size(); ++q) out.add_state(a.accepting[q]);
  int offb = out.size();
  for (int q = 0; q < b.size(); ++q) out.add_state(b.accepting[q]);
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q])
      out.add_edge(offa + q, e.guard, offa + e.dst);
  for (int q = 0; q < b.size(); ++q)
    for (const Edge& e : b.trans[q])
      out.add_edge(offb + q, e.guard, offb + e.dst);
  for (const Edge& e : a.trans[a.initial])
    out.add_edge(init, e.guard, offa + e.dst);
  for (const Edge& e : b.trans[b.initial])
    out.add_edge(init, e.guard, offb + e.dst);
  out.initial = init;
  return prune(out);
}

// ---- marker retargeting ----

NBA retarget_marker(const NBA& a, const std::string& marker, MarkerMove move,
                    const std::string& eval_marker) {
  int m = a.atom_index(marker);
  if (m < 0) throw std::runtime_error("unknown marker atom: " + marker);
  if (move == MarkerMove::BindToE) {
    int e = a.atom_index(eval_marker);
    if (e < 0)
      throw std::runtime_error("unknown marker atom: " + eval_marker);
    // Feed every letter with the bound marker moved onto the evaluation
    // marker; the input's own placement of `marker` is unconstrained.
    NBA out;
    out.atoms = a.atoms;
    for (int q = 0; q < a.size(); ++q) out.add_state(a.accepting[q]);
    out.initial = a.initial;
    for (int q = 0; q < a.size(); ++q)
      for (const Edge& ed : a.trans[q]) {
        // letter has e  -> feed marker := 1 ; else feed marker := 0
        Guard with_e = ed.guard.with_bit(m, true).conj(Guard::atom(e, true));
        Guard without_e =
            ed.guard.with_bit(m, false).conj(Guard::atom(e, false));
        out.add_edge(q, with_e.disj(without_e), ed.dst);
      }
    return prune(out);
  }

  // Phase gadget product. Phases: 0 = before both positions, 1 = between the
  // input position i and the retargeted position j (in reading order),
  // 2 = both handled.
  auto id = [&](int q, int ph) { return q * 3 + ph; };
  NBA out;
  out.atoms = a.atoms;
  for (int q = 0; q < a.size(); ++q)
    for (int ph = 0; ph < 3; ++ph) out.add_state(a.accepting[q]);
  out.initial = id(a.initial, 0);
  Guard in_m = Guard::atom(m, true), no_m = Guard::atom(m, false);
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& ed : a.trans[q]) {
      Guard fed0 = ed.guard.with_bit(m, false);  // feed marker cleared
      Guard fed1 = ed.guard.with_bit(m, true);   // feed marker set
      int d = ed.dst;
      switch (move) {
        case MarkerMove::Next:  // j = i + 1
          out.add_edge(id(q, 0), fed0.conj(no_m), id(d, 0));
          out.add_edge(id(q, 0), fed0.conj(in_m), id(d, 1));
          out.add_edge(id(q, 1), fed1.conj(no_m), id(d, 2));
          out.add_edge(id(q, 2), fed0.conj(no_m), id(d, 2));
          break;
        case MarkerMove::Previous:  // j = i - 1
          out.add_edge(id(q, 0), fed0.conj(no_m), id(d, 0));
          out.add_edge(id(q, 0), fed1.conj(no_m), id(d, 1));  // guess j here
          out.add_edge(id(q, 1), fed0.conj(in_m), id(d, 2));
          out.add_edge(id(q, 2), fed0.conj(no_m), id(d, 2));
          break;
        case MarkerMove::Future:  // j >= i
          out.add_edge(id(q, 0), fed0.conj(no_m), id(d, 0));
          out.add_edge(id(q, 0), fed1.conj(in_m), id(d, 2));  // j = i
          out.add_edge(id(q, 0), fed0.conj(in_m), id(d, 1));  // j later
          out.add_edge(id(q, 1), fed0.conj(no_m), id(d, 1));
          out.add_edge(id(q, 1), fed1.conj(no_m), id(d, 2));  // j here
          out.add_edge(id(q, 2), fed0.conj(no_m), id(d, 2));
          break;
        case MarkerMove::Past:  // j <= i
          out.add_edge(id(q, 0), fed0.conj(no_m), id(d, 0));
          out.add_edge(id(q, 0), fed1.conj(in_m), id(d, 2));  // j = i
          out.add_edge(id(q, 0), fed1.conj(no_m), id(d, 1));  // j here, i later
          out.add_edge(id(q, 1), fed0.conj(no_m), id(d, 1));
          out.add_edge(id(q, 1), fed0.conj(in_m), id(d, 2));  // i here
          out.add_edge(id(q, 2), fed0.conj(no_m), id(d, 2));
          break;
        case MarkerMove::BindToE:
          break;  // handled above
      }
    }
  // Only runs that resolved both positions may accept.
  for (int q = 0; q < a.size(); ++q) {
    out.accepting[id(q, 0)] = 0;
    out.accepting[id(q, 1)] = 0;
  }
  return prune(out);
}

NBA project_markers(const NBA& a, const std::vector<std::string>& markers) {
  uint32_t bits = 0;
  std::vector<char> drop(a.atoms.size(), 0);
  for (const std::string& mk : markers) {
    int i = a.atom_index(mk);
    if (i >= 0) {
      bits |= 1u << i;
      drop[i] = 1;
    }
  }
  std::vector<int> bit_map(a.atoms.size());
  NBA out;
  for (size_t i = 0; i < a.atoms.size(); ++i) {
    if (drop[i]) {
      bit_map[i] = -1;
    } else {
      bit_map[i] = static_cast<int>(out.atoms.size());
      out.atoms.push_back(a.atoms[i]);
    }
  }
  for (int q = 0; q < a.size(); ++q) out.add_state(a.accepting[q]);
  out.initial = a.initial;
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q])
      out.add_edge(q, e.guard.without_bits(bits).remap(bit_map), e.dst);
  return prune(out);
}

// ---- emptiness, membership, replay ----

namespace {

uint32_t pick_letter(const Guard& g, uint32_t mask) {
  for (const Cube& c : g.cubes)
    if (!c.contradictory()) return c.pos & mask;
  return 0;
}

// Shortest path from->to as a state sequence; [from] when from == to;
// empty when unreachable.
std::vector<int> shortest_path(int from, int to,
                               const std::vector<std::vector<int>>& succ) {
  int n = static_cast<int>(succ.size());
  std::vector<int> prev(n, -2);
  std::queue<int> bfs;
  prev[from] = -1;
  bfs.push(from);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    if (q == to) break;
    for (int d : succ[q])
      if (prev[d] == -2) {
        prev[d] = q;
        bfs.push(d);
      }
  }
  if (prev[to] == -2) return {};
  std::vector<int> path{to};
  while (prev[path.back()] >= 0) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Shortest cycle through `at` as the node sequence c0=at, c1, ..., c_{m-1}
// (the closing edge c_{m-1} -> c0 is implicit); empty if none exists.
std::vector<int> shortest_cycle(int at,
                                const std::vector<std::vector<int>>& succ) {
  std::vector<int> best;
  for (int s : succ[at]) {
    std::vector<int> p = shortest_path(s, at, succ);
    if (p.empty()) continue;
    std::vector<int> cyc{at};
    cyc.insert(cyc.end(), p.begin(), p.end() - 1);
    if (best.empty() || cyc.size() < best.size()) best = cyc;
  }
  return best;
}

Guard edge_guard(const NBA& a, int src, int dst) {
  for (const Edge& e : a.trans[src])
    if (e.dst == dst && !e.guard.is_false()) return e.guard;
  return Guard::ff();
}

}  // namespace

std::optional<LassoWitness> is_empty(const NBA& a0) {
  NBA a = prune(a0);
  auto succ = successor_lists(a);
  SccResult scc =
      tarjan(a.size(), [&](int v) -> const std::vector<int>& { return succ[v]; });
  std::vector<char> good = good_scc_states(a, succ, scc);
  int target = -1;
  for (int q = 0; q < a.size() && target < 0; ++q)
    if (good[q] && a.accepting[q]) target = q;
  if (target < 0) return std::nullopt;
  // Stem: initial -> target; loop: cycle target -> target inside its SCC.
  std::vector<int> stem = shortest_path(a.initial, target, succ);
  std::vector<std::vector<int>> inner(a.size());
  for (int q = 0; q < a.size(); ++q)
    for (int d : succ[q])
      if (scc.comp[d] == scc.comp[q] && scc.comp[q] == scc.comp[target])
        inner[q].push_back(d);
  std::vector<int> cyc = shortest_cycle(target, inner);
  LassoWitness wit;
  wit.word.atoms = a.atoms;
  uint32_t mask = a.atom_mask();
  for (size_t i = 0; i + 1 < stem.size(); ++i) {
    wit.stem_states.push_back(stem[i]);
    wit.word.stem.push_back(pick_letter(edge_guard(a, stem[i], stem[i + 1]), mask));
  }
  for (size_t i = 0; i < cyc.size(); ++i) {
    int nxt = cyc[(i + 1) % cyc.size()];
    wit.loop_states.push_back(cyc[i]);
    wit.word.loop.push_back(pick_letter(edge_guard(a, cyc[i], nxt), mask));
  }
  if (!replay_witness(a, wit))
    throw std::logic_error("emptiness witness failed replay");
  return wit;
}

bool replay_witness(const NBA& a, const LassoWitness& w) {
  if (w.loop_states.empty() || w.word.loop.size() != w.loop_states.size() ||
      w.word.stem.size() != w.stem_states.size())
    return false;
  auto step_ok = [&](int src, uint32_t letter, int dst) {
    for (const Edge& e : a.trans[src])
      if (e.dst == dst && e.guard.sat(letter)) return true;
    return false;
  };
  int cur = a.initial;
  if (!w.stem_states.empty() && w.stem_states[0] != a.initial) return false;
  if (w.stem_states.empty() && w.loop_states[0] != a.initial) return false;
  for (size_t i = 0; i < w.stem_states.size(); ++i) {
    if (w.stem_states[i] != cur) return false;
    int nxt = i + 1 < w.stem_states.size() ? w.stem_states[i + 1]
                                           : w.loop_states[0];
    if (!step_ok(cur, w.word.stem[i], nxt)) return false;
    cur = nxt;
  }
  bool fair = false;
  for (size_t i = 0; i < w.loop_states.size(); ++i) {
    if (w.loop_states[i] != cur) return false;
    if (a.accepting[cur]) fair = true;
    int nxt = i + 1 < w.loop_states.size() ? w.loop_states[i + 1]
                                           : w.loop_states[0];
    if (!step_ok(cur, w.word.loop[i], nxt)) return false;
    cur = nxt;
  }
  return fair;
}

bool membership(const NBA& a, const Lasso& w) {
  long long slen = static_cast<long long>(w.stem.size());
  long long total = slen + static_cast<long long>(w.loop.size());
  // Product of the automaton with the lasso shape.
  auto id = [&](int q, long long t) { return q * total + t; };
  int n = a.size() * static_cast<int>(total);
  std::vector<std::vector<int>> succ(n);
  for (int q = 0; q < a.size(); ++q)
    for (long long t = 0; t < total; ++t) {
      uint32_t letter = project_letter(a, w, t);
      long long nt = t + 1 < total ? t + 1 : slen;
      for (const Edge& e : a.trans[q])
        if (e.guard.sat(letter)) succ[id(q, t)].push_back(id(e.dst, nt));
    }
  SccResult scc = tarjan(n, [&](int v) -> const std::vector<int>& { return succ[v]; });
  // Good nodes: accepting automaton state in a nontrivial SCC.
  std::vector<char> nontrivial(scc.count, 0), has_acc(scc.count, 0);
  for (int v = 0; v < n; ++v) {
    for (int d : succ[v])
      if (scc.comp[d] == scc.comp[v]) nontrivial[scc.comp[v]] = 1;
    if (a.accepting[v / total]) has_acc[scc.comp[v]] = 1;
  }
  // Reachability from (initial, 0).
  std::vector<char> reach(n, 0);
  std::queue<int> bfs;
  int start = id(a.initial, 0);
  reach[start] = 1;
  bfs.push(start);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    if (nontrivial[scc.comp[v]] && has_acc[scc.comp[v]]) {
      // An accepting cycle exists within this SCC iff it contains an
      // accepting node; any two nodes of an SCC share a cycle.
      for (int u = 0; u < n; ++u)
        if (scc.comp[u] == scc.comp[v] && a.accepting[u / total]) return true;
    }
    for (int d : succ[v])
      if (!reach[d]) {
        reach[d] = 1;
        bfs.push(d);
      }
  }
  return false;
}

NBA bound_counter(const NBA& a, int k, const std::string& color_atom) {
  if (k < 1) throw std::invalid_argument("bound_counter requires k >= 1");
  int c = a.atom_index(color_atom);
  if (c < 0) throw std::runtime_error("color atom not in inventory");
  // States: (q, block color b, block length cnt in 1..k) after reading a
  // letter, plus one pre-read initial state.
  auto id = [&](int q, int b, int cnt) {
    return 1 + (q * 2 + b) * k + (cnt - 1);
  };
  NBA out;
  out.atoms = a.atoms;
  out.add_state(false);  // 0: initial, nothing read
  for (int q = 0; q < a.size(); ++q)
    for (int b = 0; b < 2; ++b)
      for (int cnt = 1; cnt <= k; ++cnt) out.add_state(a.accepting[q]);
  out.initial = 0;
  Guard has_c = Guard::atom(c, true), no_c = Guard::atom(c, false);
  for (const Edge& e : a.trans[a.initial]) {
    out.add_edge(0, e.guard.conj(no_c), id(e.dst, 0, 1));
    out.add_edge(0, e.guard.conj(has_c), id(e.dst, 1, 1));
  }
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q])
      for (int b = 0; b < 2; ++b) {
        Guard same = e.guard.conj(b ? has_c : no_c);
        Guard other = e.guard.conj(b ? no_c : has_c);
        for (int cnt = 1; cnt <= k; ++cnt) {
          if (cnt < k) out.add_edge(id(q, b, cnt), same, id(e.dst, b, cnt + 1));
          out.add_edge(id(q, b, cnt), other, id(e.dst, 1 - b, 1));
        }
      }
  return prune(out);
}

}  // namespace phs
