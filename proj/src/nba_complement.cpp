#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "phs/nba.hpp"

// Complementation. Dispatch: empty and universal shortcuts, complete
// deterministic automata (two-copy co-Büchi flip), inherently weak automata
// (breakpoint subset construction), and a tight-ranking construction for the
// general case. Every path honors a state budget and aborts with a
// "blow-up budget" error instead of exhausting memory.

namespace phs {

namespace {

[[noreturn]] void budget_error(const ComplementOptions& opts) {
  throw std::runtime_error(
      "blow-up budget exceeded" +
      (opts.context.empty() ? std::string()
                            : " while complementing " + opts.context));
}

std::vector<uint32_t> letters_of(const NBA& a) {
  if (a.atoms.size() > 12)
    throw std::runtime_error("letter enumeration capped at 12 atoms");
  std::vector<uint32_t> ls(1u << a.atoms.size());
  for (uint32_t i = 0; i < ls.size(); ++i) ls[i] = i;
  return ls;
}

Cube letter_cube(uint32_t letter, uint32_t mask) {
  return Cube{letter, ~letter & mask};
}

uint64_t delta_set(const NBA& a, uint64_t set, uint32_t letter) {
  uint64_t out = 0;
  for (int q = 0; q < a.size(); ++q) {
    if (!((set >> q) & 1)) continue;
    for (const Edge& e : a.trans[q])
      if (e.guard.sat(letter)) out |= 1ull << e.dst;
  }
  return out;
}

// ---- deterministic path ----

// Deterministic: at most one enabled edge per state and letter.
bool is_deterministic(const NBA& a, const std::vector<uint32_t>& letters) {
  for (int q = 0; q < a.size(); ++q)
    for (uint32_t l : letters) {
      int hits = 0;
      for (const Edge& e : a.trans[q])
        if (e.guard.sat(l)) ++hits;
      if (hits > 1) return false;
    }
  return true;
}

NBA complete_with_sink(const NBA& a, const std::vector<uint32_t>& letters) {
  NBA out = a;
  int sink = -1;
  uint32_t mask = a.atom_mask();
  for (int q = 0; q < out.size(); ++q)
    for (uint32_t l : letters) {
      bool hit = false;
      for (const Edge& e : out.trans[q])
        if (e.guard.sat(l)) {
          hit = true;
          break;
        }
      if (!hit) {
        if (sink < 0) {
          sink = out.add_state(false);
          out.add_edge(sink, Guard::tt(), sink);
        }
        out.add_edge(q, Guard{{letter_cube(l, mask)}}, sink);
      }
    }
  return out;
}

// Complement of a complete deterministic automaton: the unique run visits F
// only finitely often; guess the point after which F never recurs.
NBA complement_deterministic(const NBA& a) {
  NBA out;
  out.atoms = a.atoms;
  int n = a.size();
  // copy 1: 0..n-1 (tracking); copy 2: n..2n-1 (F-free tail, accepting).
  for (int q = 0; q < n; ++q) out.add_state(false);
  for (int q = 0; q < n; ++q) out.add_state(true);
  out.initial = a.initial;
  for (int q = 0; q < n; ++q)
    for (const Edge& e : a.trans[q]) {
      out.add_edge(q, e.guard, e.dst);
      if (!a.accepting[e.dst]) {
        out.add_edge(q, e.guard, n + e.dst);
        if (!a.accepting[q]) out.add_edge(n + q, e.guard, n + e.dst);
      }
    }
  return prune(out);
}

// ---- weak path ----

struct SccInfo {
  std::vector<int> comp;
  int count = 0;
  std::vector<char> acc_cycle;  // per component
  std::vector<char> rej_cycle;  // per component
};

SccInfo analyze_sccs(const NBA& a) {
  int n = a.size();
  std::vector<std::vector<int>> succ(n);
  for (int q = 0; q < n; ++q)
    for (const Edge& e : a.trans[q])
      if (!e.guard.is_false()) succ[q].push_back(e.dst);
  // Tarjan (recursive is fine: pruned automata stay small here).
  SccInfo info;
  info.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on(n, 0);
  int next = 0;
  std::function<void(int)> dfs = [&](int v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on[v] = 1;
    for (int w : succ[v]) {
      if (index[w] == -1) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int c = info.count++;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = 0;
        info.comp[w] = c;
      } while (w != v);
    }
  };
  for (int q = 0; q < n; ++q)
    if (index[q] == -1) dfs(q);

  info.acc_cycle.assign(info.count, 0);
  info.rej_cycle.assign(info.count, 0);
  std::vector<char> nontrivial(info.count, 0), has_acc(info.count, 0);
  for (int q = 0; q < n; ++q) {
    for (int d : succ[q])
      if (info.comp[d] == info.comp[q]) nontrivial[info.comp[q]] = 1;
    if (a.accepting[q]) has_acc[info.comp[q]] = 1;
  }
  for (int c = 0; c < info.count; ++c)
    info.acc_cycle[c] = nontrivial[c] && has_acc[c];
  // Rejecting cycle: a cycle inside the component avoiding accepting states.
  for (int c = 0; c < info.count; ++c) {
    // Kahn-style: repeatedly strip nodes without internal successors among
    // non-accepting members; a cycle remains iff not all stripped.
    std::vector<int> members;
    for (int q = 0; q < n; ++q)
      if (info.comp[q] == c && !a.accepting[q]) members.push_back(q);
    std::vector<char> alive(n, 0);
    for (int q : members) alive[q] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int q : members) {
        if (!alive[q]) continue;
        bool has_succ = false;
        for (int d : succ[q])
          if (alive[d] && info.comp[d] == c) {
            has_succ = true;
            break;
          }
        if (!has_succ) {
          alive[q] = 0;
          changed = true;
        }
      }
    }
    for (int q : members)
      if (alive[q]) info.rej_cycle[c] = 1;
  }
  return info;
}

// Breakpoint construction: accepts iff every run of `a` (weak, with SCC-
// uniform accepting marks) visits a non-accepting state infinitely often.
NBA complement_weak(const NBA& a, const SccInfo& scc,
                    const ComplementOptions& opts,
                    const std::vector<uint32_t>& letters) {
  int n = a.size();
  if (n > 62) budget_error(opts);
  std::vector<char> marked(n, 0);  // SCC-uniform accepting marking
  for (int q = 0; q < n; ++q) marked[q] = scc.acc_cycle[scc.comp[q]];
  uint64_t good = 0;  // states runs must hit infinitely often
  for (int q = 0; q < n; ++q)
    if (!marked[q]) good |= 1ull << q;

  NBA out;
  out.atoms = a.atoms;
  uint32_t mask = a.atom_mask();
  std::map<std::pair<uint64_t, uint64_t>, int> ids;
  std::queue<std::pair<uint64_t, uint64_t>> work;
  auto intern = [&](uint64_t S, uint64_t O) {
    auto [it, fresh] = ids.emplace(std::make_pair(S, O), out.size());
    if (fresh) {
      if (out.size() + 1 > static_cast<int>(opts.state_budget))
        budget_error(opts);
      out.add_state(O == 0);
      work.push({S, O});
    }
    return it->second;
  };
  uint64_t S0 = 1ull << a.initial;
  out.initial = intern(S0, S0 & ~good);
  while (!work.empty()) {
    auto [S, O] = work.front();
    work.pop();
    int src = ids.at({S, O});
    for (uint32_t l : letters) {
      uint64_t S2 = delta_set(a, S, l);
      uint64_t O2 = O ? (delta_set(a, O, l) & S2 & ~good) : (S2 & ~good);
      out.add_edge(src, Guard{{letter_cube(l, mask)}}, intern(S2, O2));
    }
  }
  return prune(out);
}

// ---- general (tight-ranking) path ----

struct RankState {
  bool subset_phase;
  uint64_t S = 0;
  std::vector<int> rank;  // per automaton state; -1 = absent (phase 2 only)
  uint64_t O = 0;
  bool operator<(const RankState& o) const {
    return std::tie(subset_phase, S, rank, O) <
           std::tie(o.subset_phase, o.S, o.rank, o.O);
  }
};

// Enumerates tight rankings on the states of `S`: values in [0..k] with
// accepting states even and every odd value in {1,3,...,k} used; optional
// per-state caps.
void enum_tight(const NBA& a, uint64_t S, int k,
                const std::vector<int>& cap,
                const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> states;
  for (int q = 0; q < a.size(); ++q)
    if ((S >> q) & 1) states.push_back(q);
  std::vector<int> rank(a.size(), -1);
  std::function<void(size_t, uint64_t)> rec = [&](size_t i, uint64_t odds) {
    if (i == states.size()) {
      uint64_t wanted = 0;
      for (int o = 1; o <= k; o += 2) wanted |= 1ull << o;
      if (odds == wanted) emit(rank);
      return;
    }
    int q = states[i];
    int hi = std::min(k, cap.empty() ? k : cap[q]);
    for (int r = 0; r <= hi; ++r) {
      if (a.accepting[q] && (r & 1)) continue;
      rank[q] = r;
      rec(i + 1, odds | ((r & 1) ? (1ull << r) : 0));
    }
    rank[q] = -1;
  };
  rec(0, 0);
}

NBA complement_rank(const NBA& a, const ComplementOptions& opts,
                    const std::vector<uint32_t>& letters) {
  int n = a.size();
  if (n > 62) budget_error(opts);
  NBA out;
  out.atoms = a.atoms;
  uint32_t mask = a.atom_mask();
  std::map<RankState, int> ids;
  std::queue<RankState> work;
  size_t enum_budget = opts.state_budget * 64;
  size_t enum_used = 0;
  auto intern = [&](const RankState& s) {
    auto [it, fresh] = ids.emplace(s, out.size());
    if (fresh) {
      if (out.size() + 1 > static_cast<int>(opts.state_budget))
        budget_error(opts);
      // Phase-2 breakpoints accept; an empty subset accepts everything.
      bool acc = s.subset_phase ? s.S == 0 : s.O == 0;
      out.add_state(acc);
      work.push(s);
    }
    return it->second;
  };
  RankState init;
  init.subset_phase = true;
  init.S = 1ull << a.initial;
  out.initial = intern(init);
  int max_rank = 2 * n - 1;
  while (!work.empty()) {
    RankState cur = work.front();
    work.pop();
    int src = ids.at(cur);
    for (uint32_t l : letters) {
      uint64_t S2 = delta_set(a, cur.S, l);
      Guard g{{letter_cube(l, mask)}};
      if (cur.subset_phase) {
        RankState nxt;
        nxt.subset_phase = true;
        nxt.S = S2;
        out.add_edge(src, g, intern(nxt));
        if (S2 == 0) continue;
        // Jump: guess a tight level ranking for the tail. Odd ranks are
        // carried by non-accepting states only, so the maximum useful rank
        // is bounded by their count in S2.
        int nonacc = 0;
        for (int q = 0; q < n; ++q)
          if (((S2 >> q) & 1) && !a.accepting[q]) ++nonacc;
        int jump_max = std::min(max_rank, 2 * nonacc - 1);
        for (int k = 1; k <= jump_max; k += 2) {
          enum_tight(a, S2, k, {}, [&](const std::vector<int>& r) {
            if (++enum_used > enum_budget) budget_error(opts);
            RankState t;
            t.subset_phase = false;
            t.S = S2;
            t.rank = r;
            for (int q = 0; q < n; ++q)
              if (((S2 >> q) & 1) && (r[q] % 2 == 0)) t.O |= 1ull << q;
            out.add_edge(src, g, intern(t));
          });
        }
      } else {
        if (S2 == 0) {
          RankState dead;
          dead.subset_phase = true;
          dead.S = 0;
          out.add_edge(src, g, intern(dead));
          continue;
        }
        // Per-successor cap: ranks never increase along edges.
        std::vector<int> cap(n, -1);
        bool ok = true;
        for (int q = 0; q < n && ok; ++q) {
          if (!((S2 >> q) & 1)) continue;
          int c = max_rank;
          for (int p = 0; p < n; ++p) {
            if (!((cur.S >> p) & 1) || cur.rank[p] < 0) continue;
            for (const Edge& e : a.trans[p])
              if (e.dst == q && e.guard.sat(l)) c = std::min(c, cur.rank[p]);
          }
          cap[q] = c;
        }
        int k = 0;
        for (int q = 0; q < n; ++q)
          if ((cur.S >> q) & 1) k = std::max(k, cur.rank[q]);
        if (!(k & 1)) continue;  // tight rankings have odd maxima
        uint64_t Od = delta_set(a, cur.O, l) & S2;
        enum_tight(a, S2, k, cap, [&](const std::vector<int>& r) {
          if (++enum_used > enum_budget) budget_error(opts);
          RankState t;
          t.subset_phase = false;
          t.S = S2;
          t.rank = r;
          uint64_t evens = 0;
          for (int q = 0; q < n; ++q)
            if (((S2 >> q) & 1) && (r[q] % 2 == 0)) evens |= 1ull << q;
          t.O = cur.O ? (Od & evens) : evens;
          out.add_edge(src, g, intern(t));
        });
      }
    }
  }
  return prune(out);
}

}  // namespace

NBA complement(const NBA& a0, const ComplementOptions& opts) {
  // The rank construction is exponential in the residual nondeterminism, so
  // squeeze the input as hard as the cheap quotients allow first.
  NBA a = reduce_nba(a0);
  if (is_empty(a) == std::nullopt) return nba_true(a.atoms);
  std::vector<uint32_t> letters = letters_of(a);

  if (is_deterministic(a, letters)) {
    NBA c = complete_with_sink(a, letters);
    return complement_deterministic(c);
  }
  SccInfo scc = analyze_sccs(a);
  bool weak = true;
  for (int c = 0; c < scc.count && weak; ++c)
    if (scc.acc_cycle[c] && scc.rej_cycle[c]) weak = false;
  if (weak) return complement_weak(a, scc, opts, letters);
  return complement_rank(a, opts, letters);
}

}  // namespace phs
