#include "phs/fairproduct.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace phs {

FairProduct product_with_kripke(const Kripke& k, const NBA& a,
                                const std::string& color_atom) {
  std::set<std::string> want(k.atoms.begin(), k.atoms.end());
  want.insert(color_atom);
  if (std::set<std::string>(a.atoms.begin(), a.atoms.end()) != want)
    throw std::runtime_error(
        "inventory mismatch: automaton atoms must be AP(K) plus the color atom");

  FairProduct p;
  p.n_states = static_cast<int>(k.state_names.size());
  p.n_auto = a.size();
  p.atoms = a.atoms;
  p.color_bit = a.atom_index(color_atom);
  p.succ.assign(p.size(), {});
  p.fair.assign(p.size(), 0);
  p.letter.assign(p.size(), 0);
  p.colored.assign(p.size(), 0);

  // Kripke labels remapped into the automaton's atom order.
  std::vector<uint32_t> lab(p.n_states, 0);
  for (int s = 0; s < p.n_states; ++s)
    for (size_t i = 0; i < k.atoms.size(); ++i)
      if ((k.labels[s] >> i) & 1u) lab[s] |= 1u << a.atom_index(k.atoms[i]);

  for (int s = 0; s < p.n_states; ++s)
    for (int q = 0; q < p.n_auto; ++q)
      for (int c = 0; c < 2; ++c) {
        int v = p.id(s, q, c);
        p.fair[v] = a.accepting[q];
        p.colored[v] = static_cast<char>(c);
        p.letter[v] = lab[s] | (c ? (1u << p.color_bit) : 0u);
        for (const Edge& e : a.trans[q]) {
          if (!e.guard.sat(p.letter[v])) continue;
          for (int s2 : k.successors[s])
            for (int c2 = 0; c2 < 2; ++c2)
              p.succ[v].push_back(p.id(s2, e.dst, c2));
        }
      }
  for (auto& lst : p.succ) {
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }
  p.initial = p.id(k.initial, a.initial, 0);
  return p;
}

namespace {

// Augmented-graph node: product vertex, guessed repeat vertex (-1 = none),
// repeated flag.
struct AugNode {
  int v;
  int guess;
  int flag;
  bool operator<(const AugNode& o) const {
    return std::tie(v, guess, flag) < std::tie(o.v, o.guess, o.flag);
  }
};

struct AugGraph {
  std::vector<AugNode> nodes;
  std::vector<std::vector<int>> succ;
  std::map<AugNode, int> ids;
  int intern(const AugNode& n) {
    auto [it, fresh] = ids.emplace(n, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back(n);
      succ.emplace_back();
    }
    return it->second;
  }
};

std::vector<int> shortest_path(int from, int to,
                               const std::vector<std::vector<int>>& succ) {
  std::vector<int> prev(succ.size(), -2);
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

}  // namespace

std::optional<LassoWitness> find_pumpable_fair_path(const FairProduct& p) {
  AugGraph g;
  std::queue<int> work;
  std::vector<int> inits;
  for (const AugNode& n :
       {AugNode{p.initial, -1, 0}, AugNode{p.initial, p.initial, 0}}) {
    int i = g.intern(n);
    if (static_cast<size_t>(i) + 1 == g.nodes.size()) work.push(i);
    inits.push_back(i);
  }
  // A virtual root fans out to both initial guesses.
  while (!work.empty()) {
    int cur = work.front();
    work.pop();
    AugNode n = g.nodes[cur];
    for (int v2 : p.succ[n.v]) {
      bool change = p.colored[v2] != p.colored[n.v];
      std::vector<AugNode> outs;
      if (!change) {
        int flag2 = n.flag || (n.guess >= 0 && v2 == n.guess);
        outs.push_back({v2, n.guess, flag2});
        // The repeated vertex of a block may be any vertex inside it, not
        // just the first; defer the guess to any later position.
        if (n.guess < 0) outs.push_back({v2, v2, 0});
      } else {
        if (!n.flag) continue;  // block must have revisited its guess
        outs.push_back({v2, -1, 0});
        outs.push_back({v2, v2, 0});
      }
      for (const AugNode& o : outs) {
        size_t before = g.nodes.size();
        int oid = g.intern(o);
        if (g.nodes.size() > before) work.push(oid);
        g.succ[cur].push_back(oid);
      }
    }
  }

  int n = static_cast<int>(g.nodes.size());
  // Tarjan over the explored augmented graph.
  std::vector<int> comp(n, -1), index(n, -1), low(n, 0), stack;
  std::vector<char> on(n, 0);
  int next = 0, ncomp = 0;
  struct Frame {
    int v;
    size_t ei;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on[root] = 1;
    while (!frames.empty()) {
      Frame& fr = frames.back();
      if (fr.ei < g.succ[fr.v].size()) {
        int w = g.succ[fr.v][fr.ei++];
        if (index[w] == -1) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on[w] = 1;
          frames.push_back({w, 0});
        } else if (on[w]) {
          low[fr.v] = std::min(low[fr.v], index[w]);
        }
      } else {
        if (low[fr.v] == index[fr.v]) {
          int c = ncomp++;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = 0;
            comp[w] = c;
          } while (w != fr.v);
        }
        int v = fr.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  std::vector<char> nontrivial(ncomp, 0), has_fair(ncomp, 0);
  for (int v = 0; v < n; ++v) {
    for (int d : g.succ[v])
      if (comp[d] == comp[v]) nontrivial[comp[v]] = 1;
    if (p.fair[g.nodes[v].v]) has_fair[comp[v]] = 1;
  }
  int target = -1;
  for (int v = 0; v < n && target < 0; ++v)
    if (nontrivial[comp[v]] && has_fair[comp[v]] && p.fair[g.nodes[v].v])
      target = v;
  if (target < 0) return std::nullopt;

  std::vector<int> stem;
  for (int i : inits) {
    std::vector<int> s = shortest_path(i, target, g.succ);
    if (!s.empty() && (stem.empty() || s.size() < stem.size())) stem = s;
  }
  if (stem.empty()) return std::nullopt;
  std::vector<std::vector<int>> inner(n);
  for (int v = 0; v < n; ++v)
    for (int d : g.succ[v])
      if (comp[d] == comp[v] && comp[v] == comp[target]) inner[v].push_back(d);
  std::vector<int> cyc = shortest_cycle(target, inner);

  LassoWitness wit;
  wit.word.atoms = p.atoms;
  for (size_t i = 0; i + 1 < stem.size(); ++i) {
    int v = g.nodes[stem[i]].v;
    wit.stem_states.push_back(v);
    wit.word.stem.push_back(p.letter[v]);
  }
  for (int a : cyc) {
    int v = g.nodes[a].v;
    wit.loop_states.push_back(v);
    wit.word.loop.push_back(p.letter[v]);
  }
  if (!replay_pumpable(p, wit))
    throw std::logic_error("pumpable witness failed replay");
  return wit;
}

bool replay_pumpable(const FairProduct& p, const LassoWitness& w) {
  if (w.loop_states.empty()) return false;
  std::vector<int> states = w.stem_states;
  // Unroll enough loop periods to see every block pattern.
  for (int rep = 0; rep < 3; ++rep)
    states.insert(states.end(), w.loop_states.begin(), w.loop_states.end());
  if (states.front() != p.initial &&
      !(w.stem_states.empty() && w.loop_states.front() == p.initial))
    return false;
  bool fair = false;
  for (int v : w.loop_states)
    if (p.fair[v]) fair = true;
  if (!fair) return false;
  for (size_t i = 0; i + 1 < states.size(); ++i) {
    const std::vector<int>& s = p.succ[states[i]];
    if (std::find(s.begin(), s.end(), states[i + 1]) == s.end()) return false;
  }
  // Letters must match the product states.
  for (size_t i = 0; i < w.stem_states.size(); ++i)
    if (w.word.stem[i] != p.letter[w.stem_states[i]]) return false;
  for (size_t i = 0; i < w.loop_states.size(); ++i)
    if (w.word.loop[i] != p.letter[w.loop_states[i]]) return false;
  // Every complete color block within the unrolled prefix revisits a state.
  size_t block_start = 0;
  for (size_t i = 1; i <= states.size(); ++i) {
    bool boundary =
        i == states.size() || p.colored[states[i]] != p.colored[states[i - 1]];
    if (!boundary) continue;
    bool complete = i < states.size();
    if (complete) {
      std::set<int> seen;
      bool revisit = false;
      for (size_t j = block_start; j < i && !revisit; ++j)
        revisit = !seen.insert(states[j]).second;
      if (!revisit) return false;
    }
    block_start = i;
  }
  return true;
}

}  // namespace phs
