#include "phs/procedures.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "phs/print.hpp"
#include "phs/rewrite.hpp"

namespace phs {

namespace {

bool is_budget_error(const std::exception& e) {
  return std::string(e.what()).find("budget") != std::string::npos;
}

Lasso strip_atom(const Lasso& w, const std::string& atom) {
  Lasso out;
  std::vector<int> keep;
  for (size_t i = 0; i < w.atoms.size(); ++i)
    if (w.atoms[i] != atom) {
      keep.push_back(static_cast<int>(i));
      out.atoms.push_back(w.atoms[i]);
    }
  auto remap = [&](uint32_t l) {
    uint32_t r = 0;
    for (size_t i = 0; i < keep.size(); ++i)
      if ((l >> keep[i]) & 1u) r |= 1u << i;
    return r;
  };
  for (uint32_t l : w.stem) out.stem.push_back(remap(l));
  for (uint32_t l : w.loop) out.loop.push_back(remap(l));
  return canonical_lasso(out);
}

// Appends missing atoms to the automaton inventory (guards untouched, so the
// new atoms are unconstrained).
NBA pad_atoms(NBA a, const std::vector<std::string>& want) {
  for (const std::string& x : want)
    if (std::find(a.atoms.begin(), a.atoms.end(), x) == a.atoms.end())
      a.atoms.push_back(x);
  return a;
}

// Reindexes an automaton onto a target inventory that contains all its
// atoms (possibly in a different order).
NBA align_atoms(const NBA& a, const std::vector<std::string>& target) {
  std::vector<int> bit_map(a.atoms.size());
  for (size_t i = 0; i < a.atoms.size(); ++i) {
    auto it = std::find(target.begin(), target.end(), a.atoms[i]);
    if (it == target.end())
      throw std::logic_error("align_atoms: atom missing from target");
    bit_map[i] = static_cast<int>(it - target.begin());
  }
  NBA out;
  out.atoms = target;
  out.initial = a.initial;
  for (int q = 0; q < a.size(); ++q) out.add_state(a.accepting[q]);
  for (int q = 0; q < a.size(); ++q)
    for (const Edge& e : a.trans[q])
      out.add_edge(q, e.guard.remap(bit_map), e.dst);
  return out;
}

ParamDecl kinds_of(const Formula& f, const char* who) {
  auto decl = infer_param_kinds(to_pnf(f));
  if (!decl)
    throw std::runtime_error(std::string(who) +
                             ": contradictory parameter usage");
  return *decl;
}

}  // namespace

SatResult check_sat(const Formula& f, const CompileOptions& opts) {
  SatResult r;
  ParamDecl decl = kinds_of(f, "check_sat");
  Formula prompt = to_prompt(drop_universal_upward(to_pnf(f)));
  Formula colored = colorize(prompt, "c");
  Compiled c;
  try {
    c = hs_to_nba(colored, Fragment::Auto, opts);
  } catch (const std::runtime_error& e) {
    if (!is_budget_error(e)) throw;
    r.verdict = SatResult::Verdict::Undecided;
    r.note = "undecided: resource";
    return r;
  }
  r.report = c.report;
  r.automaton_states = c.automaton.size();
  r.k = 2 * r.automaton_states + 1;
  for (const std::string& u : decl.upward) r.valuation[u] = 2 * r.k;
  for (const std::string& d : decl.downward) r.valuation[d] = 1;

  NBA bounded = bound_counter(c.automaton, static_cast<int>(r.k), "c");
  auto wit = is_empty(bounded);
  if (!wit) {
    r.verdict = SatResult::Verdict::Empty;
    return r;
  }
  r.verdict = SatResult::Verdict::Nonempty;
  r.witness = strip_atom(wit->word, "c");
  TriBool check = eval_trace(*r.witness, r.valuation, f);
  if (check == TriBool::False)
    throw std::logic_error("check_sat: witness failed oracle verification");
  r.witness_verified = check == TriBool::True;
  if (!r.witness_verified) r.note = "witness unverified: oracle inconclusive";
  return r;
}

McResult check_mc(const Kripke& k, const Formula& f,
                  const CompileOptions& opts) {
  McResult r;
  ParamDecl decl = kinds_of(f, "check_mc");
  Formula prompt = to_prompt(drop_universal_upward(to_pnf(f)));
  // The language of !rel_c(psi) & alt_c is assembled at the automaton level:
  // compiling rel_c(psi) and complementing the (reduced) trace automaton is
  // far cheaper than compiling the negated formula, whose universal
  // modalities each cost a complementation of a larger intermediate.
  Formula rel = colorize_rel(prompt, "c");
  Compiled c;
  NBA automaton;
  try {
    c = hs_to_nba(rel, Fragment::Auto, opts);
    ComplementOptions co;
    co.state_budget = opts.state_budget;
    co.context = "!(" + render_formula_body(rel) + ")";
    NBA neg = reduce_nba(complement(c.automaton, co));
    Compiled alt = hs_to_nba(alt_formula("c"), Fragment::Auto, opts);
    std::vector<std::string> shared = neg.atoms;
    for (const std::string& x : alt.automaton.atoms)
      if (std::find(shared.begin(), shared.end(), x) == shared.end())
        shared.push_back(x);
    automaton = reduce_nba(intersect(align_atoms(neg, shared),
                                     align_atoms(alt.automaton, shared)));
  } catch (const std::runtime_error& e) {
    if (!is_budget_error(e)) throw;
    r.verdict = McResult::Verdict::Undecided;
    r.note = "undecided: resource";
    return r;
  }
  r.report = c.report;

  // Align the atom inventories: the structure picks up any formula atom it
  // does not label (those atoms simply never hold), the automaton picks up
  // the structure's atoms it never mentions.
  Kripke kk = k;
  for (const std::string& x : automaton.atoms)
    if (x != "c" &&
        std::find(kk.atoms.begin(), kk.atoms.end(), x) == kk.atoms.end())
      kk.atoms.push_back(x);
  std::vector<std::string> want = kk.atoms;
  want.push_back("c");
  NBA a = pad_atoms(automaton, want);

  r.automaton_states = a.size();
  r.kripke_states = static_cast<long long>(kk.state_names.size());
  long long alpha = 2 * (r.automaton_states * r.kripke_states + 1);
  for (const std::string& u : decl.upward) r.valuation[u] = alpha;
  for (const std::string& d : decl.downward) r.valuation[d] = 1;

  FairProduct prod = product_with_kripke(kk, a, "c");
  auto pump = find_pumpable_fair_path(prod);
  if (pump) {
    r.verdict = McResult::Verdict::Empty;
    r.counterexample = *pump;
    r.valuation.clear();
  } else {
    r.verdict = McResult::Verdict::Holds;
  }
  return r;
}

Lasso spaced_coloring(const Lasso& w, long long k, bool first_color,
                      const std::string& color_atom) {
  if (k < 1) throw std::runtime_error("spaced_coloring: k must be positive");
  if (w.atom_index(color_atom) >= 0)
    throw std::runtime_error("spaced_coloring: color atom already present");
  Lasso out;
  out.atoms = w.atoms;
  out.atoms.push_back(color_atom);
  uint32_t cbit = 1u << (out.atoms.size() - 1);
  auto color = [&](long long i) {
    return (first_color ? 1 : 0) ^ static_cast<int>((i / k) % 2);
  };
  long long s = static_cast<long long>(w.stem.size());
  long long l = static_cast<long long>(w.loop.size());
  long long period = std::lcm(l, 2 * k);
  for (long long i = 0; i < s; ++i)
    out.stem.push_back(w.stem[i] | (color(i) ? cbit : 0));
  for (long long j = 0; j < period; ++j)
    out.loop.push_back(w.loop[j % l] | (color(s + j) ? cbit : 0));
  return out;
}

namespace {

// Random coloring whose blocks all have length <= k; empty result when the
// sampled track fails validation.
std::optional<Lasso> bounded_coloring(std::mt19937_64& rng, const Lasso& w,
                                      long long k,
                                      const std::string& color_atom) {
  long long s = static_cast<long long>(w.stem.size());
  long long l = static_cast<long long>(w.loop.size());
  long long reps = std::uniform_int_distribution<long long>(1, 2)(rng);
  long long total = s + l * reps;
  std::vector<int> c(total);
  int cur = std::uniform_int_distribution<int>(0, 1)(rng);
  long long run = 0;
  for (long long i = 0; i < total; ++i) {
    if (run >= k || (run > 0 && std::bernoulli_distribution(0.5)(rng))) {
      cur ^= 1;
      run = 0;
    }
    c[i] = cur;
    ++run;
  }
  // The track on the loop must contain both colors, and the run across the
  // wrap must stay within k.
  bool both = false;
  for (long long i = s + 1; i < total; ++i)
    if (c[i] != c[s]) both = true;
  if (!both) return std::nullopt;
  long long tail = 0;
  for (long long i = total - 1; i >= s && c[i] == c[total - 1]; --i) ++tail;
  long long head = 0;
  for (long long i = s; i < total && c[i] == c[s]; ++i) ++head;
  if (c[total - 1] == c[s] && tail + head > k) return std::nullopt;

  Lasso out;
  out.atoms = w.atoms;
  out.atoms.push_back(color_atom);
  uint32_t cbit = 1u << (out.atoms.size() - 1);
  for (long long i = 0; i < s; ++i)
    out.stem.push_back(w.stem[i] | (c[i] ? cbit : 0));
  for (long long j = 0; j < l * reps; ++j)
    out.loop.push_back(w.loop[j % l] | (c[s + j] ? cbit : 0));
  return out;
}

}  // namespace

Lemma2Report verify_lemma2(const Formula& f, const Lasso& w,
                           const Valuation& alpha, int samples,
                           uint64_t seed) {
  if (!is_prompt(f))
    throw std::runtime_error("verify_lemma2 expects a PromptHS formula");
  Lemma2Report rep;
  long long k = 1;
  for (const auto& [p, v] : alpha) k = std::max(k, v);
  Formula colored = colorize(f, "c");

  TriBool base = eval_trace(w, alpha, f);
  if (base == TriBool::Unknown) {
    ++rep.skipped;
  } else if (base == TriBool::True) {
    for (bool b : {false, true}) {
      Lasso wc = spaced_coloring(w, k, b);
      // Nested unbounded scans need several loop periods of margin.
      EvalOptions eo;
      eo.horizon =
          static_cast<long long>(wc.stem.size() + 10 * wc.loop.size());
      TriBool t = eval_trace(wc, {}, colored, eo);
      if (t == TriBool::Unknown) {
        ++rep.skipped;
        continue;
      }
      ++rep.part1_checked;
      if (t == TriBool::False) {
        ++rep.part1_violations;
        rep.violations.push_back("part 1: " + render_lasso(wc));
      }
    }
  }

  Valuation doubled;
  for (const std::string& p : collect_params(f)) doubled[p] = 2 * k;
  TriBool back = eval_trace(w, doubled, f);
  std::mt19937_64 rng(seed);
  for (int it = 0; it < samples; ++it) {
    auto wc = bounded_coloring(rng, w, k, "c");
    if (!wc) continue;
    EvalOptions eo;
    eo.horizon =
        static_cast<long long>(wc->stem.size() + 10 * wc->loop.size());
    TriBool t = eval_trace(*wc, {}, colored, eo);
    if (t != TriBool::True) {
      if (t == TriBool::Unknown) ++rep.skipped;
      continue;
    }
    if (back == TriBool::Unknown) {
      ++rep.skipped;
      continue;
    }
    ++rep.part2_checked;
    if (back == TriBool::False) {
      ++rep.part2_violations;
      rep.violations.push_back("part 2: " + render_lasso(*wc));
    }
  }
  return rep;
}

std::optional<long long> min_upward_alpha(const Formula& f, const Lasso& w,
                                          long long hi, EvalOptions opt) {
  ParamDecl decl = kinds_of(f, "min_upward_alpha");
  for (long long a = 1; a <= hi; ++a) {
    Valuation v;
    for (const std::string& u : decl.upward) v[u] = a;
    for (const std::string& d : decl.downward) v[d] = 1;
    if (eval_trace(w, v, f, opt) == TriBool::True) return a;
  }
  return std::nullopt;
}

}  // namespace phs
