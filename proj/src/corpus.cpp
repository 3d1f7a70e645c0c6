#include "phs/corpus.hpp"

#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "phs/rewrite.hpp"

namespace phs {

std::vector<std::string> counting_atoms() {
  return {"h1", "h2", "dollar", "b0", "b1"};
}

YardstickSpec yardstick_spec(int n) {
  if (n < 1) throw std::invalid_argument("yardstick_spec: n must be >= 1");
  YardstickSpec s;
  s.n = n;
  s.subblock_len = n + 1;
  s.block_len = s.subblock_len << n;
  long long e = 1LL << n;  // sub-blocks per block
  if (e >= 62) return s;   // 2^(2^n) alone overflows 64 bits
  __int128 prefix = static_cast<__int128>(s.block_len) * (__int128(1) << e);
  if (prefix <= std::numeric_limits<long long>::max())
    s.prefix_len = static_cast<long long>(prefix);
  return s;
}

Lasso yardstick_trace(int n, long long budget) {
  YardstickSpec s = yardstick_spec(n);
  if (s.prefix_len < 0 || s.prefix_len > budget)
    throw std::runtime_error("yardstick_trace: prefix length exceeds budget");
  long long subblocks = 1LL << n;
  long long blocks = 1LL << subblocks;
  std::vector<std::set<std::string>> stem;
  stem.reserve(static_cast<size_t>(s.prefix_len));
  for (long long v = 0; v < blocks; ++v)
    for (long long i = 0; i < subblocks; ++i) {
      // Sub-block i of the block with index v: content bit, then the
      // sub-block index in binary, least significant bit first.
      std::set<std::string> first{"h1"};
      if (i == 0) first.insert("h2");
      first.insert(((v >> i) & 1) ? "b1" : "b0");
      stem.push_back(std::move(first));
      for (int h = 1; h <= n; ++h)
        stem.push_back({((i >> (h - 1)) & 1) ? "b1" : "b0"});
    }
  return make_lasso(stem, {{"dollar"}}, counting_atoms());
}

namespace {

Formula P(const char* name) { return mk_prop(name); }
Formula bitp(int b) { return mk_prop(b ? "b1" : "b0"); }

Formula xk(Formula f, int k) {
  while (k-- > 0) f = mk_next(f);
  return f;
}

Formula ex(Rel r, Formula f) {
  return mk_modal(r, false, std::nullopt, std::move(f));
}
Formula uni(Rel r, Formula f) {
  return mk_modal(r, true, std::nullopt, std::move(f));
}

// The body holds at the singleton on the right endpoint.
Formula right_end(Formula f) {
  return ex(Rel::A, mk_and(len_formula(1), std::move(f)));
}

// q holds at exactly one position of the interval.
Formula one_mark(const Formula& q) {
  Formula rq = right_end(q);
  Formula dup = mk_and(rq, ex(Rel::B, rq));
  return mk_and_all({mk_or(rq, ex(Rel::B, rq)), mk_not(ex(Rel::B, dup)),
                     mk_not(dup)});
}

// q holds at no position of the interval.
Formula no_mark(const Formula& q) {
  Formula rq = right_end(q);
  return mk_and(mk_not(rq), mk_not(ex(Rel::B, rq)));
}

// On an interval from a sub-block interior start to the matched sub-block
// start in the next block: the two sub-block indices agree bit for bit.
Formula theta_eq(int n) {
  std::vector<Formula> per_bit;
  for (int h = 1; h <= n; ++h) {
    std::vector<Formula> either;
    for (int b = 0; b < 2; ++b)
      either.push_back(
          mk_and(ex(Rel::B, mk_and(len_formula(h), right_end(bitp(b)))),
                 ex(Rel::A, mk_and(len_formula(h + 1), right_end(bitp(b))))));
    per_bit.push_back(mk_or_all(either));
  }
  return mk_and_all(per_bit);
}

Formula psi_inc(int n) {
  Formula h1 = P("h1"), h2 = P("h2");
  Formula flip_here = right_end(mk_and(h1, yardstick_eq(n, 0, 1)));
  Formula below = uni(
      Rel::B, mk_implies(right_end(h1), right_end(yardstick_eq(n, 1, 0))));
  Formula above = ex(
      Rel::A,
      mk_and(len_formula(2),
             uni(Rel::A,
                 mk_implies(mk_and(no_mark(h2), right_end(h1)),
                            mk_or(right_end(yardstick_eq(n, 0, 0)),
                                  right_end(yardstick_eq(n, 1, 1)))))));
  Formula ante =
      mk_and(right_end(h2),
             ex(Rel::A, mk_and(mk_not(len_formula(1)), right_end(h2))));
  Formula cons =
      ex(Rel::A, mk_and_all({one_mark(h2), flip_here, below, above}));
  return uni(Rel::A, mk_implies(ante, cons));
}

Formula tail_reach() {
  Constraint c{Cmp::Le, "u"};
  return mk_modal(Rel::A, false, c,
                  ex(Rel::A, mk_and(len_formula(1), P("dollar"))));
}

}  // namespace

Formula yardstick_eq(int n, int b, int b2) {
  Formula inner = mk_and_all(
      {one_mark(P("h2")), theta_eq(n), right_end(mk_and(bitp(b2), P("h1")))});
  return mk_implies(
      P("h1"),
      mk_and(bitp(b), ex(Rel::A, mk_and(len_formula(2), ex(Rel::A, inner)))));
}

Formula yardstick_block_ltl(int n) {
  if (n < 1) throw std::invalid_argument("yardstick_block_ltl: n must be >= 1");
  Formula h1 = P("h1"), h2 = P("h2"), dl = P("dollar");
  std::vector<Formula> all_ones, index_zero;
  for (int k = 1; k <= n; ++k) {
    all_ones.push_back(xk(bitp(1), k));
    index_zero.push_back(xk(bitp(0), k));
  }
  std::vector<Formula> cs;
  // The word starts a block of content 0.
  cs.push_back(mk_and_all({h1, h2, bitp(0)}));
  // Letter shapes: the tail letter is bare, every other letter carries
  // exactly one bit, block marks imply sub-block marks.
  cs.push_back(mk_always(mk_implies(
      dl, mk_and_all(
              {mk_not(h1), mk_not(h2), mk_not(bitp(0)), mk_not(bitp(1))}))));
  cs.push_back(mk_always(
      mk_implies(mk_not(dl), mk_or(mk_and(bitp(0), mk_not(bitp(1))),
                                   mk_and(bitp(1), mk_not(bitp(0)))))));
  cs.push_back(mk_always(mk_implies(h2, h1)));
  // Sub-block alignment: n unmarked interior letters, then the next
  // sub-block or the tail.
  {
    std::vector<Formula> body;
    for (int k = 1; k <= n; ++k)
      body.push_back(xk(mk_and_all({mk_not(h1), mk_not(h2), mk_not(dl)}), k));
    body.push_back(xk(mk_or(h1, dl), n + 1));
    cs.push_back(mk_always(mk_implies(h1, mk_and_all(body))));
  }
  // The first sub-block has index 0.
  cs.push_back(mk_and_all(index_zero));
  // Sub-block indices increment modulo 2^n (ripple from the least
  // significant bit, stored first); the wrap positions carry h2.
  {
    Formula consec = mk_and(h1, xk(h1, n + 1));
    std::vector<Formula> inc;
    for (int h = 1; h <= n; ++h) {
      std::vector<Formula> low;
      for (int k = 1; k < h; ++k) low.push_back(xk(bitp(1), k));
      for (int b = 0; b < 2; ++b) {
        if (low.empty()) {
          inc.push_back(mk_implies(xk(bitp(b), h), xk(bitp(1 - b), n + 1 + h)));
        } else {
          Formula carry = mk_and_all(low);
          inc.push_back(mk_implies(mk_and(xk(bitp(b), h), carry),
                                   xk(bitp(1 - b), n + 1 + h)));
          inc.push_back(mk_implies(mk_and(xk(bitp(b), h), mk_not(carry)),
                                   xk(bitp(b), n + 1 + h)));
        }
      }
    }
    inc.push_back(mk_iff(xk(h2, n + 1), mk_and_all(all_ones)));
    cs.push_back(mk_always(mk_implies(consec, mk_and_all(inc))));
  }
  // Block 0 carries content 0 throughout.
  cs.push_back(mk_next(mk_until(mk_implies(h1, bitp(0)), h2)));
  // A 0-content sub-block is never in the last block.
  cs.push_back(mk_always(
      mk_implies(mk_and(h1, bitp(0)), mk_next(mk_future(h2)))));
  // The tail starts only after the last sub-block of a block.
  cs.push_back(mk_always(
      mk_implies(mk_and(h1, xk(dl, n + 1)), mk_and_all(all_ones))));
  // The tail is absorbing and eventually reached.
  cs.push_back(mk_always(mk_implies(dl, mk_next(dl))));
  cs.push_back(mk_future(dl));
  return mk_and_all(cs);
}

Formula yardstick_formula(int n) {
  return mk_and(pltl_to_pab(yardstick_block_ltl(n)), psi_inc(n));
}

Formula sat_lowerbound_formula(int n) {
  return mk_and(yardstick_formula(n), tail_reach());
}

std::pair<Kripke, Formula> mc_lowerbound_instance(int n) {
  Kripke k;
  k.atoms = counting_atoms();
  int letters = 1 << static_cast<int>(k.atoms.size());
  std::vector<int> all(letters);
  std::iota(all.begin(), all.end(), 0);
  for (int m = 0; m < letters; ++m) {
    k.state_names.push_back("s" + std::to_string(m));
    k.labels.push_back(static_cast<uint32_t>(m));
    k.successors.push_back(all);
  }
  uint32_t mask = 0;
  for (size_t i = 0; i < k.atoms.size(); ++i)
    if (k.atoms[i] == "h1" || k.atoms[i] == "h2" || k.atoms[i] == "b0")
      mask |= 1u << i;
  for (int m = 0; m < letters; ++m)
    if (k.labels[m] == mask) k.initial = m;
  return {std::move(k), mk_implies(yardstick_formula(n), tail_reach())};
}

Formula succinct_family(int n) {
  if (n < 1) throw std::invalid_argument("succinct_family: n must be >= 1");
  auto theta = [](const Formula& p) {
    return mk_iff(ex(Rel::B, mk_and(len_formula(1), p)),
                  ex(Rel::A, mk_and(len_formula(1), p)));
  };
  std::vector<Formula> hyp;
  for (int i = 1; i <= n; ++i)
    hyp.push_back(theta(mk_prop("p" + std::to_string(i))));
  Formula core = mk_implies(mk_and_all(hyp), theta(mk_prop("p0")));
  // Singleton intervals relate a position to itself and are exempt.
  return uni(Rel::A, uni(Rel::A, mk_or(len_formula(1), core)));
}

bool membership_check(const Lasso& w, int n) {
  long long span = static_cast<long long>(w.stem.size() + w.loop.size());
  std::vector<int> idx;
  for (int h = 1; h <= n; ++h) idx.push_back(w.atom_index("p" + std::to_string(h)));
  int a0 = w.atom_index("p0");
  std::map<std::vector<char>, bool> cls;
  for (long long i = 0; i < span; ++i) {
    std::vector<char> key;
    for (int a : idx) key.push_back(a >= 0 && w.holds_at(i, a));
    bool v = a0 >= 0 && w.holds_at(i, a0);
    auto [it, fresh] = cls.emplace(std::move(key), v);
    if (!fresh && it->second != v) return false;
  }
  return true;
}

namespace {

struct InstanceGen {
  std::mt19937_64 rng;
  RandomProfile prof;
  std::vector<std::string> atoms;

  int pick(int n) { return static_cast<int>(rng() % n); }

  Formula leaf() {
    switch (pick(3)) {
      case 0:
        return mk_true();
      case 1:
        return mk_prop(atoms[pick(static_cast<int>(atoms.size()))]);
      default:
        return mk_not(mk_prop(atoms[pick(static_cast<int>(atoms.size()))]));
    }
  }

  // Positive-normal-form formula; constrained modalities respect the
  // parameter kinds (existential upper / universal lower take "u",
  // the other two combinations take "l").
  Formula gen(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(3)) {
      case 0:
        return mk_and(gen(depth - 1), gen(depth - 1));
      case 1:
        return mk_or(gen(depth - 1), gen(depth - 1));
      default: {
        Rel r = static_cast<Rel>(pick(14));
        bool universal = pick(2) == 0;
        std::optional<Constraint> c;
        if (prof.max_params > 0 && pick(5) < 2) {
          bool upper = pick(2) == 0;
          bool upward = universal != upper;
          if (upward || prof.max_params > 1) {
            Cmp cmp = upper ? (pick(2) ? Cmp::Lt : Cmp::Le)
                            : (pick(2) ? Cmp::Gt : Cmp::Ge);
            c = Constraint{cmp, upward ? "u" : "l"};
          }
        }
        return mk_modal(r, universal, c, gen(depth - 1));
      }
    }
  }

  Lasso word() {
    int stem = pick(prof.max_stem + 1);
    int loop = 1 + pick(prof.max_loop);
    std::vector<std::set<std::string>> s, l;
    auto letter = [&] {
      std::set<std::string> out;
      for (const std::string& a : atoms)
        if (pick(2)) out.insert(a);
      return out;
    };
    for (int i = 0; i < stem; ++i) s.push_back(letter());
    for (int i = 0; i < loop; ++i) l.push_back(letter());
    return make_lasso(s, l, atoms);
  }
};

}  // namespace

std::vector<RandomInstance> random_instances(uint64_t seed,
                                             const RandomProfile& profile,
                                             int count) {
  InstanceGen g;
  g.rng.seed(seed);
  g.prof = profile;
  for (int i = 0; i < profile.max_atoms; ++i)
    g.atoms.push_back(std::string(1, static_cast<char>('p' + i)));
  std::vector<RandomInstance> out;
  for (int i = 0; i < count; ++i) {
    RandomInstance inst;
    inst.formula = g.gen(profile.max_depth);
    inst.word = g.word();
    for (const std::string& p : collect_params(inst.formula))
      inst.valuation[p] = 1 + g.pick(profile.max_value);
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace phs
