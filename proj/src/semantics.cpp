#include "phs/semantics.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace phs {

long long default_horizon(const Lasso& w, const Valuation& alpha) {
  long long mx = 0;
  for (auto& [_, v] : alpha) mx = std::max(mx, v);
  return static_cast<long long>(w.stem.size()) +
         4 * static_cast<long long>(w.loop.size()) + mx;
}

namespace {

constexpr long long kUnbounded = std::numeric_limits<long long>::max() / 4;

struct IntervalEval {
  const Lasso& w;
  const Valuation& alpha;
  long long H;
  long long ps, P;  // period start, period

  struct Key {
    const Node* n;
    long long lo, hi;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = std::hash<const void*>{}(k.n);
      h ^= std::hash<long long>{}(k.lo * 1000003 + k.hi) + 0x9e3779b9 + (h << 6);
      return h;
    }
  };
  std::unordered_map<Key, TriBool, KeyHash> memo;

  IntervalEval(const Lasso& w_, const Valuation& a, long long h)
      : w(w_), alpha(a), H(h),
        ps(static_cast<long long>(w_.stem.size())),
        P(static_cast<long long>(w_.loop.size())) {}

  long long value_of(const std::string& p) const {
    auto it = alpha.find(p);
    if (it == alpha.end())
      throw std::runtime_error("parameter '" + p + "' has no value");
    if (it->second < 1)
      throw std::runtime_error("parameter '" + p + "' must be positive");
    return it->second;
  }

  TriBool go(const Formula& f, long long lo, long long hi) {
    Key k{f.get(), lo, hi};
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    TriBool r = compute(f, lo, hi);
    memo.emplace(k, r);
    return r;
  }

  TriBool compute(const Formula& f, long long i, long long j) {
    switch (f->kind) {
      case Kind::True:
        return TriBool::True;
      case Kind::Prop:
        return tri_of(w.holds_on({i, j}, w.atom_index(f->name)));
      case Kind::Not:
        return tri_not(go(f->lhs, i, j));
      case Kind::And:
        return tri_and(go(f->lhs, i, j), go(f->rhs, i, j));
      case Kind::Or:
        return tri_or(go(f->lhs, i, j), go(f->rhs, i, j));
      case Kind::Implies:
        return tri_or(tri_not(go(f->lhs, i, j)), go(f->rhs, i, j));
      case Kind::Modal:
        return modal(f, i, j);
      default:
        throw std::runtime_error(
            "point-logic operator in interval evaluation");
    }
  }

  // Recognizes the length literal len_k ([B]^k !true, prefixed by <B>^(k-1)
  // true for k > 1); returns k, or 0 when the formula is not one.
  static long long len_literal(const Formula& f) {
    auto box_chain = [](Formula g) -> long long {
      long long k = 0;
      while (g->kind == Kind::Modal && g->rel == Rel::B && g->universal &&
             !g->constraint) {
        ++k;
        g = g->lhs;
      }
      return is_false(g) ? k : 0;
    };
    if (f->kind == Kind::Modal) return box_chain(f) == 1 ? 1 : 0;
    if (f->kind != Kind::And) return 0;
    long long k = box_chain(f->rhs);
    if (k < 2) return 0;
    Formula g = f->lhs;
    long long d = 0;
    while (g->kind == Kind::Modal && g->rel == Rel::B && !g->universal &&
           !g->constraint) {
      ++d;
      g = g->lhs;
    }
    return (g->kind == Kind::True && d == k - 1) ? k : 0;
  }

  // First length literal among the conjuncts of a body, 0 if none.
  static long long len_conjunct(const Formula& f) {
    if (f->kind == Kind::And) {
      long long k = len_conjunct(f->lhs);
      return k > 0 ? k : len_conjunct(f->rhs);
    }
    return len_literal(f);
  }

  // Enumerates candidate intervals [v,z] for f->rel from [i,j], combining
  // child results. `unbounded_from` is set when the candidate set extends
  // past the horizon; in that case an exhausted scan is conclusive only if
  // it covered two full loop periods past max(unbounded_from, period start).
  TriBool modal(const Formula& f, long long i, long long j) {
    const bool univ = f->universal;
    long long cl = 1, cu = kUnbounded;  // admitted |J| range from constraint
    if (f->constraint) {
      long long a = value_of(f->constraint->param);
      switch (f->constraint->cmp) {
        case Cmp::Lt: cu = a - 1; break;
        case Cmp::Le: cu = a; break;
        case Cmp::Gt: cl = a + 1; break;
        case Cmp::Ge: cl = a; break;
      }
      if (cu < cl) return tri_of(univ);  // empty candidate set
    }
    // An existential body conjoined with a length literal can only hold on
    // intervals of exactly that length; clamping the candidate range keeps
    // the scan bounded (and therefore conclusive). Unsound for universal
    // modalities, which must still inspect every candidate.
    if (!univ) {
      if (long long k = len_conjunct(f->lhs); k > 0) {
        cl = std::max(cl, k);
        cu = std::min(cu, k);
        if (cu < cl) return tri_of(univ);
      }
    }

    TriBool acc = univ ? TriBool::True : TriBool::False;
    bool done = false;
    // Bookkeeping for the unknown-suffix rule: in a single-coordinate
    // future scan, near-horizon evaluations often come back Unknown only
    // because the child ran out of margin. If every Unknown sits strictly
    // after the last conclusive result, the conclusive prefix can still
    // carry the verdict once it spans two loop periods.
    bool saw_unknown = false, mixed = false, suffix_rule = false;
    long long concl_end = -1;
    auto feed = [&](long long v, long long z) {
      long long len = z - v + 1;
      if (len < cl || len > cu) return;
      TriBool r = go(f->lhs, v, z);
      if (r == TriBool::Unknown) {
        saw_unknown = true;
      } else if (saw_unknown) {
        mixed = true;
      } else {
        concl_end = std::max(concl_end, z);
      }
      acc = univ ? tri_and(acc, r) : tri_or(acc, r);
      if ((univ && acc == TriBool::False) || (!univ && acc == TriBool::True))
        done = true;
    };

    long long unbounded_from = -1;  // start of the horizon-truncated dimension

    switch (f->rel) {
      case Rel::A: {  // J = [j, z], z >= j
        suffix_rule = true;
        long long zmax = cu >= kUnbounded ? kUnbounded : j + cu - 1;
        if (zmax > H) unbounded_from = j;
        for (long long z = j + std::max(0LL, cl - 1);
             z <= std::min(zmax, H) && !done; ++z)
          feed(j, z);
        break;
      }
      case Rel::Abar:  // J = [v, i], v <= i
        for (long long v = 0; v <= i && !done; ++v) feed(v, i);
        break;
      case Rel::L: {  // J = [v, z], v > j
        long long zcap = H;
        unbounded_from = j + 1;
        for (long long v = j + 1; v <= zcap && !done; ++v)
          for (long long z = v; z <= zcap && !done; ++z) feed(v, z);
        break;
      }
      case Rel::Lbar:  // J = [v, z], z < i
        for (long long v = 0; v < i && !done; ++v)
          for (long long z = v; z < i && !done; ++z) feed(v, z);
        break;
      case Rel::B:  // J = [i, z], i <= z < j
        for (long long z = i; z < j && !done; ++z) feed(i, z);
        break;
      case Rel::Bbar: {  // J = [i, z], z > j
        suffix_rule = true;
        long long zmax = cu >= kUnbounded ? kUnbounded : i + cu - 1;
        if (zmax > H) unbounded_from = j + 1;
        for (long long z = j + 1; z <= std::min(zmax, H) && !done; ++z)
          feed(i, z);
        break;
      }
      case Rel::BbarW: {  // J = [i, z], z >= j
        suffix_rule = true;
        long long zmax = cu >= kUnbounded ? kUnbounded : i + cu - 1;
        if (zmax > H) unbounded_from = j;
        for (long long z = j; z <= std::min(zmax, H) && !done; ++z) feed(i, z);
        break;
      }
      case Rel::E:  // J = [v, j], i < v <= j
        for (long long v = i + 1; v <= j && !done; ++v) feed(v, j);
        break;
      case Rel::Ebar:  // J = [v, j], v < i
        for (long long v = 0; v < i && !done; ++v) feed(v, j);
        break;
      case Rel::EbarW:  // J = [v, j], v <= i
        for (long long v = 0; v <= i && !done; ++v) feed(v, j);
        break;
      case Rel::D:  // J strictly inside
        for (long long v = i + 1; v < j && !done; ++v)
          for (long long z = v; z < j && !done; ++z) feed(v, z);
        break;
      case Rel::Dbar: {  // J strictly contains I
        long long zmax = cu >= kUnbounded ? kUnbounded : i - 1 + cu - 1;
        if (i > 0 && zmax > H) unbounded_from = j + 1;
        for (long long v = 0; v < i && !done; ++v) {
          long long vz = cu >= kUnbounded ? H : std::min(H, v + cu - 1);
          for (long long z = j + 1; z <= vz && !done; ++z) feed(v, z);
        }
        break;
      }
      case Rel::O:  // J = [v, z], i < v < j < z
        if (j > i + 1) unbounded_from = j + 1;
        for (long long v = i + 1; v < j && !done; ++v) {
          long long vz = cu >= kUnbounded ? H : std::min(H, v + cu - 1);
          for (long long z = j + 1; z <= vz && !done; ++z) feed(v, z);
        }
        break;
      case Rel::Obar:  // J = [v, z], v < i < z < j
        for (long long v = 0; v < i && !done; ++v)
          for (long long z = i + 1; z < j && !done; ++z) feed(v, z);
        break;
    }

    if (done) return acc;
    if (acc == TriBool::Unknown) {
      if (suffix_rule && unbounded_from >= 0 && !mixed) {
        long long from = std::max(unbounded_from, ps);
        if (concl_end - from + 1 >= 2 * P)
          return univ ? TriBool::True : TriBool::False;
      }
      return TriBool::Unknown;
    }
    if (unbounded_from >= 0) {
      // Truncated scan with a uniform answer: conclusive only once the scan
      // covered two full loop periods of agreeing results past the stem.
      long long from = std::max(unbounded_from, ps);
      if (H - from + 1 < 2 * P) return TriBool::Unknown;
    }
    return acc;
  }
};

}  // namespace

TriBool eval_interval(const Lasso& w, Interval I, const Valuation& alpha,
                      const Formula& f, EvalOptions opt) {
  if (I.lo > I.hi) throw std::runtime_error("malformed interval");
  long long H = opt.horizon >= 0 ? opt.horizon : default_horizon(w, alpha);
  IntervalEval ev(w, alpha, H);
  return ev.go(f, I.lo, I.hi);
}

TriBool eval_trace(const Lasso& w, const Valuation& alpha, const Formula& f,
                   EvalOptions opt) {
  return eval_interval(w, {0, 0}, alpha, f, opt);
}

namespace {

struct PltlEval {
  const Lasso& w;
  const Valuation& alpha;
  long long n;  // domain size: |stem| + |loop|
  std::unordered_map<const Node*, std::vector<char>> tables;

  PltlEval(const Lasso& w_, const Valuation& a)
      : w(w_), alpha(a),
        n(static_cast<long long>(w_.stem.size() + w_.loop.size())) {}

  long long next(long long p) const {
    return p + 1 < n ? p + 1 : static_cast<long long>(w.stem.size());
  }

  long long value_of(const std::string& p) const {
    auto it = alpha.find(p);
    if (it == alpha.end())
      throw std::runtime_error("parameter '" + p + "' has no value");
    if (it->second < 1)
      throw std::runtime_error("parameter '" + p + "' must be positive");
    return it->second;
  }

  const std::vector<char>& table(const Formula& f) {
    auto it = tables.find(f.get());
    if (it != tables.end()) return it->second;
    std::vector<char> t(n, 0);
    switch (f->kind) {
      case Kind::True:
        t.assign(n, 1);
        break;
      case Kind::Prop: {
        int a = w.atom_index(f->name);
        for (long long p = 0; p < n; ++p) t[p] = w.holds_at(p, a);
        break;
      }
      case Kind::Not: {
        auto& c = table(f->lhs);
        for (long long p = 0; p < n; ++p) t[p] = !c[p];
        break;
      }
      case Kind::And: {
        auto& a = table(f->lhs);
        auto& b = table(f->rhs);
        for (long long p = 0; p < n; ++p) t[p] = a[p] && b[p];
        break;
      }
      case Kind::Or: {
        auto& a = table(f->lhs);
        auto& b = table(f->rhs);
        for (long long p = 0; p < n; ++p) t[p] = a[p] || b[p];
        break;
      }
      case Kind::Implies: {
        auto& a = table(f->lhs);
        auto& b = table(f->rhs);
        for (long long p = 0; p < n; ++p) t[p] = !a[p] || b[p];
        break;
      }
      case Kind::Next: {
        auto& c = table(f->lhs);
        for (long long p = 0; p < n; ++p) t[p] = c[next(p)];
        break;
      }
      case Kind::Until: {
        auto& a = table(f->lhs);
        auto& b = table(f->rhs);
        // Least fixpoint of t = b | (a & X t).
        t.assign(n, 0);
        for (long long it2 = 0; it2 <= n; ++it2) {
          bool changed = false;
          for (long long p = n - 1; p >= 0; --p) {
            char v = b[p] || (a[p] && t[next(p)]);
            if (v != t[p]) { t[p] = v; changed = true; }
          }
          if (!changed) break;
        }
        break;
      }
      case Kind::Future: {
        auto& c = table(f->lhs);
        t.assign(n, 0);
        for (long long it2 = 0; it2 <= n; ++it2) {
          bool changed = false;
          for (long long p = n - 1; p >= 0; --p) {
            char v = c[p] || t[next(p)];
            if (v != t[p]) { t[p] = v; changed = true; }
          }
          if (!changed) break;
        }
        break;
      }
      case Kind::Always: {
        auto& c = table(f->lhs);
        // Greatest fixpoint of t = c & X t.
        t.assign(n, 1);
        for (long long it2 = 0; it2 <= n; ++it2) {
          bool changed = false;
          for (long long p = n - 1; p >= 0; --p) {
            char v = c[p] && t[next(p)];
            if (v != t[p]) { t[p] = v; changed = true; }
          }
          if (!changed) break;
        }
        break;
      }
      case Kind::BoundedEventually: {
        auto& c = table(f->lhs);
        long long a = value_of(f->name);
        for (long long p = 0; p < n; ++p) {
          long long q = p;
          char v = 0;
          for (long long k = 0; k <= a && !v; ++k, q = next(q)) v = c[q];
          t[p] = v;
        }
        break;
      }
      case Kind::BoundedAlways: {
        auto& c = table(f->lhs);
        long long a = value_of(f->name);
        for (long long p = 0; p < n; ++p) {
          long long q = p;
          char v = 1;
          for (long long k = 0; k <= a && v; ++k, q = next(q)) v = c[q];
          t[p] = v;
        }
        break;
      }
      default:
        throw std::runtime_error("non-PLTL operator in eval_pltl");
    }
    return tables.emplace(f.get(), std::move(t)).first->second;
  }
};

}  // namespace

TriBool eval_pltl(const Lasso& w, long long i, const Valuation& alpha,
                  const Formula& f) {
  PltlEval ev(w, alpha);
  long long idx =
      i < static_cast<long long>(w.stem.size())
          ? i
          : static_cast<long long>(w.stem.size()) +
                (i - static_cast<long long>(w.stem.size())) %
                    static_cast<long long>(w.loop.size());
  return tri_of(ev.table(f)[idx] != 0);
}

namespace {

struct HlEval {
  const Lasso& w;
  long long H;
  long long ps, P;
  std::unordered_map<const Node*, std::vector<std::string>> fv_cache;
  std::map<std::string, TriBool> memo;

  HlEval(const Lasso& w_, long long h)
      : w(w_), H(h), ps(static_cast<long long>(w_.stem.size())),
        P(static_cast<long long>(w_.loop.size())) {}

  const std::vector<std::string>& fvs(const Formula& f) {
    auto it = fv_cache.find(f.get());
    if (it != fv_cache.end()) return it->second;
    return fv_cache.emplace(f.get(), free_variables(f)).first->second;
  }

  TriBool go(const Formula& f, long long i, const Assignment& g) {
    std::string key;
    key.reserve(64);
    char buf[32];
    snprintf(buf, sizeof buf, "%p@%lld", static_cast<const void*>(f.get()),
             i);
    key = buf;
    for (auto& v : fvs(f)) {
      auto it = g.find(v);
      if (it == g.end())
        throw std::runtime_error("unbound free variable '" + v + "'");
      key += ";" + v + "=" + std::to_string(it->second);
    }
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    TriBool r = compute(f, i, g);
    memo.emplace(std::move(key), r);
    return r;
  }

  TriBool compute(const Formula& f, long long i, const Assignment& g) {
    switch (f->kind) {
      case Kind::True:
        return TriBool::True;
      case Kind::Prop:
        return tri_of(w.holds_at(i, w.atom_index(f->name)));
      case Kind::Var: {
        auto it = g.find(f->name);
        if (it == g.end())
          throw std::runtime_error("unbound free variable '" + f->name + "'");
        return tri_of(it->second == i);
      }
      case Kind::Not:
        return tri_not(go(f->lhs, i, g));
      case Kind::And:
        return tri_and(go(f->lhs, i, g), go(f->rhs, i, g));
      case Kind::Or:
        return tri_or(go(f->lhs, i, g), go(f->rhs, i, g));
      case Kind::Implies:
        return tri_or(tri_not(go(f->lhs, i, g)), go(f->rhs, i, g));
      case Kind::Next:
        return go(f->lhs, i + 1, g);
      case Kind::Yesterday:
        return i == 0 ? TriBool::False : go(f->lhs, i - 1, g);
      case Kind::Future: {
        TriBool acc = TriBool::False;
        for (long long q = i; q <= H; ++q) {
          acc = tri_or(acc, go(f->lhs, q, g));
          if (acc == TriBool::True) return acc;
        }
        if (acc == TriBool::Unknown) return acc;
        long long from = std::max(i, ps);
        return (H - from + 1 >= 2 * P) ? TriBool::False : TriBool::Unknown;
      }
      case Kind::Always: {
        TriBool acc = TriBool::True;
        for (long long q = i; q <= H; ++q) {
          acc = tri_and(acc, go(f->lhs, q, g));
          if (acc == TriBool::False) return acc;
        }
        if (acc == TriBool::Unknown) return acc;
        long long from = std::max(i, ps);
        return (H - from + 1 >= 2 * P) ? TriBool::True : TriBool::Unknown;
      }
      case Kind::Past: {
        TriBool acc = TriBool::False;
        for (long long q = 0; q <= i; ++q) {
          acc = tri_or(acc, go(f->lhs, q, g));
          if (acc == TriBool::True) return acc;
        }
        return acc;
      }
      case Kind::Bind: {
        Assignment g2 = g;
        g2[f->name] = i;
        return go(f->lhs, i, g2);
      }
      default:
        throw std::runtime_error("non-HL operator in eval_hl");
    }
  }
};

}  // namespace

TriBool eval_hl(const Lasso& w, long long i, const Assignment& g,
                const Formula& f, EvalOptions opt) {
  long long H = opt.horizon >= 0 ? opt.horizon : default_horizon(w, {});
  HlEval ev(w, H);
  return ev.go(f, i, g);
}

}  // namespace phs
