#include "mlelim/groebner.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <list>
#include <map>

#include "mlelim/errors.hpp"
#include "mlelim/polyalg.hpp"

namespace mlelim {

MonomialOrder MonomialOrder::lex(std::vector<std::string> ranking) {
  return {Kind::kLex, std::move(ranking), {}};
}

MonomialOrder MonomialOrder::grevlex(std::vector<std::string> ranking) {
  return {Kind::kGrevlex, std::move(ranking), {}};
}

MonomialOrder MonomialOrder::block(std::vector<std::string> high_block,
                                   std::vector<std::string> low_block) {
  return {Kind::kBlock, std::move(high_block), std::move(low_block)};
}

std::vector<std::string> MonomialOrder::variables() const {
  std::vector<std::string> v = high;
  v.insert(v.end(), low.begin(), low.end());
  return v;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxVars = 40;

struct Mono {
  std::array<std::uint16_t, kMaxVars> e{};
  std::uint32_t deg_hi = 0;  // total degree of the high block (whole monomial if unblocked)
  std::uint32_t deg_lo = 0;
  std::uint64_t mask = 0;

  std::uint32_t total() const { return deg_hi + deg_lo; }
};

// Variable layout and comparison rules of one Buchberger run.
class Ring {
 public:
  explicit Ring(const MonomialOrder& order)
      : kind_(order.kind), vars_(order.variables()), split_(order.high.size()) {
    if (vars_.size() > kMaxVars) throw Error("too many variables for Groebner engine");
    if (kind_ != MonomialOrder::Kind::kBlock) split_ = vars_.size();
  }

  std::size_t nvars() const { return vars_.size(); }
  const std::vector<std::string>& vars() const { return vars_; }

  void finish(Mono& m) const {
    m.deg_hi = m.deg_lo = 0;
    m.mask = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i < split_) {
        m.deg_hi += m.e[i];
      } else {
        m.deg_lo += m.e[i];
      }
      if (m.e[i]) m.mask |= (std::uint64_t{1} << i);
    }
  }

  // Three-way comparison, larger monomial compares greater.
  int compare(const Mono& a, const Mono& b) const {
    if (kind_ == MonomialOrder::Kind::kLex) {
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
      }
      return 0;
    }
    if (a.deg_hi != b.deg_hi) return a.deg_hi > b.deg_hi ? 1 : -1;
    for (std::size_t i = split_; i-- > 0;) {
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
    }
    if (a.deg_lo != b.deg_lo) return a.deg_lo > b.deg_lo ? 1 : -1;
    for (std::size_t i = vars_.size(); i-- > split_;) {
      if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
    }
    return 0;
  }

  bool divides(const Mono& d, const Mono& m) const {
    if ((d.mask & ~m.mask) != 0) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (d.e[i] > m.e[i]) return false;
    }
    return true;
  }

  Mono mul(const Mono& a, const Mono& b) const {
    Mono r;
    for (std::size_t i = 0; i < vars_.size(); ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] + b.e[i]);
    r.deg_hi = a.deg_hi + b.deg_hi;
    r.deg_lo = a.deg_lo + b.deg_lo;
    r.mask = a.mask | b.mask;
    return r;
  }

  Mono quot(const Mono& a, const Mono& b) const {
    Mono r;
    for (std::size_t i = 0; i < vars_.size(); ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
    finish(r);
    return r;
  }

  Mono lcm(const Mono& a, const Mono& b) const {
    Mono r;
    for (std::size_t i = 0; i < vars_.size(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
    finish(r);
    return r;
  }

  bool coprime(const Mono& a, const Mono& b) const { return (a.mask & b.mask) == 0; }

  bool equal(const Mono& a, const Mono& b) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (a.e[i] != b.e[i]) return false;
    }
    return true;
  }

  Exponents exponents(const Mono& m) const {
    Exponents e(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) e[i] = m.e[i];
    return e;
  }

 private:
  MonomialOrder::Kind kind_;
  std::vector<std::string> vars_;
  std::size_t split_;
};

// Terms sorted descending under the ring's order.
template <typename C>
struct Poly {
  std::vector<Mono> m;
  std::vector<C> c;
  std::uint32_t sugar = 0;

  bool empty() const { return m.empty(); }
};

using ZPoly = Poly<BigInt>;
using PPoly = Poly<std::uint32_t>;

// Raised when a prime divides a leading coefficient of the input.
struct BadPrime {};

class Deadline {
 public:
  Deadline(const GbOptions& opts, Clock::time_point start) : opts_(opts), start_(start) {}
  void check() const {
    if (opts_.time_limit && Clock::now() - start_ > *opts_.time_limit) {
      throw ResourceLimit("Groebner time limit exceeded");
    }
  }

 private:
  const GbOptions& opts_;
  Clock::time_point start_;
};

// Fraction-free arithmetic over Z; polynomials are kept primitive with a
// positive leading coefficient.
class IntArith {
 public:
  using Coeff = BigInt;

  explicit IntArith(const Ring& ring) : ring_(ring) {}

  void normalize(ZPoly& p) const {
    if (p.empty()) return;
    BigInt g = 0;
    for (const auto& x : p.c) {
      g = gcd(g, x);
      if (g == 1) break;
    }
    if (p.c.front() < 0) g = -g;
    if (g != 1) {
      for (auto& x : p.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
  }

  ZPoly spoly(const ZPoly& a, const ZPoly& b) const {
    Mono l = ring_.lcm(a.m.front(), b.m.front());
    ZPoly sa = a;
    Mono shift = ring_.quot(l, a.m.front());
    for (auto& m : sa.m) m = ring_.mul(m, shift);
    return combine(sa, 1, b.c.front(), b, ring_.quot(l, b.m.front()), a.c.front());
  }

  // Reduces h modulo the reducers. With `full` the tail is reduced too; with
  // `keep_lead` the leading term is left alone. If `scale` is given it
  // accumulates s with result = s * (remainder of h).
  ZPoly reduce(ZPoly h, const std::vector<const ZPoly*>& reducers, bool full, bool keep_lead,
               const Deadline& deadline, BigRational* scale = nullptr) const {
    ZPoly done;
    std::size_t steps = 0;
    std::size_t pos = 0;
    if (keep_lead && !h.empty()) {
      done.m.push_back(h.m.front());
      done.c.push_back(h.c.front());
      pos = 1;
    }
    while (pos < h.m.size()) {
      const ZPoly* red = find_reducer(reducers, h.m[pos]);
      if (!red) {
        if (!full) break;
        done.m.push_back(h.m[pos]);
        done.c.push_back(h.c[pos]);
        ++pos;
        continue;
      }
      BigInt g = gcd(red->c.front(), h.c[pos]);
      BigInt a = red->c.front() / g;
      BigInt b = h.c[pos] / g;
      Mono shift = ring_.quot(h.m[pos], red->m.front());
      std::uint32_t sugar = std::max(h.sugar, red->sugar + shift.total());
      h = combine(h, pos + 1, a, *red, shift, b);
      h.sugar = sugar;
      pos = 0;
      if (a != 1) {
        for (auto& x : done.c) x *= a;
        if (scale) *scale *= BigRational(a);
      }
      if (++steps % 16 == 0) {
        strip_content(done, h, scale);
        deadline.check();
      }
    }
    for (std::size_t i = pos; i < h.m.size(); ++i) {
      done.m.push_back(h.m[i]);
      done.c.push_back(h.c[i]);
    }
    if (!done.empty() && done.c.front() < 0) {
      for (auto& x : done.c) x = -x;
      if (scale) *scale = -*scale;
    }
    done.sugar = h.sugar;
    return done;
  }

 private:
  const Ring& ring_;

  const ZPoly* find_reducer(const std::vector<const ZPoly*>& reducers, const Mono& m) const {
    for (const ZPoly* g : reducers) {
      if (ring_.divides(g->m.front(), m)) return g;
    }
    return nullptr;
  }

  static void strip_content(ZPoly& done, ZPoly& h, BigRational* scale) {
    BigInt g = 0;
    for (const auto* part : {&done, &h}) {
      for (const auto& x : part->c) {
        g = gcd(g, x);
        if (g == 1) return;
      }
    }
    if (g == 0) return;
    for (auto& x : done.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    for (auto& x : h.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    if (scale) *scale /= BigRational(g);
  }

  // a * x[from..] - b * (shift * y[1..]), merged in descending order.
  ZPoly combine(const ZPoly& x, std::size_t from, const BigInt& a, const ZPoly& y, const Mono& shift,
                const BigInt& b) const {
    ZPoly r;
    r.sugar = x.sugar;
    r.m.reserve(x.m.size() - from + y.m.size());
    r.c.reserve(x.m.size() - from + y.m.size());
    std::size_t i = from, j = 1;
    Mono yj;
    bool have_y = false;
    BigInt tmp;
    while (i < x.m.size() || j < y.m.size()) {
      if (!have_y && j < y.m.size()) {
        yj = ring_.mul(y.m[j], shift);
        have_y = true;
      }
      int cmp = i >= x.m.size() ? -1 : (!have_y ? 1 : ring_.compare(x.m[i], yj));
      if (cmp > 0) {
        r.m.push_back(x.m[i]);
        r.c.push_back(a * x.c[i]);
        ++i;
      } else if (cmp < 0) {
        r.m.push_back(yj);
        r.c.push_back(-(b * y.c[j]));
        ++j;
        have_y = false;
      } else {
        tmp = a * x.c[i] - b * y.c[j];
        if (tmp != 0) {
          r.m.push_back(x.m[i]);
          r.c.push_back(tmp);
        }
        ++i;
        ++j;
        have_y = false;
      }
    }
    return r;
  }
};

// Arithmetic in Z/p for a prime p < 2^31; polynomials are kept monic.
class ModArith {
 public:
  using Coeff = std::uint32_t;

  ModArith(const Ring& ring, std::uint32_t p) : ring_(ring), p_(p) {}

  std::uint32_t prime() const { return p_; }

  std::uint32_t mul(std::uint64_t a, std::uint64_t b) const { return static_cast<std::uint32_t>(a * b % p_); }
  std::uint32_t inv(std::uint32_t a) const {
    // Fermat
    std::uint64_t r = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
  }

  void normalize(PPoly& p) const {
    if (p.empty() || p.c.front() == 1) return;
    std::uint32_t s = inv(p.c.front());
    for (auto& x : p.c) x = mul(x, s);
  }

  PPoly spoly(const PPoly& a, const PPoly& b) const {
    Mono l = ring_.lcm(a.m.front(), b.m.front());
    PPoly sa = a;
    Mono shift = ring_.quot(l, a.m.front());
    for (auto& m : sa.m) m = ring_.mul(m, shift);
    // both monic: sa - shift_b * b
    return combine(sa, 1, b, ring_.quot(l, b.m.front()), 1);
  }

  PPoly reduce(PPoly h, const std::vector<const PPoly*>& reducers, bool full, bool keep_lead,
               const Deadline& deadline) const {
    PPoly done;
    std::size_t steps = 0;
    std::size_t pos = 0;
    if (keep_lead && !h.empty()) {
      done.m.push_back(h.m.front());
      done.c.push_back(h.c.front());
      pos = 1;
    }
    while (pos < h.m.size()) {
      const PPoly* red = nullptr;
      for (const PPoly* g : reducers) {
        if (ring_.divides(g->m.front(), h.m[pos])) {
          red = g;
          break;
        }
      }
      if (!red) {
        if (!full) break;
        done.m.push_back(h.m[pos]);
        done.c.push_back(h.c[pos]);
        ++pos;
        continue;
      }
      Mono shift = ring_.quot(h.m[pos], red->m.front());
      std::uint32_t sugar = std::max(h.sugar, red->sugar + shift.total());
      h = combine(h, pos + 1, *red, shift, h.c[pos]);
      h.sugar = sugar;
      pos = 0;
      if (++steps % 256 == 0) deadline.check();
    }
    for (std::size_t i = pos; i < h.m.size(); ++i) {
      done.m.push_back(h.m[i]);
      done.c.push_back(h.c[i]);
    }
    done.sugar = h.sugar;
    return done;
  }

 private:
  const Ring& ring_;
  std::uint32_t p_;

  // x[from..] - b * (shift * y[1..]) with y monic.
  PPoly combine(const PPoly& x, std::size_t from, const PPoly& y, const Mono& shift, std::uint32_t b) const {
    PPoly r;
    r.sugar = x.sugar;
    r.m.reserve(x.m.size() - from + y.m.size());
    r.c.reserve(x.m.size() - from + y.m.size());
    const std::uint32_t nb = b == 0 ? 0 : p_ - b;
    std::size_t i = from, j = 1;
    Mono yj;
    bool have_y = false;
    while (i < x.m.size() || j < y.m.size()) {
      if (!have_y && j < y.m.size()) {
        yj = ring_.mul(y.m[j], shift);
        have_y = true;
      }
      int cmp = i >= x.m.size() ? -1 : (!have_y ? 1 : ring_.compare(x.m[i], yj));
      if (cmp > 0) {
        r.m.push_back(x.m[i]);
        r.c.push_back(x.c[i]);
        ++i;
      } else if (cmp < 0) {
        r.m.push_back(yj);
        r.c.push_back(mul(nb, y.c[j]));
        ++j;
        have_y = false;
      } else {
        std::uint32_t v = static_cast<std::uint32_t>((x.c[i] + static_cast<std::uint64_t>(mul(nb, y.c[j]))) % p_);
        if (v != 0) {
          r.m.push_back(x.m[i]);
          r.c.push_back(v);
        }
        ++i;
        ++j;
        have_y = false;
      }
    }
    return r;
  }
};

// Buchberger's algorithm with the Gebauer-Moeller criteria and sugar selection.
template <typename Arith>
class Engine {
 public:
  using P = Poly<typename Arith::Coeff>;

  Engine(const Ring& ring, const Arith& arith, const GbOptions& options, const Deadline& deadline)
      : ring_(ring), arith_(arith), options_(options), deadline_(deadline) {}

  void add_input(P g) {
    if (g.empty()) return;
    g = reduce_by_basis(std::move(g));
    if (g.empty()) return;
    arith_.normalize(g);
    update(std::move(g));
  }

  void run() {
    while (!pairs_.empty()) {
      auto best = pairs_.begin();
      for (auto it = std::next(best); it != pairs_.end(); ++it) {
        if (it->sugar < best->sugar ||
            (it->sugar == best->sugar && ring_.compare(it->lcm, best->lcm) < 0)) {
          best = it;
        }
      }
      Pair p = *best;
      pairs_.erase(best);
      if (++reductions_ > options_.pair_budget) {
        throw ResourceLimit("Groebner pair budget exceeded (" + std::to_string(options_.pair_budget) + ")");
      }
      deadline_.check();
      P s = arith_.spoly(polys_[p.i], polys_[p.j]);
      s.sugar = p.sugar;
      P h = reduce_by_basis(std::move(s));
      if (h.empty()) continue;
      arith_.normalize(h);
      update(std::move(h));
    }
  }

  // Minimal, interreduced basis sorted by leading monomial descending.
  std::vector<P> reduced_basis() const {
    std::vector<const P*> minimal;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (active_[i]) live.push_back(i);
    }
    for (std::size_t a : live) {
      bool redundant = false;
      for (std::size_t b : live) {
        if (a == b || !ring_.divides(polys_[b].m.front(), polys_[a].m.front())) continue;
        if (!ring_.equal(polys_[b].m.front(), polys_[a].m.front()) || b < a) {
          redundant = true;
          break;
        }
      }
      if (!redundant) minimal.push_back(&polys_[a]);
    }
    std::vector<P> out;
    for (const P* g : minimal) {
      std::vector<const P*> others;
      for (const P* o : minimal) {
        if (o != g) others.push_back(o);
      }
      P r = arith_.reduce(*g, others, true, true, deadline_);
      arith_.normalize(r);
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [&](const P& a, const P& b) { return ring_.compare(a.m.front(), b.m.front()) > 0; });
    return out;
  }

 private:
  struct Pair {
    std::size_t i, j;
    Mono lcm;
    std::uint32_t sugar;
  };

  const Ring& ring_;
  const Arith& arith_;
  const GbOptions& options_;
  const Deadline& deadline_;
  std::vector<P> polys_;
  std::vector<bool> active_;
  std::list<Pair> pairs_;
  std::size_t reductions_ = 0;

  P reduce_by_basis(P h) {
    std::vector<const P*> reducers;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (active_[i]) reducers.push_back(&polys_[i]);
    }
    return arith_.reduce(std::move(h), reducers, false, false, deadline_);
  }

  std::uint32_t pair_sugar(std::size_t i, std::size_t j, const Mono& l) const {
    const P& a = polys_[i];
    const P& b = polys_[j];
    std::uint32_t sa = a.sugar + l.total() - a.m.front().total();
    std::uint32_t sb = b.sugar + l.total() - b.m.front().total();
    return std::max(sa, sb);
  }

  // Gebauer-Moeller update.
  void update(P h) {
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    active_.push_back(true);
    const Mono& lh = polys_[hi].m.front();

    struct Cand {
      std::size_t g;
      Mono lcm;
      bool coprime;
      bool keep = true;
    };
    std::vector<Cand> cands;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active_[g]) continue;
      const Mono& lg = polys_[g].m.front();
      cands.push_back({g, ring_.lcm(lh, lg), ring_.coprime(lh, lg)});
    }
    // Criterion M: drop pairs whose lcm is properly divisible by another lcm.
    for (auto& a : cands) {
      for (const auto& b : cands) {
        if (&a == &b) continue;
        if (ring_.divides(b.lcm, a.lcm) && !ring_.equal(b.lcm, a.lcm)) {
          a.keep = false;
          break;
        }
      }
    }
    // Criterion F: one pair per lcm, none at all if any pair with that lcm is coprime.
    for (std::size_t a = 0; a < cands.size(); ++a) {
      if (!cands[a].keep) continue;
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        if (!cands[b].keep || !ring_.equal(cands[a].lcm, cands[b].lcm)) continue;
        if (cands[b].coprime) cands[a].coprime = true;
        cands[b].keep = false;
      }
    }
    // Criterion B on the existing queue.
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      const Mono& lg1 = polys_[it->i].m.front();
      const Mono& lg2 = polys_[it->j].m.front();
      if (ring_.divides(lh, it->lcm) && !ring_.equal(ring_.lcm(lg1, lh), it->lcm) &&
          !ring_.equal(ring_.lcm(lg2, lh), it->lcm)) {
        it = pairs_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& c : cands) {
      if (!c.keep || c.coprime) continue;
      pairs_.push_back({c.g, hi, c.lcm, pair_sugar(c.g, hi, c.lcm)});
    }
    for (std::size_t g = 0; g < hi; ++g) {
      if (active_[g] && ring_.divides(lh, polys_[g].m.front())) active_[g] = false;
    }
  }
};

ZPoly to_zpoly(const MultiPoly& p, const Ring& ring, BigRational* factor = nullptr) {
  const auto& vars = ring.vars();
  std::vector<std::size_t> map(p.universe().size(), kMaxVars);
  for (std::size_t i = 0; i < p.universe().size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), p.universe()[i]);
    if (it != vars.end()) map[i] = static_cast<std::size_t>(it - vars.begin());
  }
  BigInt den = 1;
  for (const auto& [e, c] : p.terms()) den = lcm(den, c.den());
  std::vector<std::pair<Mono, BigInt>> terms;
  for (const auto& [e, c] : p.terms()) {
    Mono mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (map[i] == kMaxVars) throw UnknownVariable(p.universe()[i]);
      if (e[i] > 60000) throw Error("exponent too large for Groebner engine");
      mono.e[map[i]] = static_cast<std::uint16_t>(e[i]);
    }
    ring.finish(mono);
    terms.emplace_back(mono, (c * BigRational(den)).num());
  }
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) { return ring.compare(a.first, b.first) > 0; });
  ZPoly g;
  for (auto& [mono, coef] : terms) {
    g.sugar = std::max(g.sugar, mono.total());
    g.m.push_back(mono);
    g.c.push_back(std::move(coef));
  }
  BigRational before = g.empty() ? BigRational(1) : BigRational(g.c.front());
  IntArith(ring).normalize(g);
  if (factor) {
    // g = factor * p
    *factor = g.empty() ? BigRational(1) : BigRational(den) * BigRational(g.c.front()) / before;
  }
  return g;
}

MultiPoly from_zpoly(const ZPoly& g, const Ring& ring, const std::shared_ptr<const Universe>& universe,
                     const BigRational& scale) {
  MultiPoly::TermMap terms;
  for (std::size_t t = 0; t < g.m.size(); ++t) {
    terms.emplace(ring.exponents(g.m[t]), BigRational(g.c[t]) * scale);
  }
  return MultiPoly(universe, std::move(terms));
}

// Coefficient of leading term reduced mod p; BadPrime if it vanishes.
PPoly to_ppoly(const ZPoly& g, std::uint32_t p) {
  PPoly r;
  r.sugar = g.sugar;
  for (std::size_t t = 0; t < g.m.size(); ++t) {
    auto v = static_cast<std::uint32_t>(mpz_fdiv_ui(g.c[t].get_mpz_t(), p));
    if (v == 0) {
      if (t == 0) throw BadPrime{};
      continue;
    }
    r.m.push_back(g.m[t]);
    r.c.push_back(v);
  }
  return r;
}

std::vector<ZPoly> prepare_inputs(const std::vector<MultiPoly>& gens, const Ring& ring) {
  std::vector<ZPoly> inputs;
  for (const auto& g : gens) {
    ZPoly p = to_zpoly(g, ring);
    if (!p.empty()) inputs.push_back(std::move(p));
  }
  if (inputs.empty()) throw Error("buchberger: all generators are zero");
  std::sort(inputs.begin(), inputs.end(),
            [&](const ZPoly& a, const ZPoly& b) { return ring.compare(a.m.front(), b.m.front()) < 0; });
  return inputs;
}

std::vector<ZPoly> basis_zpolys(const GroebnerBasis& basis, const Ring& ring) {
  std::vector<ZPoly> out;
  for (const auto& g : basis.generators) out.push_back(to_zpoly(g, ring));
  return out;
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Rational number congruent to a modulo m with numerator and denominator
// below sqrt(m/2), if one exists.
bool rational_reconstruct(const BigInt& a, const BigInt& m, BigRational& out) {
  BigInt bound = sqrt(BigInt(m / 2));
  BigInt r0 = m, r1 = a % m, t0 = 0, t1 = 1, q, tmp;
  if (r1 < 0) r1 += m;
  while (r1 > bound) {
    q = r0 / r1;
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound || gcd(r1, t1) != 1) return false;
  out = BigRational(r1, t1);
  return true;
}

using ModImage = std::vector<std::map<Exponents, std::uint32_t>>;
using Signature = std::vector<Exponents>;

// Elimination part of the reduced basis modulo p.
ModImage eliminate_mod(const std::vector<ZPoly>& inputs, const Ring& ring, std::uint32_t p, bool keep_all,
                       const GbOptions& options, const Deadline& deadline, Signature& sig) {
  std::vector<PPoly> mod_inputs;
  for (const auto& g : inputs) mod_inputs.push_back(to_ppoly(g, p));
  ModArith arith(ring, p);
  Engine<ModArith> engine(ring, arith, options, deadline);
  for (auto& g : mod_inputs) {
    arith.normalize(g);
    engine.add_input(std::move(g));
  }
  engine.run();
  ModImage image;
  sig.clear();
  for (const auto& g : engine.reduced_basis()) {
    if (!keep_all && g.m.front().deg_hi != 0) continue;
    std::map<Exponents, std::uint32_t> terms;
    for (std::size_t t = 0; t < g.m.size(); ++t) terms.emplace(ring.exponents(g.m[t]), g.c[t]);
    sig.push_back(ring.exponents(g.m.front()));
    image.push_back(std::move(terms));
  }
  return image;
}

std::vector<MultiPoly> eliminate_multimodular(const std::vector<ZPoly>& inputs, const Ring& ring, bool keep_all,
                                              const GbOptions& options, const Deadline& deadline) {
  auto universe = std::make_shared<const Universe>(ring.vars());
  Signature ref_sig;
  std::vector<std::map<Exponents, BigInt>> residues;
  BigInt modulus = 0;
  int agreeing = 0, disagreeing = 0;
  std::optional<std::vector<std::map<Exponents, BigRational>>> candidate;

  std::uint32_t p = 2147483647u;
  for (int used = 0; used < 4000; ++used, --p) {
    while (!is_prime(p)) --p;
    Signature sig;
    ModImage image;
    try {
      image = eliminate_mod(inputs, ring, p, keep_all, options, deadline, sig);
    } catch (const BadPrime&) {
      continue;
    }
    if (modulus == 0 || (sig != ref_sig && disagreeing + 1 > agreeing)) {
      // First image, or the previous reference lost the vote.
      ref_sig = sig;
      residues.assign(image.size(), {});
      for (std::size_t k = 0; k < image.size(); ++k) {
        for (const auto& [e, v] : image[k]) residues[k][e] = v;
      }
      modulus = p;
      agreeing = 1;
      disagreeing = 0;
      candidate.reset();
    } else if (sig != ref_sig) {
      ++disagreeing;
      continue;
    } else {
      if (candidate) {
        bool confirmed = true;
        for (std::size_t k = 0; k < image.size() && confirmed; ++k) {
          std::map<Exponents, std::uint32_t> expect;
          for (const auto& [e, c] : (*candidate)[k]) {
            std::uint32_t den = static_cast<std::uint32_t>(mpz_fdiv_ui(c.den().get_mpz_t(), p));
            if (den == 0) {
              confirmed = false;
              break;
            }
            std::uint32_t num = static_cast<std::uint32_t>(mpz_fdiv_ui(c.num().get_mpz_t(), p));
            ModArith arith(ring, p);
            std::uint32_t v = arith.mul(num, arith.inv(den));
            if (v) expect[e] = v;
          }
          if (confirmed && expect != image[k]) confirmed = false;
        }
        if (confirmed) {
          std::vector<MultiPoly> out;
          for (auto& terms : *candidate) {
            MultiPoly::TermMap tm(terms.begin(), terms.end());
            out.emplace_back(universe, std::move(tm));
          }
          return out;
        }
      }
      // Chinese remaindering into the running residues.
      BigInt bp = static_cast<unsigned long>(p);
      BigInt inv;
      BigInt mmod = modulus % bp;
      mpz_invert(inv.get_mpz_t(), mmod.get_mpz_t(), bp.get_mpz_t());
      for (std::size_t k = 0; k < image.size(); ++k) {
        std::map<Exponents, BigInt> merged;
        for (const auto& [e, r] : residues[k]) merged[e] = r;
        for (const auto& [e, v] : image[k]) merged.try_emplace(e, 0);
        for (auto& [e, r] : merged) {
          auto it = image[k].find(e);
          BigInt v = it == image[k].end() ? BigInt(0) : BigInt(static_cast<unsigned long>(it->second));
          BigInt delta = ((v - r) % bp) * inv % bp;
          if (delta < 0) delta += bp;
          r += modulus * delta;
        }
        residues[k] = std::move(merged);
      }
      modulus *= bp;
      ++agreeing;
    }
    // Try to lift the current residues.
    std::vector<std::map<Exponents, BigRational>> lifted;
    bool ok = true;
    for (std::size_t k = 0; k < residues.size() && ok; ++k) {
      std::map<Exponents, BigRational> terms;
      for (const auto& [e, r] : residues[k]) {
        BigRational q;
        if (!rational_reconstruct(r, modulus, q)) {
          ok = false;
          break;
        }
        if (!q.is_zero()) terms.emplace(e, q);
      }
      lifted.push_back(std::move(terms));
    }
    if (ok) {
      candidate = std::move(lifted);
    } else {
      candidate.reset();
    }
  }
  throw ResourceLimit("multi-modular elimination did not stabilize");
}

}  // namespace

GroebnerBasis buchberger(const std::vector<MultiPoly>& gens, const MonomialOrder& order,
                         const GbOptions& options) {
  Ring ring(order);
  auto universe = std::make_shared<const Universe>(ring.vars());
  Deadline deadline(options, Clock::now());
  IntArith arith(ring);
  Engine<IntArith> engine(ring, arith, options, deadline);
  for (auto& p : prepare_inputs(gens, ring)) engine.add_input(std::move(p));
  engine.run();
  GroebnerBasis out;
  out.order = order;
  out.reduced = true;
  for (const auto& g : engine.reduced_basis()) {
    out.generators.push_back(from_zpoly(g, ring, universe, BigRational(1) / BigRational(g.c.front())));
  }
  return out;
}

MultiPoly normal_form(const MultiPoly& p, const GroebnerBasis& basis) {
  Ring ring(basis.order);
  auto universe = std::make_shared<const Universe>(ring.vars());
  GbOptions options;
  Deadline deadline(options, Clock::now());
  auto gb = basis_zpolys(basis, ring);
  std::vector<const ZPoly*> reducers;
  for (const auto& g : gb) reducers.push_back(&g);
  BigRational factor;
  ZPoly h = to_zpoly(p, ring, &factor);
  BigRational scale = 1;
  ZPoly r = IntArith(ring).reduce(std::move(h), reducers, true, false, deadline, &scale);
  // r = scale * factor * NF(p)
  return from_zpoly(r, ring, universe, BigRational(1) / (scale * factor));
}

MultiPoly leading_monomial(const MultiPoly& p, const MonomialOrder& order) {
  Ring ring(order);
  auto universe = std::make_shared<const Universe>(ring.vars());
  ZPoly g = to_zpoly(p, ring);
  if (g.empty()) throw Error("leading monomial of zero polynomial");
  MultiPoly::TermMap terms;
  terms.emplace(ring.exponents(g.m.front()), BigRational(1));
  return MultiPoly(universe, std::move(terms));
}

bool satisfies_buchberger_criterion(const GroebnerBasis& basis) {
  Ring ring(basis.order);
  GbOptions options;
  Deadline deadline(options, Clock::now());
  IntArith arith(ring);
  auto gb = basis_zpolys(basis, ring);
  std::vector<const ZPoly*> reducers;
  for (const auto& g : gb) reducers.push_back(&g);
  for (std::size_t i = 0; i < gb.size(); ++i) {
    for (std::size_t j = i + 1; j < gb.size(); ++j) {
      ZPoly s = arith.spoly(gb[i], gb[j]);
      if (!arith.reduce(std::move(s), reducers, true, false, deadline).empty()) return false;
    }
  }
  return true;
}

std::vector<MultiPoly> eliminate_vars(const std::vector<MultiPoly>& gens,
                                      const std::vector<std::string>& keep,
                                      const GbOptions& options) {
  Universe ambient;
  for (const auto& g : gens) ambient = merge_universes(ambient, g.used_variables());
  std::vector<std::string> high;
  for (const auto& v : ambient) {
    if (std::find(keep.begin(), keep.end(), v) == keep.end()) high.push_back(v);
  }
  MonomialOrder order = high.empty() ? MonomialOrder::grevlex(keep) : MonomialOrder::block(high, keep);
  auto keep_universe = std::make_shared<const Universe>(keep);

  std::vector<MultiPoly> basis;
  if (options.modular) {
    Ring ring(order);
    Deadline deadline(options, Clock::now());
    basis = eliminate_multimodular(prepare_inputs(gens, ring), ring, high.empty(), options, deadline);
  } else {
    basis = buchberger(gens, order, options).generators;
  }
  std::vector<MultiPoly> out;
  for (const auto& g : basis) {
    bool inside = true;
    for (const auto& v : g.used_variables()) {
      if (std::find(keep.begin(), keep.end(), v) == keep.end()) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(g.with_universe(keep_universe));
  }
  return out;
}

MultiPoly radical_elim_generator(const std::vector<MultiPoly>& gens,
                                 const std::vector<std::string>& keep, const GbOptions& options) {
  auto elim = eliminate_vars(gens, keep, options);
  if (elim.empty()) throw ZeroIdeal("elimination ideal is zero");
  if (elim.size() != 1) {
    throw NonPrincipal("elimination ideal has " + std::to_string(elim.size()) + " generators");
  }
  MultiPoly g = squarefree_part(elim.front());
  if (keep.size() == 1) return g.monic();
  return g;
}


namespace {

// Dense univariate polynomial over Q, constant term first, no trailing zeros.
using Dense = std::vector<BigRational>;

void trim(Dense& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int degree_of(const Dense& a) { return static_cast<int>(a.size()) - 1; }

Dense sub(Dense a, const Dense& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

Dense mul(const Dense& a, const Dense& b) {
  if (a.empty() || b.empty()) return {};
  Dense r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

void divmod(const Dense& a, const Dense& b, Dense& q, Dense& r) {
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, BigRational(0));
  const BigRational inv = BigRational(1) / b.back();
  while (!r.empty() && r.size() >= b.size()) {
    const std::size_t shift = r.size() - b.size();
    const BigRational c = r.back() * inv;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

BigRational eval_dense(const Dense& a, const BigRational& t) {
  BigRational v = 0;
  for (std::size_t i = a.size(); i-- > 0;) v = v * t + a[i];
  return v;
}

// Newton interpolation through (t[i], v[i]).
Dense interpolate_dense(const std::vector<BigRational>& t, const std::vector<BigRational>& v) {
  const std::size_t n = t.size();
  std::vector<BigRational> c = v;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) c[i] = (c[i] - c[i - 1]) / (t[i] - t[i - k]);
  }
  Dense p;
  for (std::size_t i = n; i-- > 0;) {
    p = mul(p, Dense{-t[i], BigRational(1)});
    if (p.empty()) p.push_back(0);
    p[0] += c[i];
    trim(p);
  }
  return p;
}

// Numerator and monic denominator with degrees at most (M-1)/2 and
// M-1-(M-1)/2 agreeing with the M data points, if they exist.
std::optional<std::pair<Dense, Dense>> rational_interpolate(const std::vector<BigRational>& t,
                                                           const std::vector<BigRational>& v) {
  const int M = static_cast<int>(t.size());
  const int a = (M - 1) / 2;
  Dense r0{1};
  for (const auto& ti : t) r0 = mul(r0, Dense{-ti, BigRational(1)});
  Dense r1 = interpolate_dense(t, v);
  Dense s0, s1{BigRational(1)}, q, r;
  while (!r1.empty() && degree_of(r1) > a) {
    divmod(r0, r1, q, r);
    Dense s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (s1.empty() || degree_of(s1) > M - 1 - a) return std::nullopt;
  for (const auto& ti : t) {
    if (eval_dense(s1, ti).is_zero()) return std::nullopt;
  }
  const BigRational lc = s1.back();
  for (auto& x : s1) x /= lc;
  for (auto& x : r1) x /= lc;
  return std::make_pair(std::move(r1), std::move(s1));
}

MultiPoly to_poly(const Dense& a, const std::string& var) {
  MultiPoly x = MultiPoly::variable(var);
  MultiPoly r;
  for (std::size_t i = a.size(); i-- > 0;) r = r * x + MultiPoly::constant(a[i]);
  return r;
}

}  // namespace

MultiPoly radical_elim_bivariate(const std::vector<MultiPoly>& gens, const std::string& param,
                                 const std::string& var, const GbOptions& options) {
  constexpr long kMaxPoints = 400;
  constexpr int kConfirmations = 2;
  int N = -1;
  int zero_fibers = 0;
  std::vector<BigRational> ts;
  std::vector<std::vector<BigRational>> values;  // values[k][m]: coefficient of var^k at ts[m]
  std::vector<std::pair<Dense, Dense>> candidate;
  int confirmed = 0;
  for (long point = 1; point <= kMaxPoints; ++point) {
    const BigRational t(point);
    std::vector<MultiPoly> fiber;
    const std::map<std::string, BigRational> at{{param, t}};
    for (const auto& g : gens) fiber.push_back(g.substitute(at));
    MultiPoly u;
    try {
      u = radical_elim_generator(fiber, {var}, options);
    } catch (const ZeroIdeal&) {
      if (++zero_fibers >= 5 && N < 0) throw;
      continue;
    }
    const int d = u.degree(var);
    if (d < N) continue;
    if (d > N) {
      N = d;
      ts.clear();
      values.assign(static_cast<std::size_t>(N) + 1, {});
      candidate.clear();
      confirmed = 0;
    }
    std::vector<BigRational> c(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) c[k] = u.coeff_of(var, static_cast<unsigned>(k)).constant_term();
    if (!candidate.empty()) {
      bool ok = true;
      for (int k = 0; k <= N && ok; ++k) {
        const BigRational den = eval_dense(candidate[k].second, t);
        ok = !den.is_zero() && eval_dense(candidate[k].first, t) / den == c[k];
      }
      if (ok) {
        ++confirmed;
      } else {
        candidate.clear();
        confirmed = 0;
      }
    }
    ts.push_back(t);
    for (int k = 0; k <= N; ++k) values[k].push_back(c[k]);
    if (!candidate.empty() && confirmed >= kConfirmations) break;
    if (candidate.empty()) {
      for (int k = 0; k <= N; ++k) {
        auto nd = rational_interpolate(ts, values[k]);
        if (!nd) {
          candidate.clear();
          break;
        }
        candidate.push_back(std::move(*nd));
      }
    }
  }
  if (candidate.empty() || confirmed < kConfirmations) {
    throw DegreeDrop("eliminant in (" + param + ", " + var + ") did not stabilize");
  }
  MultiPoly common = MultiPoly::constant(1);
  for (const auto& [num, den] : candidate) {
    MultiPoly d = to_poly(den, param);
    common = exact_divide(common * d, gcd_poly(common, d));
  }
  const auto universe = std::make_shared<const Universe>(Universe{param, var});
  MultiPoly x = MultiPoly::variable(var);
  MultiPoly result(Universe{param, var});
  for (int k = N; k >= 0; --k) {
    const auto& [num, den] = candidate[k];
    MultiPoly coef = exact_divide(common, to_poly(den, param)) * to_poly(num, param);
    result = result * x + coef;
  }
  // Lines param = const inside the projection are invisible to the generic
  // fibers above. Every such line meets the fiber over a fixed value of var,
  // so their product is the common part of a few eliminants onto param.
  std::optional<MultiPoly> content;
  for (const BigRational& x0 : {BigRational(3, 7), BigRational(5, 11), BigRational(8, 13)}) {
    std::vector<MultiPoly> fiber;
    const std::map<std::string, BigRational> at{{var, x0}};
    for (const auto& g : gens) fiber.push_back(g.substitute(at));
    MultiPoly v;
    try {
      v = radical_elim_generator(fiber, {param}, options);
    } catch (const ZeroIdeal&) {
      continue;
    }
    content = content ? gcd_poly(*content, v) : v;
  }
  if (content && !content->is_constant()) result *= *content;
  return result.with_universe(universe).normalized();
}

}  // namespace mlelim
