#include "mlelim/polyalg.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "mlelim/errors.hpp"

namespace mlelim {

namespace {

struct GrevlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grevlex_greater(a, b); }
};

using WorkMap = std::map<Exponents, BigRational, GrevlexGreater>;

bool divides(const Exponents& d, const Exponents& m) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > m[i]) return false;
  }
  return true;
}

// Shared core of divide / try_exact_divide. With `exact` set, stops at the
// first non-divisible leading term.
std::optional<DivisionResult> divide_impl(const MultiPoly& a0, const MultiPoly& b0, bool exact) {
  if (b0.is_zero()) throw DivisionFailure("division by zero polynomial");
  auto [a, b] = align(a0, b0);
  const auto& up = a.universe_ptr();
  WorkMap work(a.terms().begin(), a.terms().end());
  std::vector<std::pair<Exponents, BigRational>> divisor(b.terms().begin(), b.terms().end());
  std::sort(divisor.begin(), divisor.end(),
            [](const auto& x, const auto& y) { return grevlex_greater(x.first, y.first); });
  const Exponents& lm = divisor.front().first;
  const BigRational lc_inv = divisor.front().second.inverse();
  const std::size_t n = up->size();

  MultiPoly::TermMap quot, rem;
  Exponents shift(n), e(n);
  while (!work.empty()) {
    auto lead = work.begin();
    if (!divides(lm, lead->first)) {
      if (exact) return std::nullopt;
      rem.emplace(lead->first, lead->second);
      work.erase(lead);
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) shift[i] = lead->first[i] - lm[i];
    BigRational factor = lead->second * lc_inv;
    quot.emplace(shift, factor);
    work.erase(lead);
    for (std::size_t t = 1; t < divisor.size(); ++t) {
      for (std::size_t i = 0; i < n; ++i) e[i] = divisor[t].first[i] + shift[i];
      BigRational delta = divisor[t].second * factor;
      auto [it, inserted] = work.try_emplace(e, -delta);
      if (!inserted) {
        it->second -= delta;
        if (it->second.is_zero()) work.erase(it);
      }
    }
  }
  return DivisionResult{MultiPoly(up, std::move(quot)), MultiPoly(up, std::move(rem))};
}

MultiPoly one_like(const MultiPoly& p) {
  return MultiPoly(p.universe_ptr(), {{Exponents(p.universe().size(), 0), BigRational(1)}});
}

MultiPoly primitive_in(const MultiPoly& p, std::string_view var) {
  return exact_divide(p, content_in(p, var));
}

// Subresultant PRS gcd of two polynomials primitive in `var`, both of
// positive degree in `var`. Returns the primitive part of the last
// nonzero subresultant.
MultiPoly subresultant_gcd(MultiPoly a, MultiPoly b, std::string_view var) {
  if (a.degree(var) < b.degree(var)) std::swap(a, b);
  MultiPoly g = one_like(a);
  MultiPoly h = one_like(a);
  for (;;) {
    int delta = a.degree(var) - b.degree(var);
    MultiPoly r = pseudo_remainder(a, b, var);
    if (r.is_zero()) return primitive_in(b, var);
    if (r.degree(var) == 0) return one_like(a);
    a = std::move(b);
    b = exact_divide(r, g * h.pow(static_cast<unsigned>(delta)));
    g = a.lcoeff(var);
    if (delta > 0) {
      h = exact_divide(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
}

// Exact sufficient test for gcd(a, b) = 1 when both are primitive in `var`:
// a common factor of positive degree keeps its degree under any
// specialization that preserves both leading coefficients, so a univariate
// gcd of 1 at such a point rules it out.
bool coprime_by_specialization(const MultiPoly& a, const MultiPoly& b, std::string_view var) {
  std::vector<std::string> others;
  for (const auto& v : merge_universes(a.used_variables(), b.used_variables())) {
    if (v != var) others.push_back(v);
  }
  if (others.empty()) return false;
  const int da = a.degree(var), db = b.degree(var);
  for (long attempt = 0; attempt < 3; ++attempt) {
    std::map<std::string, BigRational> at;
    for (std::size_t k = 0; k < others.size(); ++k) {
      at[others[k]] = BigRational(static_cast<long>(7 * k + 3 + 13 * attempt), static_cast<long>(k + 2 + attempt));
    }
    MultiPoly sa = a.substitute(at);
    MultiPoly sb = b.substitute(at);
    if (sa.degree(var) != da || sb.degree(var) != db) continue;
    return gcd_poly(sa, sb).is_constant();
  }
  return false;
}

}  // namespace

DivisionResult divide(const MultiPoly& a, const MultiPoly& b) { return *divide_impl(a, b, false); }

std::optional<MultiPoly> try_exact_divide(const MultiPoly& a, const MultiPoly& b) {
  auto r = divide_impl(a, b, true);
  if (!r) return std::nullopt;
  return std::move(r->quotient);
}

MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b) {
  auto q = try_exact_divide(a, b);
  if (!q) throw DivisionFailure("inexact polynomial division");
  return std::move(*q);
}

MultiPoly pseudo_remainder(const MultiPoly& a0, const MultiPoly& b0, std::string_view var) {
  auto [a, b] = align(a0, b0);
  const int db = b.degree(var);
  if (db < 0) throw DivisionFailure("pseudo-remainder by zero");
  MultiPoly r = a;
  const MultiPoly lb = b.lcoeff(var);
  int e = std::max(a.degree(var) - db + 1, 0);
  const MultiPoly x = MultiPoly::variable(std::string(var), a.universe()).with_universe(a.universe_ptr());
  while (!r.is_zero() && r.degree(var) >= db) {
    int d = r.degree(var);
    MultiPoly lr = r.lcoeff(var);
    r = lb * r - lr * x.pow(static_cast<unsigned>(d - db)) * b;
    --e;
  }
  if (e > 0) r = lb.pow(static_cast<unsigned>(e)) * r;
  return r;
}

MultiPoly content_in(const MultiPoly& p, std::string_view var) {
  int d = p.degree(var);
  if (d < 0) return p;
  MultiPoly c;
  bool first = true;
  for (int k = d; k >= 0; --k) {
    MultiPoly coeff = p.coeff_of(var, static_cast<unsigned>(k));
    if (coeff.is_zero()) continue;
    c = first ? coeff.normalized() : gcd_poly(c, coeff);
    first = false;
    if (c.is_constant()) return one_like(p);
  }
  return c.with_universe(p.universe_ptr());
}

MultiPoly gcd_poly(const MultiPoly& a0, const MultiPoly& b0) {
  auto [a, b] = align(a0, b0);
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  if (a.is_constant() || b.is_constant()) return one_like(a);

  Universe vars = merge_universes(a.used_variables(), b.used_variables());
  std::string main;
  int best = std::numeric_limits<int>::max();
  for (const auto& v : vars) {
    int d = std::max(a.degree(v), b.degree(v));
    if (d < best) {
      best = d;
      main = v;
    }
  }
  if (a.degree(main) == 0) return gcd_poly(a, content_in(b, main));
  if (b.degree(main) == 0) return gcd_poly(content_in(a, main), b);

  MultiPoly ca = content_in(a, main);
  MultiPoly cb = content_in(b, main);
  MultiPoly c = gcd_poly(ca, cb);
  MultiPoly pa = exact_divide(a, ca);
  MultiPoly pb = exact_divide(b, cb);
  if (coprime_by_specialization(pa, pb, main)) return c.normalized().with_universe(a.universe_ptr());
  MultiPoly g = subresultant_gcd(pa, pb, main);
  return (c * g).normalized().with_universe(a.universe_ptr());
}

MultiPoly squarefree_part(const MultiPoly& p) {
  if (p.is_zero()) throw Error("squarefree part of zero polynomial");
  if (p.is_constant()) return one_like(p);
  MultiPoly g = p;
  for (const auto& v : p.used_variables()) {
    g = gcd_poly(g, p.derivative(v));
    if (g.is_constant()) break;
  }
  return exact_divide(p, g).normalized();
}

Multiplicity factor_multiplicity(const MultiPoly& p, const MultiPoly& f) {
  if (p.is_zero()) throw Error("factor multiplicity in zero polynomial");
  if (f.is_constant()) throw Error("factor multiplicity of a constant");
  int k = 0;
  MultiPoly cur = p;
  while (auto q = try_exact_divide(cur, f)) {
    cur = std::move(*q);
    ++k;
  }
  return {k, cur};
}

}  // namespace mlelim
