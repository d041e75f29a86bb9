#include "mlelim/interpolate.hpp"

#include <algorithm>
#include <functional>

#include "mlelim/errors.hpp"
#include "mlelim/linalg.hpp"
#include "mlelim/polyalg.hpp"

namespace mlelim {

namespace {

std::map<std::string, BigRational> binding(const std::vector<std::string>& names,
                                        const std::vector<BigRational>& values) {
  if (names.size() != values.size()) throw Error("binding size mismatch");
  std::map<std::string, BigRational> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.emplace(names[i], values[i]);
  return out;
}

std::vector<std::string> tail_parameters(const LagrangeSystem& sys) {
  return {sys.parameters.begin() + 1, sys.parameters.end()};
}

// Runs `body` until it succeeds, resampling on degenerate samples.
template <typename Body>
auto with_retries(int retries, Body body) -> decltype(body()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return body();
    } catch (const Degeneracy&) {
      if (attempt >= retries) throw;
    }
  }
}

void count(std::size_t* samples, std::size_t k = 1) {
  if (samples) *samples += k;
}

// Evaluates a monomial over the parameter list at a point.
BigRational eval_monomial(const Exponents& e, const std::vector<BigRational>& point) {
  BigRational v = 1;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i]) v *= point[i].pow(e[i]);
  }
  return v;
}

MultiPoly monomial_poly(const Exponents& e, const BigRational& c,
                        const std::shared_ptr<const Universe>& universe) {
  return MultiPoly(universe, {{e, c}});
}

// Solves the square system on the first rows and checks that every
// remaining row is satisfied exactly.
std::vector<BigRational> solve_and_check(const std::vector<std::vector<BigRational>>& rows,
                                         const std::vector<BigRational>& rhs, std::size_t unknowns) {
  std::vector<BigRational> x;
  if (unknowns > 0) {
    if (rows.size() < unknowns) throw Error("not enough samples for interpolation");
    RatMatrix m(unknowns, unknowns);
    std::vector<BigRational> b(unknowns);
    for (std::size_t r = 0; r < unknowns; ++r) {
      for (std::size_t c = 0; c < unknowns; ++c) m(r, c) = rows[r][c];
      b[r] = rhs[r];
    }
    x = solve_exact(m, b);
  }
  for (std::size_t r = unknowns; r < rows.size(); ++r) {
    BigRational acc = 0;
    for (std::size_t c = 0; c < unknowns; ++c) acc += rows[r][c] * x[c];
    if (acc != rhs[r]) throw VerificationFailed("interpolated coefficients disagree with a further sample");
  }
  return x;
}

}  // namespace

std::vector<Exponents> bounded_monomials(std::size_t nvars, int total, const std::vector<int>& caps) {
  std::vector<Exponents> out;
  if (total < 0) return out;
  Exponents cur(nvars, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == nvars) {
      if (left <= caps[i]) {
        cur[i] = static_cast<std::uint32_t>(left);
        out.push_back(cur);
      }
      return;
    }
    for (int k = std::min(left, caps[i]); k >= 0; --k) {
      cur[i] = static_cast<std::uint32_t>(k);
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  if (nvars == 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  rec(0, total);
  std::sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) { return grevlex_greater(a, b); });
  return out;
}

LagrangeSystem specialize(const LagrangeSystem& sys, const std::vector<std::string>& names,
                          const std::vector<BigRational>& values) {
  auto b = binding(names, values);
  LagrangeSystem out;
  for (const auto& f : sys.equations) out.equations.push_back(f.substitute(b));
  for (const auto& p : sys.parameters) {
    if (!b.count(p)) out.parameters.push_back(p);
  }
  out.unknowns = sys.unknowns;
  out.sum_form = sys.sum_form.substitute(b);
  out.source = sys.source;
  return out;
}

DegreeProfile degrees(const LagrangeSystem& sys, SampleStream& rng, const PipelineOptions& opts) {
  const std::size_t n1 = sys.parameters.size();
  const std::string& p0 = sys.first_unknown();
  bool only_degree_failures = true;
  for (int attempt = 0;; ++attempt) {
    try {
      std::vector<BigRational> b = rng.point(n1);
      DegreeProfile prof;
      std::vector<int> alpha_ref;
      for (std::size_t j = 0; j < n1; ++j) {
        const std::string& uj = sys.parameters[j];
        std::vector<std::string> names;
        std::vector<BigRational> values;
        for (std::size_t k = 0; k < n1; ++k) {
          if (k == j) continue;
          names.push_back(sys.parameters[k]);
          values.push_back(b[k]);
        }
        LagrangeSystem spec = specialize(sys, names, values);
        MultiPoly g;
        try {
          g = radical_elim_bivariate(spec.equations, uj, p0, opts.gb);
        } catch (const ZeroIdeal&) {
          throw NotGeneralZeroDimensional("the eliminant in (" + uj + ", " + p0 + ") is zero");
        }
        const int N = g.degree(p0);
        if (N < 1) throw NotGeneralZeroDimensional("eliminant does not involve " + p0);
        if (j == 0) {
          prof.N = N;
          prof.L.assign(n1, 0);
          prof.Omega.assign(static_cast<std::size_t>(N), std::vector<int>(n1, -1));
        } else if (N != prof.N) {
          throw InconsistentDegrees("ML-degree " + std::to_string(N) + " for " + uj + " differs from " +
                                    std::to_string(prof.N));
        }
        MultiPoly factor = spec.sum_form.normalized();
        const bool has_factor = factor.degree(uj) == 1 && factor.used_variables().size() == 1;
        std::vector<int> alpha(static_cast<std::size_t>(N) + 1, 0);
        for (int i = 0; i <= N; ++i) {
          MultiPoly c = g.coeff_of(p0, static_cast<unsigned>(i));
          if (i < N) prof.Omega[i][j] = c.degree(uj);
          if (!c.is_zero() && has_factor) alpha[i] = factor_multiplicity(c, factor).k;
        }
        prof.L[j] = g.lcoeff(p0).degree(uj);
        if (has_factor) {
          if (alpha_ref.empty()) {
            alpha_ref = alpha;
          } else if (alpha != alpha_ref) {
            only_degree_failures = false;
            throw InconsistentDegrees("S(u) multiplicities differ between parameters");
          }
        }
      }
      prof.alpha = alpha_ref.empty() ? std::vector<int>(static_cast<std::size_t>(prof.N) + 1, 0) : alpha_ref;
      return prof;
    } catch (const InconsistentDegrees& e) {
      if (attempt >= opts.retries) {
        if (only_degree_failures) {
          throw NotGeneralZeroDimensional(std::string("degree instability across samples: ") + e.what());
        }
        throw;
      }
    } catch (const Degeneracy&) {
      only_degree_failures = false;
      if (attempt >= opts.retries) throw;
    }
  }
}

MultiPoly intersect_for_lc(const LagrangeSystem& sys, const std::vector<BigRational>& b, int alphaN,
                           const PipelineOptions& opts) {
  const std::string& u0 = sys.parameters.front();
  const std::string& p0 = sys.first_unknown();
  LagrangeSystem spec = specialize(sys, tail_parameters(sys), b);
  MultiPoly factor = spec.sum_form.normalized();
  if (alphaN > 0 && factor.degree(u0) < 1) {
    throw UnexpectedMultiplicity("sum form is constant at this sample");
  }
  MultiPoly g = radical_elim_bivariate(spec.equations, u0, p0, opts.gb);
  MultiPoly q = g.lcoeff(p0);
  for (int k = 0; k < alphaN; ++k) {
    auto next = try_exact_divide(q, factor);
    if (!next) throw UnexpectedMultiplicity("leading coefficient lacks the expected power of S");
    q = std::move(*next);
  }
  return q.with_universe(Universe{u0}).monic();
}

MultiPoly leading_coefficient(const LagrangeSystem& sys, int alphaN, const std::vector<int>& L,
                              SampleStream& rng, const PipelineOptions& opts, std::size_t* samples) {
  const std::size_t n1 = sys.parameters.size();
  const std::string& u0 = sys.parameters.front();
  const int d = L.at(0) - alphaN;
  if (d < 0) throw InconsistentDegrees("leading coefficient degree below its S-power");
  auto universe = std::make_shared<const Universe>(sys.parameters);

  std::vector<int> caps;
  for (std::size_t j = 1; j < n1; ++j) caps.push_back(L.at(j) - alphaN);
  std::vector<std::vector<Exponents>> monos(static_cast<std::size_t>(d));
  std::size_t t = 0;
  for (int i = 0; i < d; ++i) {
    monos[i] = bounded_monomials(n1 - 1, d - i, caps);
    t = std::max(t, monos[i].size());
  }

  MultiPoly R = MultiPoly::variable(u0, sys.parameters).pow(static_cast<unsigned>(d));
  if (t > 0) {
    R = with_retries(opts.retries, [&]() {
      const std::size_t count_samples = t + 1;
      std::vector<std::vector<BigRational>> points;
      std::vector<MultiPoly> qs;
      for (std::size_t k = 0; k < count_samples; ++k) {
        points.push_back(rng.point(n1 - 1));
        count(samples);
        MultiPoly q = intersect_for_lc(sys, points.back(), alphaN, opts);
        if (q.degree(u0) != d) throw DegreeDrop("leading coefficient sample has the wrong degree in " + u0);
        qs.push_back(std::move(q));
      }
      MultiPoly acc = MultiPoly::variable(u0, sys.parameters).pow(static_cast<unsigned>(d));
      for (int i = 0; i < d; ++i) {
        std::vector<std::vector<BigRational>> rows;
        std::vector<BigRational> rhs;
        for (std::size_t k = 0; k < count_samples; ++k) {
          std::vector<BigRational> row;
          for (const auto& e : monos[i]) row.push_back(eval_monomial(e, points[k]));
          rows.push_back(std::move(row));
          rhs.push_back(qs[k].coeff_of(u0, static_cast<unsigned>(i)).constant_term());
        }
        auto c = solve_and_check(rows, rhs, monos[i].size());
        for (std::size_t r = 0; r < monos[i].size(); ++r) {
          Exponents e(n1, 0);
          e[0] = static_cast<std::uint32_t>(i);
          for (std::size_t j = 1; j < n1; ++j) e[j] = monos[i][r][j - 1];
          acc += monomial_poly(e, c[r], universe);
        }
      }
      return acc;
    });
  }
  return (sys.sum_form.pow(static_cast<unsigned>(alphaN)) * R).with_universe(universe);
}

MultiPoly intersect(const LagrangeSystem& sys, const std::vector<BigRational>& b, int expected_degree,
                    const PipelineOptions& opts) {
  const std::string& p0 = sys.first_unknown();
  LagrangeSystem spec = specialize(sys, sys.parameters, b);
  MultiPoly g;
  try {
    g = radical_elim_generator(spec.equations, {p0}, opts.gb);
  } catch (const ZeroIdeal&) {
    throw DegreeDrop("specialized system is not zero-dimensional");
  }
  if (expected_degree >= 0 && g.degree(p0) < expected_degree) {
    throw DegreeDrop("specialized eliminant has degree " + std::to_string(g.degree(p0)));
  }
  if (expected_degree >= 0 && g.degree(p0) > expected_degree) {
    throw InconsistentDegrees("specialized eliminant exceeds the ML-degree");
  }
  return g.with_universe(Universe{p0});
}

std::vector<MultiPoly> coefficients(const LagrangeSystem& sys, const MultiPoly& A_N, const DegreeProfile& profile,
                                    SampleStream& rng, const PipelineOptions& opts, std::size_t* samples) {
  const std::size_t n1 = sys.parameters.size();
  const std::string& p0 = sys.first_unknown();
  const int N = profile.N;
  const int D = A_N.total_degree();
  auto universe = std::make_shared<const Universe>(sys.parameters);

  std::vector<std::vector<Exponents>> monos(static_cast<std::size_t>(N));
  std::vector<bool> zero(static_cast<std::size_t>(N), false);
  std::size_t t = 0;
  for (int i = 0; i < N; ++i) {
    const auto& row = profile.Omega.at(i);
    zero[i] = std::all_of(row.begin(), row.end(), [](int v) { return v < 0; });
    if (zero[i]) continue;
    std::vector<int> caps;
    for (int v : row) caps.push_back(v - profile.alpha[i]);
    monos[i] = bounded_monomials(n1, D - profile.alpha[i], caps);
    t = std::max(t, monos[i].size());
  }

  return with_retries(opts.retries, [&]() {
    const std::size_t count_samples = t + 1;
    std::vector<std::vector<BigRational>> points;
    std::vector<BigRational> an, sv;
    std::vector<MultiPoly> gs;
    for (std::size_t k = 0; k < count_samples; ++k) {
      points.push_back(rng.point(n1));
      auto b = binding(sys.parameters, points.back());
      an.push_back(A_N.eval(b));
      sv.push_back(sys.sum_form.eval(b));
      if (an.back().is_zero()) throw DivideByZero("A_N vanishes at the sample");
      count(samples);
      gs.push_back(intersect(sys, points.back(), N, opts));
    }
    std::vector<MultiPoly> out;
    for (int i = 0; i < N; ++i) {
      std::vector<std::vector<BigRational>> rows;
      std::vector<BigRational> rhs;
      for (std::size_t k = 0; k < count_samples; ++k) {
        BigRational scale = sv[k].pow(static_cast<unsigned>(profile.alpha[i])) / an[k];
        std::vector<BigRational> row;
        for (const auto& e : monos[i]) row.push_back(eval_monomial(e, points[k]) * scale);
        rows.push_back(std::move(row));
        rhs.push_back(gs[k].coeff_of(p0, static_cast<unsigned>(i)).constant_term());
      }
      auto c = solve_and_check(rows, rhs, monos[i].size());
      MultiPoly R(*universe);
      for (std::size_t r = 0; r < monos[i].size(); ++r) R += monomial_poly(monos[i][r], c[r], universe);
      out.push_back((sys.sum_form.pow(static_cast<unsigned>(profile.alpha[i])) * R).with_universe(universe));
    }
    return out;
  });
}

int leading_total_degree(const LagrangeSystem& sys, SampleStream& rng, const PipelineOptions& opts) {
  const std::string tau = "line_t";
  const std::string& p0 = sys.first_unknown();
  int best = -1;
  for (int line = 0; line < 2; ++line) {
    std::map<std::string, MultiPoly> sub;
    for (const auto& u : sys.parameters) {
      BigRational slope = rng.next();
      BigRational offset = rng.next();
      sub.emplace(u, slope * MultiPoly::variable(tau) + MultiPoly::constant(offset));
    }
    std::vector<MultiPoly> eqs;
    for (const auto& f : sys.equations) eqs.push_back(f.substitute(sub));
    MultiPoly g = radical_elim_bivariate(eqs, tau, p0, opts.gb);
    best = std::max(best, g.lcoeff(p0).degree(tau));
  }
  return best;
}

bool ensure_assumption_a1(const LagrangeSystem& sys, const DegreeProfile& profile, SampleStream& rng,
                          const PipelineOptions& opts) {
  return profile.L.at(0) == leading_total_degree(sys, rng, opts);
}

Reparameterization reparameterize(const LagrangeSystem& sys, const std::vector<BigRational>& b) {
  if (b.size() + 1 != sys.parameters.size()) throw Error("reparameterize: need one scale per parameter u_1..u_n");
  const std::string& u0 = sys.parameters.front();
  MultiPoly v0 = MultiPoly::variable(u0);
  Reparameterization r;
  for (std::size_t j = 1; j < sys.parameters.size(); ++j) {
    const std::string& uj = sys.parameters[j];
    if (b[j - 1].is_zero()) throw Error("reparameterize: zero scale");
    MultiPoly vj = MultiPoly::variable(uj);
    r.to_new.emplace(uj, (vj - v0) * b[j - 1].inverse());
    r.to_old.emplace(uj, b[j - 1] * vj + v0);
  }
  r.system = sys;
  for (auto& f : r.system.equations) f = f.substitute(r.to_new);
  r.system.sum_form = sys.sum_form.substitute(r.to_new);
  return r;
}

Reparameterization reparameterize(const LagrangeSystem& sys, SampleStream& rng) {
  return reparameterize(sys, rng.point(sys.parameters.size() - 1));
}

MultiPoly normalize_a2(const MultiPoly& E_f, const LagrangeSystem& sys) {
  const std::string& u0 = sys.parameters.front();
  const std::string& p0 = sys.first_unknown();
  MultiPoly E = E_f.with_universe(sys.kept_variables());
  if (E.is_zero()) throw Error("normalize_a2: zero eliminant");
  MultiPoly lc = E.lcoeff(p0);
  const int D = lc.total_degree();
  MultiPoly pure = lc.coeff_of(u0, static_cast<unsigned>(D));
  BigRational c = pure.is_constant() ? pure.constant_term() : BigRational(0);
  if (c.is_zero()) c = lc.with_universe(sys.kept_variables()).leading_coefficient();
  return E * c.inverse();
}

MultiPoly eliminate_groebner(const LagrangeSystem& sys, const PipelineOptions& opts) {
  return normalize_a2(radical_elim_generator(sys.equations, sys.kept_variables(), opts.gb), sys);
}

EliminationResult eliminate_interpolate(const LagrangeSystem& sys, std::uint64_t seed, const PipelineOptions& opts) {
  SampleStream rng(seed);
  EliminationResult result;
  result.seed = seed;
  const std::string& p0 = sys.first_unknown();

  auto run = [&]() {
    LagrangeSystem work = sys;
    std::optional<Reparameterization> rep;
    DegreeProfile prof = degrees(work, rng, opts);
    result.samples_used += work.parameters.size();
    for (int k = 0; !ensure_assumption_a1(work, prof, rng, opts); ++k) {
      if (k >= opts.retries) throw AssumptionA1Violated("no reparameterization satisfies the leading-term assumption");
      rep = reparameterize(sys, rng);
      work = rep->system;
      prof = degrees(work, rng, opts);
      result.samples_used += work.parameters.size();
    }
    const int N = prof.N;
    MultiPoly A_N = leading_coefficient(work, prof.alpha[N], prof.L, rng, opts, &result.samples_used);
    std::vector<MultiPoly> A = coefficients(work, A_N, prof, rng, opts, &result.samples_used);

    auto p = MultiPoly::variable(p0, work.kept_variables());
    MultiPoly E = A_N * p.pow(static_cast<unsigned>(N));
    for (int i = 0; i < N; ++i) E += A[i] * p.pow(static_cast<unsigned>(i));
    E = E.with_universe(work.kept_variables());

    // Fresh verification sample.
    std::vector<BigRational> b;
    BigRational an;
    do {
      b = rng.point(work.parameters.size());
      an = A_N.eval(binding(work.parameters, b));
    } while (an.is_zero());
    ++result.samples_used;
    MultiPoly expected = intersect(work, b, N, opts);
    MultiPoly got = (E.substitute(binding(work.parameters, b)) * an.inverse()).with_universe(Universe{p0});
    if (!(got == expected)) throw VerificationFailed("interpolated eliminant fails the verification sample");

    if (rep) E = E.substitute(rep->to_old);
    result.E_f = normalize_a2(E, sys);
    result.profile = prof;
    result.reparameterized = rep.has_value();
    result.verified = true;
  };
  with_retries(opts.retries, run);
  return result;
}

StructureConstants structure_constants_at(const ModelSpec& m, const std::vector<BigRational>& b,
                                          const PipelineOptions& opts) {
  LagrangeSystem f = likelihood_system(m);
  LagrangeSystem F = scaled_system(m).as_system();
  const std::string& u0 = f.parameters.front();
  const std::string& p0 = f.first_unknown();
  const std::string& x0 = F.first_unknown();
  LagrangeSystem fs = specialize(f, tail_parameters(f), b);
  LagrangeSystem Fs = specialize(F, tail_parameters(F), b);

  MultiPoly gstar = radical_elim_bivariate(fs.equations, u0, p0, opts.gb);
  MultiPoly Gstar = radical_elim_bivariate(Fs.equations, u0, x0, opts.gb);
  MultiPoly s = fs.sum_form.normalized();
  MultiPoly H = Gstar.substitute(std::map<std::string, MultiPoly>{{x0, s * MultiPoly::variable(p0)}});

  StructureConstants sc;
  sc.N = gstar.degree(p0);
  sc.l = try_exact_divide(gstar, s).has_value() ? 1 : 0;
  sc.delta = try_exact_divide(Gstar, s).has_value() ? 1 : 0;
  auto q = try_exact_divide(H, gstar);
  if (!q) throw InconsistentStructure("specialized scaled eliminant is not a multiple of g*");
  auto [k, C] = factor_multiplicity(*q, s);
  sc.t = k + sc.l;
  sc.C_spec = C;
  return sc;
}

StructureConstants structure_constants(const ModelSpec& m, SampleStream& rng, const PipelineOptions& opts) {
  return with_retries(opts.retries, [&]() {
    StructureConstants a = structure_constants_at(m, rng.point(m.n()), opts);
    StructureConstants b = structure_constants_at(m, rng.point(m.n()), opts);
    if (a.N != b.N || a.t != b.t || a.l != b.l || a.delta != b.delta) {
      throw InconsistentStructure("structure constants differ between two samples");
    }
    return a;
  });
}

}  // namespace mlelim
