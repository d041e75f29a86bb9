// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero if
// any criterion fails. argv[1] is the path of the command-line tool.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mlelim/discriminant.hpp"
#include "mlelim/errors.hpp"
#include "mlelim/interpolate.hpp"
#include "mlelim/polyalg.hpp"

using namespace mlelim;

namespace {

std::string g_cli;

MultiPoly P(const char* s) { return parse_poly(s); }

struct Report {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  Outcome o;
  std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  const std::string prefix = key + ": ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

MultiPoly die_eliminant_times_ten() {
  MultiPoly S = P("u0 + u1 + u2 + u3");
  MultiPoly p0 = P("p0");
  return BigRational(10) * S.pow(2) * p0.pow(3) - P("43*u0 + 20*u1 + 15*u2 + 8*u3") * S * p0.pow(2) +
         BigRational(2) * P("u0") * P("29*u0 + 23*u1 + 21*u2 + 14*u3") * p0 - P("24*u0^2");
}

std::vector<BigRational> Q(std::initializer_list<long> xs) {
  std::vector<BigRational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

bool divisible_by_power(MultiPoly p, const MultiPoly& s, int k) {
  for (int i = 0; i < k; ++i) {
    auto q = try_exact_divide(p, s);
    if (!q) return false;
    p = std::move(*q);
  }
  return true;
}

// Equality of E_f with the direct route on random full specializations of
// the parameters: the specialized system is eliminated down to p0 directly.
bool agrees_on_specializations(const LagrangeSystem& sys, const MultiPoly& E, int count, std::uint64_t seed) {
  SampleStream rng(seed);
  for (int k = 0; k < count; ++k) {
    std::vector<BigRational> b;
    for (std::size_t i = 0; i < sys.parameters.size(); ++i) b.emplace_back(static_cast<long>(rng.next_uint()));
    LagrangeSystem spec = specialize(sys, sys.parameters, b);
    MultiPoly direct = radical_elim_generator(spec.equations, {sys.first_unknown()});
    std::map<std::string, MultiPoly> at;
    for (std::size_t i = 0; i < b.size(); ++i) at[sys.parameters[i]] = MultiPoly::constant(b[i]);
    if (E.substitute(at).normalized() != direct.normalized()) return false;
  }
  return true;
}

const char* const kCorpus[] = {"die", "fair_coin", "random_censoring", "zero_diagonal_3x3", "grassmannian_2_4"};

Report criterion1() {
  Report r;
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = run_cli("eliminate --model die --method interpolate");
  r.check(o.code == 0, "exit code 0");
  MultiPoly E = parse_poly(field(o.out, "E_f"));
  r.check(E == die_eliminant_times_ten() * BigRational(1, 10), "E_f equals the known die eliminant / 10");
  MultiPoly S = P("u0 + u1 + u2 + u3");
  r.check(E.lcoeff("p0") == S.pow(2), "lcoeff is S(u)^2");
  const long ms = elapsed_ms(t0);
  r.check(ms < 10000, "runtime under 10 s");
  r.note("runtime " + std::to_string(ms) + " ms");
  return r;
}

Report criterion2() {
  Report r;
  const LagrangeSystem sys = likelihood_system(builtin_model("die"));
  SampleStream rng(0);
  DegreeProfile prof = degrees(sys, rng);
  r.check(prof.N == 3, "N = 3");
  r.check(prof.alpha == std::vector<int>{0, 0, 1, 2}, "alpha = (0,0,1,2)");
  r.check(prof.L == std::vector<int>{2, 2, 2, 2}, "L = [2,2,2,2]");
  r.check(prof.Omega == std::vector<std::vector<int>>{{2, 0, 0, 0}, {2, 1, 1, 1}, {2, 2, 2, 2}}, "Omega");
  r.check(intersect(sys, Q({5, 6, 11, 32}), 3) == P("p0^3 - 7/5*p0^2 + 481/1458*p0 - 5/243"),
          "univariate eliminant at (5,6,11,32)");
  return r;
}

Report criterion3(long direct_budget_ms) {
  Report r;
  struct Case {
    const char* name;
    int degree;
  };
  const Case cases[] = {{"die", 3}, {"fair_coin", 1}, {"random_censoring", 3}, {"zero_diagonal_3x3", 2},
                        {"grassmannian_2_4", 4}};
  for (const auto& c : cases) {
    const LagrangeSystem sys = likelihood_system(builtin_model(c.name));
    auto t0 = std::chrono::steady_clock::now();
    MultiPoly E = eliminate_interpolate(sys, 0).E_f;
    const long interp_ms = elapsed_ms(t0);
    r.check(E.degree(sys.first_unknown()) == c.degree, std::string(c.name) + " ML degree");
    PipelineOptions opts;
    opts.gb.time_limit = std::chrono::milliseconds(direct_budget_ms);
    t0 = std::chrono::steady_clock::now();
    try {
      MultiPoly direct = eliminate_groebner(sys, opts);
      r.check(direct.normalized() == E.normalized(), std::string(c.name) + " direct and interpolated E_f agree");
      r.note(std::string(c.name) + ": interpolate " + std::to_string(interp_ms) + " ms, direct " +
             std::to_string(elapsed_ms(t0)) + " ms");
    } catch (const ResourceLimit&) {
      const bool same = agrees_on_specializations(sys, E, 20, 2024);
      r.check(same, std::string(c.name) + " agreement on 20 random full specializations");
      r.note(std::string(c.name) + ": direct route exceeded " + std::to_string(direct_budget_ms) +
             " ms, checked 20 random full specializations instead");
    }
  }
  return r;
}

Report criterion4() {
  Report r;
  struct Row {
    const char* name;
    int N, t, l, delta;
  };
  const Row rows[] = {{"random_censoring", 3, 2, 0, 1},
                      {"zero_diagonal_3x3", 2, 1, 0, 1},
                      {"grassmannian_2_4", 4, 2, 0, 1},
                      {"die", 3, 2, 0, 1}};
  for (const auto& row : rows) {
    SampleStream rng(0);
    StructureConstants sc = structure_constants(builtin_model(row.name), rng);
    std::ostringstream got;
    got << row.name << " (" << sc.N << "," << sc.t << "," << sc.l << "," << sc.delta << ") expected (" << row.N
        << "," << row.t << "," << row.l << "," << row.delta << ")";
    r.check(sc.N == row.N && sc.t == row.t && sc.l == row.l && sc.delta == row.delta, got.str());
  }
  SampleStream rng(0);
  r.check(structure_constants(builtin_model("fair_coin"), rng).delta == 0, "fair coin delta = 0");
  return r;
}

Report criterion5() {
  Report r;
  const ModelSpec& m = builtin_model("die");
  LagrangeSystem F = scaled_system(m).as_system();
  MultiPoly EF = radical_elim_generator(F.equations, F.kept_variables());
  MultiPoly S = P("u0 + u1 + u2 + u3");
  MultiPoly x0 = P("x0");
  MultiPoly expected_EF = S * (BigRational(10) * x0.pow(3) - P("43*u0 + 20*u1 + 15*u2 + 8*u3") * x0.pow(2) +
                         BigRational(2) * P("u0") * P("29*u0 + 23*u1 + 21*u2 + 14*u3") * x0 - P("24*u0^2") * S);
  r.check(EF.normalized() == expected_EF.normalized(), "direct E_F matches the known scaled die eliminant up to scalar");
  MultiPoly sub = expected_EF.substitute(std::map<std::string, MultiPoly>{{"x0", S * P("p0")}});
  r.check(sub == S.pow(2) * die_eliminant_times_ten(), "E_F(x0 = S p0) = S^2 E_f exactly (t = 2, l = 0, C = 1)");
  return r;
}

Report criterion6() {
  Report r;
  auto t0 = std::chrono::steady_clock::now();
  const ModelSpec& m = builtin_model("die");
  const LagrangeSystem sys = likelihood_system(m);
  MultiPoly E = eliminate_interpolate(sys, 0).E_f;
  SampleStream rng(0);
  StructureConstants sc = structure_constants(m, rng);
  MultiPoly structured = structured_discriminant(E, sc, sys);
  MultiPoly resultant_route = discr_resultant(E, "p0");
  const long ms = elapsed_ms(t0);
  MultiPoly expected =
      P("4*u0^2*(u0+u1+u2+u3)^2*(441*u0^4+4998*u0^3*u1+20041*u0^2*u1^2+33320*u0*u1^3+19600*u1^4-756*u0^3*u2+"
        "20034*u0^2*u1*u2+83370*u0*u1^2*u2+79800*u1^3*u2-5346*u0^2*u2^2+55890*u0*u1*u2^2+119025*u1^2*u2^2+"
        "4860*u0*u2^3+76950*u1*u2^3+18225*u2^4-1596*u0^3*u3-11116*u0^2*u1*u3-17808*u0*u1^2*u3+4480*u1^3*u3+"
        "7452*u0^2*u2*u3-7752*u0*u1*u2*u3+49680*u1^2*u2*u3-17172*u0*u2^2*u3+71460*u1*u2^2*u3+27540*u2^3*u3+"
        "2116*u0^2*u3^2+6624*u0*u1*u3^2-4224*u1^2*u3^2-9528*u0*u2*u3^2+15264*u1*u2*u3^2+14724*u2^2*u3^2-"
        "1216*u0*u3^3-512*u1*u3^3+3264*u2*u3^3+256*u3^4)");
  r.check(structured == resultant_route, "structured equals resultant route");
  r.check(structured == expected * BigRational(1, 10000), "structured equals the known die discriminant times 10^-4");
  auto ratio = try_exact_divide(expected, structured);
  r.check(ratio && ratio->is_constant() && ratio->constant_term().sign() > 0, "ratio to the known die discriminant is a positive constant");
  r.check(ms < 5000, "runtime under 5 s");
  r.note("runtime " + std::to_string(ms) + " ms");
  return r;
}

Report criterion7() {
  Report r;
  r.check(generic_discriminant(3).poly ==
              P("-27*c0^2*c3^2 + 18*c0*c1*c2*c3 - 4*c0*c2^3 - 4*c1^3*c3 + c1^2*c2^2"),
          "D_3 has the five known terms");
  for (int N = 2; N <= 5; ++N) {
    const auto& D = generic_discriminant(N);
    bool ok = !D.poly.is_zero();
    for (const auto& [e, c] : D.poly.terms()) {
      long total = 0, weighted = 0;
      for (int k = 0; k <= N; ++k) {
        auto idx = D.poly.index_of(generic_coefficient_name(k));
        long phi = idx ? static_cast<long>(e[*idx]) : 0;
        total += phi;
        weighted += (N - k) * phi;
      }
      ok = ok && total == 2 * N - 2 && weighted == static_cast<long>(N) * (N - 1);
    }
    r.check(ok, "weight identities for D_" + std::to_string(N));
  }
  return r;
}

Report criterion8() {
  Report r;
  for (const char* name : kCorpus) {
    const ModelSpec& m = builtin_model(name);
    const LagrangeSystem sys = likelihood_system(m);
    const std::string& p0 = sys.first_unknown();
    auto t0 = std::chrono::steady_clock::now();
    EliminationResult res = eliminate_interpolate(sys, 0);
    SampleStream rng(0);
    StructureConstants sc = structure_constants(m, rng);
    const MultiPoly& E = res.E_f;
    const MultiPoly& S = sys.sum_form;
    const int N = res.profile.N;
    const int e = sc.t - sc.l - sc.delta;
    const int total = E.lcoeff(p0).total_degree();
    for (int i = 0; i <= N; ++i) {
      MultiPoly c = E.coeff_of(p0, static_cast<unsigned>(i));
      const std::string at = std::string(name) + " coefficient of " + p0 + "^" + std::to_string(i);
      const int alpha = res.profile.alpha[static_cast<std::size_t>(i)];
      r.check(divisible_by_power(c, S, alpha), at + ": S^alpha_i divides");
      if (i > e) r.check(alpha >= i - e, at + ": alpha_i >= i - (t - l - delta)");
      r.check(c.is_zero() || (c.is_homogeneous(sys.parameters) && c.total_degree() == total), at + ": homogeneous");
    }
    MultiPoly d = discr_resultant(E, p0);
    const int exponent = sc.s_exponent();
    r.check(exponent >= 0 && divisible_by_power(d, S, exponent),
            std::string(name) + ": S^" + std::to_string(exponent) + " divides the resultant discriminant");
    r.note(std::string(name) + ": exponent " + std::to_string(exponent) + ", " + std::to_string(d.size()) +
           " terms, " + std::to_string(elapsed_ms(t0)) + " ms");
  }
  return r;
}

Report criterion9() {
  Report r;
  for (const char* args : {"eliminate --model die --seed 5", "structure --model random_censoring --seed 5",
                           "discriminant --model die --method structured --seed 5 --format json",
                           "eliminate --model zero_diagonal_3x3 --seed 5"}) {
    Outcome a = run_cli(args);
    Outcome b = run_cli(args);
    r.check(a.code == 0 && a.out == b.out && !a.out.empty(), std::string("byte-identical output: ") + args);
  }
  for (const char* model : {"die", "random_censoring"}) {
    Outcome a = run_cli(std::string("eliminate --model ") + model + " --seed 5");
    Outcome b = run_cli(std::string("eliminate --model ") + model + " --seed 6");
    r.check(a.code == 0 && b.code == 0 && parse_poly(field(a.out, "E_f")) == parse_poly(field(b.out, "E_f")),
            std::string("equal E_f for seeds 5 and 6: ") + model);
    r.check(field(a.out, "seed") == "5" && field(b.out, "seed") == "6", "effective seed is echoed");
  }
  return r;
}

Report criterion10() {
  Report r;
  StructureConstants sym;
  sym.N = 6;
  sym.t = 2;
  sym.l = 0;
  sym.delta = 1;
  r.check(sym.s_exponent() == 20, "symmetric_3x3 constants (6,2,0,1) give (N - 2(t - l - delta))(N - 1) = 20");
  for (const char* name : {"symmetric_3x3", "bernoulli_coin_3x3", "3x3_matrix", "jukes_cantor",
                           "hadamard_example_15", "p_comb"}) {
    r.check(builtin_model(name).heavy, std::string(name) + " is flagged heavy");
    Outcome o = run_cli(std::string("eliminate --model ") + name);
    r.check(o.code == 2, std::string(name) + " refused without --allow-heavy");
  }
  r.note("timings and discriminant sizes of the heavy models are not reproduced");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli> [direct-gb-budget-ms]\n";
    return 2;
  }
  g_cli = argv[1];
  const long budget = argc > 2 ? std::atol(argv[2]) : 900000;

  const std::vector<std::pair<const char*, std::function<Report()>>> criteria = {
      {"die elimination", criterion1},
      {"die intermediate artifacts", criterion2},
      {"interpolation agrees with direct elimination", [budget] { return criterion3(budget); }},
      {"structure constants", criterion4},
      {"scaling identity", criterion5},
      {"die discriminant", criterion6},
      {"generic discriminants", criterion7},
      {"structure divisibility properties", criterion8},
      {"determinism", criterion9},
      {"heavy models and exponent arithmetic", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Report rep;
    try {
      rep = criteria[i].second();
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.note(std::string("exception: ") + e.what());
    }
    if (!rep.ok) ++failures;
    std::cout << "criterion " << (i + 1) << ": " << (rep.ok ? "PASS" : "FAIL") << " - " << criteria[i].first;
    for (const auto& n : rep.notes) std::cout << "; " << n;
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
