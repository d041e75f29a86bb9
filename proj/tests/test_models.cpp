#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "mlelim/errors.hpp"
#include "mlelim/groebner.hpp"
#include "mlelim/linalg.hpp"
#include "mlelim/models.hpp"
#include "mlelim/polyalg.hpp"

using namespace mlelim;

namespace {

MultiPoly P(const char* s) { return parse_poly(s); }

MultiPoly laplace(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  MultiPoly det;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    PolyMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<MultiPoly> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    MultiPoly term = m[0][c] * laplace(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

PolyMatrix grid(std::initializer_list<std::initializer_list<const char*>> rows) {
  PolyMatrix m;
  for (const auto& r : rows) {
    std::vector<MultiPoly> row;
    for (const char* e : r) row.push_back(P(e));
    m.push_back(row);
  }
  return m;
}

}  // namespace

TEST_CASE("die likelihood equations") {
  auto sys = likelihood_system(builtin_model("die"));
  REQUIRE(sys.equations.size() == 6);
  CHECK(sys.equations[0] == P("p0*l1 + p0*l2 - u0"));
  CHECK(sys.equations[1] == P("p1*l1 + 2*p1*l2 - u1"));
  CHECK(sys.equations[2] == P("p2*l1 + 3*p2*l2 - u2"));
  CHECK(sys.equations[3] == P("p3*l1 - 4*p3*l2 - u3"));
  CHECK(sys.equations[4] == P("p0 + 2*p1 + 3*p2 - 4*p3"));
  CHECK(sys.equations[5] == P("p0 + p1 + p2 + p3 - 1"));
  CHECK(sys.parameters == std::vector<std::string>{"u0", "u1", "u2", "u3"});
  CHECK(sys.unknowns == std::vector<std::string>{"p0", "p1", "p2", "p3", "l1", "l2"});
  CHECK(sys.first_unknown() == "p0");
  CHECK(sys.sum_form == P("u0 + u1 + u2 + u3"));
}

TEST_CASE("die scaled equations") {
  auto sys = scaled_system(builtin_model("die"));
  REQUIRE(sys.equations.size() == 6);
  CHECK(sys.d == 1);
  CHECK(sys.equations[0] == P("x0*l1 + x0*l2 - (u0+u1+u2+u3)*u0"));
  CHECK(sys.equations[3] == P("x3*l1 - 4*x3*l2 - (u0+u1+u2+u3)*u3"));
  CHECK(sys.equations[4] == P("x0 + 2*x1 + 3*x2 - 4*x3"));
  CHECK(sys.equations[5] == P("x0 + x1 + x2 + x3 - u0 - u1 - u2 - u3"));
}

TEST_CASE("fair coin equations by hand") {
  auto sys = likelihood_system(builtin_model("fair_coin"));
  REQUIRE(sys.equations.size() == 4);
  // g = p0 - p1 has dg/dp0 = 1 and dg/dp1 = -1
  CHECK(sys.equations[0] == P("p0*l1 + p0*l2 - u0"));
  CHECK(sys.equations[1] == P("p1*l1 - p1*l2 - u1"));
  CHECK(sys.equations[2] == P("p0 - p1"));
  CHECK(sys.equations[3] == P("p0 + p1 - 1"));
  auto sc = scaled_system(builtin_model("fair_coin"));
  CHECK(sc.equations[0] == P("x0*l1 + x0*l2 - (u0+u1)*u0"));
  CHECK(sc.equations[3] == P("x0 + x1 - (u0+u1)"));
}

TEST_CASE("random censoring has six equations") {
  const auto& m = builtin_model("random_censoring");
  CHECK(m.invariants[0] == P("2*p0*p1*p2 + p1^2*p2 + p1*p2^2 - p0^2*p12 + p1*p2*p12"));
  auto sys = likelihood_system(m);
  CHECK(sys.equations.size() == m.n() + m.s() + 2);
  CHECK(sys.equations.size() == 6);
}

TEST_CASE("corpus lookup and heavy flags") {
  CHECK(builtin_model("grassmannian_2_4").unknowns.size() == 6);
  CHECK(builtin_models().size() == 11);
  for (const auto& m : builtin_models()) {
    bool expected_heavy = !(m.name == "die" || m.name == "fair_coin" || m.name == "random_censoring" ||
                            m.name == "zero_diagonal_3x3" || m.name == "grassmannian_2_4");
    CHECK_MESSAGE(m.heavy == expected_heavy, m.name);
  }
  CHECK_THROWS_AS(builtin_model("no_such_model"), ModelError);
}

TEST_CASE("determinantal invariants match their matrices") {
  CHECK(builtin_model("zero_diagonal_3x3").invariants[0] ==
        laplace(grid({{"0", "p12", "p13"}, {"p21", "0", "p23"}, {"p31", "p32", "0"}})));
  CHECK(builtin_model("symmetric_3x3").invariants[0] ==
        laplace(grid({{"2*p11", "p12", "p13"}, {"p12", "2*p22", "p23"}, {"p13", "p23", "2*p33"}})));
  CHECK(builtin_model("bernoulli_coin_3x3").invariants[0] ==
        laplace(grid({{"12*p0", "3*p1", "2*p2"}, {"3*p1", "2*p2", "3*p3"}, {"2*p2", "3*p3", "12*p4"}})));
  CHECK(builtin_model("3x3_matrix").invariants[0] ==
        laplace(grid({{"p00", "p01", "p02"}, {"p10", "p11", "p12"}, {"p20", "p21", "p22"}})));
}

TEST_CASE("q-coordinate invariants expand correctly") {
  auto q111 = P("p123 + 1/3*pdis - 1/3*p12 - 1/3*p13 - 1/3*p23");
  auto q110 = P("p123 - 1/3*pdis + p12 - 1/3*p13 - 1/3*p23");
  auto q101 = P("p123 - 1/3*pdis - 1/3*p12 + p13 - 1/3*p23");
  auto q011 = P("p123 - 1/3*pdis - 1/3*p12 - 1/3*p13 + p23");
  auto q000 = P("p123 + pdis + p12 + p13 + p23");
  CHECK(builtin_model("jukes_cantor").invariants[0] == q000 * q111.pow(2) - q011 * q101 * q110);

  const int signs[8][8] = {{1, 1, 1, 1, 1, 1, 1, 1},     {1, -1, 1, -1, 1, -1, 1, -1},
                           {1, 1, -1, -1, 1, 1, -1, -1}, {1, -1, -1, 1, 1, -1, -1, 1},
                           {1, 1, 1, 1, -1, -1, -1, -1}, {1, -1, 1, -1, -1, 1, -1, 1},
                           {1, 1, -1, -1, -1, -1, 1, 1}, {1, -1, -1, 1, -1, 1, 1, -1}};
  std::vector<MultiPoly> q;
  for (const auto& row : signs) {
    MultiPoly acc;
    for (int k = 0; k < 8; ++k) acc += BigRational(row[k]) * MultiPoly::variable("p" + std::to_string(k + 1));
    q.push_back(acc);
  }
  const auto& a8 = builtin_model("hadamard_example_15").invariants;
  REQUIRE(a8.size() == 2);
  CHECK(a8[0] == q[1] * q[6] - q[0] * q[7]);
  CHECK(a8[1] == q[2] * q[5] - q[4] * q[3]);
  const auto& a9 = builtin_model("p_comb").invariants;
  REQUIRE(a9.size() == 4);
  CHECK(a9[0] == q[2] - q[4]);
  CHECK(a9[1] == q[1] - q[4]);
  CHECK(a9[2] == q[3] - q[5]);
  CHECK(a9[3] == q[4] * q[6] - q[0] * q[7]);
}

TEST_CASE("system shape invariants hold across the corpus") {
  for (const auto& m : builtin_models()) {
    CAPTURE(m.name);
    auto f = likelihood_system(m);
    auto F = scaled_system(m);
    REQUIRE(f.equations.size() == m.n() + m.s() + 2);
    REQUIRE(F.equations.size() == m.n() + m.s() + 2);
    CHECK(f.equations.back() == sum_of(m.unknowns) - MultiPoly::constant(1));
    for (std::size_t j = 0; j < m.s(); ++j) CHECK(f.equations[m.n() + 1 + j] == m.invariants[j]);
    std::vector<std::string> xs;
    for (std::size_t i = 0; i <= m.n(); ++i) xs.push_back(scaled_name(i));
    CHECK(F.equations.back() == sum_of(xs) - F.sum_form);
  }
}

TEST_CASE("scaled equations are the cleared numerators") {
  for (const auto& m : builtin_models()) {
    CAPTURE(m.name);
    auto f = likelihood_system(m);
    auto F = scaled_system(m);
    const MultiPoly& S = F.sum_form;
    std::map<std::string, MultiPoly> sub;
    for (std::size_t i = 0; i <= m.n(); ++i) sub.emplace(scaled_name(i), S * MultiPoly::variable(m.unknowns[i]));
    for (std::size_t i = 0; i < f.equations.size(); ++i) {
      unsigned e;
      if (i <= m.n()) {
        e = static_cast<unsigned>(F.d);
      } else if (i + 1 < f.equations.size()) {
        e = static_cast<unsigned>(m.invariants[i - m.n() - 1].total_degree());
      } else {
        e = 1;
      }
      CHECK(F.equations[i].substitute(sub) == S.pow(e) * f.equations[i]);
    }
  }
}

TEST_CASE("non-homogeneous and malformed models are rejected") {
  ModelSpec m;
  m.name = "bad";
  m.unknowns = {"p0", "p1"};
  m.invariants = {P("p0^2 - p1")};
  CHECK_THROWS_AS(likelihood_system(m), NonHomogeneousInvariant);
  CHECK_THROWS_AS(scaled_system(m), NonHomogeneousInvariant);
  m.invariants = {P("p0 - q")};
  CHECK_THROWS_AS(m.validate(), UnknownVariable);
  m.unknowns = {"p0", "u1"};
  m.invariants = {P("p0 - u1")};
  CHECK_THROWS_AS(m.validate(), ModelError);
  m.unknowns = {"p0", "p1"};
  m.invariants = {};
  CHECK_THROWS_AS(m.validate(), ModelError);
}

TEST_CASE("toy linear system has constant Jacobian") {
  LagrangeSystem sys;
  sys.parameters = {"u0"};
  sys.unknowns = {"p0", "p1"};
  sys.equations = {P("p0 - u0"), P("p0 + p1 - 1")};
  sys.sum_form = P("u0");
  CHECK(jacobian_det(sys) == MultiPoly::constant(1));
}

TEST_CASE("fair coin Jacobian is a unit on the solution fiber") {
  auto sys = likelihood_system(builtin_model("fair_coin"));
  auto J = jacobian_det(sys);
  CHECK(J == P("-4*p0*p1"));
  // E_f = 2p0 - 1 never degenerates, so J is invertible modulo every fiber
  std::vector<MultiPoly> fiber;
  for (const auto& f : sys.equations) fiber.push_back(f.substitute(std::map<std::string, BigRational>{{"u0", 3}, {"u1", 5}}));
  auto gb = buchberger(fiber, MonomialOrder::grevlex({"p0", "p1", "l1", "l2"}));
  auto nf = normal_form(J, gb);
  CHECK(nf.is_constant());
  CHECK_FALSE(nf.is_zero());
}

TEST_CASE("die Jacobian matches cofactor expansion") {
  auto sys = likelihood_system(builtin_model("die"));
  PolyMatrix jac;
  for (const auto& f : sys.equations) {
    std::vector<MultiPoly> row;
    for (const auto& v : sys.unknowns) row.push_back(f.derivative(v));
    jac.push_back(row);
  }
  auto J = jacobian_det(sys);
  CHECK(J == laplace(jac));
  CHECK(J.total_degree() == 4);
}

TEST_CASE("model text round trip is bit exact") {
  for (const auto& m : builtin_models()) {
    CAPTURE(m.name);
    std::string text = serialize_model(m);
    ModelSpec back = parse_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
  }
  CHECK(serialize_model(builtin_model("die")) ==
        "name = \"die\"\nunknowns = [p0, p1, p2, p3]\ninvariants = [\"p0 + 2*p1 + 3*p2 - 4*p3\"]\n");
}

TEST_CASE("model text accepts comments and multi-line lists") {
  auto m = parse_model(
      "# the die\n"
      "name = \"my die\"   # trailing comment\n"
      "\n"
      "unknowns = [p0, p1,\n"
      "            p2, p3]\n"
      "invariants = [\n"
      "  \"p0 + 2*p1 + 3*p2 - 4*p3\",  # weights\n"
      "]\n");
  CHECK(m.name == "my die");
  CHECK(m.invariants == builtin_model("die").invariants);
}

TEST_CASE("model text errors") {
  CHECK_THROWS_AS(parse_model("name = \"x\"\nunknowns = [p0, p1]\n"), ModelError);
  CHECK_THROWS_AS(parse_model("name = \"x\"\nunknowns = [p0, p1]\ninvariants = [\"p0 - \"]\n"), SyntaxError);
  CHECK_THROWS_AS(parse_model("name = \"x\"\nunknowns = [p0, p1]\ninvariants = [\"p0 - q\"]\n"),
                  UnknownVariable);
  CHECK_THROWS_AS(parse_model("name = \"x\"\nfoo = 1\n"), ModelError);
  CHECK_THROWS_AS(parse_model("name = \"x\nunknowns = [p0]\n"), ModelError);
  CHECK_THROWS_AS(parse_model("name = \"x\"\nname = \"y\"\n"), ModelError);
}

TEST_CASE("model files load from disk") {
  const char* path = "test_models_tmp.model";
  {
    std::ofstream out(path);
    out << serialize_model(builtin_model("grassmannian_2_4"));
  }
  CHECK(load_model_file(path) == builtin_model("grassmannian_2_4"));
  std::remove(path);
  CHECK_THROWS_AS(load_model_file("/nonexistent/x.model"), ModelError);
}
