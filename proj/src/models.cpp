#include "mlelim/models.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mlelim/errors.hpp"
#include "mlelim/linalg.hpp"

namespace mlelim {

std::string param_name(std::size_t i) { return "u" + std::to_string(i); }
std::string multiplier_name(std::size_t j) { return "l" + std::to_string(j); }
std::string scaled_name(std::size_t i) { return "x" + std::to_string(i); }

namespace {

bool is_reserved(const std::string& v) {
  if (v.size() < 2 || (v[0] != 'u' && v[0] != 'l' && v[0] != 'x')) return false;
  return std::all_of(v.begin() + 1, v.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string> parameter_names(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(param_name(i));
  return out;
}

}  // namespace

void ModelSpec::validate() const {
  if (unknowns.empty()) throw ModelError("model '" + name + "' has no unknowns");
  if (invariants.empty()) throw ModelError("model '" + name + "' has no invariants");
  std::vector<std::string> seen;
  for (const auto& v : unknowns) {
    if (is_reserved(v)) throw ModelError("unknown '" + v + "' clashes with a reserved name");
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
      throw ModelError("unknown '" + v + "' is listed twice");
    }
    seen.push_back(v);
  }
  for (std::size_t j = 0; j < invariants.size(); ++j) {
    const auto& g = invariants[j];
    if (g.is_zero()) throw ModelError("invariant " + std::to_string(j + 1) + " is zero");
    for (const auto& v : g.used_variables()) {
      if (std::find(unknowns.begin(), unknowns.end(), v) == unknowns.end()) throw UnknownVariable(v);
    }
    if (!g.is_homogeneous(unknowns)) {
      throw NonHomogeneousInvariant("invariant " + std::to_string(j + 1) + " of model '" + name +
                                    "' is not homogeneous: " + g.to_string());
    }
  }
}

std::vector<std::string> LagrangeSystem::kept_variables() const {
  std::vector<std::string> keep = parameters;
  keep.push_back(first_unknown());
  return keep;
}

LagrangeSystem ScaledSystem::as_system() const {
  return {equations, parameters, unknowns, sum_form, source};
}

LagrangeSystem likelihood_system(const ModelSpec& m) {
  m.validate();
  const std::size_t n1 = m.unknowns.size();
  const std::size_t s = m.s();
  Universe universe = parameter_names(n1);
  universe.insert(universe.end(), m.unknowns.begin(), m.unknowns.end());
  for (std::size_t j = 1; j <= s + 1; ++j) universe.push_back(multiplier_name(j));
  auto var = [&](const std::string& v) { return MultiPoly::variable(v, universe); };

  LagrangeSystem sys;
  sys.parameters = parameter_names(n1);
  sys.unknowns = m.unknowns;
  for (std::size_t j = 1; j <= s + 1; ++j) sys.unknowns.push_back(multiplier_name(j));
  sys.sum_form = sum_of(sys.parameters).with_universe(universe);
  sys.source = m;

  for (std::size_t i = 0; i < n1; ++i) {
    MultiPoly inner = var(multiplier_name(1));
    for (std::size_t j = 0; j < s; ++j) {
      inner += m.invariants[j].derivative(m.unknowns[i]) * var(multiplier_name(j + 2));
    }
    sys.equations.push_back((var(m.unknowns[i]) * inner - var(param_name(i))).with_universe(universe));
  }
  for (const auto& g : m.invariants) sys.equations.push_back(g.with_universe(universe));
  sys.equations.push_back((sum_of(m.unknowns) - MultiPoly::constant(1)).with_universe(universe));
  return sys;
}

ScaledSystem scaled_system(const ModelSpec& m) {
  m.validate();
  const std::size_t n1 = m.unknowns.size();
  const std::size_t s = m.s();
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < n1; ++i) xs.push_back(scaled_name(i));
  Universe universe = parameter_names(n1);
  universe.insert(universe.end(), xs.begin(), xs.end());
  for (std::size_t j = 1; j <= s + 1; ++j) universe.push_back(multiplier_name(j));
  auto var = [&](const std::string& v) { return MultiPoly::variable(v, universe); };

  std::map<std::string, MultiPoly> to_x;
  for (std::size_t i = 0; i < n1; ++i) to_x.emplace(m.unknowns[i], var(xs[i]));

  ScaledSystem sys;
  sys.parameters = parameter_names(n1);
  sys.unknowns = xs;
  for (std::size_t j = 1; j <= s + 1; ++j) sys.unknowns.push_back(multiplier_name(j));
  sys.sum_form = sum_of(sys.parameters).with_universe(universe);
  sys.source = m;
  const MultiPoly& S = sys.sum_form;

  std::vector<int> degs;
  for (const auto& g : m.invariants) degs.push_back(g.total_degree());
  sys.d = *std::max_element(degs.begin(), degs.end());
  const auto d = static_cast<unsigned>(sys.d);

  for (std::size_t i = 0; i < n1; ++i) {
    MultiPoly x = var(xs[i]);
    MultiPoly eq = S.pow(d - 1) * x * var(multiplier_name(1));
    for (std::size_t j = 0; j < s; ++j) {
      MultiPoly dg = m.invariants[j].derivative(m.unknowns[i]).substitute(to_x);
      eq += S.pow(d - static_cast<unsigned>(degs[j])) * x * dg * var(multiplier_name(j + 2));
    }
    eq -= S.pow(d) * var(param_name(i));
    sys.equations.push_back(eq.with_universe(universe));
  }
  for (const auto& g : m.invariants) sys.equations.push_back(g.substitute(to_x).with_universe(universe));
  sys.equations.push_back((sum_of(xs) - S).with_universe(universe));
  return sys;
}

MultiPoly jacobian_det(const LagrangeSystem& sys) {
  PolyMatrix jac;
  for (const auto& f : sys.equations) {
    std::vector<MultiPoly> row;
    for (const auto& v : sys.unknowns) row.push_back(f.derivative(v));
    jac.push_back(std::move(row));
  }
  return det_exact(jac);
}

namespace {

ModelSpec make_model(std::string name, std::vector<std::string> unknowns,
                     const std::vector<std::string>& invariants, bool heavy) {
  ModelSpec m;
  m.name = std::move(name);
  m.unknowns = std::move(unknowns);
  for (const auto& g : invariants) m.invariants.push_back(parse_poly(g, m.unknowns));
  m.heavy = heavy;
  m.validate();
  return m;
}

std::vector<ModelSpec> build_corpus() {
  const std::vector<std::string> p18 = {"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"};
  std::vector<ModelSpec> c;
  c.push_back(make_model("die", {"p0", "p1", "p2", "p3"}, {"p0 + 2*p1 + 3*p2 - 4*p3"}, false));
  c.push_back(make_model("fair_coin", {"p0", "p1"}, {"p0 - p1"}, false));
  c.push_back(make_model("random_censoring", {"p0", "p1", "p2", "p12"},
                         {"2*p0*p1*p2 + p1^2*p2 + p1*p2^2 - p0^2*p12 + p1*p2*p12"}, false));
  c.push_back(make_model("zero_diagonal_3x3", {"p12", "p13", "p21", "p23", "p31", "p32"},
                         {"p12*p23*p31 + p13*p21*p32"}, false));
  c.push_back(make_model("grassmannian_2_4", {"p12", "p13", "p14", "p23", "p24", "p34"},
                         {"p12*p34 - p13*p24 + p14*p23"}, false));
  c.push_back(make_model("symmetric_3x3", {"p11", "p12", "p13", "p22", "p23", "p33"},
                         {"8*p11*p22*p33 - 2*p11*p23^2 - 2*p22*p13^2 - 2*p33*p12^2 + 2*p12*p13*p23"},
                         true));
  c.push_back(make_model("bernoulli_coin_3x3", {"p0", "p1", "p2", "p3", "p4"},
                         {"288*p0*p2*p4 - 108*p0*p3^2 - 108*p1^2*p4 + 36*p1*p2*p3 - 8*p2^3"}, true));
  c.push_back(make_model("3x3_matrix", {"p00", "p01", "p02", "p10", "p11", "p12", "p20", "p21", "p22"},
                         {"p00*p11*p22 - p00*p12*p21 - p01*p10*p22 + p01*p12*p20 + p02*p10*p21"
                          " - p02*p11*p20"},
                         true));
  c.push_back(make_model(
      "jukes_cantor", {"p123", "pdis", "p12", "p13", "p23"},
      {"16/27*p12^2*p13 + 16/27*p12^2*p23 - 8/27*p12^2*pdis - 16/9*p12*p123*p13"
       " - 16/9*p12*p123*p23 + 16/27*p12*p13^2 - 16/27*p12*p13*p23 + 16/27*p12*p23^2"
       " - 4/27*p12*pdis^2 + 8/3*p123^2*pdis - 16/9*p123*p13*p23 + 4/9*p123*pdis^2"
       " + 16/27*p13^2*p23 - 8/27*p13^2*pdis + 16/27*p13*p23^2 - 4/27*p13*pdis^2"
       " - 8/27*p23^2*pdis - 4/27*p23*pdis^2 + 4/27*pdis^3"},
      true));
  c.push_back(make_model(
      "hadamard_example_15", p18,
      {"-4*p1*p4 - 4*p1*p6 + 4*p2*p3 + 4*p2*p5 + 4*p3*p8 - 4*p4*p7 + 4*p5*p8 - 4*p6*p7",
       "-4*p1*p4 + 4*p1*p6 + 4*p2*p3 - 4*p2*p5 - 4*p3*p8 + 4*p4*p7 + 4*p5*p8 - 4*p6*p7"},
      true));
  c.push_back(make_model(
      "p_comb", p18,
      {"-2*p3 - 2*p4 + 2*p5 + 2*p6", "-2*p2 - 2*p4 + 2*p5 + 2*p7", "-2*p3 + 2*p4 + 2*p5 - 2*p6",
       "2*p1*p2 - 2*p1*p4 - 2*p1*p5 - 4*p1*p6 - 2*p1*p7 + 2*p2^2 + 2*p2*p3 - 2*p2*p6"
       " + 2*p2*p8 - 2*p3*p4 + 2*p3*p5 + 2*p3*p7 + 4*p3*p8 - 2*p4^2 - 2*p4*p6 + 2*p4*p8"
       " + 2*p5^2 + 2*p5*p6 + 2*p5*p8 - 2*p6*p7 - 2*p7^2 - 2*p7*p8"},
      true));
  return c;
}

// Cursor over model text with line tracking for diagnostics.
class ModelReader {
 public:
  explicit ModelReader(std::string_view text) : text_(text) {}

  ModelSpec read() {
    ModelSpec m;
    bool have_name = false, have_unknowns = false, have_invariants = false, have_heavy = false;
    std::vector<std::string> invariant_text;
    for (;;) {
      skip_blank();
      if (pos_ >= text_.size()) break;
      std::size_t key_line = line_;
      std::string key = identifier();
      skip_inline();
      expect('=');
      skip_inline();
      if (key == "name") {
        once(have_name, key, key_line);
        m.name = quoted();
      } else if (key == "unknowns") {
        once(have_unknowns, key, key_line);
        m.unknowns = list([this] { return identifier(); });
      } else if (key == "invariants") {
        once(have_invariants, key, key_line);
        invariant_text = list([this] { return quoted(); });
      } else if (key == "heavy") {
        once(have_heavy, key, key_line);
        std::string v = identifier();
        if (v != "true" && v != "false") fail("expected true or false");
        m.heavy = v == "true";
      } else {
        throw ModelError("line " + std::to_string(key_line) + ": unknown key '" + key + "'");
      }
      end_of_line();
    }
    if (!have_name) throw ModelError("missing key 'name'");
    if (!have_unknowns) throw ModelError("missing key 'unknowns'");
    if (!have_invariants) throw ModelError("missing key 'invariants'");
    for (std::size_t j = 0; j < invariant_text.size(); ++j) {
      try {
        m.invariants.push_back(parse_poly(invariant_text[j], m.unknowns));
      } catch (const SyntaxError& e) {
        throw SyntaxError("invariant " + std::to_string(j + 1) + ": " + e.what(), e.position());
      }
    }
    m.validate();
    return m;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw ModelError("line " + std::to_string(line_) + ": " + what);
  }

  void once(bool& flag, const std::string& key, std::size_t line) const {
    if (flag) throw ModelError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    flag = true;
  }

  void skip_comment() {
    if (pos_ < text_.size() && text_[pos_] == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }
  }

  void skip_inline() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  // Whitespace, newlines and comments.
  void skip_blank() {
    for (;;) {
      skip_inline();
      skip_comment();
      if (pos_ < text_.size() && text_[pos_] == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_inline();
    skip_comment();
    if (pos_ < text_.size() && text_[pos_] != '\n') fail("unexpected text after value");
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    expect('"');
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') ++pos_;
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("unterminated string");
    std::string s(text_.substr(start, pos_ - start));
    ++pos_;
    return s;
  }

  template <typename Item>
  auto list(Item item) -> std::vector<decltype(item())> {
    std::vector<decltype(item())> out;
    expect('[');
    skip_blank();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return out;
    }
    for (;;) {
      skip_blank();
      out.push_back(item());
      skip_blank();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        skip_blank();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return out;
        }
        continue;
      }
      expect(']');
      return out;
    }
  }
};

}  // namespace

const std::vector<ModelSpec>& builtin_models() {
  static const std::vector<ModelSpec> corpus = build_corpus();
  return corpus;
}

const ModelSpec& builtin_model(std::string_view name) {
  for (const auto& m : builtin_models()) {
    if (m.name == name) return m;
  }
  throw ModelError("no builtin model named '" + std::string(name) + "'");
}

ModelSpec parse_model(std::string_view text) { return ModelReader(text).read(); }

std::string serialize_model(const ModelSpec& m) {
  std::ostringstream out;
  out << "name = \"" << m.name << "\"\n";
  out << "unknowns = [";
  for (std::size_t i = 0; i < m.unknowns.size(); ++i) out << (i ? ", " : "") << m.unknowns[i];
  out << "]\n";
  out << "invariants = [";
  for (std::size_t j = 0; j < m.invariants.size(); ++j) {
    out << (j ? ", " : "") << '"' << m.invariants[j].with_universe(m.unknowns).to_string() << '"';
  }
  out << "]\n";
  if (m.heavy) out << "heavy = true\n";
  return out.str();
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace mlelim
