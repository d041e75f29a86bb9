#include "mlelim/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "mlelim/errors.hpp"

namespace mlelim {

namespace {

std::shared_ptr<const Universe> empty_universe() {
  static const auto kEmpty = std::make_shared<const Universe>();
  return kEmpty;
}

bool same_universe(const MultiPoly& a, const MultiPoly& b) {
  return a.universe_ptr() == b.universe_ptr() || a.universe() == b.universe();
}

std::uint32_t total(const Exponents& e) {
  std::uint32_t d = 0;
  for (auto x : e) d += x;
  return d;
}

}  // namespace

bool grevlex_greater(const Exponents& a, const Exponents& b) {
  std::uint32_t da = total(a), db = total(b);
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

Universe merge_universes(const Universe& a, const Universe& b) {
  Universe out = a;
  for (const auto& v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

MultiPoly::MultiPoly() : universe_(empty_universe()) {}

MultiPoly::MultiPoly(Universe universe)
    : universe_(std::make_shared<const Universe>(std::move(universe))) {}

MultiPoly::MultiPoly(std::shared_ptr<const Universe> universe, TermMap terms)
    : universe_(std::move(universe)), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero()) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

MultiPoly MultiPoly::constant(const BigRational& c, Universe universe) {
  MultiPoly p(std::move(universe));
  if (!c.is_zero()) p.terms_.emplace(Exponents(p.universe_->size(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(const std::string& name, Universe universe) {
  if (std::find(universe.begin(), universe.end(), name) == universe.end()) {
    universe.push_back(name);
  }
  MultiPoly p(std::move(universe));
  Exponents e(p.universe_->size(), 0);
  e[*p.index_of(name)] = 1;
  p.terms_.emplace(std::move(e), BigRational(1));
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  return total(terms_.begin()->first) == 0;
}

BigRational MultiPoly::constant_term() const {
  auto it = terms_.find(Exponents(universe_->size(), 0));
  return it == terms_.end() ? BigRational(0) : it->second;
}

std::optional<std::size_t> MultiPoly::index_of(std::string_view var) const {
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    if ((*universe_)[i] == var) return i;
  }
  return std::nullopt;
}

std::vector<std::string> MultiPoly::used_variables() const {
  std::vector<bool> used(universe_->size(), false);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) used[i] = true;
    }
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i]) out.push_back((*universe_)[i]);
  }
  return out;
}

MultiPoly MultiPoly::with_universe(const Universe& target) const {
  return with_universe(std::make_shared<const Universe>(target));
}

MultiPoly MultiPoly::with_universe(const std::shared_ptr<const Universe>& target) const {
  if (*target == *universe_) return MultiPoly(target, terms_);
  std::vector<std::optional<std::size_t>> map(universe_->size());
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    auto it = std::find(target->begin(), target->end(), (*universe_)[i]);
    if (it != target->end()) map[i] = static_cast<std::size_t>(it - target->begin());
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    Exponents ne(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!map[i]) throw UnknownVariable((*universe_)[i]);
      ne[*map[i]] = e[i];
    }
    out.emplace(std::move(ne), c);
  }
  return MultiPoly(target, std::move(out));
}

std::pair<MultiPoly, MultiPoly> align(const MultiPoly& a, const MultiPoly& b) {
  if (same_universe(a, b)) return {a, MultiPoly(a.universe_, b.terms_)};
  auto u = std::make_shared<const Universe>(merge_universes(*a.universe_, *b.universe_));
  return {a.with_universe(u), b.with_universe(u)};
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

void MultiPoly::add_scaled(const MultiPoly& o, const BigRational& scale) {
  if (!same_universe(*this, o)) {
    auto [a, b] = align(*this, o);
    *this = std::move(a);
    add_scaled(b, scale);
    return;
  }
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  add_scaled(o, BigRational(1));
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  add_scaled(o, BigRational(-1));
  return *this;
}

MultiPoly& MultiPoly::operator*=(const BigRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

namespace {

// Products of large operands: exponents packed into one word, integer
// coefficients over a common denominator, hashed accumulation.
std::optional<MultiPoly> packed_product(const MultiPoly& a, const MultiPoly& b) {
  const std::size_t n = a.universe().size();
  std::vector<std::uint64_t> cap(n, 0);
  for (const auto* p : {&a, &b}) {
    std::vector<std::uint64_t> hi(n, 0);
    for (const auto& [e, c] : p->terms()) {
      for (std::size_t i = 0; i < n; ++i) hi[i] = std::max<std::uint64_t>(hi[i], e[i]);
    }
    for (std::size_t i = 0; i < n; ++i) cap[i] += hi[i];
  }
  // Each variable gets just enough bits for its largest product exponent.
  std::vector<unsigned> shift(n, 0), width(n, 0);
  unsigned used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (width[i] < 64 && (cap[i] >> width[i]) != 0) ++width[i];
    shift[i] = used;
    used += width[i];
    if (used > 64) return std::nullopt;
  }
  auto pack = [&](const MultiPoly& p, BigInt& den) {
    den = 1;
    for (const auto& [e, c] : p.terms()) den = lcm(den, c.den());
    std::vector<std::pair<std::uint64_t, BigInt>> out;
    out.reserve(p.size());
    for (const auto& [e, c] : p.terms()) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (width[i]) key |= static_cast<std::uint64_t>(e[i]) << shift[i];
      }
      out.emplace_back(key, c.num() * (den / c.den()));
    }
    return out;
  };
  BigInt da, db;
  auto pa = pack(a, da);
  auto pb = pack(b, db);
  std::unordered_map<std::uint64_t, BigInt> acc;
  acc.reserve(std::min<std::size_t>(pa.size() * pb.size(), std::size_t{1} << 22));
  for (const auto& [ka, ca] : pa) {
    for (const auto& [kb, cb] : pb) {
      BigInt& slot = acc[ka + kb];
      mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  }
  const BigInt den = da * db;
  std::vector<std::pair<Exponents, BigRational>> terms;
  terms.reserve(acc.size());
  for (auto& [k, c] : acc) {
    if (sgn(c) == 0) continue;
    Exponents e(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (width[i]) e[i] = static_cast<std::uint32_t>((k >> shift[i]) & ((std::uint64_t{1} << width[i]) - 1));
    }
    terms.emplace_back(std::move(e), BigRational(c, den));
  }
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  MultiPoly::TermMap out;
  for (auto& [e, c] : terms) out.emplace_hint(out.end(), std::move(e), std::move(c));
  return MultiPoly(a.universe_ptr(), std::move(out));
}

}  // namespace

MultiPoly operator*(const MultiPoly& a0, const MultiPoly& b0) {
  if (a0.is_zero() || b0.is_zero()) {
    auto [a, b] = align(a0, b0);
    return MultiPoly(a.universe_ptr(), {});
  }
  auto [a, b] = align(a0, b0);
  if (a.size() * b.size() >= 4096) {
    if (auto fast = packed_product(a, b)) return std::move(*fast);
  }
  MultiPoly::TermMap out;
  const std::size_t n = a.universe().size();
  Exponents e(n);
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = out.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  return MultiPoly(a.universe_ptr(), std::move(out));
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (same_universe(a, b)) return a.terms_ == b.terms_;
  auto [x, y] = align(a, b);
  return x.terms_ == y.terms_;
}

MultiPoly MultiPoly::pow(unsigned k) const {
  MultiPoly result = constant(BigRational(1), *universe_);
  result = MultiPoly(universe_, result.terms_);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

int MultiPoly::degree(std::string_view var) const {
  if (terms_.empty()) return -1;
  auto idx = index_of(var);
  if (!idx) return 0;
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[*idx]);
  return static_cast<int>(d);
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total(e));
  return static_cast<int>(d);
}

bool MultiPoly::is_homogeneous(std::span<const std::string> vars) const {
  std::vector<std::size_t> idx;
  for (const auto& v : vars) {
    if (auto i = index_of(v)) idx.push_back(*i);
  }
  std::optional<std::uint32_t> deg;
  for (const auto& [e, c] : terms_) {
    std::uint32_t d = 0;
    for (auto i : idx) d += e[i];
    if (!deg) {
      deg = d;
    } else if (*deg != d) {
      return false;
    }
  }
  return true;
}

MultiPoly MultiPoly::coeff_of(std::string_view var, unsigned k) const {
  auto idx = index_of(var);
  TermMap out;
  for (const auto& [e, c] : terms_) {
    std::uint32_t ev = idx ? e[*idx] : 0;
    if (ev != k) continue;
    Exponents ne = e;
    if (idx) ne[*idx] = 0;
    out.emplace(std::move(ne), c);
  }
  return MultiPoly(universe_, std::move(out));
}

MultiPoly MultiPoly::lcoeff(std::string_view var) const {
  int d = degree(var);
  if (d < 0) return *this;
  return coeff_of(var, static_cast<unsigned>(d));
}

MultiPoly MultiPoly::derivative(std::string_view var) const {
  auto idx = index_of(var);
  TermMap out;
  if (!idx) return MultiPoly(universe_, {});
  for (const auto& [e, c] : terms_) {
    if (e[*idx] == 0) continue;
    Exponents ne = e;
    ne[*idx] -= 1;
    out.emplace(std::move(ne), c * BigRational(static_cast<long>(e[*idx])));
  }
  return MultiPoly(universe_, std::move(out));
}

const Exponents& MultiPoly::leading_exponents() const {
  if (terms_.empty()) throw Error("leading term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = std::next(best); it != terms_.end(); ++it) {
    if (grevlex_greater(it->first, best->first)) best = it;
  }
  return best->first;
}

const BigRational& MultiPoly::leading_coefficient() const {
  return terms_.at(leading_exponents());
}

MultiPoly MultiPoly::substitute(const std::map<std::string, MultiPoly>& bindings) const {
  if (bindings.empty()) return *this;
  Universe u = *universe_;
  for (const auto& [name, val] : bindings) u = merge_universes(u, val.universe());
  auto up = std::make_shared<const Universe>(std::move(u));

  std::vector<const MultiPoly*> bound(universe_->size(), nullptr);
  std::vector<MultiPoly> bound_vals;
  bound_vals.reserve(bindings.size());
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    auto it = bindings.find((*universe_)[i]);
    if (it != bindings.end()) {
      bound_vals.push_back(it->second.with_universe(up));
    }
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    if (bindings.count((*universe_)[i])) bound[i] = &bound_vals[k++];
  }

  // power cache keyed by (variable index, exponent)
  std::map<std::pair<std::size_t, std::uint32_t>, MultiPoly> cache;
  auto power = [&](std::size_t i, std::uint32_t e) -> const MultiPoly& {
    auto key = std::make_pair(i, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, bound[i]->pow(e)).first->second;
  };

  // Group terms by their bound-exponent part so each product is formed once.
  std::map<Exponents, TermMap> groups;
  for (const auto& [e, c] : terms_) {
    Exponents bound_part(universe_->size(), 0);
    Exponents free_part(up->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (bound[i]) {
        bound_part[i] = e[i];
      } else {
        free_part[i] = e[i];
      }
    }
    groups[bound_part].emplace(std::move(free_part), c);
  }

  MultiPoly result(up, {});
  for (auto& [bp, free_terms] : groups) {
    MultiPoly factor(up, std::move(free_terms));
    for (std::size_t i = 0; i < bp.size(); ++i) {
      if (bp[i] != 0) factor = factor * power(i, bp[i]);
    }
    result += factor;
  }
  return result;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, BigRational>& bindings) const {
  if (bindings.empty()) return *this;
  std::vector<std::optional<BigRational>> val(universe_->size());
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    auto it = bindings.find((*universe_)[i]);
    if (it != bindings.end()) val[i] = it->second;
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    BigRational coef = c;
    Exponents ne = e;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (val[i] && e[i] != 0) {
        coef *= val[i]->pow(e[i]);
        ne[i] = 0;
      }
    }
    if (coef.is_zero()) continue;
    auto [it, inserted] = out.try_emplace(std::move(ne), coef);
    if (!inserted) it->second += coef;
  }
  return MultiPoly(universe_, std::move(out));
}

BigRational MultiPoly::eval(const std::map<std::string, BigRational>& point) const {
  std::vector<const BigRational*> val(universe_->size(), nullptr);
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    auto it = point.find((*universe_)[i]);
    if (it != point.end()) val[i] = &it->second;
  }
  BigRational sum;
  for (const auto& [e, c] : terms_) {
    BigRational t = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!val[i]) throw UnboundVariable((*universe_)[i]);
      t *= val[i]->pow(e[i]);
    }
    sum += t;
  }
  return sum;
}

MultiPoly MultiPoly::normalized() const {
  if (terms_.empty()) return *this;
  BigInt den = 1, num = 0;
  for (const auto& [e, c] : terms_) den = lcm(den, c.den());
  for (const auto& [e, c] : terms_) num = gcd(num, (c * BigRational(den)).num());
  BigRational scale(den, num);
  if (leading_coefficient().sign() < 0) scale = -scale;
  MultiPoly r = *this;
  r *= scale;
  return r;
}

MultiPoly MultiPoly::monic() const {
  if (terms_.empty()) return *this;
  MultiPoly r = *this;
  r *= leading_coefficient().inverse();
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](auto* a, auto* b) { return grevlex_greater(a->first, b->first); });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += (*universe_)[i];
      if (e[i] > 1) mono += '^' + std::to_string(e[i]);
    }
    BigRational mag = c.abs();
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (mono.empty()) {
      os << mag;
    } else if (mag.is_one()) {
      os << mono;
    } else {
      os << mag << '*' << mono;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.to_string(); }

MultiPoly sum_of(const Universe& vars) {
  MultiPoly s(vars);
  for (const auto& v : vars) s += MultiPoly::variable(v, vars);
  return s;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Universe* universe, bool collect)
      : text_(text), collect_(collect) {
    if (universe) vars_ = *universe;
  }

  MultiPoly run() {
    // First pass collects identifiers so every intermediate shares one universe.
    if (collect_) collect_identifiers();
    universe_ = std::make_shared<const Universe>(vars_);
    pos_ = 0;
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  std::string_view text_;
  bool collect_;
  std::size_t pos_ = 0;
  Universe vars_;
  std::shared_ptr<const Universe> universe_;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  }

  void collect_identifiers() {
    for (std::size_t i = 0; i < text_.size();) {
      if (ident_start(text_[i])) {
        std::size_t j = i;
        while (j < text_.size() && ident_char(text_[j])) ++j;
        std::string name(text_.substr(i, j - i));
        if (std::find(vars_.begin(), vars_.end(), name) == vars_.end()) vars_.push_back(name);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(text_[i]))) {
        while (i < text_.size() && ident_char(text_[i])) ++i;
      } else {
        ++i;
      }
    }
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  MultiPoly zero() const { return MultiPoly(universe_, {}); }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '(') {
        fail("implicit multiplication is not allowed");
      } else {
        return acc;
      }
    }
  }

  MultiPoly unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  MultiPoly power() {
    MultiPoly base = primary();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected non-negative integer exponent");
      unsigned long k = std::stoul(std::string(text_.substr(start, pos_ - start)));
      return base.pow(static_cast<unsigned>(k));
    }
    return base;
  }

  MultiPoly primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      BigInt num(std::string(text_.substr(start, pos_ - start)));
      BigInt den = 1;
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        std::size_t ds = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (ds == pos_) fail("expected denominator digits");
        den = BigInt(std::string(text_.substr(ds, pos_ - ds)));
        if (den == 0) fail("zero denominator");
      }
      if (pos_ < text_.size() && ident_start(text_[pos_])) fail("implicit multiplication is not allowed");
      TermMap t;
      if (num != 0) t.emplace(Exponents(universe_->size(), 0), BigRational(num, den));
      return MultiPoly(universe_, std::move(t));
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto it = std::find(universe_->begin(), universe_->end(), name);
      if (it == universe_->end()) throw UnknownVariable(name);
      Exponents e(universe_->size(), 0);
      e[static_cast<std::size_t>(it - universe_->begin())] = 1;
      TermMap t;
      t.emplace(std::move(e), BigRational(1));
      return MultiPoly(universe_, std::move(t));
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  using TermMap = MultiPoly::TermMap;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, const Universe& universe) {
  return Parser(text, &universe, false).run();
}

MultiPoly parse_poly(std::string_view text) { return Parser(text, nullptr, true).run(); }

}  // namespace mlelim
