#include "corral/document.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include "json.hpp"
#include <set>
#include <sstream>

namespace corral {

using nlohmann::json;

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { name, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) {
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t k) {
      for (std::size_t j = 0; j < k; ++j, ++i) {
        if (s[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '#') {
        while (i < s.size() && s[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.column = col;
      std::size_t j = i;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
        t.kind = Tok::name;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j < s.size() && s[j] == '.') {
          ++j;
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
          if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
            j = k;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
          }
        }
        t.kind = Tok::number;
      } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
        j = i + 2;
        t.kind = Tok::punct;
      } else if (std::string("{}()[];,=+-*^:/").find(c) != std::string::npos) {
        j = i + 1;
        t.kind = Tok::punct;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      t.text = s.substr(i, j - i);
      advance(j - i);
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    tokens_.push_back(end);
  }

  [[nodiscard]] auto peek(std::size_t k = 0) const -> const Token& {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  auto next() -> const Token& {
    const auto& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  [[nodiscard]] auto at(const std::string& p) const -> bool { return peek().kind != Tok::end && peek().text == p; }
  auto accept(const std::string& p) -> bool {
    if (!at(p) || peek().kind == Tok::number) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail("expected '" + p + "' but found " + describe(peek()));
  }
  auto name() -> std::string {
    if (peek().kind != Tok::name) fail("expected a name but found " + describe(peek()));
    return next().text;
  }
  auto natural() -> unsigned long {
    const auto& t = peek();
    if (t.kind != Tok::number || t.text.find_first_not_of("0123456789") != std::string::npos)
      fail("expected a natural number but found " + describe(t));
    next();
    return std::stoul(t.text);
  }
  auto integer() -> long {
    const bool neg = accept("-");
    auto v = static_cast<long>(natural());
    return neg ? -v : v;
  }
  auto real() -> double {
    const bool neg = accept("-");
    if (peek().kind != Tok::number) fail("expected a number but found " + describe(peek()));
    double v = std::strtod(next().text.c_str(), nullptr);
    return neg ? -v : v;
  }
  [[nodiscard]] auto done() const -> bool { return peek().kind == Tok::end; }

  static auto describe(const Token& t) -> std::string {
    return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

auto index_of(const std::vector<std::string>& names, const std::string& n) -> std::optional<std::size_t> {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

auto format_double(double v) -> std::string {
  if (!std::isfinite(v)) throw DomainError("not_finite", "cannot print a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that reads back exactly.
  for (int prec = 1; prec < 17; ++prec) {
    char shortbuf[40];
    std::snprintf(shortbuf, sizeof shortbuf, "%.*g", prec, v);
    if (std::strtod(shortbuf, nullptr) == v) return shortbuf;
  }
  return buf;
}

// ---------------------------------------------------------------- expressions

struct ExprParser {
  Lexer& lx;
  const std::vector<std::string>& real;
  const std::vector<std::string>& interior;

  auto variable(const Token& t) -> SmoothExpr {
    if (auto i = index_of(real, t.text)) return SmoothExpr::real(*i);
    if (auto i = index_of(interior, t.text)) return SmoothExpr::interior(*i);
    Lexer::fail_at(t, "undeclared generator " + t.text);
  }

  auto expr() -> SmoothExpr {
    auto e = term();
    for (;;) {
      if (lx.accept("+"))
        e = e + term();
      else if (lx.accept("-"))
        e = e + (-term());
      else
        return e;
    }
  }
  auto term() -> SmoothExpr {
    auto e = unary();
    while (lx.accept("*")) e = e * unary();
    return e;
  }
  auto unary() -> SmoothExpr {
    if (lx.accept("-")) return -unary();
    return power();
  }
  auto power() -> SmoothExpr {
    auto e = atom();
    if (lx.accept("^")) e = pow(e, static_cast<unsigned>(lx.natural()));
    return e;
  }
  auto atom() -> SmoothExpr {
    const auto& t = lx.peek();
    if (t.kind == Tok::number) return SmoothExpr::constant(lx.real());
    if (lx.accept("(")) {
      auto e = expr();
      lx.expect(")");
      return e;
    }
    if (t.kind == Tok::name && t.text == "exp") {
      lx.next();
      lx.expect("(");
      auto e = expr();
      lx.expect(")");
      return exp(e);
    }
    if (t.kind == Tok::name) return variable(lx.next());
    lx.fail("expected an expression but found " + Lexer::describe(t));
  }

  // 1 | factor (* factor)*, factor = y [^ n] | exp(expr)
  auto interior_expr() -> InteriorExpr {
    InteriorExpr out{IntVec(interior.size()), SmoothExpr::constant(0)};
    if (lx.peek().kind == Tok::number && lx.peek().text == "1") {
      lx.next();
      return out;
    }
    do {
      const auto& t = lx.peek();
      if (t.kind == Tok::name && t.text == "exp") {
        lx.next();
        lx.expect("(");
        out.factor = out.factor + expr();
        lx.expect(")");
        continue;
      }
      if (t.kind != Tok::name) lx.fail("expected an interior generator or exp(...) but found " + Lexer::describe(t));
      const auto tok = lx.next();
      auto i = index_of(interior, tok.text);
      if (!i) {
        if (index_of(real, tok.text))
          Lexer::fail_at(tok, "real generator " + tok.text + " can only appear inside exp(...) here");
        Lexer::fail_at(tok, "undeclared generator " + tok.text);
      }
      unsigned long k = 1;
      if (lx.accept("^")) k = lx.natural();
      out.alpha[*i] += k;
    } while (lx.accept("*"));
    return out;
  }
};

enum Level { kExpr = 0, kTerm = 1, kUnary = 2, kAtom = 3 };

struct ExprPrinter {
  const std::vector<std::string>& real;
  const std::vector<std::string>& interior;

  auto wrap(const std::string& s, bool paren) -> std::string { return paren ? "(" + s + ")" : s; }

  auto operator()(const SmoothExpr& e, Level level) -> std::string {
    using Op = SmoothExpr::Op;
    switch (e.op()) {
      case Op::constant:
        if (e.value() < 0 || (e.value() == 0 && std::signbit(e.value())))
          return wrap("-" + format_double(-e.value()), level > kUnary);
        return format_double(e.value());
      case Op::var: {
        const auto& names = e.kind() == VarKind::real ? real : interior;
        if (e.index() >= names.size()) throw DomainError("undeclared_generator", "expression refers to a missing generator");
        return names[e.index()];
      }
      case Op::add: {
        const auto& b = e.args()[1];
        std::string s = (*this)(e.args()[0], kExpr);
        if (b.op() == Op::neg)
          s += " - " + (*this)(b.args()[0], kTerm);
        else if (b.op() == Op::constant && b.value() < 0)
          s += " - " + format_double(-b.value());
        else
          s += " + " + (*this)(b, kTerm);
        return wrap(s, level > kExpr);
      }
      case Op::mul:
        return wrap((*this)(e.args()[0], kTerm) + "*" + (*this)(e.args()[1], kUnary), level > kTerm);
      case Op::neg: return wrap("-" + (*this)(e.args()[0], kUnary), level > kUnary);
      case Op::exp: return "exp(" + (*this)(e.args()[0], kExpr) + ")";
      case Op::pow: return wrap((*this)(e.args()[0], kAtom) + "^" + std::to_string(e.power()), level >= kAtom);
    }
    return "";
  }
};

}  // namespace

auto print_expr(const SmoothExpr& e, const std::vector<std::string>& real, const std::vector<std::string>& interior)
    -> std::string {
  return ExprPrinter{real, interior}(e, kExpr);
}

auto print_interior(const InteriorExpr& e, const std::vector<std::string>& real,
                    const std::vector<std::string>& interior) -> std::string {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < e.alpha.size(); ++i) {
    if (e.alpha[i] == 0) continue;
    parts.push_back(interior.at(i) + (e.alpha[i] == 1 ? "" : "^" + e.alpha[i].get_str()));
  }
  if (!e.factor.is_constant(0)) parts.push_back("exp(" + print_expr(e.factor, real, interior) + ")");
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
  return s;
}

auto parse_expr(const std::string& text, const std::vector<std::string>& real,
                const std::vector<std::string>& interior) -> SmoothExpr {
  Lexer lx(text);
  ExprParser p{lx, real, interior};
  auto e = p.expr();
  if (!lx.done()) lx.fail("unexpected " + Lexer::describe(lx.peek()) + " after expression");
  return e;
}

auto parse_interior(const std::string& text, const std::vector<std::string>& real,
                    const std::vector<std::string>& interior) -> InteriorExpr {
  Lexer lx(text);
  ExprParser p{lx, real, interior};
  auto e = p.interior_expr();
  if (!lx.done()) lx.fail("unexpected " + Lexer::describe(lx.peek()) + " after interior expression");
  return e;
}

// ---------------------------------------------------------------- documents

auto GermPairDoc::germs() const -> std::pair<GermMap, GermMap> {
  auto side_of = [](const GermSideDoc& d) {
    return GermSide{d.name, integralize(d.presentation), d.free_rank};
  };
  auto tgt = side_of(target);
  auto make = [&](const GermSideDoc& d) {
    auto src = side_of(d);
    std::vector<IntVec> phi;
    for (const auto& coeffs : d.map) {
      IntVec v(src.monoid.ambient.dim());
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += coeffs[i] * src.monoid.gens[i][k];
      phi.push_back(std::move(v));
    }
    return GermMap{src, tgt, std::move(phi), d.jacobian};
  };
  return {make(left), make(right)};
}

auto PointDoc::resolve(const std::vector<std::string>& real, const std::vector<std::string>& interior) const
    -> RPoint {
  RPoint p{std::vector<double>(real.size(), 0.0), std::vector<double>(interior.size(), 0.0)};
  std::vector<bool> seen(real.size() + interior.size(), false);
  for (const auto& [n, v] : values) {
    if (auto i = index_of(real, n)) {
      p.x[*i] = v;
      seen[*i] = true;
    } else if (auto j = index_of(interior, n)) {
      p.y[*j] = v;
      seen[real.size() + *j] = true;
    } else {
      throw DomainError("undeclared_generator", "point " + name + " sets undeclared generator " + n);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw DomainError("arity_mismatch", "point " + name + " has no value for " +
                                              (i < real.size() ? real[i] : interior[i - real.size()]));
  return p;
}

auto Document::kind() const -> std::string {
  static const char* kinds[] = {"monoid_presentation", "affine_monoid", "local_model", "germ_pair",
                                "cring_presentation",  "point",         "morphism"};
  return kinds[payload.index()];
}

auto Document::name() const -> std::string {
  return std::visit([](const auto& d) { return d.name; }, payload);
}

namespace {

// Monoid relations: 0 | [n*]g (+ [n*]g)*
auto additive(Lexer& lx, const std::vector<std::string>& gens) -> IntVec {
  IntVec v(gens.size());
  if (lx.peek().kind == Tok::number && lx.peek().text == "0" && !(lx.peek(1).text == "*")) {
    lx.next();
    return v;
  }
  do {
    unsigned long k = 1;
    if (lx.peek().kind == Tok::number) {
      k = lx.natural();
      lx.expect("*");
    }
    const auto tok = lx.peek();
    auto i = index_of(gens, lx.name());
    if (!i) Lexer::fail_at(tok, "undeclared generator " + tok.text);
    v[*i] += k;
  } while (lx.accept("+"));
  return v;
}

// Binomial sides: 1 | g[^n] (* g[^n])*
auto multiplicative(Lexer& lx, const std::vector<std::string>& gens) -> IntVec {
  IntVec v(gens.size());
  if (lx.peek().kind == Tok::number && lx.peek().text == "1") {
    lx.next();
    return v;
  }
  do {
    const auto tok = lx.peek();
    auto i = index_of(gens, lx.name());
    if (!i) Lexer::fail_at(tok, "undeclared generator " + tok.text);
    unsigned long k = 1;
    if (lx.accept("^")) k = lx.natural();
    v[*i] += k;
  } while (lx.accept("*"));
  return v;
}

auto print_additive(const IntVec& v, const std::vector<std::string>& gens) -> std::string {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += (v[i] == 1 ? "" : v[i].get_str() + "*") + gens[i];
  }
  return s.empty() ? "0" : s;
}

auto print_multiplicative(const IntVec& v, const std::vector<std::string>& gens) -> std::string {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += gens[i] + (v[i] == 1 ? "" : "^" + v[i].get_str());
  }
  return s.empty() ? "1" : s;
}

void declare(Lexer& lx, std::vector<std::string>& names, std::set<std::string>& all) {
  while (!lx.at(";")) {
    const auto tok = lx.peek();
    auto n = lx.name();
    if (n == "exp") Lexer::fail_at(tok, "exp is reserved");
    if (!all.insert(n).second) Lexer::fail_at(tok, "generator " + n + " declared twice");
    names.push_back(n);
  }
  lx.expect(";");
}

auto parse_monoid_body(Lexer& lx, MonoidPresentation& p, std::set<std::string>& all, const std::string& stmt) -> bool {
  if (stmt == "gens") {
    if (!p.relations.empty()) lx.fail("declare generators before relations");
    declare(lx, p.names, all);
    return true;
  }
  if (stmt == "rel") {
    auto u = additive(lx, p.names);
    lx.expect("=");
    auto v = additive(lx, p.names);
    lx.expect(";");
    p.relations.emplace_back(std::move(u), std::move(v));
    return true;
  }
  return false;
}

auto parse_rational(Lexer& lx) -> Rat {
  const bool neg = lx.accept("-");
  Int num(static_cast<unsigned long>(lx.natural()));
  Int den(1);
  if (lx.accept("/")) {
    const auto tok = lx.peek();
    den = Int(static_cast<unsigned long>(lx.natural()));
    if (den == 0) Lexer::fail_at(tok, "zero denominator");
  }
  Rat r(neg ? Int(-num) : num, den);
  r.canonicalize();
  return r;
}

auto parse_matrix(Lexer& lx) -> RatMatrix {
  RatMatrix m;
  lx.expect("[");
  if (lx.accept("]")) return m;
  do {
    std::vector<Rat> row;
    lx.expect("[");
    if (!lx.accept("]")) {
      do row.push_back(parse_rational(lx));
      while (lx.accept(","));
      lx.expect("]");
    }
    m.push_back(std::move(row));
  } while (lx.accept(","));
  lx.expect("]");
  return m;
}

auto print_matrix(const RatMatrix& m) -> std::string {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + m[i][j].get_str();
    s += "]";
  }
  return s + "]";
}

auto parse_side(Lexer& lx, const GermSideDoc* target) -> GermSideDoc {
  GermSideDoc d;
  d.name = lx.name();
  lx.expect("{");
  std::set<std::string> all;
  std::vector<std::optional<IntVec>> images(target ? target->presentation.size() : 0);
  bool have_jacobian = false;
  while (!lx.accept("}")) {
    const auto tok = lx.peek();
    const auto stmt = lx.name();
    if (parse_monoid_body(lx, d.presentation, all, stmt)) continue;
    if (stmt == "free") {
      d.free_rank = lx.natural();
      lx.expect(";");
    } else if (stmt == "map" && target) {
      const auto gt = lx.peek();
      auto j = index_of(target->presentation.names, lx.name());
      if (!j) Lexer::fail_at(gt, "undeclared target generator " + gt.text);
      if (images[*j]) Lexer::fail_at(gt, "generator " + gt.text + " mapped twice");
      lx.expect("->");
      images[*j] = additive(lx, d.presentation.names);
      lx.expect(";");
    } else if (stmt == "jacobian" && target) {
      d.jacobian = parse_matrix(lx);
      have_jacobian = true;
      lx.expect(";");
    } else {
      Lexer::fail_at(tok, "unknown statement '" + stmt + "'");
    }
  }
  if (target) {
    for (std::size_t j = 0; j < images.size(); ++j) {
      if (!images[j]) lx.fail("side " + d.name + " does not map " + target->presentation.names[j]);
      d.map.push_back(*images[j]);
    }
    if (!have_jacobian) lx.fail("side " + d.name + " needs a jacobian");
  }
  return d;
}

auto print_side(const std::string& role, const GermSideDoc& d, const GermSideDoc* target) -> std::string {
  std::ostringstream os;
  os << "  " << role << " " << d.name << " {";
  if (!d.presentation.names.empty()) {
    os << " gens";
    for (const auto& n : d.presentation.names) os << " " << n;
    os << ";";
  }
  for (const auto& [u, v] : d.presentation.relations)
    os << " rel " << print_additive(u, d.presentation.names) << " = " << print_additive(v, d.presentation.names)
       << ";";
  if (d.free_rank) os << " free " << d.free_rank << ";";
  if (target) {
    for (std::size_t j = 0; j < d.map.size(); ++j)
      os << " map " << target->presentation.names[j] << " -> " << print_additive(d.map[j], d.presentation.names)
         << ";";
    os << " jacobian " << print_matrix(d.jacobian) << ";";
  }
  os << " }\n";
  return os.str();
}

auto find_ring(const std::vector<Document>& docs, const std::string& name) -> const CRingPresentation* {
  for (auto it = docs.rbegin(); it != docs.rend(); ++it)
    if (auto* c = std::get_if<CRingPresentation>(&it->payload); c && c->name == name) return c;
  return nullptr;
}

auto parse_one(Lexer& lx, const std::vector<Document>& before) -> Document {
  const auto head = lx.peek();
  const auto kw = lx.name();
  if (kw == "monoid") {
    NamedPresentation d;
    d.name = lx.name();
    lx.expect("{");
    std::set<std::string> all;
    while (!lx.accept("}")) {
      const auto tok = lx.peek();
      if (!parse_monoid_body(lx, d.presentation, all, lx.name()))
        Lexer::fail_at(tok, "unknown statement '" + tok.text + "' in monoid");
    }
    return Document{d};
  }
  if (kw == "affine") {
    NamedAffine d;
    d.name = lx.name();
    lx.expect("{");
    lx.expect("lattice");
    d.monoid.ambient.free_rank = lx.natural();
    if (lx.accept("torsion"))
      while (!lx.at(";")) {
        const auto tok = lx.peek();
        auto t = lx.natural();
        if (t < 2) Lexer::fail_at(tok, "torsion orders must be at least 2");
        d.monoid.ambient.torsion.emplace_back(t);
      }
    lx.expect(";");
    std::set<std::string> all;
    while (!lx.accept("}")) {
      const auto tok = lx.peek();
      if (lx.name() != "gen") Lexer::fail_at(tok, "expected 'gen'");
      const auto nt = lx.peek();
      auto n = lx.name();
      if (!all.insert(n).second) Lexer::fail_at(nt, "generator " + n + " declared twice");
      lx.expect("(");
      IntVec v;
      if (!lx.at(")")) do
          v.emplace_back(lx.integer());
        while (lx.accept(","));
      lx.expect(")");
      if (v.size() != d.monoid.ambient.dim())
        Lexer::fail_at(nt, "generator " + n + " has " + std::to_string(v.size()) + " coordinates, expected " +
                               std::to_string(d.monoid.ambient.dim()));
      lx.expect(";");
      d.monoid.gens.push_back(std::move(v));
      d.monoid.labels.push_back(n);
    }
    return Document{d};
  }
  if (kw == "model") {
    NamedModel d;
    d.name = lx.name();
    lx.expect("{");
    std::set<std::string> all;
    while (!lx.accept("}")) {
      const auto tok = lx.peek();
      const auto stmt = lx.name();
      if (stmt == "gens") {
        if (!d.relations.empty()) Lexer::fail_at(tok, "declare generators before relations");
        declare(lx, d.gens, all);
      } else if (stmt == "rel") {
        auto u = multiplicative(lx, d.gens);
        lx.expect("=");
        auto v = multiplicative(lx, d.gens);
        lx.expect(";");
        d.relations.emplace_back(std::move(u), std::move(v));
      } else {
        Lexer::fail_at(tok, "unknown statement '" + stmt + "' in model");
      }
    }
    return Document{d};
  }
  if (kw == "germpair") {
    GermPairDoc d;
    d.name = lx.name();
    lx.expect("{");
    lx.expect("target");
    d.target = parse_side(lx, nullptr);
    lx.expect("left");
    d.left = parse_side(lx, &d.target);
    lx.expect("right");
    d.right = parse_side(lx, &d.target);
    lx.expect("}");
    return Document{d};
  }
  if (kw == "cring") {
    CRingPresentation c;
    c.name = lx.name();
    lx.expect("{");
    std::set<std::string> all;
    while (!lx.accept("}")) {
      const auto tok = lx.peek();
      const auto stmt = lx.name();
      ExprParser ep{lx, c.real, c.interior};
      if (stmt == "real" || stmt == "interior") {
        if (!c.zeros.empty() || !c.relations.empty()) Lexer::fail_at(tok, "declare generators before relations");
        declare(lx, stmt == "real" ? c.real : c.interior, all);
      } else if (stmt == "zero") {
        c.zeros.push_back(ep.expr());
        lx.expect(";");
      } else if (stmt == "rel") {
        auto g = ep.interior_expr();
        lx.expect("=");
        auto h = ep.interior_expr();
        lx.expect(";");
        c.relations.emplace_back(std::move(g), std::move(h));
      } else {
        Lexer::fail_at(tok, "unknown statement '" + stmt + "' in cring");
      }
    }
    return Document{c};
  }
  if (kw == "point") {
    PointDoc d;
    d.name = lx.name();
    lx.expect("{");
    std::set<std::string> seen;
    while (!lx.accept("}")) {
      const auto tok = lx.peek();
      auto n = lx.name();
      if (!seen.insert(n).second) Lexer::fail_at(tok, "coordinate " + n + " set twice");
      lx.expect("=");
      d.values.emplace_back(n, lx.real());
      lx.expect(";");
    }
    return Document{d};
  }
  if (kw == "morphism") {
    CRingMorphism m;
    m.name = lx.name();
    lx.expect(":");
    const auto st = lx.peek();
    const auto* src = find_ring(before, lx.name());
    if (!src) Lexer::fail_at(st, "undeclared ring " + st.text);
    lx.expect("->");
    const auto tt = lx.peek();
    const auto* tgt = find_ring(before, lx.name());
    if (!tgt) Lexer::fail_at(tt, "undeclared ring " + tt.text);
    m.source = *src;
    m.target = *tgt;
    std::vector<std::optional<SmoothExpr>> real(src->real.size());
    std::vector<std::optional<InteriorExpr>> interior(src->interior.size());
    lx.expect("{");
    while (!lx.accept("}")) {
      const auto gt = lx.peek();
      auto g = lx.name();
      lx.expect("->");
      ExprParser ep{lx, tgt->real, tgt->interior};
      if (auto i = index_of(src->real, g)) {
        if (real[*i]) Lexer::fail_at(gt, "generator " + g + " mapped twice");
        real[*i] = ep.expr();
      } else if (auto j = index_of(src->interior, g)) {
        if (interior[*j]) Lexer::fail_at(gt, "generator " + g + " mapped twice");
        interior[*j] = ep.interior_expr();
      } else {
        Lexer::fail_at(gt, "undeclared generator " + g + " of " + src->name);
      }
      lx.expect(";");
    }
    for (std::size_t i = 0; i < real.size(); ++i) {
      if (!real[i]) lx.fail("morphism " + m.name + " does not map " + src->real[i]);
      m.real.push_back(*real[i]);
    }
    for (std::size_t i = 0; i < interior.size(); ++i) {
      if (!interior[i]) lx.fail("morphism " + m.name + " does not map " + src->interior[i]);
      m.interior.push_back(*interior[i]);
    }
    return Document{m};
  }
  Lexer::fail_at(head, "unknown document kind '" + kw + "'");
}

auto print_names(const char* kw, const std::vector<std::string>& names) -> std::string {
  if (names.empty()) return "";
  std::string s = std::string("  ") + kw;
  for (const auto& n : names) s += " " + n;
  return s + ";\n";
}

struct TextPrinter {
  std::ostringstream& os;

  void operator()(const NamedPresentation& d) {
    os << "monoid " << d.name << " {\n" << print_names("gens", d.presentation.names);
    for (const auto& [u, v] : d.presentation.relations)
      os << "  rel " << print_additive(u, d.presentation.names) << " = " << print_additive(v, d.presentation.names)
         << ";\n";
    os << "}\n";
  }
  void operator()(const NamedAffine& d) {
    os << "affine " << d.name << " {\n  lattice " << d.monoid.ambient.free_rank;
    if (!d.monoid.ambient.torsion.empty()) {
      os << " torsion";
      for (const auto& t : d.monoid.ambient.torsion) os << " " << t.get_str();
    }
    os << ";\n";
    for (std::size_t i = 0; i < d.monoid.gens.size(); ++i) {
      os << "  gen " << d.monoid.labels[i] << " (";
      for (std::size_t k = 0; k < d.monoid.gens[i].size(); ++k) os << (k ? ", " : "") << d.monoid.gens[i][k].get_str();
      os << ");\n";
    }
    os << "}\n";
  }
  void operator()(const NamedModel& d) {
    os << "model " << d.name << " {\n" << print_names("gens", d.gens);
    for (const auto& [u, v] : d.relations)
      os << "  rel " << print_multiplicative(u, d.gens) << " = " << print_multiplicative(v, d.gens) << ";\n";
    os << "}\n";
  }
  void operator()(const GermPairDoc& d) {
    os << "germpair " << d.name << " {\n"
       << print_side("target", d.target, nullptr) << print_side("left", d.left, &d.target)
       << print_side("right", d.right, &d.target) << "}\n";
  }
  void operator()(const CRingPresentation& c) {
    os << "cring " << c.name << " {\n" << print_names("real", c.real) << print_names("interior", c.interior);
    for (const auto& z : c.zeros) os << "  zero " << print_expr(z, c.real, c.interior) << ";\n";
    for (const auto& [g, h] : c.relations)
      os << "  rel " << print_interior(g, c.real, c.interior) << " = " << print_interior(h, c.real, c.interior)
         << ";\n";
    os << "}\n";
  }
  void operator()(const PointDoc& d) {
    os << "point " << d.name << " {";
    for (const auto& [n, v] : d.values) os << " " << n << " = " << format_double(v) << ";";
    os << " }\n";
  }
  void operator()(const CRingMorphism& m) {
    os << "morphism " << m.name << " : " << m.source.name << " -> " << m.target.name << " {\n";
    const auto& t = m.target;
    for (std::size_t i = 0; i < m.real.size(); ++i)
      os << "  " << m.source.real[i] << " -> " << print_expr(m.real[i], t.real, t.interior) << ";\n";
    for (std::size_t i = 0; i < m.interior.size(); ++i)
      os << "  " << m.source.interior[i] << " -> " << print_interior(m.interior[i], t.real, t.interior) << ";\n";
    os << "}\n";
  }
};

}  // namespace

auto parse_documents(const std::string& text) -> std::vector<Document> {
  Lexer lx(text);
  std::vector<Document> docs;
  while (!lx.done()) docs.push_back(parse_one(lx, docs));
  return docs;
}

auto print_documents(const std::vector<Document>& docs) -> std::string {
  std::ostringstream os;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i) os << "\n";
    std::visit(TextPrinter{os}, docs[i].payload);
  }
  return os.str();
}

// ---------------------------------------------------------------- JSON

namespace {

auto ints(const IntVec& v) -> json {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

auto to_ints(const json& j, std::size_t n, const std::string& where) -> IntVec {
  if (!j.is_array() || j.size() != n)
    throw DomainError("arity_mismatch", where + " needs " + std::to_string(n) + " entries");
  IntVec v;
  for (const auto& x : j) v.emplace_back(x.get<long>());
  return v;
}

auto relations_json(const std::vector<std::pair<IntVec, IntVec>>& rels) -> json {
  json a = json::array();
  for (const auto& [u, v] : rels) a.push_back(json{{"lhs", ints(u)}, {"rhs", ints(v)}});
  return a;
}

auto relations_from(const json& j, std::size_t n) -> std::vector<std::pair<IntVec, IntVec>> {
  std::vector<std::pair<IntVec, IntVec>> out;
  for (const auto& r : j.value("relations", json::array()))
    out.emplace_back(to_ints(r.at("lhs"), n, "relation"), to_ints(r.at("rhs"), n, "relation"));
  return out;
}

auto side_json(const GermSideDoc& d, bool with_map) -> json {
  json j{{"name", d.name},
         {"gens", d.presentation.names},
         {"relations", relations_json(d.presentation.relations)},
         {"free_rank", d.free_rank}};
  if (with_map) {
    json m = json::array();
    for (const auto& v : d.map) m.push_back(ints(v));
    j["map"] = m;
    json jac = json::array();
    for (const auto& row : d.jacobian) {
      json r = json::array();
      for (const auto& q : row) r.push_back(q.get_str());
      jac.push_back(r);
    }
    j["jacobian"] = jac;
  }
  return j;
}

auto side_from(const json& j, const GermSideDoc* target) -> GermSideDoc {
  GermSideDoc d;
  d.name = j.at("name").get<std::string>();
  d.presentation.names = j.at("gens").get<std::vector<std::string>>();
  d.presentation.relations = relations_from(j, d.presentation.size());
  d.free_rank = j.value("free_rank", std::size_t{0});
  if (target) {
    for (const auto& v : j.at("map")) d.map.push_back(to_ints(v, d.presentation.size(), "map entry"));
    if (d.map.size() != target->presentation.size())
      throw DomainError("arity_mismatch", "side " + d.name + " must map every target generator");
    for (const auto& row : j.at("jacobian")) {
      std::vector<Rat> r;
      for (const auto& q : row) {
        Rat x(q.get<std::string>());
        x.canonicalize();
        r.push_back(x);
      }
      d.jacobian.push_back(std::move(r));
    }
  }
  return d;
}

struct JsonPrinter {
  auto operator()(const NamedPresentation& d) -> json {
    return {{"gens", d.presentation.names}, {"relations", relations_json(d.presentation.relations)}};
  }
  auto operator()(const NamedAffine& d) -> json {
    json torsion = json::array();
    for (const auto& t : d.monoid.ambient.torsion) torsion.push_back(t.get_si());
    json gens = json::array();
    for (std::size_t i = 0; i < d.monoid.gens.size(); ++i)
      gens.push_back(json{{"name", d.monoid.labels[i]}, {"vector", ints(d.monoid.gens[i])}});
    return {{"lattice", d.monoid.ambient.free_rank}, {"torsion", torsion}, {"gens", gens}};
  }
  auto operator()(const NamedModel& d) -> json { return {{"gens", d.gens}, {"relations", relations_json(d.relations)}}; }
  auto operator()(const GermPairDoc& d) -> json {
    return {{"target", side_json(d.target, false)}, {"left", side_json(d.left, true)}, {"right", side_json(d.right, true)}};
  }
  auto operator()(const CRingPresentation& c) -> json {
    json zeros = json::array(), rels = json::array();
    for (const auto& z : c.zeros) zeros.push_back(print_expr(z, c.real, c.interior));
    for (const auto& [g, h] : c.relations)
      rels.push_back(json{{"lhs", print_interior(g, c.real, c.interior)}, {"rhs", print_interior(h, c.real, c.interior)}});
    return {{"real", c.real}, {"interior", c.interior}, {"zeros", zeros}, {"relations", rels}};
  }
  auto operator()(const PointDoc& d) -> json {
    json v = json::array();
    for (const auto& [n, x] : d.values) v.push_back(json{{"name", n}, {"value", x}});
    return {{"values", v}};
  }
  auto operator()(const CRingMorphism& m) -> json {
    json images = json::array();
    const auto& t = m.target;
    for (std::size_t i = 0; i < m.real.size(); ++i)
      images.push_back(json{{"gen", m.source.real[i]}, {"image", print_expr(m.real[i], t.real, t.interior)}});
    for (std::size_t i = 0; i < m.interior.size(); ++i)
      images.push_back(
          json{{"gen", m.source.interior[i]}, {"image", print_interior(m.interior[i], t.real, t.interior)}});
    return {{"source", m.source.name}, {"target", m.target.name}, {"images", images}};
  }
};

auto from_json(const json& j, const std::vector<Document>& before) -> Document {
  const auto kind = j.at("kind").get<std::string>();
  const auto name = j.at("name").get<std::string>();
  if (kind == "monoid_presentation") {
    NamedPresentation d{name, {}};
    d.presentation.names = j.at("gens").get<std::vector<std::string>>();
    d.presentation.relations = relations_from(j, d.presentation.size());
    return Document{d};
  }
  if (kind == "affine_monoid") {
    NamedAffine d{name, {}};
    d.monoid.ambient.free_rank = j.at("lattice").get<std::size_t>();
    for (const auto& t : j.value("torsion", json::array())) d.monoid.ambient.torsion.emplace_back(t.get<long>());
    for (const auto& g : j.at("gens")) {
      d.monoid.labels.push_back(g.at("name").get<std::string>());
      d.monoid.gens.push_back(to_ints(g.at("vector"), d.monoid.ambient.dim(), "generator " + d.monoid.labels.back()));
    }
    return Document{d};
  }
  if (kind == "local_model") {
    NamedModel d{name, j.at("gens").get<std::vector<std::string>>(), {}};
    d.relations = relations_from(j, d.gens.size());
    return Document{d};
  }
  if (kind == "germ_pair") {
    GermPairDoc d;
    d.name = name;
    d.target = side_from(j.at("target"), nullptr);
    d.left = side_from(j.at("left"), &d.target);
    d.right = side_from(j.at("right"), &d.target);
    return Document{d};
  }
  if (kind == "cring_presentation") {
    CRingPresentation c;
    c.name = name;
    c.real = j.value("real", std::vector<std::string>{});
    c.interior = j.value("interior", std::vector<std::string>{});
    for (const auto& z : j.value("zeros", json::array())) c.zeros.push_back(parse_expr(z.get<std::string>(), c.real, c.interior));
    for (const auto& r : j.value("relations", json::array()))
      c.relations.emplace_back(parse_interior(r.at("lhs").get<std::string>(), c.real, c.interior),
                               parse_interior(r.at("rhs").get<std::string>(), c.real, c.interior));
    c.validate();
    return Document{c};
  }
  if (kind == "point") {
    PointDoc d{name, {}};
    for (const auto& v : j.at("values")) d.values.emplace_back(v.at("name").get<std::string>(), v.at("value").get<double>());
    return Document{d};
  }
  if (kind == "morphism") {
    const auto* src = find_ring(before, j.at("source").get<std::string>());
    const auto* tgt = find_ring(before, j.at("target").get<std::string>());
    if (!src || !tgt) throw DomainError("undeclared_ring", "morphism " + name + " refers to an undeclared ring");
    CRingMorphism m{name, *src, *tgt, {}, {}};
    m.real.resize(src->real.size());
    m.interior.resize(src->interior.size());
    std::set<std::string> seen;
    for (const auto& im : j.at("images")) {
      const auto g = im.at("gen").get<std::string>();
      const auto text = im.at("image").get<std::string>();
      seen.insert(g);
      if (auto i = index_of(src->real, g))
        m.real[*i] = parse_expr(text, tgt->real, tgt->interior);
      else if (auto k = index_of(src->interior, g))
        m.interior[*k] = parse_interior(text, tgt->real, tgt->interior);
      else
        throw DomainError("undeclared_generator", "morphism " + name + " maps undeclared generator " + g);
    }
    if (seen.size() != src->size()) throw DomainError("arity_mismatch", "morphism " + name + " must map every generator");
    return Document{m};
  }
  throw DomainError("unknown_kind", "unknown document kind " + kind);
}

}  // namespace

auto print_documents_json(const std::vector<Document>& docs) -> std::string {
  json arr = json::array();
  for (const auto& d : docs) {
    json j = std::visit(JsonPrinter{}, d.payload);
    j["kind"] = d.kind();
    j["name"] = d.name();
    arr.push_back(j);
  }
  return json{{"format", 1}, {"documents", arr}}.dump(2) + "\n";
}

auto parse_documents_json(const std::string& text) -> std::vector<Document> {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0, 0);
  }
  try {
    if (root.value("format", 0) != 1) throw ParseError("expected \"format\": 1", 0, 0);
    std::vector<Document> docs;
    std::size_t i = 0;
    for (const auto& j : root.at("documents")) {
      ++i;
      try {
        docs.push_back(from_json(j, docs));
      } catch (const ParseError& e) {
        throw ParseError("document " + std::to_string(i) + ": " + e.what(), 0, 0);
      } catch (const DomainError& e) {
        throw ParseError("document " + std::to_string(i) + ": " + e.what(), 0, 0);
      }
    }
    return docs;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what(), 0, 0);
  }
}

auto parse_any(const std::string& text) -> std::vector<Document> {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_documents_json(text);
  return parse_documents(text);
}

}  // namespace corral
