#include "varseq/text.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "varseq/errors.hpp"

namespace varseq {

namespace {

constexpr unsigned kMaxExponent = 64;

struct Token {
  enum class Kind { Name, Integer, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::Name;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Kind::Integer;
    } else if (std::string_view("+-*/^()[],").find(c) != std::string_view::npos) {
      j = i + 1;
      t.kind = Token::Kind::Symbol;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, column);
    }
    t.text = std::string(s.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

std::optional<int> positional(std::string_view name, std::string_view prefix) {
  if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return std::nullopt;
  int value = 0;
  for (char c : name.substr(prefix.size())) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || value > 1000) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

// An expression or a form; expressions act as 0-forms when mixed with forms.
struct Value {
  std::optional<Expr> expr;
  DiffForm form;

  bool is_form() const { return !expr.has_value(); }
};

class Parser {
 public:
  Parser(std::string_view text, const JetContext& ctx, ContextPtr form_ctx, int order)
      : tokens_(tokenize(text)), ctx_(ctx), form_ctx_(std::move(form_ctx)), order_(order) {}

  Value parse() {
    if (peek().kind == Token::Kind::End) fail("empty input");
    Value v = sum();
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool at(const char* symbol) const {
    return peek().kind == Token::Kind::Symbol && peek().text == symbol;
  }
  [[noreturn]] void fail(const std::string& what) const { fail(what, peek()); }
  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    throw ParseError(what, t.line, t.column);
  }
  void expect(const char* symbol) {
    if (!at(symbol)) fail(std::string("expected '") + symbol + "'");
    ++pos_;
  }

  bool starts_atom() const {
    const Token& t = peek();
    return t.kind == Token::Kind::Name || t.kind == Token::Kind::Integer || (t.kind == Token::Kind::Symbol && t.text == "(");
  }

  Value sum() {
    Value acc = product();
    while (at("+") || at("-")) {
      const Token& op = next();
      Value rhs = product();
      acc = add(acc, op.text == "-" ? negate(rhs) : rhs, op);
    }
    return acc;
  }

  Value product() {
    Value acc = unary();
    while (true) {
      if (at("*")) {
        const Token& op = next();
        acc = multiply(acc, unary(), op);
      } else if (at("/")) {
        const Token& op = next();
        Value rhs = unary();
        if (rhs.is_form() || !rhs.expr->is_constant() || rhs.expr->constant_value() == 0) {
          fail("division is only allowed by a nonzero constant", op);
        }
        acc = multiply(acc, Value{Expr(1 / rhs.expr->constant_value()), {}}, op);
      } else if (starts_atom()) {
        const Token& op = peek();
        acc = multiply(acc, unary(), op);
      } else {
        return acc;
      }
    }
  }

  Value unary() {
    if (at("-")) {
      next();
      return negate(unary());
    }
    if (at("+")) {
      next();
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = atom();
    while (at("^")) {
      const Token& op = next();
      if (peek().kind == Token::Kind::Integer) {
        const Token& t = next();
        if (base.is_form()) fail("a form cannot be raised to a power", op);
        if (t.text.size() > 3 || std::stoul(t.text) > kMaxExponent) fail("exponent too large", t);
        base.expr = base.expr->pow(static_cast<unsigned>(std::stoul(t.text)));
      } else {
        Value rhs = atom();
        base = multiply(base, rhs, op);
      }
    }
    return base;
  }

  Value atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Integer) {
      next();
      return {Expr(Rational(mpz_class(t.text))), {}};
    }
    if (at("(")) {
      next();
      Value v = sum();
      expect(")");
      return v;
    }
    if (t.kind != Token::Kind::Name) fail(t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    next();
    if (auto i = ctx_.base_index(t.text)) return {Expr::base(*i), {}};
    if (auto a = ctx_.fiber_index(t.text)) {
      MultiIndex I = at("[") ? multi_index(t) : MultiIndex{};
      return {Expr::fiber(*a, I), {}};
    }
    return covector(t);
  }

  MultiIndex multi_index(const Token& owner) {
    expect("[");
    std::vector<int> entries;
    while (!at("]")) {
      if (!entries.empty()) expect(",");
      const Token& e = peek();
      if (e.kind != Token::Kind::Integer) fail("expected a base position");
      next();
      const unsigned long k = e.text.size() > 3 ? 1000 : std::stoul(e.text);
      if (k < 1 || k > static_cast<unsigned long>(ctx_.n())) fail("base position out of range 1.." + std::to_string(ctx_.n()), e);
      entries.push_back(static_cast<int>(k));
      if (entries.size() > 64) fail("multi-index too long", owner);
    }
    expect("]");
    return MultiIndex::from_entries(entries);
  }

  Value covector(const Token& t) {
    if (!form_ctx_) fail("unknown variable '" + t.text + "'", t);
    auto checked_fiber = [&](int alpha) {
      if (alpha < 1 || alpha > ctx_.m()) fail("fiber index out of range 1.." + std::to_string(ctx_.m()), t);
      return alpha;
    };
    try {
      if (auto i = positional(t.text, "dx")) {
        if (*i < 1 || *i > ctx_.n()) fail("base index out of range 1.." + std::to_string(ctx_.n()), t);
        return {std::nullopt, DiffForm::dx(form_ctx_, order_, *i)};
      }
      if (t.text.size() > 1 && t.text[0] == 'd') {
        if (auto i = ctx_.base_index(t.text.substr(1))) return {std::nullopt, DiffForm::dx(form_ctx_, order_, *i)};
      }
      if (auto a = positional(t.text, "w")) {
        const int alpha = checked_fiber(*a);
        return {std::nullopt, DiffForm::contact(form_ctx_, order_, alpha, multi_index(t))};
      }
      if (auto a = positional(t.text, "dU")) {
        const int alpha = checked_fiber(*a);
        return {std::nullopt, DiffForm::dy(form_ctx_, order_, alpha, multi_index(t))};
      }
    } catch (const DomainError& e) {
      fail(e.what(), t);
    }
    fail("unknown symbol '" + t.text + "'", t);
  }

  Value as_form(const Value& v) const {
    if (v.is_form()) return v;
    return {std::nullopt, DiffForm::function(form_ctx_, order_, *v.expr)};
  }

  Value negate(const Value& v) const {
    if (v.is_form()) return {std::nullopt, -v.form};
    return {-*v.expr, {}};
  }

  Value add(const Value& a, const Value& b, const Token& op) const {
    if (!a.is_form() && !b.is_form()) return {*a.expr + *b.expr, {}};
    const Value fa = as_form(a);
    const Value fb = as_form(b);
    if (fa.form.degree() != fb.form.degree()) fail("sum of forms of different degrees", op);
    return guarded([&] { return Value{std::nullopt, fa.form + fb.form}; }, op);
  }

  Value multiply(const Value& a, const Value& b, const Token& op) const {
    if (!a.is_form() && !b.is_form()) return {*a.expr * *b.expr, {}};
    if (!a.is_form()) return guarded([&] { return Value{std::nullopt, *a.expr * b.form}; }, op);
    if (!b.is_form()) return guarded([&] { return Value{std::nullopt, *b.expr * a.form}; }, op);
    return guarded([&] { return Value{std::nullopt, wedge(a.form, b.form)}; }, op);
  }

  template <class F>
  Value guarded(F&& fn, const Token& op) const {
    try {
      return fn();
    } catch (const DomainError& e) {
      fail(e.what(), op);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const JetContext& ctx_;
  ContextPtr form_ctx_;
  int order_;
};

}  // namespace

Expr parse_expr(std::string_view text, const JetContext& ctx) {
  Value v = Parser(text, ctx, nullptr, 0).parse();
  return *v.expr;
}

DiffForm parse_form(std::string_view text, const ContextPtr& ctx, int order) {
  if (order < 0) order = ctx->r();
  Parser parser(text, *ctx, ctx, order);
  Value v = parser.parse();
  if (!v.is_form()) {
    try {
      return DiffForm::function(ctx, order, *v.expr);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), 1, 1);
    }
  }
  return v.form;
}

std::string to_text(const Rational& q) { return q.get_str(); }

namespace {

std::string multi_text(const MultiIndex& I) {
  std::string out = "[";
  bool first = true;
  for (int e : I.entries()) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "]";
}

}  // namespace

std::string to_text(const JetVariable& v, const JetContext& ctx) {
  if (v.is_base()) return ctx.base_names().at(static_cast<std::size_t>(v.index) - 1);
  std::string out = ctx.fiber_names().at(static_cast<std::size_t>(v.index) - 1);
  if (!v.multi.empty()) out += multi_text(v.multi);
  return out;
}

std::string to_text(const Expr& e, const JetContext& ctx) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : e.terms()) {
    Rational magnitude = c;
    if (c < 0) {
      os << (first ? "-" : " - ");
      magnitude = -c;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    std::vector<std::string> factors;
    if (magnitude != 1 || m.is_one()) factors.push_back(to_text(magnitude));
    for (const auto& [v, power] : m.factors()) {
      std::string f = to_text(v, ctx);
      if (power != 1) f += "^" + std::to_string(power);
      factors.push_back(std::move(f));
    }
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

std::string to_text(const Covector& c) {
  switch (c.kind) {
    case Covector::Kind::Dx:
      return "dx" + std::to_string(c.index);
    case Covector::Kind::Contact:
      return "w" + std::to_string(c.index) + multi_text(c.multi);
    case Covector::Kind::DyTop:
      return "dU" + std::to_string(c.index) + multi_text(c.multi);
  }
  return {};
}

std::string to_text(const DiffForm& rho, bool keep_degree) {
  if (rho.is_zero()) {
    if (!keep_degree || !rho.typed() || rho.degree() == 0) return "0";
    const JetContext& ctx = *rho.context();
    Wedge basis;
    for (int i = 1; i <= ctx.n(); ++i) basis.push_back(Covector::dx(i));
    for (int a = 1; a <= ctx.m(); ++a) {
      for (const MultiIndex& I : MultiIndex::all_up_to(ctx.n(), rho.order() - 1)) basis.push_back(Covector::contact(a, I));
      for (const MultiIndex& I : MultiIndex::all_of_order(ctx.n(), rho.order())) basis.push_back(Covector::dy_top(a, I));
    }
    std::string out = "0";
    for (int k = 0; k < rho.degree() && k < static_cast<int>(basis.size()); ++k) out += (k ? "^" : "*") + to_text(basis[k]);
    return out;
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : rho.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_text(c, *rho.context()) << ")";
    for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "^" : "*") << to_text(w[k]);
  }
  return os.str();
}

}  // namespace varseq
