#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "varseq/jet_context.hpp"
#include "varseq/multi_index.hpp"
#include "varseq/rational.hpp"

namespace varseq {

/// A jet coordinate: either a base coordinate x^i or a fiber derivative y^a_I.
struct JetVariable {
  enum class Kind : std::uint8_t { Base, Fiber };

  Kind kind = Kind::Base;
  int index = 1;  // base direction i, or fiber component a (both 1-based)
  MultiIndex multi;

  static JetVariable base(int i) { return {Kind::Base, i, {}}; }
  static JetVariable fiber(int alpha, MultiIndex I = {}) {
    return {Kind::Fiber, alpha, I};
  }

  bool is_base() const { return kind == Kind::Base; }
  bool is_fiber() const { return kind == Kind::Fiber; }
  /// |I| for fiber variables, -1 for base variables.
  int order() const { return is_fiber() ? multi.order() : -1; }

  /// Whether the variable exists in the chart (order is not checked).
  bool valid_in(const JetContext& ctx) const;

  auto operator<=>(const JetVariable& other) const {
    if (auto c = kind <=> other.kind; c != 0) return c;
    if (auto c = index <=> other.index; c != 0) return c;
    return multi.counts() <=> other.multi.counts();
  }
  bool operator==(const JetVariable& other) const = default;
};

/// Product of powers of jet variables, kept sorted by variable.
class Monomial {
 public:
  using Factor = std::pair<JetVariable, int>;

  Monomial() = default;
  explicit Monomial(const JetVariable& v, int power = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  int degree() const;
  int power_of(const JetVariable& v) const;

  Monomial operator*(const Monomial& other) const;
  /// Divides out one power of v; requires power_of(v) > 0.
  Monomial reduced(const JetVariable& v) const;
  Monomial without(const JetVariable& v) const;

  auto operator<=>(const Monomial& other) const = default;
  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Exact polynomial in jet variables with rational coefficients. The term map
/// never stores zero coefficients, so the representation is canonical and
/// equality is structural.
class Expr {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Expr() = default;
  Expr(long value);  // NOLINT(google-explicit-constructor)
  explicit Expr(const Rational& value);
  static Expr variable(const JetVariable& v);
  static Expr base(int i) { return variable(JetVariable::base(i)); }
  static Expr fiber(int alpha, MultiIndex I = {}) {
    return variable(JetVariable::fiber(alpha, I));
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // constant term
  std::size_t size() const { return terms_.size(); }

  Expr operator-() const;
  Expr& operator+=(const Expr& other);
  Expr& operator-=(const Expr& other);
  Expr& operator*=(const Expr& other);
  Expr& operator*=(const Rational& factor);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator*(Expr a, const Rational& q) { return a *= q; }
  friend Expr operator*(const Rational& q, Expr a) { return a *= q; }
  bool operator==(const Expr& other) const = default;

  Expr pow(unsigned exponent) const;

  /// Highest fiber order |I| occurring, or -1 when no fiber variable occurs.
  int order() const;
  std::vector<JetVariable> variables() const;
  bool has_fiber_variables() const;
  int degree_in(const JetVariable& v) const;
  int total_degree() const;
  /// Coefficient of v^k, as an expression free of v.
  Expr coefficient(const JetVariable& v, int k) const;
  Expr substitute(const JetVariable& v, const Expr& value) const;
  /// Substitutes every variable for which `lookup` returns a value.
  Expr substitute(const std::function<const Expr*(const JetVariable&)>& lookup) const;

  double evaluate(const std::function<double(const JetVariable&)>& value_of) const;

  void add_term(const Monomial& m, const Rational& c);

 private:
  TermMap terms_;
};

/// Canonical form. Expressions are kept canonical at all times, so this is
/// the identity; it exists as the named normalization entry point.
inline Expr normalize(const Expr& e) { return e; }

/// Formal partial derivative, all jet variables independent.
Expr partial_derivative(const Expr& e, const JetVariable& v);
/// As above, but rejects variables outside the chart.
Expr partial_derivative(const JetContext& ctx, const Expr& e, const JetVariable& v);

/// D_i e = de/dx^i + sum y^a_{I.i} de/dy^a_I.
Expr total_derivative(const Expr& e, int i);
/// d_J e, composition over the entries of J.
Expr total_derivative(const Expr& e, const MultiIndex& J);

/// A local section x -> (phi^1(x), ..., phi^m(x)), polynomial in the base
/// coordinates.
class Section {
 public:
  Section() = default;
  /// Rejects components that contain fiber variables.
  explicit Section(std::vector<Expr> components);

  const std::vector<Expr>& components() const { return components_; }
  /// d_I phi^alpha by plain base-coordinate differentiation.
  Expr derivative(int alpha, const MultiIndex& I) const;

 private:
  std::vector<Expr> components_;
};

/// Substitutes y^a_I <- d_I phi^a. The result contains base variables only.
Expr evaluate_on_section(const Expr& e, const Section& section);

}  // namespace varseq
