#pragma once

#include <functional>
#include <map>
#include <vector>

#include "varseq/expr.hpp"
#include "varseq/jet_context.hpp"

namespace varseq {

/// Element of the adapted cobasis on J^sY: dx^i, the contact forms
/// omega^a_I (|I| <= s-1) and the top-order differentials dy^a_I (|I| = s).
struct Covector {
  enum class Kind : std::uint8_t { Dx, Contact, DyTop };

  Kind kind = Kind::Dx;
  int index = 1;  // base direction for Dx, fiber component otherwise
  MultiIndex multi;

  static Covector dx(int i) { return {Kind::Dx, i, {}}; }
  static Covector contact(int alpha, MultiIndex I = {}) { return {Kind::Contact, alpha, I}; }
  static Covector dy_top(int alpha, MultiIndex I) { return {Kind::DyTop, alpha, I}; }

  bool is_horizontal() const { return kind == Kind::Dx; }

  auto operator<=>(const Covector& other) const {
    if (auto c = kind <=> other.kind; c != 0) return c;
    if (auto c = index <=> other.index; c != 0) return c;
    return multi <=> other.multi;
  }
  bool operator==(const Covector& other) const = default;
};

/// Sorted, repetition-free wedge product of covectors.
using Wedge = std::vector<Covector>;

/// Differential form on J^sY with polynomial coefficients. The hosting order s
/// is explicit; binary operations promote both operands to the larger order.
class DiffForm {
 public:
  using TermMap = std::map<Wedge, Expr>;

  /// The default-constructed form is an untyped zero that adopts the context,
  /// order and degree of whatever it is added to.
  DiffForm() = default;
  DiffForm(ContextPtr ctx, int order, int degree);

  static DiffForm function(ContextPtr ctx, int order, const Expr& f);
  static DiffForm dx(ContextPtr ctx, int order, int i);
  static DiffForm contact(ContextPtr ctx, int order, int alpha, const MultiIndex& I = {});
  /// dy^a_I as a form on J^s: top-order covector when |I| = s, otherwise
  /// expanded as omega^a_I + y^a_{Ij} dx^j.
  static DiffForm dy(ContextPtr ctx, int order, int alpha, const MultiIndex& I);
  /// Volume density dx^1 ^ ... ^ dx^n.
  static DiffForm omega0(ContextPtr ctx, int order);
  /// d/dx^i contracted into omega_0.
  static DiffForm omega_i(ContextPtr ctx, int order, int i);
  /// d/dx^j contracted into omega_i.
  static DiffForm omega_ij(ContextPtr ctx, int order, int i, int j);

  const ContextPtr& context() const { return ctx_; }
  bool typed() const { return ctx_ != nullptr; }
  int order() const { return order_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of a wedge monomial given in any order (sign-corrected).
  Expr coefficient(const Wedge& w) const;
  /// For degree-0 forms: the function itself.
  Expr as_function() const;

  bool has_top_covectors() const;
  /// Largest number of contact factors over all monomials (-1 for zero).
  int max_contact_degree() const;
  /// Highest jet order occurring in coefficients (-1 when none).
  int coefficient_order() const;

  /// Adds c * (wedge of the given covectors), re-sorting with sign.
  void add_term(const Wedge& covectors, const Expr& c);

  DiffForm operator-() const;
  DiffForm& operator+=(const DiffForm& other);
  DiffForm& operator-=(const DiffForm& other);
  friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
  friend DiffForm operator*(const Expr& f, const DiffForm& a);
  friend DiffForm operator*(const DiffForm& a, const Expr& f) { return f * a; }

  /// Equality up to pullback: both sides are promoted to the larger order.
  bool operator==(const DiffForm& other) const;

  DiffForm map_coefficients(const std::function<Expr(const Expr&)>& fn) const;

 private:
  void check_covector(const Covector& c) const;

  ContextPtr ctx_;
  int order_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

/// Sorts covectors in place; returns the permutation sign, or 0 on repetition.
int canonical_sign(Wedge& covectors);

DiffForm wedge(const DiffForm& a, const DiffForm& b);

/// Re-expresses the form on J^s, s >= current order.
DiffForm pullback(const DiffForm& rho, int s);

DiffForm exterior_differential(const DiffForm& rho);

/// p_0 rho, ..., p_q rho, all hosted one order above rho.
std::vector<DiffForm> contact_split(const DiffForm& rho);
/// i-contact component p_i rho (zero form when i is out of range).
DiffForm contact_component(const DiffForm& rho, int i);
DiffForm horizontalize(const DiffForm& rho);

DiffForm horizontal_differential(const DiffForm& rho);
DiffForm vertical_differential(const DiffForm& rho);

/// Lie derivative along the formal total derivative D_i: coefficients are
/// differentiated totally and omega^a_I goes to omega^a_{Ii}; dx is inert.
DiffForm total_derivative(const DiffForm& rho, int i);
DiffForm total_derivative(const DiffForm& rho, const MultiIndex& J);

/// Graded derivation of degree -1 determined by the value on each covector.
/// Top-order covectors are pulled back first, so the value function is only
/// ever queried on Dx and Contact covectors.
DiffForm contract(const DiffForm& rho, const std::function<Expr(const Covector&)>& value);

}  // namespace varseq
