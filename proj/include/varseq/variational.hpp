#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varseq/fields.hpp"
#include "varseq/forms.hpp"
#include "varseq/on_shell.hpp"

namespace varseq {

/// Class [rho] in the variational sequence, stored through its canonical
/// representative: h rho for q <= n, I(rho) for q = n+1, n+2, rho above.
struct VariationalClass {
  int degree = 0;
  DiffForm representative;

  const ContextPtr& context() const { return representative.context(); }
  bool is_zero() const { return representative.is_zero(); }
  bool operator==(const VariationalClass& other) const {
    return degree == other.degree && representative == other.representative;
  }
};

VariationalClass represent(const DiffForm& rho);

/// p_k rho = source_part + divergence_part, where source_part is
/// omega^a ^ sum_J (-1)^|J| d_J eta^J_a and divergence_part is
/// sum_I d_I(omega^a ^ zeta^I_a). `residual` is a form R with
/// p_k d p_k R = divergence_part, present whenever one was constructed and
/// verified (always for horizontal degree n).
struct EulerDecomposition {
  int horizontal_degree = 0;
  int contact_degree = 0;
  DiffForm source_part;
  DiffForm divergence_part;
  std::optional<DiffForm> residual;
};

/// Decomposition of the k-contact component of a form of degree p + k,
/// 1 <= p <= n, k >= 1.
EulerDecomposition generalized_interior_euler(const DiffForm& rho, int k);

/// Interior Euler operator on forms of degree n + k, k in {1, 2}.
DiffForm interior_euler(const DiffForm& rho);
/// Residual form R(rho) of the same decomposition.
DiffForm euler_residual(const DiffForm& rho);

/// E_q([rho]) = [d R_q[rho]].
VariationalClass variational_differential(const VariationalClass& alpha);

VariationalClass euler_lagrange(const VariationalClass& lambda);
/// E_a with E_n(lambda) = omega^a ^ E_a omega_0.
std::vector<Expr> euler_lagrange_coefficients(const VariationalClass& lambda);
/// Coefficients E_a of a class of degree n + 1.
std::vector<Expr> source_coefficients(const VariationalClass& eta);

VariationalClass helmholtz(const VariationalClass& eta);
bool is_locally_variational(const VariationalClass& eta);

/// Canonical momentum -p_1 R(d h rho) of a Lagrangian class.
DiffForm momentum(const VariationalClass& lambda);
/// -p_1 R(d h rho) for classes of degree <= n - 1, when R exists as a form.
std::optional<DiffForm> generalized_momentum(const VariationalClass& alpha);

/// [X _| R_q[alpha]].
VariationalClass contract_class(const JetField& X, const VariationalClass& alpha);
/// [L_{j Xi} R_q[alpha]].
VariationalClass lie_derivative_class(const ProjectableField& field, const VariationalClass& alpha);

/// Residuals of the variational Cartan formulae, as classes; zero when the
/// identity holds.
/// q <= n - 1: L alpha - Xi_H _| E_q alpha - E_{q-1}(Xi_V _| p~ + Xi_H _| alpha).
/// When the generalized momentum does not exist as a form, the momentum term
/// uses its defining identity d_H(Xi_V _| p~) = Xi_V _| (divergence part).
VariationalClass lower_cartan_residual(const ProjectableField& field, const VariationalClass& alpha);
/// [Xi_V _| I(d h rho)] for q <= n - 1: the term that lower_cartan_residual
/// leaves over in general.
VariationalClass lower_cartan_source_term(const ProjectableField& field, const VariationalClass& alpha);
/// q = n: L lambda - Xi_V _| E_n(lambda) - d_H epsilon.
VariationalClass noether_residual(const ProjectableField& field, const VariationalClass& lambda);
/// q >= n + 1: L alpha - Xi_V _| E_q alpha - E_{q-1}(Xi_V _| alpha).
VariationalClass upper_cartan_residual(const ProjectableField& field, const VariationalClass& alpha);
/// E_q L alpha - L E_q alpha.
VariationalClass naturality_residual(const ProjectableField& field, const VariationalClass& alpha);

/// epsilon = Xi_V _| p + Xi_H _| h lambda; verified against the Noether identity.
DiffForm noether_current(const VariationalClass& lambda, const ProjectableField& field);

/// L_Xi eta = 0 for a locally variational source form.
bool check_generalized_symmetry(const VariationalClass& eta, const ProjectableField& field);

/// beta with L_Xi lambda = d_H beta.
DiffForm bessel_hagen_boundary(const VariationalClass& lambda, const ProjectableField& field);

/// Coefficient of dx^1 ^ ... ^ dx^n in a horizontal n-form.
Expr density(const DiffForm& rho);
/// sum_i b_i omega_i (the 0-form b_1 when n = 1).
DiffForm current_from_components(const ContextPtr& ctx, const std::vector<Expr>& b);

struct MuAnalysis {
  DiffForm mu;
  DiffForm lie_mu;                 // [L_Xi mu]
  bool modified_invariant = false;  // L_Xi(lambda - d_H mu) = 0
  bool beta_minus_lie_mu_closed = false;
  bool exact_branch = false;        // beta = L_Xi mu exactly
  // Contraction identities checked along the way.
  DiffForm vertical_contraction_residual;  // d_H(Xi_V _| d_V mu) - d_H(Xi_V _| I(d mu))
  DiffForm momentum_contraction_residual;  // d_H(Xi_V _| p_{d_V d_H mu})
  // Exact branch, n >= 2: potential and its check modulo the EL ideal.
  std::string potential_status;
  std::optional<DiffForm> potential;
  std::vector<OnShellResult> potential_check;
};

struct NBHReport {
  DiffForm lie_derivative;  // [L_Xi lambda]
  DiffForm epsilon;
  DiffForm beta;
  DiffForm current;  // epsilon - beta
  /// d_H(epsilon - beta) reduced modulo the Euler-Lagrange ideal.
  std::vector<OnShellResult> conservation;
  std::optional<MuAnalysis> mu;
};

/// Requires Xi to be a generalized symmetry of E_n(lambda).
NBHReport nbh_analysis(const VariationalClass& lambda, const ProjectableField& field,
                       const std::optional<DiffForm>& mu, int on_shell_cap);

}  // namespace varseq
