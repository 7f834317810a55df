#pragma once

#include <string>
#include <string_view>

#include "varseq/forms.hpp"

namespace varseq {

/// Expression text: coordinate names from the context, fiber derivatives
/// `u[1,2]` (entries are base positions), integers, `p/q`, `+ - * ^`,
/// parentheses. Division only by nonzero constants.
Expr parse_expr(std::string_view text, const JetContext& ctx);

/// Form text on top of the expression grammar: `dx1` (or `d<base name>`),
/// `w1[]`, `w1[1]` for contact forms, `dU1[1,1]` for dy; `^` is a wedge unless
/// its right operand is an integer literal; juxtaposition multiplies or
/// wedges. The result is hosted at order `order`, by default the context r.
DiffForm parse_form(std::string_view text, const ContextPtr& ctx, int order = -1);

std::string to_text(const Rational& q);
std::string to_text(const JetVariable& v, const JetContext& ctx);
std::string to_text(const Expr& e, const JetContext& ctx);
std::string to_text(const Covector& c);
/// Terms `(coef)*dx1^w1[]` joined by ` + `; "0" for the zero form, or with
/// `keep_degree` a zero multiple of basis covectors that reparses to the
/// same degree.
std::string to_text(const DiffForm& rho, bool keep_degree = false);

}  // namespace varseq
