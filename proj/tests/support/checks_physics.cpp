#include "checks.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "random_objects.hpp"
#include "varseq/variational.hpp"

namespace varseq::checks {

namespace {

Expr u(MultiIndex I = {}) { return Expr::fiber(1, I); }
Expr x(int i = 1) { return Expr::base(i); }
const Rational half = make_rational(1, 2);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_N.
Quadrature gauss_legendre(int N) {
  Quadrature q;
  for (int k = 1; k <= N; ++k) {
    double t = std::cos(std::numbers::pi * (k - 0.25) / (N + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = t;
      for (int j = 2; j <= N; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (t * p1 - p0) / (t * t - 1);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    q.nodes.push_back(t);
    q.weights.push_back(2 / ((1 - t * t) * dp * dp));
  }
  return q;
}

// Integral over [-1, 1]^n of a polynomial in the base coordinates.
double integrate_cube(const Expr& f, int n, const Quadrature& q) {
  double total = 0;
  const auto N = q.nodes.size();
  std::vector<std::size_t> at(static_cast<std::size_t>(n), 0);
  while (true) {
    double w = 1;
    for (int i = 0; i < n; ++i) w *= q.weights[at[i]];
    total += w * f.evaluate([&](const JetVariable& v) { return q.nodes[at[v.index - 1]]; });
    int i = 0;
    while (i < n && ++at[i] == N) at[i++] = 0;
    if (i == n) break;
  }
  return total;
}

Section shifted(const Section& phi, const std::vector<Expr>& psi, const Rational& eps) {
  std::vector<Expr> c;
  for (std::size_t a = 0; a < psi.size(); ++a) c.push_back(phi.components()[a] + Expr(eps) * psi[a]);
  return Section(c);
}

double max_drift(const std::vector<double>& values) {
  double drift = 0;
  for (double v : values) drift = std::max(drift, std::abs(v - values.front()));
  return drift;
}

}  // namespace

Outcome euler_lagrange_numeric(unsigned seed, int pairs) {
  fuzz::RandomObjects gen(seed);
  const Quadrature q = gauss_legendre(16);
  const Rational step = make_rational(1, 10000);
  Outcome out;
  for (int trial = 0; trial < pairs; ++trial) {
    auto ctx = JetContext::make(gen.uniform(1, 2), gen.uniform(1, 2), 2);
    const int n = ctx->n();
    const int r = gen.uniform(1, 2);
    const Expr L = gen.polynomial(*ctx, r, 3, 4);
    const std::vector<Expr> E = euler_lagrange_coefficients(represent(L * DiffForm::omega0(ctx, r)));

    std::vector<JetVariable> base;
    for (int i = 1; i <= n; ++i) base.push_back(JetVariable::base(i));
    Expr bump(1);
    for (int i = 1; i <= n; ++i) bump *= (Expr(1) - x(i) * x(i)).pow(3);
    std::vector<Expr> phi;
    std::vector<Expr> psi;
    for (int a = 1; a <= ctx->m(); ++a) {
      phi.push_back(gen.polynomial(base, 2, 3));
      psi.push_back(bump * (gen.polynomial(base, 1, 2) + Expr(1)));
    }
    const Section section(phi);

    double symbolic = 0;
    for (std::size_t a = 0; a < E.size(); ++a) {
      symbolic += integrate_cube(evaluate_on_section(E[a], section) * psi[a], n, q);
    }
    const double plus = integrate_cube(evaluate_on_section(L, shifted(section, psi, step)), n, q);
    const double minus = integrate_cube(evaluate_on_section(L, shifted(section, psi, -step)), n, q);
    const double numeric = (plus - minus) / (2 * step.get_d());
    const double error = std::abs(numeric - symbolic) / std::max(std::abs(symbolic), 1.0);
    std::ostringstream os;
    os << "case " << trial << ": symbolic " << symbolic << " vs finite difference " << numeric;
    out.record(error <= 1e-4, os.str());
  }
  return out;
}

Outcome harmonic_oscillator_fixture() {
  Outcome out;
  auto ctx = JetContext::make(1, 1, 1);
  const VariationalClass lambda = represent(half * (u({1}) * u({1}) - u() * u()) * DiffForm::dx(ctx, 1, 1));
  const std::vector<Expr> E = euler_lagrange_coefficients(lambda);
  out.record(E == std::vector<Expr>{-(u({1, 1}) + u())}, "oscillator Euler-Lagrange expression");
  const ProjectableField translation(ctx, {Expr(1)}, {Expr()});
  const DiffForm eps = noether_current(lambda, translation);
  const Expr expected = -half * (u({1}) * u({1}) + u() * u());
  out.record(eps.degree() == 0 && eps.as_function() == expected, "oscillator current -1/2 (u_x^2 + u^2)");
  out.record(combined_status(on_shell_reduce(horizontal_differential(eps), E, default_on_shell_cap(1))) ==
                 OnShellStatus::Vanishes,
             "oscillator d_H epsilon on-shell");

  // RK4 along u'' = -u.
  const double dt = 1e-3;
  double y = 0.7;
  double v = -0.3;
  auto energy = [&](double yy, double vv) {
    return eps.as_function().evaluate([&](const JetVariable& var) { return var.multi.empty() ? yy : vv; });
  };
  std::vector<double> values{energy(y, v)};
  for (int k = 0; k < 10000; ++k) {
    const double k1y = v, k1v = -y;
    const double k2y = v + 0.5 * dt * k1v, k2v = -(y + 0.5 * dt * k1y);
    const double k3y = v + 0.5 * dt * k2v, k3v = -(y + 0.5 * dt * k2y);
    const double k4y = v + dt * k3v, k4v = -(y + dt * k3y);
    y += dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    values.push_back(energy(y, v));
  }
  std::ostringstream os;
  os << "oscillator current drifts by " << max_drift(values) << " along an RK4 solution";
  out.record(max_drift(values) <= 1e-9, os.str());
  return out;
}

Outcome boost_fixture() {
  Outcome out;
  auto ctx = JetContext::make(1, 1, 1);
  const VariationalClass lambda = represent(half * u({1}) * u({1}) * DiffForm::dx(ctx, 1, 1));
  const ProjectableField boost(ctx, {Expr()}, {x()});
  const NBHReport report = nbh_analysis(lambda, boost, std::nullopt, default_on_shell_cap(1));
  out.record(report.current.degree() == 0 && report.current.as_function() == x() * u({1}) - u(),
             "boost NBH current x u_x - u");
  out.record(combined_status(report.conservation) == OnShellStatus::Vanishes, "boost current conserved on-shell");
  const Expr current = report.current.as_function();
  std::vector<double> values;
  for (double t = -2; t <= 2; t += 0.25) {
    values.push_back(evaluate_on_section(current, Section({Expr(2) + Expr(3) * x()}))
                         .evaluate([&](const JetVariable&) { return t; }));
  }
  out.record(max_drift(values) == 0, "boost current constant along u = 2 + 3x");
  return out;
}

Outcome wave_fixture() {
  Outcome out;
  auto ctx = JetContext::make(2, 1, 1);  // x1 = t, x2 = x
  const VariationalClass lambda =
      represent(half * (u({1}) * u({1}) - u({2}) * u({2})) * DiffForm::omega0(ctx, 1));
  const std::vector<Expr> E = euler_lagrange_coefficients(lambda);
  out.record(E == std::vector<Expr>{-u({1, 1}) + u({2, 2})}, "wave Euler-Lagrange expression");
  const ProjectableField time(ctx, {Expr(1), Expr()}, {Expr()});
  const NBHReport report = nbh_analysis(lambda, time, std::nullopt, default_on_shell_cap(1));
  out.record(!report.epsilon.is_zero() && report.beta.is_zero(), "wave energy current with beta = 0");
  out.record(combined_status(report.conservation) == OnShellStatus::Vanishes, "wave energy current on-shell");
  const Expr t = x(1);
  const Expr s = x(2);
  const Section solution({(s - t).pow(3) + (s + t).pow(2)});
  const DiffForm div = horizontal_differential(report.current);
  out.record(evaluate_on_section(density(div), solution).is_zero(), "wave current conserved on a solution");
  return out;
}

Outcome momentum_contraction(unsigned seed, int samples) {
  fuzz::RandomObjects gen(seed);
  Outcome out;
  for (int trial = 0; trial < samples; ++trial) {
    auto ctx = JetContext::make(gen.uniform(1, 2), gen.uniform(1, 2), 2);
    const int s = gen.uniform(0, 1);
    const DiffForm mu = represent(gen.form(ctx, s, ctx->n() - 1, 2)).representative;
    const JetField vertical = split(gen.projectable_field(ctx)).vertical;
    const DiffForm p = momentum(represent(horizontal_differential(mu)));
    const bool ok = horizontal_differential(interior_product(vertical, p)).is_zero();
    std::ostringstream os;
    os << "d_H(Xi_V _| p) != 0 (case " << trial << ", n=" << ctx->n() << ", m=" << ctx->m() << ")";
    out.record(ok, os.str());
  }
  return out;
}

Outcome on_shell_potential_fixtures() {
  Outcome out;
  auto ctx = JetContext::make(2, 1, 1);
  const VariationalClass wave =
      represent(half * (u({1}) * u({1}) - u({2}) * u({2})) * DiffForm::omega0(ctx, 1));
  struct Fixture {
    const char* name;
    ProjectableField field;
    DiffForm mu;
  };
  const std::vector<Fixture> fixtures = {
      {"wave, Xi = d/du, mu = 0", ProjectableField(ctx, {Expr(), Expr()}, {Expr(1)}), DiffForm(ctx, 0, 1)},
      {"wave, Xi = d/dt, mu = 0", ProjectableField(ctx, {Expr(1), Expr()}, {Expr()}), DiffForm(ctx, 0, 1)},
      {"wave, Xi = d/dx, mu = dx^1", ProjectableField(ctx, {Expr(), Expr(1)}, {Expr()}), DiffForm::dx(ctx, 0, 1)},
  };
  for (const Fixture& f : fixtures) {
    const NBHReport report = nbh_analysis(wave, f.field, f.mu, default_on_shell_cap(1));
    const MuAnalysis& a = *report.mu;
    const bool ok = a.modified_invariant && a.exact_branch && a.potential_status == "verified on-shell";
    out.record(ok, std::string(f.name) + ": " + a.potential_status);
  }
  return out;
}

}  // namespace varseq::checks
