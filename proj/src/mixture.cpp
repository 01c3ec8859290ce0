#include "bgkmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bgkmix/errors.hpp"

namespace bgkmix {

MixtureParameters coupled_parameters(double m1, double m2, double nu11, double nu21, double nu22, double epsilon,
                                     double alpha, double delta, double gamma) {
  MixtureParameters p;
  p.m1 = m1;
  p.m2 = m2;
  p.nu11 = nu11;
  p.nu21 = nu21;
  p.nu12 = epsilon * nu21;
  p.nu22 = nu22;
  p.epsilon = epsilon;
  p.alpha = alpha;
  p.delta = delta;
  p.gamma = gamma;
  return p;
}

Interval delta_bounds(const MixtureParameters& p) {
  const double r = p.mass_ratio() * p.epsilon;
  return {(r - 1.0) / (1.0 + r), 1.0};
}

Interval gamma_bounds(const MixtureParameters& p, int d) {
  const double r = p.mass_ratio() * p.epsilon;
  const double upper = p.m1 / d * (1.0 - p.delta) * ((1.0 + r) * p.delta + 1.0 - r);
  return {0.0, upper};
}

namespace {

ConstraintCheck bounded(std::string name, double value, double lower, double upper) {
  ConstraintCheck c;
  c.name = std::move(name);
  c.value = value;
  c.lower = lower;
  c.upper = upper;
  c.margin = std::min(value - lower, upper - value);
  // Relative slack absorbs rounding in bounds that are computed from other parameters.
  const double slack = 1e-14 * std::max({1.0, std::fabs(lower), std::fabs(upper)});
  c.pass = std::isfinite(value) && c.margin >= -slack;
  return c;
}

ConstraintCheck positive(std::string name, double value) {
  ConstraintCheck c;
  c.name = std::move(name);
  c.value = value;
  c.lower = 0.0;
  c.upper = std::numeric_limits<double>::infinity();
  c.margin = value;
  c.pass = std::isfinite(value) && value > 0.0;
  return c;
}

} // namespace

bool ValidityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.pass; });
}

std::string ValidityReport::first_failure() const {
  for (const auto& c : checks) {
    if (c.pass) continue;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s = %.17g outside admissible range [%.17g, %.17g]", c.name.c_str(), c.value,
                  c.lower, c.upper);
    return buf;
  }
  return {};
}

ValidityReport validate_params(const MixtureParameters& p, int d) {
  ValidityReport report;
  auto& out = report.checks;
  out.push_back(positive("m1", p.m1));
  out.push_back(positive("m2", p.m2));
  out.push_back(positive("nu11", p.nu11));
  out.push_back(positive("nu12", p.nu12));
  out.push_back(positive("nu21", p.nu21));
  out.push_back(positive("nu22", p.nu22));
  out.push_back(bounded("epsilon", p.epsilon, std::numeric_limits<double>::min(), 1.0));
  {
    // nu12 = epsilon * nu21 is stored, not derived; check the two agree.
    const double expected = p.epsilon * p.nu21;
    const double tol = 1e-12 * std::max(1.0, std::fabs(expected));
    out.push_back(bounded("nu12 (coupled to epsilon * nu21)", p.nu12, expected - tol, expected + tol));
  }
  out.push_back(bounded("alpha", p.alpha, 0.0, 1.0));
  const Interval db = delta_bounds(p);
  out.push_back(bounded("delta (temperature positivity)", p.delta, db.lower, db.upper));
  const Interval gb = gamma_bounds(p, d);
  out.push_back(bounded("gamma (temperature positivity)", p.gamma, gb.lower, gb.upper));

  if (p.variant == ModelVariant::single_term) {
    out.push_back(bounded("chi12", p.chi12, 0.0, std::numeric_limits<double>::infinity()));
    out.push_back(bounded("chi21", p.chi21, 0.0, std::numeric_limits<double>::infinity()));
    out.push_back(positive("nu11_aap", p.nu11_aap));
    out.push_back(positive("nu12_aap", p.nu12_aap));
    out.push_back(positive("nu21_aap", p.nu21_aap));
    out.push_back(positive("nu22_aap", p.nu22_aap));
  }
  return report;
}

ValidityReport validate_single_term_state(const MixtureParameters& p, double n1, double n2) {
  ValidityReport report;
  const CollisionRates rates = single_term_frequencies(p, n1, n2);
  const double x1 = rates.total1() > 0.0 ? p.chi12 * n2 / rates.total1() : 0.0;
  const double x2 = rates.total2() > 0.0 ? p.chi21 * n1 / rates.total2() : 0.0;
  report.checks.push_back(bounded("chi12 n2 / (nu11 n1 + nu12 n2)", x1, 0.0, 1.0));
  report.checks.push_back(bounded("chi21 n1 / (nu22 n2 + nu21 n1)", x2, 0.0, 1.0));
  return report;
}

std::pair<Vec3, Vec3> interspecies_velocities(const MixtureParameters& p, const Vec3& u1, const Vec3& u2) {
  const Vec3 u12 = p.delta * u1 + (1.0 - p.delta) * u2;
  const Vec3 u21 = u2 - (p.mass_ratio() * p.epsilon * (1.0 - p.delta)) * (u2 - u1);
  return {u12, u21};
}

double t21_velocity_coefficient(const MixtureParameters& p, int d) {
  const double r = p.mass_ratio() * p.epsilon;
  return p.epsilon * p.m1 * (1.0 - p.delta) * (r * (p.delta - 1.0) + p.delta + 1.0) / d - p.epsilon * p.gamma;
}

std::pair<double, double> interspecies_temperatures(const MixtureParameters& p, const SpeciesMoments& mom1,
                                                    const SpeciesMoments& mom2, int d) {
  const double du2 = norm2(mom1.u - mom2.u);
  const double T12 = p.alpha * mom1.T + (1.0 - p.alpha) * mom2.T + p.gamma * du2;
  const double ea = p.epsilon * (1.0 - p.alpha);
  const double T21 = t21_velocity_coefficient(p, d) * du2 + ea * mom1.T + (1.0 - ea) * mom2.T;
  if (T12 < 0.0 || T21 < 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "negative mixture temperature (T12 = %.6g, T21 = %.6g); check delta/gamma", T12,
                  T21);
    throw AdmissibilityError(buf);
  }
  return {T12, T21};
}

namespace {

CollisionRates rates_from(double c11, double c12, double c21, double c22, double n1, double n2) {
  const double n = n1 + n2;
  if (!(n > 0.0)) throw VacuumError("collision frequencies: n1 + n2 = 0 (vacuum)");
  return {c11 * n1 / n, c12 * n2 / n, c21 * n1 / n, c22 * n2 / n};
}

} // namespace

CollisionRates collision_frequencies(const MixtureParameters& p, double n1, double n2) {
  return rates_from(p.nu11, p.nu12, p.nu21, p.nu22, n1, n2);
}

CollisionRates single_term_frequencies(const MixtureParameters& p, double n1, double n2) {
  return rates_from(p.nu11_aap, p.nu12_aap, p.nu21_aap, p.nu22_aap, n1, n2);
}

MixtureClosure closure_12(const MixtureParameters& p, int /*d*/) {
  return {p.delta, 1.0 - p.delta, p.alpha, 1.0 - p.alpha, p.gamma};
}

MixtureClosure closure_21(const MixtureParameters& p, int d) {
  const double beta = p.mass_ratio() * p.epsilon * (1.0 - p.delta);
  const double ea = p.epsilon * (1.0 - p.alpha);
  return {1.0 - beta, beta, 1.0 - ea, ea, t21_velocity_coefficient(p, d)};
}

MixtureClosure single_term_closure(const MixtureParameters& p, int species, double n1, double n2, int d) {
  const CollisionRates rates = single_term_frequencies(p, n1, n2);
  const bool first = species == 1;
  const double mk = first ? p.m1 : p.m2;
  const double mj = first ? p.m2 : p.m1;
  const double chi = first ? p.chi12 : p.chi21;
  const double nj = first ? n2 : n1;
  const double total = first ? rates.total1() : rates.total2();
  const double x = total > 0.0 ? chi * nj / total : 0.0;
  const double a = 2.0 * mj / (mk + mj) * x;
  const double b = mk * mj / ((mk + mj) * (mk + mj)) * 4.0 * x;
  const double s = p.aap_sign == ExchangeSign::physical ? 1.0 : -1.0;
  MixtureClosure c;
  c.w_self = 1.0 - s * a;
  c.w_other = s * a;
  c.t_self = 1.0 - s * b;
  c.t_other = s * b;
  c.g = mk / d * (b - a * a);
  return c;
}

SingleTermTargets aap_interspecies(const MixtureParameters& p, const SpeciesMoments& mom1, const SpeciesMoments& mom2,
                                   int d) {
  const MixtureClosure c1 = single_term_closure(p, 1, mom1.n, mom2.n, d);
  const MixtureClosure c2 = single_term_closure(p, 2, mom1.n, mom2.n, d);
  SingleTermTargets out;
  out.u1 = c1.velocity(mom1.u, mom2.u);
  out.u2 = c2.velocity(mom2.u, mom1.u);
  out.T1 = c1.temperature(mom1.T, mom2.T, mom1.u, mom2.u);
  out.T2 = c2.temperature(mom2.T, mom1.T, mom2.u, mom1.u);
  if (!(out.T1 > 0.0) || !(out.T2 > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "non-positive single-term temperature (T(1) = %.6g, T(2) = %.6g)", out.T1, out.T2);
    throw AdmissibilityError(buf);
  }
  return out;
}

} // namespace bgkmix
