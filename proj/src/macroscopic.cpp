#include "bgkmix/macroscopic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bgkmix/errors.hpp"

namespace bgkmix {

double MacroState::T1() const { return 2.0 * m1 / d * (E1 - 0.5 * norm2(u1)); }
double MacroState::T2() const { return 2.0 * m2 / d * (E2 - 0.5 * norm2(u2)); }

MacroState MacroState::from_moments(const SpeciesMoments& s1, const SpeciesMoments& s2, double m1, double m2, int d) {
  MacroState s;
  s.m1 = m1;
  s.m2 = m2;
  s.d = d;
  s.n1 = s1.n;
  s.n2 = s2.n;
  s.u1 = s1.u;
  s.u2 = s2.u;
  s.E1 = 0.5 * norm2(s1.u) + 0.5 * d * s1.T / m1;
  s.E2 = 0.5 * norm2(s2.u) + 0.5 * d * s2.T / m2;
  return s;
}

ExchangeTerms exchange_terms(const MixtureParameters& p, const SpeciesMoments& s1, const SpeciesMoments& s2, int d) {
  const double rate = p.nu12 / (s1.n + s2.n) * s1.n * s2.n;  // nu12 n1 n2
  const Vec3 diff = s1.u - s2.u;
  ExchangeTerms out;
  out.momentum = (p.m1 * rate * (1.0 - p.delta)) * (s2.u - s1.u);
  const Vec3 bracket = (0.5 * p.m1 * (p.delta - 1.0)) * (s1.u + s2.u + p.delta * diff) + (0.5 * d * p.gamma) * diff;
  out.energy = rate * dot(bracket, diff) + 0.5 * d * rate * (1.0 - p.alpha) * (s2.T - s1.T);
  return out;
}

Vec3 u_function(const Vec3& u1, const Vec3& u2, double offset, const PerpFunction& v_perp) {
  const Vec3 diff = u1 - u2;
  const double dd = norm2(diff);
  if (dd == 0.0) return u1;
  Vec3 U = (0.5 * dot(u1 + u2, diff) / dd) * diff + offset * diff;
  if (v_perp) {
    const Vec3 w = v_perp(u1, u2);
    U = U + w - (dot(w, diff) / dd) * diff;
  }
  return U;
}

double BridgeCoefficients::gamma_for(double c) const { return m1 / d * (1.0 - delta) * (delta + 2.0 * c); }

BridgeCoefficients bridge_parameters(const MixtureParameters& p, double lambda_u, double n1, double n2, int d) {
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw ZeroDensityError("bridge parameters need n1, n2 > 0");
  const double scale = p.m1 * p.nu12 / (n1 + n2) * n1 * n2;
  BridgeCoefficients b;
  b.m1 = p.m1;
  b.d = d;
  b.delta = 1.0 - lambda_u / scale;
  MixtureParameters q = p;
  q.delta = b.delta;
  const Interval db = delta_bounds(q);
  if (!db.contains(b.delta, 1e-14)) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "lambda_u = %.6g gives delta = %.6g outside the temperature-positivity range [%.6g, %.6g]",
                  lambda_u, b.delta, db.lower, db.upper);
    throw AdmissibilityError(buf);
  }
  const double r = p.mass_ratio() * p.epsilon;
  b.c_range = {-0.5 * b.delta, 0.5 - 0.5 * r * (1.0 - b.delta)};
  b.c_symmetric = 0.25 * (1.0 - b.delta) * (1.0 - r);
  return b;
}

double c_from_gamma(const MixtureParameters& p, int d) {
  if (!(p.delta < 1.0)) throw PreconditionError("c is undetermined when delta = 1");
  return 0.5 * (d * p.gamma / (p.m1 * (1.0 - p.delta)) - p.delta);
}

BridgeParameters matched_bridge(const MixtureParameters& p, double n1, double n2, int d) {
  const double rate = p.nu12 / (n1 + n2) * n1 * n2;
  BridgeParameters b;
  b.lambda_u = p.m1 * rate * (1.0 - p.delta);
  b.lambda_T = 0.5 * d * rate * (1.0 - p.alpha);
  b.c = p.delta < 1.0 ? c_from_gamma(p, d) : 0.0;
  return b;
}

MacroRates dellacherie_rhs(const MacroState& s, const BridgeParameters& bridge) {
  MacroRates r;
  const Vec3 du = s.u2 - s.u1;
  r.momentum1 = bridge.lambda_u * du;
  r.momentum2 = -r.momentum1;
  // The parallel offset of U enters with the opposite sign of c.
  const Vec3 U = u_function(s.u1, s.u2, -bridge.c, bridge.v_perp);
  r.energy1 = bridge.lambda_T * (s.T2() - s.T1()) + bridge.lambda_u * dot(U, du);
  r.energy2 = -r.energy1;
  return r;
}

namespace {

// Conserved variables: m n u and m n E per species.
struct Conserved {
  Vec3 p1{}, p2{};
  double e1 = 0.0, e2 = 0.0;
};

Conserved to_conserved(const MacroState& s) {
  return {(s.m1 * s.n1) * s.u1, (s.m2 * s.n2) * s.u2, s.m1 * s.n1 * s.E1, s.m2 * s.n2 * s.E2};
}

MacroState from_conserved(const MacroState& like, const Conserved& c) {
  MacroState s = like;
  s.u1 = (1.0 / (s.m1 * s.n1)) * c.p1;
  s.u2 = (1.0 / (s.m2 * s.n2)) * c.p2;
  s.E1 = c.e1 / (s.m1 * s.n1);
  s.E2 = c.e2 / (s.m2 * s.n2);
  return s;
}

Conserved axpy(const Conserved& y, double h, const MacroRates& k) {
  Conserved out;
  out.p1 = y.p1 + h * k.momentum1;
  out.p2 = y.p2 - h * k.momentum1;
  out.e1 = y.e1 + h * k.energy1;
  out.e2 = y.e2 - h * k.energy1;
  return out;
}

} // namespace

std::vector<MacroSample> ode_integrate(const MacroState& initial, const BridgeParameters& bridge, double dt,
                                       double t_end, int cadence) {
  if (!(dt > 0.0)) throw PreconditionError("ode_integrate needs dt > 0");
  if (cadence < 1) throw PreconditionError("ode_integrate needs cadence >= 1");
  std::vector<MacroSample> out{{0.0, initial}};
  if (!(t_end > 0.0)) return out;
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Conserved y = to_conserved(initial);
  MacroState s = initial;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = i + 1 == n ? t_end - static_cast<double>(n - 1) * dt : dt;
    const MacroRates k1 = dellacherie_rhs(s, bridge);
    const MacroRates k2 = dellacherie_rhs(from_conserved(s, axpy(y, 0.5 * h, k1)), bridge);
    const MacroRates k3 = dellacherie_rhs(from_conserved(s, axpy(y, 0.5 * h, k2)), bridge);
    const MacroRates k4 = dellacherie_rhs(from_conserved(s, axpy(y, h, k3)), bridge);
    MacroRates k;
    k.momentum1 = (1.0 / 6.0) * (k1.momentum1 + 2.0 * k2.momentum1 + 2.0 * k3.momentum1 + k4.momentum1);
    k.energy1 = (k1.energy1 + 2.0 * k2.energy1 + 2.0 * k3.energy1 + k4.energy1) / 6.0;
    y = axpy(y, h, k);
    s = from_conserved(s, y);
    if (!(s.T1() > 0.0) || !(s.T2() > 0.0)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "macroscopic temperature became non-positive at t = %.6g", (i + 1) * dt);
      throw DegenerateTemperatureError(buf);
    }
    if ((i + 1) % static_cast<std::size_t>(cadence) == 0 || i + 1 == n)
      out.push_back({i + 1 == n ? t_end : static_cast<double>(i + 1) * dt, s});
  }
  return out;
}

ComparisonResult compare_kinetic_macro(const SimulationSettings& base, std::span<const double> dts, double ode_dt) {
  if (dts.empty()) throw PreconditionError("comparison needs at least one dt");
  if (base.grid.n_cells != 1) throw ConfigError("kinetic/macroscopic comparison needs a homogeneous grid (grid.cells = 1)");
  const double coarse = *std::max_element(dts.begin(), dts.end());
  const int d = base.grid.velocity_dim;

  // Matched ODE, sampled at multiples of the coarse step.
  SimulationSettings probe = base;
  probe.t_end = 0.0;
  const SimulationResult init = run_simulation(probe);
  const DiagnosticsRow& r0 = init.rows.front();
  const SpeciesMoments s1{r0.s1.n, r0.s1.u, r0.s1.T}, s2{r0.s2.n, r0.s2.u, r0.s2.T};
  const MacroState m0 = MacroState::from_moments(s1, s2, base.params.m1, base.params.m2, d);
  const BridgeParameters bridge = matched_bridge(base.params, s1.n, s2.n, d);
  const int ode_cadence = static_cast<int>(std::lround(coarse / ode_dt));
  if (std::fabs(ode_cadence * ode_dt - coarse) > 1e-9 * coarse)
    throw PreconditionError("ode_dt must divide the largest kinetic dt");
  const std::vector<MacroSample> ode = ode_integrate(m0, bridge, ode_dt, base.t_end, ode_cadence);

  ComparisonResult out;
  for (double dt : dts) {
    SimulationSettings s = base;
    s.dt = dt;
    s.cadence = static_cast<int>(std::lround(coarse / dt));
    if (std::fabs(s.cadence * dt - coarse) > 1e-9 * coarse) throw PreconditionError("every dt must divide the largest dt");
    const SimulationResult res = run_simulation(s);
    if (res.rows.size() != ode.size()) throw DiagnosticError("kinetic and macroscopic output times differ");
    double err = 0.0;
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1.0); };
    for (std::size_t i = 0; i < ode.size(); ++i) {
      const DiagnosticsRow& row = res.rows[i];
      const MacroState& m = ode[i].state;
      for (int a = 0; a < d; ++a) {
        err = std::max(err, rel(row.s1.u[a], m.u1[a]));
        err = std::max(err, rel(row.s2.u[a], m.u2[a]));
      }
      err = std::max(err, rel(row.s1.T, m.T1()));
      err = std::max(err, rel(row.s2.T, m.T2()));
    }
    out.dts.push_back(dt);
    out.errors.push_back(err);
    if (out.errors.size() > 1) out.ratios.push_back(out.errors[out.errors.size() - 2] / err);
  }
  return out;
}

} // namespace bgkmix
