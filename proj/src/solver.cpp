#include "bgkmix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

#include "bgkmix/compensated_sum.hpp"
#include "bgkmix/errors.hpp"

namespace bgkmix {

namespace {

// (1 - exp(-A dt)) / A, with the A -> 0 limit.
double exposure(double A, double dt) { return A > 0.0 ? -std::expm1(-A * dt) / A : dt; }

struct Balanced {
  Vec3 u;
  double T;
};

// Partner target of species 2 such that its discrete momentum and energy gain cancel
// species 1's exactly. w_k is the effective exchange weight (exposure * rate * density).
Balanced balance_partner(double w1, double w2, double m1, double m2, int d, const SpeciesMoments& mom1,
                         const SpeciesMoments& mom2, const Vec3& u_target1, double T_target1) {
  const double ratio = w1 / w2;
  const Vec3 u = mom2.u - (ratio * m1 / m2) * (u_target1 - mom1.u);
  const double e1 = 0.5 * d * (T_target1 - mom1.T) + 0.5 * m1 * (norm2(u_target1) - norm2(mom1.u));
  const double T = mom2.T + 2.0 / d * (-ratio * e1 - 0.5 * m2 * (norm2(u) - norm2(mom2.u)));
  if (!(T > 0.0)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "balanced partner temperature is %.6g; the exchange cannot be made conservative at this state", T);
    throw NumericsError(buf);
  }
  return {u, T};
}

} // namespace

RelaxationPlan relaxation_plan(std::span<const double> coeff1, std::span<const double> coeff2,
                               const MixtureParameters& p, const PhaseGrid& grid, double dt,
                               const SolverOptions& options) {
  const int d = grid.velocity_dim();
  const double n1 = quad_integrate(coeff1, grid);
  const double n2 = quad_integrate(coeff2, grid);
  if (!(n1 + n2 > 0.0)) throw VacuumError("relaxation: empty cell (n1 + n2 = 0)");
  SpeciesMoments mom1, mom2;
  if (n1 > 0.0) mom1 = compute_moments(coeff1, p.m1, grid);
  if (n2 > 0.0) mom2 = compute_moments(coeff2, p.m2, grid);
  const bool both = n1 > 0.0 && n2 > 0.0;
  const bool balance = options.balance_exchange && options.maxwellian == MaxwellianMode::conservative;
  const MaxwellianMode mode = options.maxwellian;

  RelaxationPlan plan;
  plan.gain1.assign(grid.node_count(), 0.0);
  plan.gain2.assign(grid.node_count(), 0.0);

  if (p.variant == ModelVariant::two_term) {
    const CollisionRates r = collision_frequencies(p, n1, n2);
    const double A1 = r.total1(), A2 = r.total2();
    plan.decay1 = std::exp(-A1 * dt);
    plan.decay2 = std::exp(-A2 * dt);
    const double phi1 = exposure(A1, dt), phi2 = exposure(A2, dt);
    if (n1 > 0.0 && r.self1 > 0.0)
      make_maxwellian(mom1.n, mom1.u, mom1.T, p.m1, grid, mode).accumulate(plan.gain1, phi1 * r.self1, grid);
    if (n2 > 0.0 && r.self2 > 0.0)
      make_maxwellian(mom2.n, mom2.u, mom2.T, p.m2, grid, mode).accumulate(plan.gain2, phi2 * r.self2, grid);
    if (both && (r.cross1 > 0.0 || r.cross2 > 0.0)) {
      const MixtureClosure c12 = closure_12(p, d);
      const Vec3 u12 = c12.velocity(mom1.u, mom2.u);
      const double T12 = c12.temperature(mom1.T, mom2.T, mom1.u, mom2.u);
      Vec3 u21;
      double T21;
      const double w1 = phi1 * r.cross1 * n1, w2 = phi2 * r.cross2 * n2;
      if (balance && w2 > 0.0) {
        const Balanced b = balance_partner(w1, w2, p.m1, p.m2, d, mom1, mom2, u12, T12);
        u21 = b.u;
        T21 = b.T;
      } else {
        u21 = interspecies_velocities(p, mom1.u, mom2.u).second;
        T21 = interspecies_temperatures(p, mom1, mom2, d).second;
      }
      if (r.cross1 > 0.0)
        make_maxwellian(mom1.n, u12, T12, p.m1, grid, mode).accumulate(plan.gain1, phi1 * r.cross1, grid);
      if (r.cross2 > 0.0)
        make_maxwellian(mom2.n, u21, T21, p.m2, grid, mode).accumulate(plan.gain2, phi2 * r.cross2, grid);
    }
    return plan;
  }

  // single relaxation term
  const CollisionRates r = single_term_frequencies(p, n1, n2);
  const double A1 = r.total1(), A2 = r.total2();
  plan.decay1 = std::exp(-A1 * dt);
  plan.decay2 = std::exp(-A2 * dt);
  const double phi1 = exposure(A1, dt), phi2 = exposure(A2, dt);
  SingleTermTargets tgt;
  tgt.u1 = mom1.u;
  tgt.T1 = mom1.T;
  tgt.u2 = mom2.u;
  tgt.T2 = mom2.T;
  if (both) {
    const ValidityReport rep = validate_single_term_state(p, n1, n2);
    if (!rep.ok()) throw AdmissibilityError("single-term positivity condition violated: " + rep.first_failure());
    tgt = aap_interspecies(p, mom1, mom2, d);
    const double w1 = phi1 * A1 * n1, w2 = phi2 * A2 * n2;
    if (balance && w2 > 0.0) {
      const Balanced b = balance_partner(w1, w2, p.m1, p.m2, d, mom1, mom2, tgt.u1, tgt.T1);
      tgt.u2 = b.u;
      tgt.T2 = b.T;
    }
  }
  if (n1 > 0.0 && A1 > 0.0)
    make_maxwellian(mom1.n, tgt.u1, tgt.T1, p.m1, grid, mode).accumulate(plan.gain1, phi1 * A1, grid);
  if (n2 > 0.0 && A2 > 0.0)
    make_maxwellian(mom2.n, tgt.u2, tgt.T2, p.m2, grid, mode).accumulate(plan.gain2, phi2 * A2, grid);
  return plan;
}

void relax_cell(std::span<double> f1, std::span<double> f2, std::span<const double> coeff1,
                std::span<const double> coeff2, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                const SolverOptions& options) {
  const RelaxationPlan plan = relaxation_plan(coeff1, coeff2, p, grid, dt, options);
  for (std::size_t i = 0; i < f1.size(); ++i) f1[i] = plan.decay1 * f1[i] + plan.gain1[i];
  for (std::size_t i = 0; i < f2.size(); ++i) f2[i] = plan.decay2 * f2[i] + plan.gain2[i];
}

double transport(DistributionField& f, const PhaseGrid& grid, double tau) {
  const std::size_t nc = grid.n_cells();
  if (nc <= 1 || tau == 0.0) return 0.0;
  const std::size_t nodes = grid.node_count();
  const double dx = grid.cell_width();
  const auto nc_i = static_cast<long long>(nc);
  std::vector<double> old(nc), fresh(nc);
  double clipped = 0.0;
  for (std::size_t node = 0; node < nodes; ++node) {
    const double s = grid.velocity(node)[0] * tau / dx;
    if (s == 0.0) continue;
    const double fl = std::floor(s);
    const double theta = s - fl;
    const long long k = static_cast<long long>(fl);
    for (std::size_t c = 0; c < nc; ++c) old[c] = f.at(c, node);
    for (long long j = 0; j < nc_i; ++j) {
      const long long a = ((j - k) % nc_i + nc_i) % nc_i;
      const long long b = ((j - k - 1) % nc_i + nc_i) % nc_i;
      double v = (1.0 - theta) * old[static_cast<std::size_t>(a)] + theta * old[static_cast<std::size_t>(b)];
      if (v < 0.0) {
        clipped += -v * grid.weight(node) * dx;
        v = 0.0;
      }
      fresh[static_cast<std::size_t>(j)] = v;
    }
    for (std::size_t c = 0; c < nc; ++c) f.at(c, node) = fresh[c];
  }
  return clipped;
}

void step_in_place(SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                   const SolverOptions& options) {
  if (!(dt > 0.0)) throw PreconditionError("time step must be positive");
  double clipped = transport(state.f1, grid, 0.5 * dt) + transport(state.f2, grid, 0.5 * dt);
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    auto c1 = state.f1.cell(c);
    auto c2 = state.f2.cell(c);
    relax_cell(c1, c2, c1, c2, p, grid, dt, options);
  }
  clipped += transport(state.f1, grid, 0.5 * dt) + transport(state.f2, grid, 0.5 * dt);
  state.t += dt;
  state.last.clipped_mass = clipped;
  state.last.min_f1 = state.f1.min_value();
  state.last.min_f2 = state.f2.min_value();
}

SolverState step(const SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                 const SolverOptions& options) {
  SolverState next = state;
  step_in_place(next, p, grid, dt, options);
  return next;
}

DistributionField initial_field(const SpeciesInitial& init, double mass, const PhaseGrid& grid, MaxwellianMode mode) {
  DistributionField f(grid, mass);
  std::vector<LatticeMaxwellian> parts;
  parts.reserve(init.components.size());
  for (const auto& comp : init.components) {
    if (comp.n < 0.0) throw ConfigError("initial component density must be nonnegative");
    parts.push_back(make_maxwellian(comp.n, comp.u, comp.T, mass, grid, mode));
  }
  const double L = grid.domain_length();
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    const double x = grid.cell_centre(c);
    const double mod = 1.0 + init.amplitude * std::sin(2.0 * std::numbers::pi * init.wavenumber * x / L);
    for (const auto& part : parts) part.accumulate(f.cell(c), mod, grid);
  }
  return f;
}

SolverState initial_state(const SpeciesInitial& s1, const SpeciesInitial& s2, const MixtureParameters& p,
                          const PhaseGrid& grid, MaxwellianMode mode) {
  SolverState st;
  st.f1 = initial_field(s1, p.m1, grid, mode);
  st.f2 = initial_field(s2, p.m2, grid, mode);
  st.t = 0.0;
  st.last.min_f1 = st.f1.min_value();
  st.last.min_f2 = st.f2.min_value();
  return st;
}

GlobalMoments global_moments(const DistributionField& f, const PhaseGrid& grid) {
  CompensatedSum mass, second;
  std::array<CompensatedSum, 3> flux;
  const double dx = grid.cell_width();
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    const RawMoments r = raw_moments(f.cell(c), grid);
    mass += dx * r.density;
    for (int a = 0; a < 3; ++a) flux[a] += dx * r.flux[a];
    second += dx * r.second;
  }
  GlobalMoments g;
  const double m = f.mass();
  g.mass = mass.value();
  for (int a = 0; a < 3; ++a) g.momentum[a] = m * flux[a].value();
  g.energy = 0.5 * m * second.value();
  g.n = g.mass / grid.domain_length();
  if (g.mass > 0.0) {
    g.u = (1.0 / (m * g.mass)) * g.momentum;
    g.T = (2.0 * g.energy / g.mass - m * norm2(g.u)) / grid.velocity_dim();
  }
  return g;
}

DiagnosticsRow diagnostics_row(const SolverState& state, const PhaseGrid& grid) {
  DiagnosticsRow row;
  row.t = state.t;
  row.s1 = global_moments(state.f1, grid);
  row.s2 = global_moments(state.f2, grid);
  row.p_total = row.s1.momentum + row.s2.momentum;
  row.E_total = row.s1.energy + row.s2.energy;
  row.entropy = entropy_functional(state.f1, state.f2, grid);
  row.min_f1 = state.f1.min_value();
  row.min_f2 = state.f2.min_value();
  row.clipped_mass = state.last.clipped_mass;
  return row;
}

EnvelopeSample envelope_sample(const SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double q) {
  const int d = grid.velocity_dim();
  EnvelopeSample s;
  s.t = state.t;
  s.Nq1 = weighted_sup_Nq_global(state.f1, grid, q);
  s.Nq2 = weighted_sup_Nq_global(state.f2, grid, q);
  s.N01 = weighted_sup_Nq_global(state.f1, grid, 0.0);
  s.N02 = weighted_sup_Nq_global(state.f2, grid, 0.0);
  s.min_n1 = s.min_n2 = s.min_T1 = s.min_T2 = s.min_T12 = s.min_T21 = INFINITY;
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    const SpeciesMoments m1 = compute_moments(state.f1, grid, c);
    const SpeciesMoments m2 = compute_moments(state.f2, grid, c);
    Vec3 u12, u21;
    double T12, T21;
    if (p.variant == ModelVariant::two_term) {
      std::tie(u12, u21) = interspecies_velocities(p, m1.u, m2.u);
      std::tie(T12, T21) = interspecies_temperatures(p, m1, m2, d);
    } else {
      const SingleTermTargets t = aap_interspecies(p, m1, m2, d);
      u12 = t.u1;
      u21 = t.u2;
      T12 = t.T1;
      T21 = t.T2;
    }
    s.min_n1 = std::min(s.min_n1, m1.n);
    s.min_n2 = std::min(s.min_n2, m2.n);
    s.min_T1 = std::min(s.min_T1, m1.T);
    s.min_T2 = std::min(s.min_T2, m2.T);
    s.min_T12 = std::min(s.min_T12, T12);
    s.min_T21 = std::min(s.min_T21, T21);
    s.max_cap1 = std::max(s.max_cap1, m1.T + norm2(m1.u));
    s.max_cap2 = std::max(s.max_cap2, m2.T + norm2(m2.u));
    s.max_cap12 = std::max(s.max_cap12, T12 + norm2(u12));
    s.max_cap21 = std::max(s.max_cap21, T21 + norm2(u21));
  }
  return s;
}

namespace {

std::vector<double> step_sizes(double dt, double t_end) {
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (t_end < 0.0) throw ConfigError("time.t_end must be nonnegative");
  std::vector<double> out;
  if (t_end == 0.0) return out;
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  out.assign(n, dt);
  out.back() = t_end - static_cast<double>(n - 1) * dt;
  return out;
}

} // namespace

SimulationResult run_simulation(const SimulationSettings& settings, const StepObserver& observer) {
  const PhaseGrid grid = build_grid(settings.grid);
  const ValidityReport rep = validate_params(settings.params, grid.velocity_dim());
  if (!rep.ok()) throw AdmissibilityError(rep.first_failure());
  if (settings.cadence < 1) throw ConfigError("time.cadence must be at least 1");
  const std::vector<double> dts = step_sizes(settings.dt, settings.t_end);

  SimulationResult result;
  SolverState state = initial_state(settings.initial1, settings.initial2, settings.params, grid,
                                    settings.options.maxwellian);
  const bool envelopes = settings.envelope_q >= 0.0;
  result.envelopes.q = settings.envelope_q;
  result.rows.push_back(diagnostics_row(state, grid));
  if (envelopes) result.envelopes.samples.push_back(envelope_sample(state, settings.params, grid, settings.envelope_q));

  for (std::size_t i = 0; i < dts.size(); ++i) {
    step_in_place(state, settings.params, grid, dts[i], settings.options);
    if (i + 1 == dts.size()) state.t = settings.t_end;
    else state.t = static_cast<double>(i + 1) * settings.dt;
    result.max_clipped_per_step = std::max(result.max_clipped_per_step, state.last.clipped_mass);
    if (observer) observer(state);
    const bool tick = (i + 1) % static_cast<std::size_t>(settings.cadence) == 0 || i + 1 == dts.size();
    if (tick) {
      result.rows.push_back(diagnostics_row(state, grid));
      if (envelopes)
        result.envelopes.samples.push_back(envelope_sample(state, settings.params, grid, settings.envelope_q));
    }
  }
  result.steps = static_cast<int>(dts.size());
  result.final_state = std::move(state);
  return result;
}

// ---- Picard --------------------------------------------------------------

namespace {

using Trajectory = std::vector<SolverState>;

Trajectory picard_sweep(const Trajectory& previous, const std::vector<double>& dts, const MixtureParameters& p,
                        const PhaseGrid& grid, const SolverOptions& options) {
  Trajectory next;
  next.reserve(previous.size());
  next.push_back(previous.front());
  for (std::size_t l = 0; l < dts.size(); ++l) {
    const double dt = dts[l];
    SolverState coeff = previous[l];
    transport(coeff.f1, grid, 0.5 * dt);
    transport(coeff.f2, grid, 0.5 * dt);
    SolverState f = next.back();
    double clipped = transport(f.f1, grid, 0.5 * dt) + transport(f.f2, grid, 0.5 * dt);
    for (std::size_t c = 0; c < grid.n_cells(); ++c)
      relax_cell(f.f1.cell(c), f.f2.cell(c), coeff.f1.cell(c), coeff.f2.cell(c), p, grid, dt, options);
    clipped += transport(f.f1, grid, 0.5 * dt) + transport(f.f2, grid, 0.5 * dt);
    f.t = previous[l + 1].t;
    f.last.clipped_mass = clipped;
    f.last.min_f1 = f.f1.min_value();
    f.last.min_f2 = f.f2.min_value();
    next.push_back(std::move(f));
  }
  return next;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, const PhaseGrid& grid) {
  double dist = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l)
    dist = std::max(dist, weighted_L1_distance(a[l].f1, b[l].f1, grid) + weighted_L1_distance(a[l].f2, b[l].f2, grid));
  return dist;
}

} // namespace

PicardResult picard_solve(const SolverState& initial, const MixtureParameters& p, const PhaseGrid& grid, double t_end,
                          double tol, int max_iter, double dt, const SolverOptions& options) {
  if (!(tol > 0.0)) throw PreconditionError("Picard tolerance must be positive");
  if (max_iter < 1) throw PreconditionError("Picard max_iter must be positive");
  const std::vector<double> dts = step_sizes(dt, t_end);

  Trajectory current(dts.size() + 1, initial);
  double t = initial.t;
  for (std::size_t l = 0; l < dts.size(); ++l) {
    t += dts[l];
    current[l + 1].t = t;
  }

  PicardTrace trace;
  for (int it = 1; it <= max_iter; ++it) {
    Trajectory next = picard_sweep(current, dts, p, grid, options);
    const double dist = trajectory_distance(next, current, grid);
    if (!trace.distances.empty())
      trace.ratios.push_back(trace.distances.back() > 0.0 ? dist / trace.distances.back() : 0.0);
    trace.distances.push_back(dist);
    current = std::move(next);
    if (dist < tol) {
      trace.converged = true;
      return {std::move(current.back()), std::move(trace)};
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "Picard iteration did not reach tolerance %.3g in %d iterations (last distance %.3g)",
                tol, max_iter, trace.distances.back());
  throw NonConvergenceError(buf, std::move(trace));
}

} // namespace bgkmix
