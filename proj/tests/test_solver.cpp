#include <cmath>
#include <random>

#include "bgkmix/errors.hpp"
#include "bgkmix/moments.hpp"
#include "bgkmix/solver.hpp"
#include "doctest.h"

using namespace bgkmix;

namespace {

GridConfig grid_config(int d, double v_max, int nodes, int cells = 1) {
  GridConfig c;
  c.velocity_dim = d;
  c.v_max = v_max;
  c.nodes_per_axis = nodes;
  c.n_cells = cells;
  c.domain_length = 1.0;
  return c;
}

MixtureParameters unequal_masses() {
  return coupled_parameters(1.0, 2.0, 1.0, 2.0, 1.0, 0.5, 0.5, 0.5, 0.0);
}

SpeciesInitial single(double n, Vec3 u, double T, double amplitude = 0.0) {
  SpeciesInitial s;
  s.components.push_back({n, u, T});
  s.amplitude = amplitude;
  return s;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace

TEST_CASE("common equilibrium is a fixed point") {
  const PhaseGrid g = build_grid(grid_config(2, 7.0, 28));
  const MixtureParameters p = coupled_parameters(1.0, 1.0, 1.0, 1.5, 0.8, 0.7, 0.3, 0.6, 0.05);
  REQUIRE(validate_params(p, 2).ok());
  const auto s = single(1.0, {0.2, -0.1, 0}, 1.1);
  SolverState state = initial_state(s, s, p, g, MaxwellianMode::conservative);
  const SolverState start = state;
  for (int i = 0; i < 10; ++i) step_in_place(state, p, g, 0.05);
  double worst = 0.0;
  for (std::size_t i = 0; i < start.f1.values().size(); ++i) {
    worst = std::max(worst, std::fabs(state.f1.values()[i] - start.f1.values()[i]));
    worst = std::max(worst, std::fabs(state.f2.values()[i] - start.f2.values()[i]));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("non-positive time step is rejected") {
  const PhaseGrid g = build_grid(grid_config(1, 6.0, 16));
  const MixtureParameters p = unequal_masses();
  SolverState state = initial_state(single(1, {0, 0, 0}, 1), single(1, {0, 0, 0}, 1), p, g);
  CHECK_THROWS_AS(step_in_place(state, p, g, 0.0), PreconditionError);
  CHECK_THROWS_AS(step_in_place(state, p, g, -0.1), PreconditionError);
}

TEST_CASE("vacuum cell") {
  const PhaseGrid g = build_grid(grid_config(1, 6.0, 16));
  SolverState state{DistributionField(g, 1.0, 0.0), DistributionField(g, 2.0, 0.0)};
  CHECK_THROWS_AS(step_in_place(state, unequal_masses(), g, 0.1), VacuumError);
}

TEST_CASE("homogeneous conservation, positivity and entropy") {
  const PhaseGrid g = build_grid(grid_config(2, 8.0, 32));
  for (ModelVariant variant : {ModelVariant::two_term, ModelVariant::single_term}) {
    MixtureParameters p = unequal_masses();
    p.variant = variant;
    p.chi12 = p.chi21 = 0.4;
    p.aap_sign = ExchangeSign::physical;
    SolverState state =
        initial_state(single(1.0, {0.5, 0, 0}, 1.0), single(0.7, {-0.1, 0.2, 0}, 1.5), p, g);
    const DiagnosticsRow first = diagnostics_row(state, g);
    double entropy = first.entropy;
    for (int i = 0; i < 200; ++i) {
      step_in_place(state, p, g, 0.02);
      const DiagnosticsRow row = diagnostics_row(state, g);
      CHECK(rel(row.s1.mass, first.s1.mass) <= 1e-12);
      CHECK(rel(row.s2.mass, first.s2.mass) <= 1e-12);
      const double pscale = std::fabs(first.s1.momentum[0]) + std::fabs(first.s2.momentum[0]) +
                            std::fabs(first.s1.momentum[1]) + std::fabs(first.s2.momentum[1]);
      for (int k = 0; k < 2; ++k) CHECK(std::fabs(row.p_total[k] - first.p_total[k]) <= 1e-10 * pscale);
      CHECK(rel(row.E_total, first.E_total) <= 1e-10);
      CHECK(row.min_f1 > 0.0);
      CHECK(row.min_f2 > 0.0);
      CHECK(row.entropy <= entropy + 1e-12);
      entropy = row.entropy;
    }
    const DiagnosticsRow last = diagnostics_row(state, g);
    CHECK(std::fabs(last.s1.u[0] - last.s2.u[0]) < std::fabs(first.s1.u[0] - first.s2.u[0]));
    CHECK(std::fabs(last.s1.T - last.s2.T) < std::fabs(first.s1.T - first.s2.T));
  }
}

TEST_CASE("no cross collisions means independent species") {
  const PhaseGrid g = build_grid(grid_config(1, 9.0, 96));
  MixtureParameters p = unequal_masses();
  p.nu12 = p.nu21 = 0.0;
  SpeciesInitial two_bumps;
  two_bumps.components = {{0.5, {-1.0, 0, 0}, 0.5}, {0.5, {1.5, 0, 0}, 0.8}};
  SolverState state = initial_state(two_bumps, single(1.0, {0.3, 0, 0}, 2.0), p, g);
  const DiagnosticsRow first = diagnostics_row(state, g);
  for (int i = 0; i < 1200; ++i) step_in_place(state, p, g, 0.05);
  const DiagnosticsRow last = diagnostics_row(state, g);
  CHECK(std::fabs(last.s1.u[0] - first.s1.u[0]) <= 1e-12);
  CHECK(rel(last.s1.T, first.s1.T) <= 1e-12);
  CHECK(std::fabs(last.s2.u[0] - first.s2.u[0]) <= 1e-12);
  CHECK(rel(last.s2.T, first.s2.T) <= 1e-12);
  // species 1 has relaxed onto its own Maxwellian
  const auto own = maxwellian_eval(last.s1.n, last.s1.u, last.s1.T, p.m1, g, MaxwellianMode::conservative);
  double diff = 0.0;
  for (std::size_t i = 0; i < own.size(); ++i) diff = std::max(diff, std::fabs(state.f1.values()[i] - own[i]));
  CHECK(diff <= 1e-6);
}

TEST_CASE("transport") {
  const PhaseGrid g = build_grid(grid_config(1, 5.0, 20, 32));
  SUBCASE("uniform field is unchanged") {
    DistributionField f(g, 1.0, 0.5);
    CHECK(transport(f, g, 0.37) == 0.0);
    for (double x : f.values()) CHECK(x == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("mass is conserved and positivity kept") {
    const DistributionField f0 = initial_field(single(1.0, {0.3, 0, 0}, 1.0, 0.2), 1.0, g);
    DistributionField f = f0;
    for (int i = 0; i < 50; ++i) CHECK(transport(f, g, 0.013) <= 1e-12);
    CHECK(rel(global_moments(f, g).mass, global_moments(f0, g).mass) <= 1e-12);
    CHECK(f.min_value() > 0.0);
  }
  SUBCASE("whole-cell shift is exact") {
    DistributionField f(g, 1.0, 0.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (double& x : f.values()) x = U(rng);
    const DistributionField f0 = f;
    // choose tau so the node with v = h/2 moves by exactly one cell
    const std::size_t node = g.node_count() / 2;
    const double v = g.velocity(node)[0];
    REQUIRE(v > 0.0);
    transport(f, g, g.cell_width() / v);
    for (std::size_t c = 0; c < g.n_cells(); ++c) {
      const std::size_t from = (c + g.n_cells() - 1) % g.n_cells();
      CHECK(f.at(c, node) == doctest::Approx(f0.at(from, node)).epsilon(1e-12));
    }
  }
}

TEST_CASE("transported run keeps mass, positivity and density floors") {
  SimulationSettings s;
  s.params = unequal_masses();
  s.grid = grid_config(1, 8.0, 48, 32);
  s.initial1 = single(1.0, {0.4, 0, 0}, 1.0, 0.2);
  s.initial2 = single(1.0, {-0.2, 0, 0}, 1.5, 0.2);
  s.dt = 0.01;
  s.t_end = 0.5;
  s.cadence = 10;
  s.envelope_q = 4.0;
  const SimulationResult r = run_simulation(s);
  REQUIRE(r.rows.size() >= 2);
  for (const auto& row : r.rows) {
    CHECK(rel(row.s1.mass, r.rows.front().s1.mass) <= 1e-12);
    CHECK(rel(row.s2.mass, r.rows.front().s2.mass) <= 1e-12);
    CHECK(row.min_f1 > 0.0);
    CHECK(row.min_f2 > 0.0);
  }
  CHECK(r.max_clipped_per_step <= 1e-12);
  const double nu1 = s.params.nu11 + s.params.nu12, nu2 = s.params.nu22 + s.params.nu21;
  const double c1 = r.envelopes.samples.front().min_n1, c2 = r.envelopes.samples.front().min_n2;
  for (const auto& e : r.envelopes.samples) {
    CHECK(e.min_n1 >= c1 * std::exp(-nu1 * e.t));
    CHECK(e.min_n2 >= c2 * std::exp(-nu2 * e.t));
  }
}

TEST_CASE("driver bookkeeping") {
  SimulationSettings s;
  s.params = unequal_masses();
  s.grid = grid_config(1, 8.0, 48);
  s.initial1 = single(1.0, {0.5, 0, 0}, 1.0);
  s.initial2 = single(1.0, {-0.1, 0, 0}, 1.5);
  s.t_end = 0.0;
  CHECK(run_simulation(s).rows.size() == 1);

  s.t_end = 0.105;
  s.dt = 0.01;
  s.cadence = 5;
  const SimulationResult r = run_simulation(s);
  CHECK(r.steps == 11);
  CHECK(r.rows.back().t == doctest::Approx(0.105).epsilon(1e-14));
  CHECK(r.final_state.t == doctest::Approx(0.105).epsilon(1e-14));

  s.params.delta = -5.0;
  CHECK_THROWS_AS(run_simulation(s), AdmissibilityError);
}

TEST_CASE("homogeneous relaxation reaches the conserved equilibrium") {
  SimulationSettings s;
  s.params = unequal_masses();
  s.grid = grid_config(1, 9.0, 96);
  s.initial1 = single(1.0, {0.5, 0, 0}, 1.0);
  s.initial2 = single(1.0, {-0.1, 0, 0}, 1.5);
  s.dt = 0.05;
  s.t_end = 60.0;
  s.cadence = 100;
  const SimulationResult r = run_simulation(s);
  const DiagnosticsRow& a = r.rows.front();
  const DiagnosticsRow& b = r.rows.back();
  const double M = s.params.m1 * a.s1.n + s.params.m2 * a.s2.n;
  const double u_inf = a.p_total[0] / M;
  // E = sum n_k (d/2) T + (1/2) M u^2 at the common state
  const double T_inf = (a.E_total - 0.5 * M * u_inf * u_inf) / (0.5 * (a.s1.n + a.s2.n));
  CHECK(std::fabs(b.s1.u[0] - u_inf) <= 1e-6);
  CHECK(std::fabs(b.s2.u[0] - u_inf) <= 1e-6);
  CHECK(std::fabs(b.s1.T - T_inf) <= 1e-6);
  CHECK(std::fabs(b.s2.T - T_inf) <= 1e-6);
}
