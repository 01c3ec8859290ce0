#include <cmath>
#include <numbers>
#include <random>

#include "bgkmix/errors.hpp"
#include "bgkmix/maxwellian.hpp"
#include "bgkmix/moments.hpp"
#include "doctest.h"

using namespace bgkmix;

namespace {

PhaseGrid make(int d, double v_max, int nodes) {
  GridConfig c;
  c.velocity_dim = d;
  c.v_max = v_max;
  c.nodes_per_axis = nodes;
  return build_grid(c);
}

} // namespace

TEST_CASE("standard normal peak") {
  const PhaseGrid g = make(1, 8.0, 129);
  const auto f = maxwellian_eval(1.0, {0, 0, 0}, 1.0, 1.0, g);
  CHECK(f[64] == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(f[64] == doctest::Approx(0.39894).epsilon(1e-5));
}

TEST_CASE("zero density and degenerate temperature") {
  const PhaseGrid g = make(2, 4.0, 10);
  for (double x : maxwellian_eval(0.0, {0, 0, 0}, 1.0, 1.0, g)) CHECK(x == 0.0);
  for (double x : maxwellian_eval(0.0, {0, 0, 0}, 0.0, 1.0, g)) CHECK(x == 0.0);
  CHECK_THROWS_AS(maxwellian_eval(1.0, {0, 0, 0}, 0.0, 1.0, g), DegenerateTemperatureError);
  CHECK_THROWS_AS(maxwellian_eval(1.0, {0, 0, 0}, -1.0, 1.0, g), DegenerateTemperatureError);
}

TEST_CASE("sampled values match the closed form") {
  const PhaseGrid g = make(3, 6.0, 12);
  const Vec3 u{0.4, -0.3, 0.1};
  const double n = 1.7, T = 0.9, m = 2.0;
  const LatticeMaxwellian M = make_maxwellian(n, u, T, m, g);
  for (std::size_t i = 0; i < g.node_count(); i += 7) {
    const double expected =
        n * std::pow(m / (2 * std::numbers::pi * T), 1.5) * std::exp(-m * norm2(g.velocity(i) - u) / (2 * T));
    CHECK(M.value(g, i) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("sampled moments on a wide lattice") {
  const PhaseGrid g = make(3, 9.0, 40);
  const Vec3 u{0.5, -0.2, 0.3};
  const auto mom = compute_moments(maxwellian_eval(1.2, u, 1.1, 1.0, g), 1.0, g);
  CHECK(std::fabs(mom.n - 1.2) <= 1e-8 * 1.2);
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(mom.u[k] - u[k]) <= 1e-8);
  CHECK(std::fabs(mom.T - 1.1) <= 1e-8);
}

TEST_CASE("conservative correction reproduces its moments exactly") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const int nodes = d == 3 ? 16 : 24;
    const PhaseGrid g = make(d, 6.0, nodes);
    const double m = 0.5 + 2 * U(rng);
    const double T = (0.3 + U(rng)) * m;
    Vec3 u{0, 0, 0};
    for (int k = 0; k < d; ++k) u[k] = U(rng) - 0.5;
    const double n = 0.2 + 2 * U(rng);
    const auto f = maxwellian_eval(n, u, T, m, g, MaxwellianMode::conservative);
    for (double x : f) CHECK(x >= 0.0);
    const auto mom = compute_moments(f, m, g);
    CHECK(std::fabs(mom.n - n) <= 1e-13 * n);
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(mom.u[k] - u[k]) <= 1e-13 * std::max(1.0, std::fabs(u[k])));
    CHECK(std::fabs(mom.T - T) <= 1e-13 * T);
  }
}

TEST_CASE("coarse lattice needs the correction") {
  const PhaseGrid g = make(1, 4.0, 10);
  const auto sampled = compute_moments(maxwellian_eval(1.0, {0.5, 0, 0}, 1.0, 1.0, g), 1.0, g);
  const auto fixed = compute_moments(maxwellian_eval(1.0, {0.5, 0, 0}, 1.0, 1.0, g, MaxwellianMode::conservative), 1.0, g);
  CHECK(std::fabs(sampled.T - 1.0) > 1e-6);
  CHECK(std::fabs(fixed.T - 1.0) <= 1e-13);
  CHECK(std::fabs(fixed.u[0] - 0.5) <= 1e-13);
}

TEST_CASE("accumulate matches values") {
  const PhaseGrid g = make(2, 5.0, 14);
  const LatticeMaxwellian M = make_maxwellian(0.8, {0.1, 0.2, 0}, 1.3, 1.0, g, MaxwellianMode::conservative);
  std::vector<double> out(g.node_count(), 1.0);
  M.accumulate(out, 2.0, g);
  const auto v = M.values(g);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(1.0 + 2.0 * v[i]).epsilon(1e-15));
}
