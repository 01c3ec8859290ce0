#include <cmath>
#include <random>

#include "bgkmix/errors.hpp"
#include "bgkmix/mixture.hpp"
#include "doctest.h"

using namespace bgkmix;

namespace {

MixtureParameters symmetric() {
  return coupled_parameters(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.0);
}

MixtureParameters random_admissible(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double m1 = 0.2 + 4.0 * U(rng), m2 = 0.2 + 4.0 * U(rng);
  const double eps = 0.05 + 0.95 * U(rng);
  MixtureParameters p = coupled_parameters(m1, m2, 0.1 + U(rng), 0.1 + U(rng), 0.1 + U(rng), eps, U(rng), 1.0, 0.0);
  const Interval db = delta_bounds(p);
  p.delta = db.lower + (db.upper - db.lower) * U(rng);
  p.gamma = gamma_bounds(p, d).upper * U(rng);
  return p;
}

double kinetic_energy(double m, double T, const Vec3& u, int d) { return 0.5 * d * T + 0.5 * m * norm2(u); }

} // namespace

TEST_CASE("admissible delta range and gamma bound") {
  const MixtureParameters p = symmetric();
  const Interval db = delta_bounds(p);
  CHECK(db.lower == doctest::Approx(0.0));
  CHECK(db.upper == 1.0);
  CHECK(gamma_bounds(p, 3).upper == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  MixtureParameters q = p;
  q.delta = 1.0;
  CHECK(gamma_bounds(q, 3).upper == 0.0);
  q.gamma = 1e-9;
  CHECK_FALSE(validate_params(q, 3).ok());
}

TEST_CASE("validity report names the violated bound") {
  MixtureParameters p = symmetric();
  p.delta = -0.9;
  const ValidityReport r = validate_params(p, 3);
  CHECK_FALSE(r.ok());
  const std::string msg = r.first_failure();
  CHECK(msg.find("delta") != std::string::npos);
  CHECK(msg.find("[0, 1]") != std::string::npos);

  MixtureParameters bad = symmetric();
  bad.nu12 = 2.0 * bad.nu21;
  CHECK_FALSE(validate_params(bad, 3).ok());
  bad = symmetric();
  bad.epsilon = 0.0;
  CHECK_FALSE(validate_params(bad, 3).ok());
  bad = symmetric();
  bad.nu22 = 0.0;
  CHECK_FALSE(validate_params(bad, 3).ok());
}

TEST_CASE("interspecies velocities") {
  const MixtureParameters p = symmetric();
  const auto [u12, u21] = interspecies_velocities(p, {0, 0, 0}, {1, 0, 0});
  CHECK(u12[0] == doctest::Approx(0.5));
  CHECK(u21[0] == doctest::Approx(0.5));

  MixtureParameters q = p;
  q.delta = 1.0;
  const Vec3 a{0.3, -1, 2}, b{-0.7, 0.1, 0.5};
  const auto [v12, v21] = interspecies_velocities(q, a, b);
  CHECK(v12 == a);
  CHECK(v21 == b);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const MixtureParameters r = random_admissible(rng, 3);
    const Vec3 w{0.25, -1.5, 3.0};
    const auto [x12, x21] = interspecies_velocities(r, w, w);
    for (int k = 0; k < 3; ++k) {
      CHECK(x12[k] == doctest::Approx(w[k]).epsilon(1e-14));
      CHECK(x21[k] == doctest::Approx(w[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("interspecies temperatures") {
  const MixtureParameters p = symmetric();
  const auto [T12, T21] = interspecies_temperatures(p, {1, {0, 0, 0}, 1.0}, {1, {1, 0, 0}, 2.0}, 3);
  CHECK(T12 == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(T21 == doctest::Approx(1.5 + 1.0 / 6.0).epsilon(1e-15));

  MixtureParameters q = p;
  q.alpha = 1.0;
  const auto [S12, S21] = interspecies_temperatures(q, {1, {1, 1, 0}, 0.7}, {2, {1, 1, 0}, 1.9}, 3);
  CHECK(S12 == 0.7);
  CHECK(S21 == doctest::Approx(1.9).epsilon(1e-15));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + i % 3;
    const MixtureParameters r = random_admissible(rng, d);
    const SpeciesMoments a{1.0, {U(rng), U(rng), U(rng)}, 0.01 + std::fabs(U(rng))};
    const SpeciesMoments b{1.0, {U(rng), U(rng), U(rng)}, 0.01 + std::fabs(U(rng))};
    const auto [t12, t21] = interspecies_temperatures(r, a, b, d);
    CHECK(t12 > 0.0);
    CHECK(t21 > 0.0);
  }
}

TEST_CASE("collision frequencies") {
  MixtureParameters p = symmetric();
  p.nu12 = 2.0;
  const CollisionRates r = collision_frequencies(p, 1.0, 3.0);
  CHECK(r.cross1 == doctest::Approx(1.5));
  const CollisionRates z = collision_frequencies(p, 1.0, 0.0);
  CHECK(z.cross1 == 0.0);
  CHECK(z.self1 == p.nu11);
  CHECK_THROWS_AS(collision_frequencies(p, 0.0, 0.0), VacuumError);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const MixtureParameters q = random_admissible(rng, 3);
    const double numax = std::max({q.nu11, q.nu12, q.nu21, q.nu22});
    const CollisionRates s = collision_frequencies(q, U(rng), U(rng) + 1e-3);
    CHECK(s.total1() <= numax * (1 + 1e-15));
    CHECK(s.total2() <= numax * (1 + 1e-15));
  }
}

TEST_CASE("single-term interspecies quantities") {
  MixtureParameters p = symmetric();
  p.variant = ModelVariant::single_term;
  p.nu11_aap = p.nu12_aap = p.nu21_aap = p.nu22_aap = 1.0;

  const SpeciesMoments a{1.0, {0.3, 0, 0}, 1.0}, b{1.0, {-0.4, 0, 0}, 2.0};
  const SingleTermTargets off = aap_interspecies(p, a, b, 3);
  CHECK(off.u1 == a.u);
  CHECK(off.u2 == b.u);
  CHECK(off.T1 == a.T);
  CHECK(off.T2 == b.T);

  // n1 = n2 = 1 with unit constants makes nu11 n1 + nu12 n2 = 1
  p.chi12 = 0.25;
  const SingleTermTargets v = aap_interspecies(p, {1.0, {0, 0, 0}, 1.0}, {1.0, {1, 0, 0}, 1.0}, 3);
  CHECK(v.u1[0] == doctest::Approx(-0.25).epsilon(1e-15));
  const SingleTermTargets t = aap_interspecies(p, {1.0, {0, 0, 0}, 1.0}, {1.0, {0, 0, 0}, 2.0}, 3);
  CHECK(t.T1 == doctest::Approx(0.75).epsilon(1e-15));

  p.aap_sign = ExchangeSign::physical;
  const SingleTermTargets w = aap_interspecies(p, {1.0, {0, 0, 0}, 1.0}, {1.0, {1, 0, 0}, 1.0}, 3);
  CHECK(w.u1[0] == doctest::Approx(0.25).epsilon(1e-15));

  p.chi12 = 3.0;
  CHECK_FALSE(validate_single_term_state(p, 1.0, 1.0).ok());
  p.chi12 = 0.9;
  CHECK(validate_single_term_state(p, 1.0, 1.0).ok());
}

TEST_CASE("momentum and energy exchange balance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const int d = 1 + i % 3;
    const MixtureParameters p = random_admissible(rng, d);
    const SpeciesMoments a{0.1 + std::fabs(U(rng)), {U(rng), U(rng), U(rng)}, 0.1 + std::fabs(U(rng))};
    const SpeciesMoments b{0.1 + std::fabs(U(rng)), {U(rng), U(rng), U(rng)}, 0.1 + std::fabs(U(rng))};
    const CollisionRates r = collision_frequencies(p, a.n, b.n);
    const auto [u12, u21] = interspecies_velocities(p, a.u, b.u);
    const auto [T12, T21] = interspecies_temperatures(p, a, b, d);
    const double w1 = r.cross1 * a.n, w2 = r.cross2 * b.n;

    for (int k = 0; k < 3; ++k) {
      const double x = p.m1 * w1 * (u12[k] - a.u[k]);
      const double y = p.m2 * w2 * (u21[k] - b.u[k]);
      const double scale = p.m1 * w1 * (std::fabs(u12[k]) + std::fabs(a.u[k])) +
                           p.m2 * w2 * (std::fabs(u21[k]) + std::fabs(b.u[k]));
      CHECK(std::fabs(x + y) <= 1e-12 * scale);
    }
    const double e1 = w1 * (kinetic_energy(p.m1, T12, u12, d) - kinetic_energy(p.m1, a.T, a.u, d));
    const double e2 = w2 * (kinetic_energy(p.m2, T21, u21, d) - kinetic_energy(p.m2, b.T, b.u, d));
    const double scale = w1 * (kinetic_energy(p.m1, T12, u12, d) + kinetic_energy(p.m1, a.T, a.u, d)) +
                         w2 * (kinetic_energy(p.m2, T21, u21, d) + kinetic_energy(p.m2, b.T, b.u, d));
    CHECK(std::fabs(e1 + e2) <= 1e-12 * scale);
  }
}

TEST_CASE("admissible rectangle sweep") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 1 + trial % 3;
    MixtureParameters p = coupled_parameters(0.3 + 3 * U(rng), 0.3 + 3 * U(rng), 1.0, 1.0, 1.0, 0.1 + 0.9 * U(rng),
                                             0.5, 1.0, 0.0);
    const Interval db = delta_bounds(p);
    const double step = 1.0 / 19.0;
    int accepted = 0;
    for (int i = 0; i < 20; ++i) {
      p.alpha = i * step;
      for (int j = 0; j < 20; ++j) {
        p.delta = db.lower + (db.upper - db.lower) * j * step;
        const double gmax = gamma_bounds(p, d).upper;
        for (int k = 0; k < 20; ++k) {
          p.gamma = gmax * k * step;
          accepted += validate_params(p, d).ok() ? 1 : 0;
        }
      }
    }
    CHECK(accepted == 8000);

    const double eps = 1e-6;
    MixtureParameters q = p;
    q.alpha = 0.5;
    q.delta = 0.5 * (db.lower + db.upper);
    q.gamma = 0.5 * gamma_bounds(q, d).upper;
    REQUIRE(validate_params(q, d).ok());
    auto rejects = [&](auto mutate) {
      MixtureParameters r = q;
      mutate(r);
      return !validate_params(r, d).ok();
    };
    CHECK(rejects([&](MixtureParameters& r) { r.alpha = -eps; }));
    CHECK(rejects([&](MixtureParameters& r) { r.alpha = 1 + eps; }));
    CHECK(rejects([&](MixtureParameters& r) { r.delta = db.lower - eps; }));
    CHECK(rejects([&](MixtureParameters& r) { r.delta = db.upper + eps; }));
    CHECK(rejects([&](MixtureParameters& r) { r.gamma = -eps; }));
    CHECK(rejects([&](MixtureParameters& r) { r.gamma = gamma_bounds(r, d).upper + eps; }));
  }
}

TEST_CASE("closures reproduce the interspecies formulas") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + i % 3;
    const MixtureParameters p = random_admissible(rng, d);
    const SpeciesMoments a{1.0, {U(rng), U(rng), U(rng)}, 0.1 + std::fabs(U(rng))};
    const SpeciesMoments b{1.0, {U(rng), U(rng), U(rng)}, 0.1 + std::fabs(U(rng))};
    const auto [u12, u21] = interspecies_velocities(p, a.u, b.u);
    const auto [T12, T21] = interspecies_temperatures(p, a, b, d);
    const MixtureClosure c12 = closure_12(p, d), c21 = closure_21(p, d);
    for (int k = 0; k < 3; ++k) {
      CHECK(c12.velocity(a.u, b.u)[k] == doctest::Approx(u12[k]).epsilon(1e-13));
      CHECK(c21.velocity(b.u, a.u)[k] == doctest::Approx(u21[k]).epsilon(1e-13));
    }
    CHECK(c12.temperature(a.T, b.T, a.u, b.u) == doctest::Approx(T12).epsilon(1e-13));
    CHECK(c21.temperature(b.T, a.T, b.u, a.u) == doctest::Approx(T21).epsilon(1e-13));
    CHECK(c21.g >= -1e-14);
  }
}
