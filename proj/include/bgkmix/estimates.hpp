#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grid.hpp"
#include "mixture.hpp"
#include "moments.hpp"
#include "solver.hpp"

namespace bgkmix {

/// Absolute slack of every comparison: pass iff lhs <= rhs + slack.
inline constexpr double kEstimateSlack = 1e-12;

struct EstimateCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  bool pass = true;
  double margin = 0.0;  // rhs - lhs
};

struct EstimateReport {
  std::vector<EstimateCheck> checks;
  bool all_pass() const;
  std::size_t failures() const;
  void add(std::string name, double lhs, double constant, double rhs);
  void append(const EstimateReport& other);
};

// ---- constants ------------------------------------------------------------
// Every constant below is a sufficient one obtained by replaying the standard
// split-integral or power-mean argument with the species mass kept explicit.

double unit_ball_volume(int d);
double unit_sphere_area(int d);

/// n / T^{d/2} <= C N_0(f). Split at |v - u|^2 = 2 d T / m (Chebyshev keeps half the mass inside).
double density_constant(int d, double m);
/// n (T + |u|^2)^{(q-d)/2} <= C N_q(f), q > d + 2.
double tail_constant(double q, int d, double m);
/// n |u|^{d+q} / [(T + |u|^2) T]^{d/2} <= C N_q(f), q > 1. Case split at |u|^2 = 8 d T / m.
double drift_split_constant(double q, int d, double m);
/// n |u|^q / T^{d/2} <= C N_q(f), q > d + 2.
double drift_constant(double q, int d, double m);
/// sup_v |v|^q M[f] <= C N_q(f), q > d + 2 or q = 0.
double sup_constant(double q, int d, double m);

/// Mixture analogues. `self_mass` / `other_mass` refer to the species whose moments
/// carry the closure weights w_self, t_self (the mixture Maxwellian has self's density and mass).
double mixture_density_constant(const MixtureClosure& c, int d, double self_mass);
double mixture_tail_constant(const MixtureClosure& c, double q, int d, double self_mass, double other_mass);
double mixture_drift_constant(const MixtureClosure& c, double q, int d);
double mixture_sup_constant(const MixtureClosure& c, double q, int d, double self_mass, double other_mass);

/// Combination bounds: |delta u1 + (1-delta) u2|^q <= A(|u1|^q + |u2|^q) and
/// (alpha T1 + (1-alpha) T2 + gamma |u1-u2|^2)^q <= A(T1^q + T2^q + |u1-u2|^{2q}).
double combination_velocity_constant(double delta, double q);
double combination_temperature_constant(double alpha, double gamma, double q);

struct ConstantEntry {
  std::string name;
  double q = 0.0;
  double value = 0.0;
};
/// Constants of the two-term closures for the given exponents (entries requiring q > d + 2 are
/// skipped for smaller q).
std::vector<ConstantEntry> constant_table(const MixtureParameters& p, int d, std::span<const double> qs);

// ---- checkers on one spatial cell -----------------------------------------
// Mixture lines use M12/M21 for the two-term variant and M^(1)/M^(2) (names
// suffixed with '*') for the single-term variant.

EstimateReport check_density_temperature(std::span<const double> f1, std::span<const double> f2,
                                         const MixtureParameters& p, const PhaseGrid& grid);
EstimateReport check_tail_moments(std::span<const double> f1, std::span<const double> f2, const MixtureParameters& p,
                                  const PhaseGrid& grid, double q);
EstimateReport check_combination_bound(const Vec3& u1, const Vec3& u2, double T1, double T2,
                                       const MixtureParameters& p, double q);
EstimateReport check_velocity_ratio(std::span<const double> f1, std::span<const double> f2,
                                    const MixtureParameters& p, const PhaseGrid& grid, double q);
EstimateReport check_maxwellian_sup(std::span<const double> f1, std::span<const double> f2,
                                    const MixtureParameters& p, const PhaseGrid& grid, double q);

/// Supremum over v in R^d of |v|^q times the Maxwellian (n, u, T, m): attained along u at
/// |v| = (|u| + sqrt(|u|^2 + 4 q T/m)) / 2.
double maxwellian_weighted_sup(double n, const Vec3& u, double T, double m, int d, double q);

// ---- envelopes on a simulation trace ---------------------------------------

/// Gronwall bound on N_q(f1) + N_q(f2), density floors, temperature floors and
/// (T + |u|^2) caps along the trace. Two-term variant only; the single-term variant
/// yields the density floors alone. The first sample supplies the initial data.
EstimateReport check_envelopes(const EnvelopeTrace& trace, const MixtureParameters& p, int d);

// ---- randomized suite ------------------------------------------------------

struct SuiteConfig {
  std::uint64_t seed = 20240101;
  int samples = 1000;
  double v_max = 9.0;
  int nodes_1d = 96;
  int nodes_2d = 48;
  int nodes_3d = 28;
  int max_components = 5;
  int threads = 0;  // 0: hardware concurrency
};

struct SuiteSample {
  int index = 0;
  int d = 1;
  std::uint64_t seed = 0;
  EstimateReport report;
};

struct SuiteResult {
  std::vector<SuiteSample> samples;
  std::size_t checks = 0;
  std::size_t failures = 0;
};

/// Per-sample seed derived from the master seed (independent of thread scheduling).
std::uint64_t sample_seed(std::uint64_t master, int index);

SuiteSample run_suite_sample(const SuiteConfig& config, int index);
SuiteResult run_estimate_suite(const SuiteConfig& config);

} // namespace bgkmix
