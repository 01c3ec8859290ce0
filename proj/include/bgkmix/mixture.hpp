#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moments.hpp"
#include "vec.hpp"

namespace bgkmix {

enum class ModelVariant { two_term, single_term };

/// Orientation of the exchange terms in the single-relaxation-term closure.
/// `as_published` uses (u_k - u_j) and (T_k - T_j), which push the species apart;
/// `physical` uses (u_j - u_k) and (T_j - T_k) and relaxes them together.
enum class ExchangeSign { as_published, physical };

/// Masses, collision constants and closure parameters of a two-species mixture.
/// The nu fields are the density-independent constants in
/// nu_jk n_k = nu_jk_const * n_k / (n1 + n2).
struct MixtureParameters {
  double m1 = 1.0;
  double m2 = 1.0;
  double nu11 = 1.0;
  double nu12 = 1.0;
  double nu21 = 1.0;
  double nu22 = 1.0;
  double alpha = 1.0;
  double delta = 1.0;
  double gamma = 0.0;
  double epsilon = 1.0;
  ModelVariant variant = ModelVariant::two_term;

  // single-term closure only
  double chi12 = 0.0;
  double chi21 = 0.0;
  double nu11_aap = 1.0;
  double nu12_aap = 1.0;
  double nu21_aap = 1.0;
  double nu22_aap = 1.0;
  ExchangeSign aap_sign = ExchangeSign::as_published;

  double mass_ratio() const { return m1 / m2; }
};

/// Builds parameters with nu12 tied to epsilon * nu21.
MixtureParameters coupled_parameters(double m1, double m2, double nu11, double nu21, double nu22, double epsilon,
                                     double alpha, double delta, double gamma);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x, double slack = 0.0) const { return x >= lower - slack && x <= upper + slack; }
};

/// Admissible delta range: ((m1/m2) eps - 1)/(1 + (m1/m2) eps) <= delta <= 1.
Interval delta_bounds(const MixtureParameters& p);
/// Admissible gamma range for the stored delta: 0 <= gamma <= (m1/d)(1-delta)[(1+r)delta + 1 - r].
Interval gamma_bounds(const MixtureParameters& p, int d);

struct ConstraintCheck {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double margin = 0.0;  // distance to the nearest violated/active bound (negative when violated)
};

struct ValidityReport {
  std::vector<ConstraintCheck> checks;
  bool ok() const;
  /// First failing check rendered as a message, empty if ok.
  std::string first_failure() const;
};

ValidityReport validate_params(const MixtureParameters& p, int d);

/// Runtime temperature-positivity conditions of the single-term closure at given densities.
ValidityReport validate_single_term_state(const MixtureParameters& p, double n1, double n2);

/// (u12, u21) of the two-term closure.
std::pair<Vec3, Vec3> interspecies_velocities(const MixtureParameters& p, const Vec3& u1, const Vec3& u2);

/// (T12, T21) of the two-term closure. Throws AdmissibilityError on a negative result.
std::pair<double, double> interspecies_temperatures(const MixtureParameters& p, const SpeciesMoments& mom1,
                                                    const SpeciesMoments& mom2, int d);

/// Coefficient of |u1 - u2|^2 in T21.
double t21_velocity_coefficient(const MixtureParameters& p, int d);

/// nu_jk n_k for the four pairs.
struct CollisionRates {
  double self1 = 0.0;   // nu11 n1
  double cross1 = 0.0;  // nu12 n2
  double cross2 = 0.0;  // nu21 n1
  double self2 = 0.0;   // nu22 n2
  double total1() const { return self1 + cross1; }
  double total2() const { return self2 + cross2; }
};

/// Two-term frequencies: nu_jk n_k = nu_jk_const n_k / (n1 + n2). Throws VacuumError when n1 + n2 == 0.
CollisionRates collision_frequencies(const MixtureParameters& p, double n1, double n2);
/// Same shape using the single-term constants.
CollisionRates single_term_frequencies(const MixtureParameters& p, double n1, double n2);

struct SingleTermTargets {
  Vec3 u1{};
  Vec3 u2{};
  double T1 = 0.0;
  double T2 = 0.0;
};

/// Interspecies velocities and temperatures u^(k), T^(k) of the single-term closure.
SingleTermTargets aap_interspecies(const MixtureParameters& p, const SpeciesMoments& mom1,
                                   const SpeciesMoments& mom2, int d);

/// A mixture target written relative to one species ("self") and its partner ("other"):
///   u_mix = w_self u_self + w_other u_other
///   T_mix = t_self T_self + t_other T_other + g |u_self - u_other|^2
struct MixtureClosure {
  double w_self = 1.0;
  double w_other = 0.0;
  double t_self = 1.0;
  double t_other = 0.0;
  double g = 0.0;

  Vec3 velocity(const Vec3& u_self, const Vec3& u_other) const {
    return w_self * u_self + w_other * u_other;
  }
  double temperature(double T_self, double T_other, const Vec3& u_self, const Vec3& u_other) const {
    return t_self * T_self + t_other * T_other + g * norm2(u_self - u_other);
  }
};

/// Closure of M12 (self = species 1).
MixtureClosure closure_12(const MixtureParameters& p, int d);
/// Closure of M21 (self = species 2).
MixtureClosure closure_21(const MixtureParameters& p, int d);
/// Closure of M^(k) of the single-term model at given densities; species = 1 or 2.
MixtureClosure single_term_closure(const MixtureParameters& p, int species, double n1, double n2, int d);

} // namespace bgkmix
