#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixture.hpp"
#include "moments.hpp"
#include "solver.hpp"
#include "vec.hpp"

namespace bgkmix {

/// Space-homogeneous two-fluid state. E_k is the specific total energy with
/// m_k n_k E_k = m_k n_k |u_k|^2 / 2 + (d/2) n_k T_k.
struct MacroState {
  double m1 = 1.0, m2 = 1.0;
  int d = 3;
  double n1 = 1.0, n2 = 1.0;
  Vec3 u1{}, u2{};
  double E1 = 0.0, E2 = 0.0;

  double T1() const;
  double T2() const;
  static MacroState from_moments(const SpeciesMoments& s1, const SpeciesMoments& s2, double m1, double m2, int d);
};

/// Optional component of U orthogonal to u1 - u2; it never affects the exchange terms.
using PerpFunction = std::function<Vec3(const Vec3&, const Vec3&)>;

struct BridgeParameters {
  double lambda_u = 0.0;
  double lambda_T = 0.0;
  double c = 0.0;
  PerpFunction v_perp;  // empty: zero
};

/// Momentum and energy gained by species 1 from the interspecies relaxation term.
struct ExchangeTerms {
  Vec3 momentum{};
  double energy = 0.0;
};
ExchangeTerms exchange_terms(const MixtureParameters& p, const SpeciesMoments& s1, const SpeciesMoments& s2, int d);

/// 1/2 [(u1+u2).(u1-u2) / |u1-u2|^2] (u1-u2) + offset (u1-u2) + the part of v_perp orthogonal to u1-u2.
/// Returns u1 when u1 == u2.
Vec3 u_function(const Vec3& u1, const Vec3& u2, double offset, const PerpFunction& v_perp = {});

struct BridgeCoefficients {
  double delta = 1.0;
  Interval c_range;       // c keeping gamma inside its positivity range
  double c_symmetric = 0.0;
  double m1 = 1.0;
  int d = 3;
  /// gamma(c) = (m1/d)(1 - delta)(delta + 2c)
  double gamma_for(double c) const;
};

/// delta = 1 - lambda_u / (m1 nu12 n1 n2) with nu12 = nu12_const / (n1 + n2).
/// Throws AdmissibilityError when delta falls outside its positivity range.
BridgeCoefficients bridge_parameters(const MixtureParameters& p, double lambda_u, double n1, double n2, int d);

/// Inverse of gamma_for: the c reproducing p.gamma. Requires delta < 1.
double c_from_gamma(const MixtureParameters& p, int d);

/// Relaxation parameters matching the kinetic model at densities (n1, n2).
BridgeParameters matched_bridge(const MixtureParameters& p, double n1, double n2, int d);

struct MacroRates {
  Vec3 momentum1{}, momentum2{};  // d/dt of m_k n_k u_k
  double energy1 = 0.0, energy2 = 0.0;  // d/dt of m_k n_k E_k
};
MacroRates dellacherie_rhs(const MacroState& state, const BridgeParameters& bridge);

struct MacroSample {
  double t = 0.0;
  MacroState state;
};
/// Classical RK4 on the homogeneous system; species 2 receives exactly the negated species-1 source.
/// Samples every `cadence` steps and at t_end.
std::vector<MacroSample> ode_integrate(const MacroState& initial, const BridgeParameters& bridge, double dt,
                                       double t_end, int cadence = 1);

/// Kinetic homogeneous runs at each dt compared against a fine RK4 solution of the matched
/// macroscopic system at common output times (multiples of the largest dt).
struct ComparisonResult {
  std::vector<double> dts;
  std::vector<double> errors;  // max over times/quantities of |kinetic - ode| / max(|ode|, 1)
  std::vector<double> ratios;  // errors[i-1] / errors[i]
};
ComparisonResult compare_kinetic_macro(const SimulationSettings& base, std::span<const double> dts, double ode_dt);

} // namespace bgkmix
