#include "bgkmix/estimates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <mutex>
#include <thread>

#include "bgkmix/errors.hpp"
#include "bgkmix/maxwellian.hpp"

namespace bgkmix {

bool EstimateReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const EstimateCheck& c) { return c.pass; });
}

std::size_t EstimateReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const EstimateCheck& c) { return !c.pass; }));
}

void EstimateReport::add(std::string name, double lhs, double constant, double rhs) {
  EstimateCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.constant = constant;
  c.pass = !std::isnan(lhs) && !std::isnan(rhs) && lhs <= rhs + kEstimateSlack;
  c.margin = rhs - lhs;
  checks.push_back(std::move(c));
}

void EstimateReport::append(const EstimateReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

// ---- constants --------------------------------------------------------------

double unit_ball_volume(int d) { return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

namespace {

void require_tail_exponent(double q, int d, const char* what) {
  if (!(q > d + 2.0)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s needs q > d + 2 (q = %g, d = %d)", what, q, d);
    throw PreconditionError(buf);
  }
}

void require_closure_signs(const MixtureClosure& c) {
  if (!(c.t_self > 0.0)) throw ConstantDegenerateError("mixture temperature weight of the own species is zero");
  if (c.t_other < 0.0 || c.g < 0.0)
    throw ConstantDegenerateError("mixture temperature is not a nonnegative combination of T1, T2 and |u1-u2|^2");
}

// (sigma_d / 2) ((q-d)/(q-d-2))^{(q-d)/2}: n (S/n)^{(q-d)/2} <= this * N_q, S = int |v|^2 f.
double second_moment_constant(double q, int d) {
  const double r = (q - d) / (q - d - 2.0);
  return 0.5 * unit_sphere_area(d) * std::pow(r, 0.5 * (q - d));
}

double kappa(double m, int d) { return std::max(1.0, m / d); }

} // namespace

double density_constant(int d, double m) { return 2.0 * unit_ball_volume(d) * std::pow(2.0 * d / m, 0.5 * d); }

double tail_constant(double q, int d, double m) {
  require_tail_exponent(q, d, "tail-moment constant");
  return std::pow(kappa(m, d), 0.5 * (q - d)) * second_moment_constant(q, d);
}

double drift_split_constant(double q, int d, double m) {
  if (!(q > 1.0)) throw PreconditionError("drift ratio constant needs q > 1");
  const double beta = 8.0 * d / m;
  const double far = std::pow(2.0, q + 1.0) * unit_ball_volume(d) * std::pow(2.0 * d / m, 0.5 * d);
  const double sigma = unit_sphere_area(d);
  const double e = d + 1.0 - q;
  double near;
  if (std::fabs(e) < 1e-12)
    near = 4.0 * sigma * std::log(9.0) * std::pow(beta, d);
  else if (e > 0.0)
    near = 4.0 * sigma * std::pow(36.0 * d / m, e) * std::pow(beta, q - 1.0) / e;
  else
    near = 4.0 * sigma * std::pow(2.0, -e) * std::pow(beta, d) / (-e);
  return std::max(far, near);
}

double drift_constant(double q, int d, double m) {
  require_tail_exponent(q, d, "drift constant");
  const double beta = 8.0 * d / m;
  const double far = std::pow(2.0, q + 1.0) * unit_ball_volume(d) * std::pow(2.0 * d / m, 0.5 * d);
  return std::max(far, std::pow(beta, 0.5 * q) * tail_constant(q, d, m));
}

double sup_constant(double q, int d, double m) {
  const double gauss = std::pow(2.0 * std::numbers::pi, -0.5 * d);
  if (q == 0.0) return std::pow(m, 0.5 * d) * gauss * density_constant(d, m);
  require_tail_exponent(q, d, "Maxwellian sup constant");
  return std::pow(2.0, q - 1.0) * gauss *
         (std::pow(q / std::numbers::e, 0.5 * q) * std::pow(m, -0.5 * (q - d)) * tail_constant(q, d, m) +
          std::pow(m, 0.5 * d) * drift_constant(q, d, m));
}

double mixture_density_constant(const MixtureClosure& c, int d, double self_mass) {
  require_closure_signs(c);
  return std::pow(c.t_self, -0.5 * d) * density_constant(d, self_mass);
}

double mixture_tail_constant(const MixtureClosure& c, double q, int d, double self_mass, double other_mass) {
  require_tail_exponent(q, d, "mixture tail-moment constant");
  require_closure_signs(c);
  const double cross = std::fabs(c.w_self * c.w_other - d * c.g);
  const double a_self = std::max(c.t_self, c.w_self * c.w_self + d * c.g + cross);
  const double a_other = std::max(c.t_other, c.w_other * c.w_other + d * c.g + cross);
  const double ks = a_self * kappa(self_mass, d);
  const double ko = a_other * kappa(other_mass, d);
  const double k = ks + ko;
  const double p = 0.5 * (q - d);
  return std::pow(k, p - 1.0) * std::max(ks, ko) * second_moment_constant(q, d);
}

double mixture_drift_constant(const MixtureClosure& c, double q, int d) {
  require_closure_signs(c);
  if (!(c.t_other > 0.0)) throw ConstantDegenerateError("mixture temperature weight of the partner species is zero");
  const double a = std::max(1.0, std::pow(std::fabs(c.w_self) + std::fabs(c.w_other), q));
  return a * std::max(std::pow(c.t_self, -0.5 * d), std::pow(c.t_other, -0.5 * d));
}

double mixture_sup_constant(const MixtureClosure& c, double q, int d, double self_mass, double other_mass) {
  const double gauss = std::pow(2.0 * std::numbers::pi, -0.5 * d);
  if (q == 0.0) return std::pow(self_mass, 0.5 * d) * gauss * mixture_density_constant(c, d, self_mass);
  require_tail_exponent(q, d, "mixture Maxwellian sup constant");
  const double vel = std::max(drift_constant(q, d, self_mass), drift_constant(q, d, other_mass));
  return std::pow(2.0, q - 1.0) * gauss *
         (std::pow(q / std::numbers::e, 0.5 * q) * std::pow(self_mass, -0.5 * (q - d)) *
              mixture_tail_constant(c, q, d, self_mass, other_mass) +
          std::pow(self_mass, 0.5 * d) * mixture_drift_constant(c, q, d) * vel);
}

double combination_velocity_constant(double delta, double q) {
  return std::max(1.0, std::pow(std::fabs(delta) + std::fabs(1.0 - delta), q));
}

double combination_temperature_constant(double alpha, double gamma, double q) {
  return std::pow(3.0, std::max(q - 1.0, 0.0)) * std::pow(std::max({alpha, 1.0 - alpha, gamma}), q);
}

std::vector<ConstantEntry> constant_table(const MixtureParameters& p, int d, std::span<const double> qs) {
  std::vector<ConstantEntry> out;
  const MixtureClosure c12 = closure_12(p, d), c21 = closure_21(p, d);
  out.push_back({"density.species1", 0.0, density_constant(d, p.m1)});
  out.push_back({"density.species2", 0.0, density_constant(d, p.m2)});
  out.push_back({"density.M12", 0.0, mixture_density_constant(c12, d, p.m1)});
  out.push_back({"density.M21", 0.0, mixture_density_constant(c21, d, p.m2)});
  out.push_back({"sup.species1", 0.0, sup_constant(0.0, d, p.m1)});
  out.push_back({"sup.M12", 0.0, mixture_sup_constant(c12, 0.0, d, p.m1, p.m2)});
  for (double q : qs) {
    if (std::fabs(2.0 * q - std::round(2.0 * q)) < 1e-12 && q >= 0.0) {
      out.push_back({"combination.velocity", q, combination_velocity_constant(p.delta, q)});
      out.push_back({"combination.temperature", q, combination_temperature_constant(p.alpha, p.gamma, q)});
    }
    if (c12.t_other > 0.0) out.push_back({"velocity_ratio.M12", q, mixture_drift_constant(c12, q, d)});
    if (c21.t_other > 0.0) out.push_back({"velocity_ratio.M21", q, mixture_drift_constant(c21, q, d)});
    if (q > 1.0) {
      out.push_back({"velocity_ratio.species1", q, drift_split_constant(q, d, p.m1)});
      out.push_back({"velocity_ratio.species2", q, drift_split_constant(q, d, p.m2)});
    }
    if (q > d + 2.0) {
      out.push_back({"tail.species1", q, tail_constant(q, d, p.m1)});
      out.push_back({"tail.species2", q, tail_constant(q, d, p.m2)});
      out.push_back({"tail.M12", q, mixture_tail_constant(c12, q, d, p.m1, p.m2)});
      out.push_back({"tail.M21", q, mixture_tail_constant(c21, q, d, p.m2, p.m1)});
      out.push_back({"sup.species1", q, sup_constant(q, d, p.m1)});
      out.push_back({"sup.M12", q, mixture_sup_constant(c12, q, d, p.m1, p.m2)});
    }
  }
  return out;
}

// ---- checkers -------------------------------------------------------------------

namespace {

struct CellPair {
  SpeciesMoments s[2];
  double mass[2];
};

CellPair cell_pair(std::span<const double> f1, std::span<const double> f2, const MixtureParameters& p,
                   const PhaseGrid& grid) {
  CellPair c;
  c.s[0] = compute_moments(f1, p.m1, grid);
  c.s[1] = compute_moments(f2, p.m2, grid);
  c.mass[0] = p.m1;
  c.mass[1] = p.m2;
  return c;
}

struct MixLine {
  std::string label;
  MixtureClosure closure;
  int self;  // 0 or 1
};

std::vector<MixLine> mixture_lines(const MixtureParameters& p, int d, const CellPair& c) {
  if (p.variant == ModelVariant::two_term) return {{"M12", closure_12(p, d), 0}, {"M21", closure_21(p, d), 1}};
  return {{"M(1)*", single_term_closure(p, 1, c.s[0].n, c.s[1].n, d), 0},
          {"M(2)*", single_term_closure(p, 2, c.s[0].n, c.s[1].n, d), 1}};
}

std::string species_label(int k) { return k == 0 ? "species1" : "species2"; }

struct MixMoments {
  Vec3 u;
  double T;
};

MixMoments mix_moments(const MixLine& line, const CellPair& c) {
  const SpeciesMoments& s = c.s[line.self];
  const SpeciesMoments& o = c.s[1 - line.self];
  return {line.closure.velocity(s.u, o.u), line.closure.temperature(s.T, o.T, s.u, o.u)};
}

} // namespace

EstimateReport check_density_temperature(std::span<const double> f1, std::span<const double> f2,
                                         const MixtureParameters& p, const PhaseGrid& grid) {
  const int d = grid.velocity_dim();
  const CellPair c = cell_pair(f1, f2, p, grid);
  const double n0[2] = {weighted_sup_Nq(f1, grid, 0.0), weighted_sup_Nq(f2, grid, 0.0)};
  EstimateReport r;
  for (int k = 0; k < 2; ++k) {
    const double C = density_constant(d, c.mass[k]);
    r.add("density_temp." + species_label(k), c.s[k].n / std::pow(c.s[k].T, 0.5 * d), C, C * n0[k]);
  }
  for (const MixLine& line : mixture_lines(p, d, c)) {
    const MixMoments mm = mix_moments(line, c);
    const double C = mixture_density_constant(line.closure, d, c.mass[line.self]);
    r.add("density_temp." + line.label, c.s[line.self].n / std::pow(mm.T, 0.5 * d), C, C * n0[line.self]);
  }
  return r;
}

EstimateReport check_tail_moments(std::span<const double> f1, std::span<const double> f2, const MixtureParameters& p,
                                  const PhaseGrid& grid, double q) {
  const int d = grid.velocity_dim();
  require_tail_exponent(q, d, "tail-moment estimate");
  const CellPair c = cell_pair(f1, f2, p, grid);
  const double nq[2] = {weighted_sup_Nq(f1, grid, q), weighted_sup_Nq(f2, grid, q)};
  const double e = 0.5 * (q - d);
  EstimateReport r;
  for (int k = 0; k < 2; ++k) {
    const double C = tail_constant(q, d, c.mass[k]);
    r.add("tail_moment." + species_label(k), c.s[k].n * std::pow(c.s[k].T + norm2(c.s[k].u), e), C, C * nq[k]);
  }
  for (const MixLine& line : mixture_lines(p, d, c)) {
    const int s = line.self, o = 1 - s;
    const MixMoments mm = mix_moments(line, c);
    const double C = mixture_tail_constant(line.closure, q, d, c.mass[s], c.mass[o]);
    r.add("tail_moment." + line.label, c.s[s].n * std::pow(mm.T + norm2(mm.u), e), C,
          C * (nq[s] + c.s[s].n / c.s[o].n * nq[o]));
  }
  return r;
}

EstimateReport check_combination_bound(const Vec3& u1, const Vec3& u2, double T1, double T2,
                                       const MixtureParameters& p, double q) {
  if (q < 0.0 || std::fabs(2.0 * q - std::round(2.0 * q)) > 1e-12)
    throw PreconditionError("combination bound needs q to be a nonnegative multiple of 1/2");
  EstimateReport r;
  const double Av = combination_velocity_constant(p.delta, q);
  const Vec3 mix = p.delta * u1 + (1.0 - p.delta) * u2;
  r.add("combination.velocity", std::pow(norm(mix), q), Av, Av * (std::pow(norm(u1), q) + std::pow(norm(u2), q)));
  const double du2 = norm2(u1 - u2);
  const double At = combination_temperature_constant(p.alpha, p.gamma, q);
  const double T = p.alpha * T1 + (1.0 - p.alpha) * T2 + p.gamma * du2;
  r.add("combination.temperature", std::pow(T, q), At,
        At * (std::pow(T1, q) + std::pow(T2, q) + std::pow(du2, q)));
  return r;
}

EstimateReport check_velocity_ratio(std::span<const double> f1, std::span<const double> f2,
                                    const MixtureParameters& p, const PhaseGrid& grid, double q) {
  const int d = grid.velocity_dim();
  if (!(q > 1.0)) throw PreconditionError("velocity-ratio estimate needs q > 1");
  const CellPair c = cell_pair(f1, f2, p, grid);
  const double nq[2] = {weighted_sup_Nq(f1, grid, q), weighted_sup_Nq(f2, grid, q)};
  EstimateReport r;
  for (int k = 0; k < 2; ++k) {
    const SpeciesMoments& s = c.s[k];
    const double C = drift_split_constant(q, d, c.mass[k]);
    const double lhs = s.n * std::pow(norm(s.u), d + q) / std::pow((s.T + norm2(s.u)) * s.T, 0.5 * d);
    r.add("velocity_ratio." + species_label(k), lhs, C, C * nq[k]);
  }
  for (const MixLine& line : mixture_lines(p, d, c)) {
    const int s = line.self, o = 1 - s;
    const MixMoments mm = mix_moments(line, c);
    const double C = mixture_drift_constant(line.closure, q, d);
    const double ratio_s = std::pow(norm(c.s[s].u), q) / std::pow(c.s[s].T, 0.5 * d);
    const double ratio_o = std::pow(norm(c.s[o].u), q) / std::pow(c.s[o].T, 0.5 * d);
    r.add("velocity_ratio." + line.label, c.s[s].n * std::pow(norm(mm.u), q) / std::pow(mm.T, 0.5 * d), C,
          C * c.s[s].n * (ratio_s + ratio_o));
  }
  return r;
}

double maxwellian_weighted_sup(double n, const Vec3& u, double T, double m, int d, double q) {
  const double theta = T / m;
  const double r = norm(u);
  const double s = 0.5 * (r + std::sqrt(r * r + 4.0 * q * theta));
  const double peak = n * std::pow(2.0 * std::numbers::pi * theta, -0.5 * d);
  return peak * std::pow(s, q) * std::exp(-(s - r) * (s - r) / (2.0 * theta));
}

EstimateReport check_maxwellian_sup(std::span<const double> f1, std::span<const double> f2,
                                    const MixtureParameters& p, const PhaseGrid& grid, double q) {
  const int d = grid.velocity_dim();
  if (q != 0.0) require_tail_exponent(q, d, "Maxwellian sup estimate");
  const CellPair c = cell_pair(f1, f2, p, grid);
  const double nq[2] = {weighted_sup_Nq(f1, grid, q), weighted_sup_Nq(f2, grid, q)};

  auto sup_of = [&](double n, const Vec3& u, double T, double m) {
    const std::vector<double> M = maxwellian_eval(n, u, T, m, grid);
    return std::max(weighted_sup_Nq(M, grid, q), maxwellian_weighted_sup(n, u, T, m, d, q));
  };

  EstimateReport r;
  for (int k = 0; k < 2; ++k) {
    const SpeciesMoments& s = c.s[k];
    const double C = sup_constant(q, d, c.mass[k]);
    r.add("maxwellian_sup." + species_label(k), sup_of(s.n, s.u, s.T, c.mass[k]), C, C * nq[k]);
  }
  for (const MixLine& line : mixture_lines(p, d, c)) {
    const int s = line.self, o = 1 - s;
    const MixMoments mm = mix_moments(line, c);
    const double C = mixture_sup_constant(line.closure, q, d, c.mass[s], c.mass[o]);
    const double rhs = q == 0.0 ? C * nq[s] : C * (nq[s] + c.s[s].n / c.s[o].n * nq[o]);
    r.add("maxwellian_sup." + line.label, sup_of(c.s[s].n, mm.u, mm.T, c.mass[s]), C, rhs);
  }
  return r;
}

// ---- envelopes --------------------------------------------------------------------

EstimateReport check_envelopes(const EnvelopeTrace& trace, const MixtureParameters& p, int d) {
  if (trace.samples.empty()) throw DiagnosticError("envelope check: trace has no samples");
  const EnvelopeSample& s0 = trace.samples.front();
  if (!(s0.min_n1 > 0.0) || !(s0.min_n2 > 0.0))
    throw DiagnosticError("envelope check: trace lacks positive initial densities");
  const double c0[2] = {s0.min_n1, s0.min_n2};
  const double decay[2] = {p.nu11 + p.nu12, p.nu22 + p.nu21};

  EstimateReport r;
  const bool full = p.variant == ModelVariant::two_term;
  double K = 0.0, K0 = 0.0, A0 = 0.0, A00 = 0.0;
  MixtureClosure c12, c21;
  const double q = trace.q;
  if (full) {
    require_tail_exponent(q, d, "envelope check");
    c12 = closure_12(p, d);
    c21 = closure_21(p, d);
    const double nu_max = std::max({p.nu11, p.nu12, p.nu21, p.nu22});
    const double cq = std::max({sup_constant(q, d, p.m1), sup_constant(q, d, p.m2),
                                mixture_sup_constant(c12, q, d, p.m1, p.m2), mixture_sup_constant(c21, q, d, p.m2, p.m1)});
    const double c0q = std::max({sup_constant(0.0, d, p.m1), sup_constant(0.0, d, p.m2),
                                 mixture_sup_constant(c12, 0.0, d, p.m1, p.m2),
                                 mixture_sup_constant(c21, 0.0, d, p.m2, p.m1)});
    K = 2.0 * nu_max * cq;
    K0 = 2.0 * nu_max * c0q;
    A0 = s0.Nq1 + s0.Nq2;
    A00 = s0.N01 + s0.N02;
  }

  for (const EnvelopeSample& s : trace.samples) {
    const double floor1 = c0[0] * std::exp(-decay[0] * s.t);
    const double floor2 = c0[1] * std::exp(-decay[1] * s.t);
    r.add("density_floor.species1", floor1, c0[0], s.min_n1);
    r.add("density_floor.species2", floor2, c0[1], s.min_n2);
    if (!full) continue;

    const double nq_bound = A0 * std::exp(K * s.t);
    const double n0_bound = A00 * std::exp(K0 * s.t);
    r.add("gronwall.Nq", s.Nq1 + s.Nq2, K, nq_bound);
    r.add("gronwall.N0", s.N01 + s.N02, K0, n0_bound);

    auto t_floor = [&](double floor, double C) { return std::pow(floor / (C * n0_bound), 2.0 / d); };
    const double ci1 = density_constant(d, p.m1), ci2 = density_constant(d, p.m2);
    const double ci12 = mixture_density_constant(c12, d, p.m1), ci21 = mixture_density_constant(c21, d, p.m2);
    r.add("temperature_floor.species1", t_floor(floor1, ci1), ci1, s.min_T1);
    r.add("temperature_floor.species2", t_floor(floor2, ci2), ci2, s.min_T2);
    r.add("temperature_floor.M12", t_floor(floor1, ci12), ci12, s.min_T12);
    r.add("temperature_floor.M21", t_floor(floor2, ci21), ci21, s.min_T21);

    const double e = 2.0 / (q - d);
    const double low = std::min(floor1, floor2);
    const double cii1 = tail_constant(q, d, p.m1), cii2 = tail_constant(q, d, p.m2);
    const double cii12 = mixture_tail_constant(c12, q, d, p.m1, p.m2);
    const double cii21 = mixture_tail_constant(c21, q, d, p.m2, p.m1);
    r.add("energy_cap.species1", s.max_cap1, cii1, std::pow(cii1 * nq_bound / floor1, e));
    r.add("energy_cap.species2", s.max_cap2, cii2, std::pow(cii2 * nq_bound / floor2, e));
    r.add("energy_cap.M12", s.max_cap12, cii12, std::pow(cii12 * nq_bound / low, e));
    r.add("energy_cap.M21", s.max_cap21, cii21, std::pow(cii21 * nq_bound / low, e));
  }
  return r;
}

// ---- randomized suite -----------------------------------------------------------

std::uint64_t sample_seed(std::uint64_t master, int index) {
  // splitmix64 of (master, index)
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<double> gaussian_mixture(std::mt19937_64& rng, const PhaseGrid& grid, double mass, int max_components) {
  std::uniform_int_distribution<int> count(1, max_components);
  std::uniform_real_distribution<double> weight(0.2, 1.5), drift(-1.5, 1.5), spread(0.3, 1.5);
  const int d = grid.velocity_dim();
  std::vector<double> f(grid.node_count(), 0.0);
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    const double n = weight(rng);
    Vec3 u{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) u[a] = drift(rng);
    const double theta = spread(rng);
    make_maxwellian(n, u, mass * theta, mass, grid).accumulate(f, 1.0, grid);
  }
  return f;
}

EstimateReport starred_only(const EstimateReport& r) {
  EstimateReport out;
  for (const auto& c : r.checks)
    if (!c.name.empty() && c.name.back() == '*') out.checks.push_back(c);
  return out;
}

} // namespace

SuiteSample run_suite_sample(const SuiteConfig& config, int index) {
  SuiteSample out;
  out.index = index;
  out.seed = sample_seed(config.seed, index);
  out.d = 1 + index % 3;
  std::mt19937_64 rng(out.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * U(rng); };

  GridConfig gc;
  gc.velocity_dim = out.d;
  gc.v_max = config.v_max;
  gc.nodes_per_axis = out.d == 1 ? config.nodes_1d : out.d == 2 ? config.nodes_2d : config.nodes_3d;
  const PhaseGrid grid = build_grid(gc);
  const int d = out.d;

  MixtureParameters p;
  p.m1 = uniform(0.5, 2.0);
  p.m2 = uniform(0.5, 2.0);
  p.epsilon = uniform(0.1, 1.0);
  p.nu11 = uniform(0.5, 2.0);
  p.nu21 = uniform(0.5, 2.0);
  p.nu22 = uniform(0.5, 2.0);
  p.nu12 = p.epsilon * p.nu21;
  p.alpha = uniform(0.05, 0.95);
  const Interval db = delta_bounds(p);
  p.delta = uniform(db.lower, db.upper);
  p.gamma = uniform(0.0, 1.0) * gamma_bounds(p, d).upper;

  const std::vector<double> f1 = gaussian_mixture(rng, grid, p.m1, config.max_components);
  const std::vector<double> f2 = gaussian_mixture(rng, grid, p.m2, config.max_components);
  const double n1 = quad_integrate(f1, grid), n2 = quad_integrate(f2, grid);

  MixtureParameters s = p;
  s.variant = ModelVariant::single_term;
  s.aap_sign = ExchangeSign::physical;
  s.nu11_aap = p.nu11;
  s.nu12_aap = p.nu12;
  s.nu21_aap = p.nu21;
  s.nu22_aap = p.nu22;
  {
    const CollisionRates rates = single_term_frequencies(s, n1, n2);
    const double x1 = uniform(0.05, 0.9 * std::min(1.0, p.m1 / p.m2));
    const double x2 = uniform(0.05, 0.9 * std::min(1.0, p.m2 / p.m1));
    s.chi12 = x1 * rates.total1() / n2;
    s.chi21 = x2 * rates.total2() / n1;
  }

  EstimateReport& r = out.report;
  const double q_tail = d + 3.0;
  r.append(check_density_temperature(f1, f2, p, grid));
  r.append(starred_only(check_density_temperature(f1, f2, s, grid)));
  r.append(check_tail_moments(f1, f2, p, grid, q_tail));
  r.append(starred_only(check_tail_moments(f1, f2, s, grid, q_tail)));
  for (double q : {1.5, 2.0, d + 1.0, d + 3.0}) {
    r.append(check_velocity_ratio(f1, f2, p, grid, q));
    r.append(starred_only(check_velocity_ratio(f1, f2, s, grid, q)));
  }
  for (double q : {0.0, q_tail}) {
    r.append(check_maxwellian_sup(f1, f2, p, grid, q));
    r.append(starred_only(check_maxwellian_sup(f1, f2, s, grid, q)));
  }
  const SpeciesMoments m1 = compute_moments(f1, p.m1, grid), m2 = compute_moments(f2, p.m2, grid);
  for (double q : {0.5, 1.0, 1.5, 2.0, 3.0}) r.append(check_combination_bound(m1.u, m2.u, m1.T, m2.T, p, q));
  return out;
}

SuiteResult run_estimate_suite(const SuiteConfig& config) {
  if (config.samples < 0) throw ConfigError("suite.samples must be nonnegative");
  SuiteResult result;
  result.samples.resize(static_cast<std::size_t>(config.samples));
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(config.samples, 1))));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < config.samples; i = next++) {
      try {
        result.samples[static_cast<std::size_t>(i)] = run_suite_sample(config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  for (const auto& s : result.samples) {
    result.checks += s.report.checks.size();
    result.failures += s.report.failures();
  }
  return result;
}

} // namespace bgkmix
