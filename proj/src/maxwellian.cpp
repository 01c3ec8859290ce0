#include "bgkmix/maxwellian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bgkmix/compensated_sum.hpp"
#include "bgkmix/errors.hpp"

namespace bgkmix {

namespace {

constexpr double kTolerance = 1e-13;
constexpr int kMaxIterations = 30;

// Normalised moments of one axis profile exp(b x - c x^2).
struct AxisMoments {
  double mean = 0.0;
  double second = 0.0;
  double third = 0.0;
  double fourth = 0.0;
};

AxisMoments axis_moments(std::span<const double> x, double b, double c, std::vector<double>* profile = nullptr) {
  double emax = -INFINITY;
  for (double xi : x) emax = std::max(emax, b * xi - c * xi * xi);
  CompensatedSum s0, s1, s2, s3, s4;
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    g[i] = std::exp(b * xi - c * xi * xi - emax);
    s0 += g[i];
    s1 += g[i] * xi;
    s2 += g[i] * xi * xi;
    s3 += g[i] * xi * xi * xi;
    s4 += g[i] * xi * xi * xi * xi;
  }
  const double z = s0.value();
  if (profile) {
    profile->resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) (*profile)[i] = g[i] / z;
  }
  return {s1.value() / z, s2.value() / z, s3.value() / z, s4.value() / z};
}

// Residual of the d + 1 moment equations, scaled to be dimensionless.
struct Residual {
  std::array<double, 4> r{};
  double norm = 0.0;
};

Residual residual(const std::array<AxisMoments, 3>& am, int d, const Vec3& u, double second_target,
                  double scale) {
  Residual res;
  double energy = 0.0;
  for (int j = 0; j < d; ++j) {
    res.r[j] = am[j].mean - u[j];
    energy += am[j].second;
    res.norm = std::max(res.norm, std::fabs(res.r[j]) / scale);
  }
  res.r[d] = energy - second_target;
  res.norm = std::max(res.norm, std::fabs(res.r[d]) / second_target);
  return res;
}

// Dense Gaussian elimination with partial pivoting on a system of size <= 4.
bool solve_small(std::array<std::array<double, 4>, 4> a, std::array<double, 4> rhs, int size,
                 std::array<double, 4>& out) {
  for (int col = 0; col < size; ++col) {
    int piv = col;
    for (int r = col + 1; r < size; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0 || !std::isfinite(a[piv][col])) return false;
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = col + 1; r < size; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < size; ++k) a[r][k] -= f * a[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = size - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int k = r + 1; k < size; ++k) s -= a[r][k] * out[k];
    out[r] = s / a[r][r];
  }
  return true;
}

} // namespace

LatticeMaxwellian make_maxwellian(double n, const Vec3& u, double T, double m, const PhaseGrid& grid,
                                  MaxwellianMode mode) {
  const int d = grid.velocity_dim();
  LatticeMaxwellian out;
  out.n_ = n;
  out.dim_ = d;
  const auto x = grid.axis_coordinates();
  if (n == 0.0) {
    for (int j = 0; j < d; ++j) out.profile_[j].assign(x.size(), 0.0);
    return out;
  }
  if (!(T > 0.0) || !std::isfinite(T)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "Maxwellian with n = %.6g needs T > 0 (got %.6g)", n, T);
    throw DegenerateTemperatureError(buf);
  }
  if (!(m > 0.0)) throw ConfigError("Maxwellian mass must be positive");

  const double theta = T / m;
  if (mode == MaxwellianMode::sampled) {
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * theta);
    for (int j = 0; j < d; ++j) {
      auto& p = out.profile_[j];
      p.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - u[j];
        p[i] = norm * std::exp(-dx * dx / (2.0 * theta));
      }
    }
    return out;
  }

  // Unknowns: b_j per axis and a shared c. Targets: per-axis mean u_j and
  // sum_j E_j[x^2] = |u|^2 + d theta.
  std::array<double, 4> b{};
  for (int j = 0; j < d; ++j) b[j] = u[j] / theta;
  double c = 0.5 / theta;
  const double target = norm2(u) + d * theta;
  const double scale = std::sqrt(target);

  auto evaluate = [&](const std::array<double, 4>& bb, double cc) {
    std::array<AxisMoments, 3> am{};
    for (int j = 0; j < d; ++j) am[j] = axis_moments(x, bb[j], cc);
    return am;
  };

  std::array<AxisMoments, 3> am = evaluate(b, c);
  Residual res = residual(am, d, u, target, scale);
  int it = 0;
  while (res.norm > kTolerance) {
    if (it >= kMaxIterations) break;
    ++it;
    std::array<std::array<double, 4>, 4> jac{};
    std::array<double, 4> rhs{};
    for (int j = 0; j < d; ++j) {
      const double var = am[j].second - am[j].mean * am[j].mean;
      const double cov = am[j].third - am[j].mean * am[j].second;
      jac[j][j] = var;
      jac[j][d] = -cov;
      jac[d][j] = cov;
      jac[d][d] -= am[j].fourth - am[j].second * am[j].second;
      rhs[j] = -res.r[j];
    }
    rhs[d] = -res.r[d];
    std::array<double, 4> delta{};
    if (!solve_small(jac, rhs, d + 1, delta)) break;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      std::array<double, 4> bt = b;
      for (int j = 0; j < d; ++j) bt[j] += lambda * delta[j];
      const double ct = c + lambda * delta[d];
      if (ct > 0.0) {
        auto amt = evaluate(bt, ct);
        Residual rt = residual(amt, d, u, target, scale);
        if (rt.norm < res.norm) {
          b = bt;
          c = ct;
          am = amt;
          res = rt;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    // No decrease possible: we are at the round-off floor of the moment sums.
    if (!accepted) break;
  }
  // Accept a stagnated solve only when it sits at round-off level.
  if (res.norm > 100.0 * kTolerance) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "conservative Maxwellian: moment residual %.3g after %d iterations (n = %.6g, T = %.6g); "
                  "widen v_max or refine the lattice",
                  res.norm, it, n, T);
    throw NumericsError(buf);
  }
  out.iterations_ = it;
  for (int j = 0; j < d; ++j) axis_moments(x, b[j], c, &out.profile_[j]);
  // Profiles are normalised to unit lattice mass per axis; fold the spacing in.
  const double h = grid.node_spacing();
  for (int j = 0; j < d; ++j)
    for (double& v : out.profile_[j]) v /= h;
  return out;
}

double LatticeMaxwellian::value(const PhaseGrid& grid, std::size_t node) const {
  double v = n_;
  for (int j = 0; j < dim_; ++j) v *= profile_[j][static_cast<std::size_t>(grid.axis_index(node, j))];
  return v;
}

void LatticeMaxwellian::accumulate(std::span<double> out, double scale, const PhaseGrid& grid) const {
  if (out.size() != grid.node_count()) throw DimensionError("Maxwellian accumulate: length mismatch");
  const std::size_t k = static_cast<std::size_t>(grid.nodes_per_axis());
  const double s = scale * n_;
  if (dim_ == 1) {
    for (std::size_t i = 0; i < k; ++i) out[i] += s * profile_[0][i];
  } else if (dim_ == 2) {
    for (std::size_t i1 = 0; i1 < k; ++i1) {
      const double s1 = s * profile_[1][i1];
      double* row = out.data() + i1 * k;
      for (std::size_t i0 = 0; i0 < k; ++i0) row[i0] += s1 * profile_[0][i0];
    }
  } else {
    for (std::size_t i2 = 0; i2 < k; ++i2) {
      const double s2 = s * profile_[2][i2];
      for (std::size_t i1 = 0; i1 < k; ++i1) {
        const double s1 = s2 * profile_[1][i1];
        double* row = out.data() + (i2 * k + i1) * k;
        for (std::size_t i0 = 0; i0 < k; ++i0) row[i0] += s1 * profile_[0][i0];
      }
    }
  }
}

std::vector<double> LatticeMaxwellian::values(const PhaseGrid& grid) const {
  std::vector<double> out(grid.node_count(), 0.0);
  accumulate(out, 1.0, grid);
  return out;
}

std::vector<double> maxwellian_eval(double n, const Vec3& u, double T, double m, const PhaseGrid& grid,
                                    MaxwellianMode mode) {
  return make_maxwellian(n, u, T, m, grid, mode).values(grid);
}

} // namespace bgkmix
