#include "bgkmix/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bgkmix/compensated_sum.hpp"
#include "bgkmix/errors.hpp"

namespace bgkmix {

DistributionField::DistributionField(const PhaseGrid& grid, double mass, double fill)
    : mass_(mass), n_cells_(grid.n_cells()), node_count_(grid.node_count()),
      values_(grid.n_cells() * grid.node_count(), fill) {}

double DistributionField::min_value() const {
  if (values_.empty()) return 0.0;
  return *std::min_element(values_.begin(), values_.end());
}

RawMoments raw_moments(std::span<const double> f, const PhaseGrid& grid) {
  if (f.size() != grid.node_count()) throw DimensionError("raw_moments: field does not match lattice");
  const auto w = grid.weights();
  const auto vel = grid.velocities();
  const auto v2 = grid.speeds_squared();
  CompensatedSum n, s, j0, j1, j2;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wf = w[i] * f[i];
    n.add(wf);
    j0.add(wf * vel[i][0]);
    j1.add(wf * vel[i][1]);
    j2.add(wf * vel[i][2]);
    s.add(wf * v2[i]);
  }
  return {n.value(), {j0.value(), j1.value(), j2.value()}, s.value()};
}

SpeciesMoments compute_moments(std::span<const double> f, double mass, const PhaseGrid& grid) {
  if (f.size() != grid.node_count()) throw DimensionError("compute_moments: field does not match lattice");
  const auto w = grid.weights();
  const auto vel = grid.velocities();
  CompensatedSum n, j0, j1, j2;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wf = w[i] * f[i];
    n.add(wf);
    j0.add(wf * vel[i][0]);
    j1.add(wf * vel[i][1]);
    j2.add(wf * vel[i][2]);
  }
  SpeciesMoments out;
  out.n = n.value();
  if (!(out.n > 0.0)) throw ZeroDensityError("compute_moments: zero density, velocity and temperature undefined");
  out.u = {j0.value() / out.n, j1.value() / out.n, j2.value() / out.n};

  CompensatedSum spread;
  for (std::size_t i = 0; i < f.size(); ++i) spread.add(w[i] * f[i] * norm2(vel[i] - out.u));
  out.T = mass * spread.value() / (grid.velocity_dim() * out.n);
  return out;
}

SpeciesMoments compute_moments(const DistributionField& f, const PhaseGrid& grid, std::size_t cell) {
  return compute_moments(f.cell(cell), f.mass(), grid);
}

double weighted_sup_Nq(std::span<const double> f, const PhaseGrid& grid, double q) {
  if (q < 0.0) throw PreconditionError("weighted_sup_Nq: q must be nonnegative");
  if (f.size() != grid.node_count()) throw DimensionError("weighted_sup_Nq: field does not match lattice");
  const auto v2 = grid.speeds_squared();
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double weight = q == 0.0 ? 1.0 : std::pow(v2[i], 0.5 * q);
    best = std::max(best, weight * f[i]);
  }
  return best;
}

double weighted_sup_Nq(const DistributionField& f, const PhaseGrid& grid, double q, std::size_t cell) {
  if (cell >= f.n_cells()) throw DimensionError("weighted_sup_Nq: cell index out of range");
  return weighted_sup_Nq(f.cell(cell), grid, q);
}

double weighted_sup_Nq_global(const DistributionField& f, const PhaseGrid& grid, double q) {
  double best = 0.0;
  for (std::size_t c = 0; c < f.n_cells(); ++c) best = std::max(best, weighted_sup_Nq(f.cell(c), grid, q));
  return best;
}

double entropy_of(const DistributionField& f, const PhaseGrid& grid) {
  const auto w = grid.weights();
  CompensatedSum total;
  for (std::size_t c = 0; c < f.n_cells(); ++c) {
    const auto values = f.cell(c);
    CompensatedSum cell;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double x = values[i];
      if (x > 0.0) cell.add(w[i] * x * std::log(x));
    }
    total.add(cell.value() * grid.cell_width());
  }
  return total.value();
}

double entropy_functional(const DistributionField& f1, const DistributionField& f2, const PhaseGrid& grid) {
  return entropy_of(f1, grid) + entropy_of(f2, grid);
}

double weighted_L1_distance(const DistributionField& f, const DistributionField& g, const PhaseGrid& grid) {
  if (f.n_cells() != g.n_cells() || f.node_count() != g.node_count() || f.node_count() != grid.node_count() ||
      f.n_cells() != grid.n_cells())
    throw DimensionError("weighted_L1_distance: fields live on different grids");
  const auto w = grid.weights();
  const auto v2 = grid.speeds_squared();
  CompensatedSum total;
  for (std::size_t c = 0; c < f.n_cells(); ++c) {
    const auto a = f.cell(c);
    const auto b = g.cell(c);
    CompensatedSum cell;
    for (std::size_t i = 0; i < a.size(); ++i) cell.add(w[i] * (1.0 + v2[i]) * std::fabs(a[i] - b[i]));
    total.add(cell.value() * grid.cell_width());
  }
  return total.value();
}

} // namespace bgkmix
