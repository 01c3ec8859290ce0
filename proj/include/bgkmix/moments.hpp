#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grid.hpp"
#include "vec.hpp"

namespace bgkmix {

/// Phase-space density of one species: n_cells x node_count values, cell-major.
class DistributionField {
public:
  DistributionField() = default;
  DistributionField(const PhaseGrid& grid, double mass, double fill = 0.0);

  double mass() const { return mass_; }
  std::size_t n_cells() const { return n_cells_; }
  std::size_t node_count() const { return node_count_; }

  std::span<double> cell(std::size_t c) { return {values_.data() + c * node_count_, node_count_}; }
  std::span<const double> cell(std::size_t c) const { return {values_.data() + c * node_count_, node_count_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double& at(std::size_t c, std::size_t node) { return values_[c * node_count_ + node]; }
  double at(std::size_t c, std::size_t node) const { return values_[c * node_count_ + node]; }

  double min_value() const;

private:
  double mass_ = 1.0;
  std::size_t n_cells_ = 0;
  std::size_t node_count_ = 0;
  std::vector<double> values_;
};

/// Number density, mean velocity and temperature (energy units) of one species in one cell.
struct SpeciesMoments {
  double n = 0.0;
  Vec3 u{0.0, 0.0, 0.0};
  double T = 0.0;
};

/// Unnormalised lattice integrals of 1, v and |v|^2 against f.
struct RawMoments {
  double density = 0.0;
  Vec3 flux{0.0, 0.0, 0.0};
  double second = 0.0;
};

RawMoments raw_moments(std::span<const double> f, const PhaseGrid& grid);

/// n, u and T = m/(d n) * int |v-u|^2 f of one cell. Throws ZeroDensityError if n == 0.
SpeciesMoments compute_moments(const DistributionField& f, const PhaseGrid& grid, std::size_t cell);
SpeciesMoments compute_moments(std::span<const double> f, double mass, const PhaseGrid& grid);

/// max over lattice nodes of |v|^q f(v) in one cell.
double weighted_sup_Nq(const DistributionField& f, const PhaseGrid& grid, double q, std::size_t cell);
double weighted_sup_Nq(std::span<const double> f, const PhaseGrid& grid, double q);
/// Same supremum taken over every cell.
double weighted_sup_Nq_global(const DistributionField& f, const PhaseGrid& grid, double q);

/// sum_k int int f_k ln f_k dv dx with 0 ln 0 = 0.
double entropy_functional(const DistributionField& f1, const DistributionField& f2, const PhaseGrid& grid);
double entropy_of(const DistributionField& f, const PhaseGrid& grid);

/// int int (1 + |v|^2) |f - g| dv dx.
double weighted_L1_distance(const DistributionField& f, const DistributionField& g, const PhaseGrid& grid);

} // namespace bgkmix
