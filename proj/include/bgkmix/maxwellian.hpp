#pragma once

#include <array>
#include <span>
#include <vector>

#include "grid.hpp"
#include "vec.hpp"

namespace bgkmix {

enum class MaxwellianMode {
  sampled,       // analytic Gaussian evaluated at the nodes
  conservative,  // lattice moments match (n, u, T) to round-off
};

/// A lattice Maxwellian stored as n times a product of normalised per-axis profiles.
/// Both modes are separable: exp(a + b.v - c|v|^2) factorises over the axes.
class LatticeMaxwellian {
public:
  LatticeMaxwellian() = default;

  double density() const { return n_; }
  double value(const PhaseGrid& grid, std::size_t node) const;
  /// out[node] += scale * M(node) over the whole lattice.
  void accumulate(std::span<double> out, double scale, const PhaseGrid& grid) const;
  std::vector<double> values(const PhaseGrid& grid) const;

  /// Newton iterations spent on the conservative correction (0 for sampled).
  int iterations() const { return iterations_; }

private:
  friend LatticeMaxwellian make_maxwellian(double, const Vec3&, double, double, const PhaseGrid&, MaxwellianMode);
  double n_ = 0.0;
  int dim_ = 0;
  int iterations_ = 0;
  std::array<std::vector<double>, 3> profile_;
};

/// Throws DegenerateTemperatureError when T <= 0 and n > 0, and NumericsError when the
/// conservative solve fails (the lattice is too coarse or narrow for the requested moments).
LatticeMaxwellian make_maxwellian(double n, const Vec3& u, double T, double m, const PhaseGrid& grid,
                                  MaxwellianMode mode = MaxwellianMode::sampled);

/// n (m / 2 pi T)^{d/2} exp(-m |v-u|^2 / 2T) at every node, optionally moment-corrected.
std::vector<double> maxwellian_eval(double n, const Vec3& u, double T, double m, const PhaseGrid& grid,
                                    MaxwellianMode mode = MaxwellianMode::sampled);

} // namespace bgkmix
