#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vec.hpp"

namespace bgkmix {

struct GridConfig {
  int velocity_dim = 1;          // 1, 2 or 3
  double v_max = 8.0;            // lattice half-width per velocity axis
  int nodes_per_axis = 64;
  int n_cells = 1;               // periodic spatial cells (1 = space-homogeneous)
  double domain_length = 1.0;    // spatial period
};

/// Periodic 1D spatial mesh times a uniform, cell-centred Cartesian velocity
/// lattice. Node index runs with axis 0 fastest. Immutable after construction.
class PhaseGrid {
public:
  explicit PhaseGrid(const GridConfig& config);

  int velocity_dim() const { return dim_; }
  double v_max() const { return v_max_; }
  int nodes_per_axis() const { return nodes_per_axis_; }
  std::size_t node_count() const { return node_count_; }
  std::size_t n_cells() const { return static_cast<std::size_t>(n_cells_); }
  double domain_length() const { return domain_length_; }
  double cell_width() const { return domain_length_ / n_cells_; }
  double node_spacing() const { return spacing_; }

  /// Cell-centre coordinates of one velocity axis (identical for all axes).
  std::span<const double> axis_coordinates() const { return axis_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t node) const { return weights_[node]; }

  Vec3 velocity(std::size_t node) const { return velocities_[node]; }
  double speed_squared(std::size_t node) const { return speed_sq_[node]; }
  std::span<const Vec3> velocities() const { return velocities_; }
  std::span<const double> speeds_squared() const { return speed_sq_; }

  /// Per-axis lattice index of a node.
  int axis_index(std::size_t node, int axis) const;

  /// Node reflected through v = 0.
  std::size_t mirror_node(std::size_t node) const;

  double cell_centre(std::size_t cell) const { return (static_cast<double>(cell) + 0.5) * cell_width(); }

  bool same_shape(const PhaseGrid& other) const;

private:
  int dim_;
  double v_max_;
  int nodes_per_axis_;
  int n_cells_;
  double domain_length_;
  double spacing_;
  std::size_t node_count_;
  std::vector<double> axis_;
  std::vector<double> weights_;
  std::vector<Vec3> velocities_;
  std::vector<double> speed_sq_;
};

PhaseGrid build_grid(const GridConfig& config);

/// Deterministic compensated quadrature: sum of weights * values in node order.
double quad_integrate(std::span<const double> values, const PhaseGrid& grid);

} // namespace bgkmix
