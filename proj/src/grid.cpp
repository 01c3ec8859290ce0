#include "bgkmix/grid.hpp"

#include <cmath>
#include <string>

#include "bgkmix/compensated_sum.hpp"
#include "bgkmix/errors.hpp"

namespace bgkmix {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("grid." + key + ": " + what);
}

} // namespace

PhaseGrid::PhaseGrid(const GridConfig& config)
    : dim_(config.velocity_dim),
      v_max_(config.v_max),
      nodes_per_axis_(config.nodes_per_axis),
      n_cells_(config.n_cells),
      domain_length_(config.domain_length) {
  require(dim_ >= 1 && dim_ <= 3, "velocity_dim", "must be 1, 2 or 3");
  require(std::isfinite(v_max_) && v_max_ > 0.0, "v_max", "must be positive");
  require(nodes_per_axis_ >= 2, "nodes", "must be at least 2");
  require(n_cells_ >= 1, "cells", "must be at least 1");
  require(std::isfinite(domain_length_) && domain_length_ > 0.0, "domain_length", "must be positive");

  spacing_ = 2.0 * v_max_ / nodes_per_axis_;
  axis_.resize(static_cast<std::size_t>(nodes_per_axis_));
  for (int i = 0; i < nodes_per_axis_; ++i) {
    // Symmetric construction keeps v and -v bit-identical in magnitude.
    axis_[static_cast<std::size_t>(i)] = (2.0 * i + 1.0 - nodes_per_axis_) * 0.5 * spacing_;
  }

  node_count_ = 1;
  for (int a = 0; a < dim_; ++a) node_count_ *= static_cast<std::size_t>(nodes_per_axis_);

  const double w = std::pow(spacing_, dim_);
  weights_.assign(node_count_, w);
  velocities_.resize(node_count_);
  speed_sq_.resize(node_count_);
  for (std::size_t node = 0; node < node_count_; ++node) {
    Vec3 v{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) v[static_cast<std::size_t>(a)] = axis_[static_cast<std::size_t>(axis_index(node, a))];
    velocities_[node] = v;
    speed_sq_[node] = norm2(v);
  }
}

int PhaseGrid::axis_index(std::size_t node, int axis) const {
  const auto n = static_cast<std::size_t>(nodes_per_axis_);
  for (int a = 0; a < axis; ++a) node /= n;
  return static_cast<int>(node % n);
}

std::size_t PhaseGrid::mirror_node(std::size_t node) const {
  const auto n = static_cast<std::size_t>(nodes_per_axis_);
  std::size_t out = 0;
  std::size_t stride = 1;
  for (int a = 0; a < dim_; ++a) {
    const std::size_t i = node % n;
    node /= n;
    out += (n - 1 - i) * stride;
    stride *= n;
  }
  return out;
}

bool PhaseGrid::same_shape(const PhaseGrid& other) const {
  return dim_ == other.dim_ && nodes_per_axis_ == other.nodes_per_axis_ && n_cells_ == other.n_cells_ &&
         v_max_ == other.v_max_ && domain_length_ == other.domain_length_;
}

PhaseGrid build_grid(const GridConfig& config) { return PhaseGrid(config); }

double quad_integrate(std::span<const double> values, const PhaseGrid& grid) {
  if (values.size() != grid.node_count())
    throw DimensionError("quad_integrate: " + std::to_string(values.size()) + " values for " +
                         std::to_string(grid.node_count()) + " lattice nodes");
  const auto w = grid.weights();
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) sum.add(w[i] * values[i]);
  return sum.value();
}

} // namespace bgkmix
