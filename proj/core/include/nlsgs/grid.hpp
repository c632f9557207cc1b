#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "nlsgs/problem.hpp"

namespace nlsgs {

/// Uniform partition of [a, b] into `intervals` cells of width h.
struct Axis {
  double a = 0.0;
  double b = 1.0;
  int intervals = 1;
  double h() const { return (b - a) / intervals; }
};

/// Degrees of freedom of a discretization. Dirichlet boundary nodes are not stored:
/// their values are identically zero. Radial grids keep the origin node (natural condition).
class Grid {
 public:
  Grid(Geometry geometry, int dim, std::vector<Axis> axes, int nodes_per_cell);

  Geometry geometry() const { return geometry_; }
  int dim() const { return dim_; }  ///< physical dimension
  const std::vector<Axis>& axes() const { return axes_; }
  int nodes_per_cell() const { return nodes_per_cell_; }

  std::size_t size() const { return size_; }
  /// Unknowns along one axis.
  std::size_t count(std::size_t axis) const { return counts_[axis]; }
  /// Coordinate of unknown `i` along `axis`.
  double coordinate(std::size_t axis, std::size_t i) const;
  /// Physical point of flat dof index (1 or 2 components; radial gives {r}).
  std::vector<double> point(std::size_t dof) const;
  /// Spacing between neighboring dof nodes along `axis`.
  double node_spacing(std::size_t axis) const { return axes_[axis].h() / nodes_per_cell_; }

  /// Dof index of the node at coordinate x (1D grids), or -1 when no node is within tol.
  long node_at(double x, double tol) const;

  bool same_layout(const Grid& other) const;

 private:
  Geometry geometry_;
  int dim_;
  std::vector<Axis> axes_;
  int nodes_per_cell_;
  std::vector<std::size_t> counts_;
  std::size_t size_ = 0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real grid function: the state of the flow.
struct Field {
  GridPtr grid;
  std::vector<double> values;
  bool nonneg_hint = false;

  Field() = default;
  Field(GridPtr g, std::vector<double> v, bool nonneg = false);
  explicit Field(GridPtr g);

  std::size_t size() const { return values.size(); }
  std::span<const double> view() const { return values; }
};

/// max_j |u_j|
double max_abs(std::span<const double> u);
/// max_j |u_j - v_j|
double max_abs_diff(std::span<const double> u, std::span<const double> v);
bool all_finite(std::span<const double> u);

}  // namespace nlsgs
