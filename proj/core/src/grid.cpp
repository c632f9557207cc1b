#include "nlsgs/grid.hpp"

#include <algorithm>
#include <cmath>

#include "nlsgs/errors.hpp"

namespace nlsgs {

Grid::Grid(Geometry geometry, int dim, std::vector<Axis> axes, int nodes_per_cell)
    : geometry_(geometry), dim_(dim), axes_(std::move(axes)), nodes_per_cell_(nodes_per_cell) {
  if (axes_.empty() || nodes_per_cell_ < 1) throw ContractViolation("grid: empty layout");
  size_ = 1;
  for (const auto& ax : axes_) {
    if (ax.intervals < 2) throw ConfigError("discretization.h: too coarse for the domain");
    const auto nodes = static_cast<std::size_t>(ax.intervals) * nodes_per_cell_;
    // Dirichlet at both ends, except radial grids which keep r = 0.
    counts_.push_back(geometry_ == Geometry::Radial ? nodes : nodes - 1);
    size_ *= counts_.back();
  }
}

double Grid::coordinate(std::size_t axis, std::size_t i) const {
  const double dx = node_spacing(axis);
  const std::size_t offset = geometry_ == Geometry::Radial ? 0 : 1;
  return axes_[axis].a + static_cast<double>(i + offset) * dx;
}

std::vector<double> Grid::point(std::size_t dof) const {
  if (axes_.size() == 1) return {coordinate(0, dof)};
  const std::size_t ny = counts_[1];
  return {coordinate(0, dof / ny), coordinate(1, dof % ny)};
}

long Grid::node_at(double x, double tol) const {
  if (axes_.size() != 1) return -1;
  const double dx = node_spacing(0);
  const std::size_t offset = geometry_ == Geometry::Radial ? 0 : 1;
  const double k = std::round((x - axes_[0].a) / dx);
  if (std::abs(axes_[0].a + k * dx - x) > tol) return -1;
  const long idx = static_cast<long>(k) - static_cast<long>(offset);
  if (idx < 0 || idx >= static_cast<long>(counts_[0])) return -1;
  return idx;
}

bool Grid::same_layout(const Grid& other) const {
  if (geometry_ != other.geometry_ || dim_ != other.dim_ ||
      nodes_per_cell_ != other.nodes_per_cell_ || axes_.size() != other.axes_.size())
    return false;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].a != other.axes_[k].a || axes_[k].b != other.axes_[k].b ||
        axes_[k].intervals != other.axes_[k].intervals)
      return false;
  }
  return true;
}

Field::Field(GridPtr g, std::vector<double> v, bool nonneg)
    : grid(std::move(g)), values(std::move(v)), nonneg_hint(nonneg) {
  if (!grid || values.size() != grid->size())
    throw ContractViolation("field: value count does not match grid size");
}

Field::Field(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw ContractViolation("field: null grid");
  values.assign(grid->size(), 0.0);
}

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> u, std::span<const double> v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

bool all_finite(std::span<const double> u) {
  return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace nlsgs
