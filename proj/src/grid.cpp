#include "ccrlab/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccrlab {

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g, const char* op) {
  if (!f.grid().same_layout(g.grid())) {
    std::ostringstream msg;
    msg << op << ": grid mismatch";
    throw std::invalid_argument(msg.str());
  }
}

void require_dim(const LatticeVector& a, int dim, const char* op) {
  if (static_cast<int>(a.size()) != dim) {
    std::ostringstream msg;
    msg << op << ": lattice vector has dimension " << a.size() << ", grid has " << dim;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::shared_ptr<const Grid> Grid::make(const PolyhedralCone& cone,
                                       LatticeVector cells_per_axis, double step,
                                       double intensity_scale) {
  const int d = cone.dim();
  if (static_cast<int>(cells_per_axis.size()) != d)
    throw std::invalid_argument("Grid::make: cell counts must match cone dimension");
  if (cone.generators().cols() != d)
    throw std::invalid_argument("Grid::make: grids require a simplicial cone (d generators)");
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("Grid::make: step must be positive");
  if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale))
    throw std::invalid_argument("Grid::make: intensity scale must be positive");

  auto grid = std::shared_ptr<Grid>(new Grid());
  grid->dim_ = d;
  grid->cells_ = std::move(cells_per_axis);
  grid->step_ = step;
  grid->intensity_scale_ = intensity_scale;
  grid->cone_ = cone;
  grid->basis_ = step * cone.generators();
  grid->inv_basis_ = grid->basis_.inverse();
  grid->axis_aligned_ = grid->basis_.isDiagonal(0.0);
  const double det = std::abs(grid->basis_.determinant());
  if (!(det > 0.0))
    throw std::invalid_argument("Grid::make: degenerate chart basis");
  grid->cell_measure_ = intensity_scale * det;
  grid->total_cells_ = 1;
  for (std::int64_t n : grid->cells_) {
    if (n <= 0) throw std::invalid_argument("Grid::make: cell counts must be positive");
    grid->total_cells_ *= n;
  }
  return grid;
}

std::int64_t Grid::index_of(const LatticeVector& coords) const {
  std::int64_t idx = 0;
  for (int k = 0; k < dim_; ++k) idx = idx * cells_[k] + coords[k];
  return idx;
}

LatticeVector Grid::coords_of(std::int64_t index) const {
  LatticeVector coords(dim_);
  for (int k = dim_ - 1; k >= 0; --k) {
    coords[k] = index % cells_[k];
    index /= cells_[k];
  }
  return coords;
}

bool Grid::in_bounds(const LatticeVector& coords) const {
  for (int k = 0; k < dim_; ++k)
    if (coords[k] < 0 || coords[k] >= cells_[k]) return false;
  return true;
}

Eigen::VectorXd Grid::to_physical(const LatticeVector& coords) const {
  Eigen::VectorXd u(dim_);
  for (int k = 0; k < dim_; ++k) u[k] = static_cast<double>(coords[k]);
  return basis_ * u;
}

Eigen::VectorXd Grid::cell_center(std::int64_t index) const {
  const LatticeVector c = coords_of(index);
  Eigen::VectorXd u(dim_);
  for (int k = 0; k < dim_; ++k) u[k] = static_cast<double>(c[k]) + 0.5;
  return basis_ * u;
}

LatticeVector Grid::to_lattice(const Eigen::VectorXd& a) const {
  if (a.size() != dim_)
    throw std::invalid_argument("Grid::to_lattice: dimension mismatch");
  const Eigen::VectorXd u = inv_basis_ * a;
  LatticeVector m(dim_);
  for (int k = 0; k < dim_; ++k) {
    const double r = std::round(u[k]);
    if (std::abs(u[k] - r) > 1e-9 * std::max(1.0, std::abs(u[k]))) {
      std::ostringstream msg;
      msg << "Grid::to_lattice: vector is not lattice-aligned (chart coordinate "
          << u[k] << " on axis " << k << ")";
      throw std::invalid_argument(msg.str());
    }
    m[k] = static_cast<std::int64_t>(r);
  }
  return m;
}

bool Grid::locate(const Eigen::VectorXd& point, std::int64_t& cell) const {
  if (point.size() != dim_)
    throw std::invalid_argument("Grid::locate: dimension mismatch");
  const Eigen::VectorXd u = inv_basis_ * point;
  LatticeVector coords(dim_);
  for (int k = 0; k < dim_; ++k) {
    const double fk = std::floor(u[k]);
    if (fk < 0.0 || fk >= static_cast<double>(cells_[k])) return false;
    coords[k] = static_cast<std::int64_t>(fk);
  }
  cell = index_of(coords);
  return true;
}

bool Grid::same_layout(const Grid& other) const {
  return dim_ == other.dim_ && cells_ == other.cells_ && step_ == other.step_ &&
         intensity_scale_ == other.intensity_scale_ &&
         (basis_.array() == other.basis_.array()).all();
}

GridFunction::GridFunction(GridPtr grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("GridFunction: null grid");
  if (static_cast<std::int64_t>(values_.size()) != grid_->total_cells())
    throw std::invalid_argument("GridFunction: value count does not match grid");
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("GridFunction: non-finite cell value");
  }
}

GridFunction GridFunction::zero(GridPtr grid) {
  std::vector<Complex> values(static_cast<std::size_t>(grid->total_cells()));
  return GridFunction(std::move(grid), std::move(values));
}

GridFunction GridFunction::indicator(GridPtr grid, const LatticeVector& from,
                                     const LatticeVector& to, Complex value) {
  GridFunction f = zero(grid);
  const Grid& g = f.grid();
  for (std::int64_t c = 0; c < g.total_cells(); ++c) {
    const LatticeVector coords = g.coords_of(c);
    bool inside = true;
    for (int k = 0; k < g.dim(); ++k)
      inside = inside && coords[k] >= from[k] && coords[k] < to[k];
    if (inside) f.at(c) = value;
  }
  return f;
}

GridFunction& GridFunction::set(const LatticeVector& coords, Complex v) {
  if (!grid_->in_bounds(coords))
    throw std::invalid_argument("GridFunction::set: cell out of bounds");
  values_[static_cast<std::size_t>(grid_->index_of(coords))] = v;
  return *this;
}

Complex GridFunction::eval(const Eigen::VectorXd& point) const {
  std::int64_t cell = 0;
  if (!grid_->locate(point, cell)) return Complex(0, 0);
  return values_[static_cast<std::size_t>(cell)];
}

Complex GridFunction::integral() const {
  Complex sum(0, 0);
  for (const Complex& v : values_) sum += v;
  return sum * grid_->cell_measure();
}

bool GridFunction::operator==(const GridFunction& other) const {
  return grid_->same_layout(other.grid()) && values_ == other.values_;
}

Complex inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "inner");
  Complex sum(0, 0);
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < fv.size(); ++i) sum += fv[i] * std::conj(gv[i]);
  return sum * f.grid().cell_measure();
}

double norm_sq(const GridFunction& f) {
  double sum = 0.0;
  for (const Complex& v : f.values()) sum += std::norm(v);
  return sum * f.grid().cell_measure();
}

double l2_norm(const GridFunction& f) { return std::sqrt(norm_sq(f)); }

GridFunction operator+(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "operator+");
  std::vector<Complex> values(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += g.values()[i];
  return GridFunction(f.grid_ptr(), std::move(values));
}

GridFunction operator*(Complex scale, const GridFunction& f) {
  std::vector<Complex> values(f.values().begin(), f.values().end());
  for (Complex& v : values) v *= scale;
  return GridFunction(f.grid_ptr(), std::move(values));
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i)
    worst = std::max(worst, std::abs(f.values()[i] - g.values()[i]));
  return worst;
}

GridFunction shift(const GridFunction& f, const LatticeVector& a) {
  const Grid& g = f.grid();
  require_dim(a, g.dim(), "shift");
  if (!lattice_nonneg(a))
    throw std::invalid_argument("shift: a is not a cone element (negative chart step)");

  GridFunction out = GridFunction::zero(f.grid_ptr());
  for (std::int64_t c = 0; c < g.total_cells(); ++c) {
    if (f.value(c) == Complex(0, 0)) continue;
    const LatticeVector target = lattice_add(g.coords_of(c), a);
    if (!g.in_bounds(target)) {
      std::ostringstream msg;
      msg << "shift: support overflows the window (cell " << c << " would leave the grid)";
      throw ShiftOverflowError(msg.str());
    }
    out.at(g.index_of(target)) = f.value(c);
  }
  return out;
}

GridFunction shift(const GridFunction& f, const Eigen::VectorXd& a) {
  return shift(f, f.grid().to_lattice(a));
}

GridFunction adjoint_shift(const GridFunction& f, const LatticeVector& a) {
  const Grid& g = f.grid();
  require_dim(a, g.dim(), "adjoint_shift");
  if (!lattice_nonneg(a))
    throw std::invalid_argument("adjoint_shift: a is not a cone element");

  GridFunction out = GridFunction::zero(f.grid_ptr());
  for (std::int64_t c = 0; c < g.total_cells(); ++c) {
    const LatticeVector source = lattice_add(g.coords_of(c), a);
    if (g.in_bounds(source)) out.at(c) = f.value(g.index_of(source));
  }
  return out;
}

GridFunction adjoint_shift(const GridFunction& f, const Eigen::VectorXd& a) {
  return adjoint_shift(f, f.grid().to_lattice(a));
}

Region::Region(Kind kind, LatticeVector a, LatticeVector b)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)) {}

Region Region::below(LatticeVector a) {
  if (!lattice_nonneg(a)) throw std::invalid_argument("Region::below: a not in cone");
  LatticeVector b = a;
  return Region(Kind::Below, std::move(a), std::move(b));
}

Region Region::band(LatticeVector a, LatticeVector b) {
  if (!lattice_nonneg(a) || !lattice_leq(a, b))
    throw std::invalid_argument("Region::band: requires 0 <= a <= b in the cone order");
  return Region(Kind::Band, std::move(a), std::move(b));
}

Region Region::above(LatticeVector a) {
  if (!lattice_nonneg(a)) throw std::invalid_argument("Region::above: a not in cone");
  LatticeVector b = a;
  return Region(Kind::Above, std::move(a), std::move(b));
}

bool Region::contains(const LatticeVector& cell) const {
  switch (kind_) {
    case Kind::Below:
      return !lattice_leq(a_, cell);
    case Kind::Band:
      return lattice_leq(a_, cell) && !lattice_leq(b_, cell);
    case Kind::Above:
      return lattice_leq(a_, cell);
  }
  return false;
}

GridFunction restrict_to(const GridFunction& f, const Region& region) {
  const Grid& g = f.grid();
  GridFunction out = GridFunction::zero(f.grid_ptr());
  for (std::int64_t c = 0; c < g.total_cells(); ++c)
    if (region.contains(g.coords_of(c))) out.at(c) = f.value(c);
  return out;
}

bool supported_in(const GridFunction& f, const Region& region) {
  const Grid& g = f.grid();
  for (std::int64_t c = 0; c < g.total_cells(); ++c)
    if (f.value(c) != Complex(0, 0) && !region.contains(g.coords_of(c))) return false;
  return true;
}

LatticeVector lattice_add(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

LatticeVector lattice_sub(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

bool lattice_leq(const LatticeVector& a, const LatticeVector& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

bool lattice_nonneg(const LatticeVector& a) {
  for (std::int64_t v : a)
    if (v < 0) return false;
  return true;
}

}  // namespace ccrlab
