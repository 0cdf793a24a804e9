#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ccrlab/cone.hpp"

namespace ccrlab {

using Complex = std::complex<double>;
using LatticeVector = std::vector<std::int64_t>;

/// Uniform lattice discretization of L^2(X, lambda) over a bounded piece of
/// X = P. Axis k of the chart advances by one lattice step along the cone's
/// k-th edge, so chart coordinates of X are exactly the nonnegative orthant
/// and every shift by a lattice-aligned cone element is an exact relabeling
/// of cells (no interpolation, no straddled region boundaries). For orthant
/// cones the cells are the usual axis-aligned boxes; for the skew planar
/// cone they are the parallelogram cells spanned by the generators.
///
/// lambda is scaled Lebesgue measure: lambda(cell) = intensity_scale * |det B|
/// where B is the chart basis. Requires a simplicial cone (d generators).
class Grid : public std::enable_shared_from_this<Grid> {
 public:
  static std::shared_ptr<const Grid> make(const PolyhedralCone& cone,
                                          LatticeVector cells_per_axis, double step,
                                          double intensity_scale = 1.0);

  int dim() const { return dim_; }
  std::int64_t axis_cells(int axis) const { return cells_[axis]; }
  const LatticeVector& cells_per_axis() const { return cells_; }
  std::int64_t total_cells() const { return total_cells_; }
  double step() const { return step_; }
  double intensity_scale() const { return intensity_scale_; }

  /// lambda(cell); constant across cells.
  double cell_measure() const { return cell_measure_; }
  double total_measure() const { return cell_measure_ * static_cast<double>(total_cells_); }

  const PolyhedralCone& cone() const { return cone_; }
  /// Chart basis: column k is the physical displacement of one step on axis k.
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// True when the chart is a plain axis-aligned lattice (orthant cones).
  bool axis_aligned() const { return axis_aligned_; }

  std::int64_t index_of(const LatticeVector& coords) const;
  LatticeVector coords_of(std::int64_t index) const;
  bool in_bounds(const LatticeVector& coords) const;

  /// Physical position of a chart point (cell corner for integer input).
  Eigen::VectorXd to_physical(const LatticeVector& coords) const;
  Eigen::VectorXd cell_center(std::int64_t index) const;

  /// Lattice coordinates of a physical vector. Throws std::invalid_argument
  /// when the vector is not an integer combination of chart steps
  /// (tolerance 1e-9 per coordinate).
  LatticeVector to_lattice(const Eigen::VectorXd& a) const;

  /// Cell containing a physical point; false when the point lies outside
  /// the gridded part of X.
  bool locate(const Eigen::VectorXd& point, std::int64_t& cell) const;

  /// Structural equality of the discretization (shape, basis, measure).
  bool same_layout(const Grid& other) const;

 private:
  Grid() = default;

  int dim_ = 0;
  LatticeVector cells_;
  std::int64_t total_cells_ = 0;
  double step_ = 0.0;
  double intensity_scale_ = 1.0;
  double cell_measure_ = 0.0;
  bool axis_aligned_ = false;
  PolyhedralCone cone_ = PolyhedralCone::orthant(1);
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inv_basis_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// A simple function on the grid: one complex value per cell. The
/// computational stand-in for f in L^2(X, lambda).
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<Complex> values);

  static GridFunction zero(GridPtr grid);
  /// Indicator of the chart box from <= i < to, scaled by value.
  static GridFunction indicator(GridPtr grid, const LatticeVector& from,
                                const LatticeVector& to, Complex value = Complex(1, 0));

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  Complex value(std::int64_t cell) const { return values_[static_cast<std::size_t>(cell)]; }
  Complex& at(std::int64_t cell) { return values_[static_cast<std::size_t>(cell)]; }

  GridFunction& set(const LatticeVector& coords, Complex v);

  /// Value at a physical point (0 outside the gridded region).
  Complex eval(const Eigen::VectorXd& point) const;

  /// integral f dlambda, summed in fixed cell order.
  Complex integral() const;

  bool operator==(const GridFunction& other) const;

 private:
  GridPtr grid_;
  std::vector<Complex> values_;
};

/// <f, g> = integral f conj(g) dlambda; conjugate-linear in the second slot.
Complex inner(const GridFunction& f, const GridFunction& g);
double norm_sq(const GridFunction& f);
double l2_norm(const GridFunction& f);

GridFunction operator+(const GridFunction& f, const GridFunction& g);
GridFunction operator*(Complex scale, const GridFunction& f);

/// Max |f - g| over cells.
double max_abs_diff(const GridFunction& f, const GridFunction& g);

/// Shift isometry V_a: (V_a f)(y) = f(y - a) on X + a, 0 elsewhere.
/// a must be a cone element; any support mass that would leave the gridded
/// window raises ShiftOverflowError instead of being dropped.
GridFunction shift(const GridFunction& f, const LatticeVector& a);
GridFunction shift(const GridFunction& f, const Eigen::VectorXd& a);

/// Adjoint V_a^*: (V_a^* f)(y) = f(y + a); cells reading past the window
/// see the zero extension of f.
GridFunction adjoint_shift(const GridFunction& f, const LatticeVector& a);
GridFunction adjoint_shift(const GridFunction& f, const Eigen::VectorXd& a);

struct ShiftOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cell-exact region of X: L_a = X\(X+a), L_{a,b} = (X+a)\(X+b), or X+a.
class Region {
 public:
  enum class Kind { Below, Band, Above };

  static Region below(LatticeVector a);               // L_a
  static Region band(LatticeVector a, LatticeVector b);  // L_{a,b}, needs a <= b
  static Region above(LatticeVector a);               // L_{a,inf} = X + a

  Kind kind() const { return kind_; }
  const LatticeVector& a() const { return a_; }
  const LatticeVector& b() const { return b_; }

  bool contains(const LatticeVector& cell) const;

 private:
  Region(Kind kind, LatticeVector a, LatticeVector b);

  Kind kind_;
  LatticeVector a_, b_;
};

/// f * indicator(region), exact on cells.
GridFunction restrict_to(const GridFunction& f, const Region& region);

/// True when every nonzero cell of f lies in the region.
bool supported_in(const GridFunction& f, const Region& region);

/// Componentwise lattice helpers.
LatticeVector lattice_add(const LatticeVector& a, const LatticeVector& b);
LatticeVector lattice_sub(const LatticeVector& a, const LatticeVector& b);
bool lattice_leq(const LatticeVector& a, const LatticeVector& b);
bool lattice_nonneg(const LatticeVector& a);

}  // namespace ccrlab
