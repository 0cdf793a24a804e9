#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ccrlab {

/// Classification of a point against the slabs cut out by two cone shifts:
/// Below = outside X+a, Mid = in (X+a)\(X+b), Above = in X+b.
enum class RegionTag { Below, Mid, Above };

/// Closed convex cone P in R^d given by spanning generators and inward
/// halfspace normals: P = {x : <n_k, x> >= 0 for all k}. The cone induces
/// the partial order x <= y iff y - x in P. Immutable after construction;
/// all queries are pure.
class PolyhedralCone {
 public:
  static constexpr double kDefaultTol = 1e-12;

  /// generators: one column per generator; normals: one row per halfspace.
  /// Throws std::invalid_argument if the data fails the spanning, pointed,
  /// or generator-consistency checks.
  PolyhedralCone(Eigen::MatrixXd generators, Eigen::MatrixXd normals,
                 double tol = kDefaultTol);

  /// Nonnegative orthant [0, inf)^d.
  static PolyhedralCone orthant(int dim);
  /// The planar cone generated by (1,1) and (-1,1), i.e. {(x,y) : y >= |x|}.
  static PolyhedralCone diagonal2();

  int dim() const { return dim_; }
  const Eigen::MatrixXd& generators() const { return generators_; }
  const Eigen::MatrixXd& normals() const { return normals_; }
  double tol() const { return tol_; }

  /// Membership x in P, i.e. <n_k, x> >= -tol for all k.
  bool contains(const Eigen::VectorXd& x) const;

  /// Cone order: y - x in P.
  bool leq(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Strict order: y - x in Int(P), i.e. <n_k, y-x> > tol for all k.
  bool lt(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Sum of generators; lies in the interior of a pointed spanning cone.
  Eigen::VectorXd interior_direction() const;

 private:
  void validate(std::uint64_t probe_seed) const;

  int dim_;
  Eigen::MatrixXd generators_;
  Eigen::MatrixXd normals_;
  double tol_;
};

/// The P-invariant set X acted on by cone shifts. Fixed to X = P, so
/// X + a = a + P and purity of the action holds for any pointed spanning
/// cone. Region queries classify points into L_{-inf,a} / L_{a,b} / L_{b,inf}.
class InvariantSet {
 public:
  explicit InvariantSet(PolyhedralCone cone);

  const PolyhedralCone& cone() const { return cone_; }

  /// x in X.
  bool member(const Eigen::VectorXd& x) const;

  /// x in X + a.
  bool member_shifted(const Eigen::VectorXd& x, const Eigen::VectorXd& a) const;

  /// Classify y against the slabs at a <= b. Exactly one tag is returned.
  /// Throws std::invalid_argument when a <= b fails.
  RegionTag region(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& y) const;

 private:
  /// Invariance and purity probes; throws on failure.
  void validate(std::uint64_t probe_seed) const;

  PolyhedralCone cone_;
};

}  // namespace ccrlab
