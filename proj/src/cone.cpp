#include "ccrlab/cone.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ccrlab/rng.hpp"

namespace ccrlab {

namespace {

void require_dim(const Eigen::VectorXd& x, int dim, const char* op) {
  if (x.size() != dim) {
    std::ostringstream msg;
    msg << op << ": vector has dimension " << x.size() << ", cone has " << dim;
    throw std::invalid_argument(msg.str());
  }
  if (!x.allFinite()) {
    std::ostringstream msg;
    msg << op << ": vector has non-finite entries";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

PolyhedralCone::PolyhedralCone(Eigen::MatrixXd generators, Eigen::MatrixXd normals,
                               double tol)
    : dim_(static_cast<int>(generators.rows())),
      generators_(std::move(generators)),
      normals_(std::move(normals)),
      tol_(tol) {
  if (dim_ <= 0) throw std::invalid_argument("PolyhedralCone: empty generator matrix");
  if (normals_.cols() != dim_)
    throw std::invalid_argument("PolyhedralCone: normal rows must match dimension");
  if (generators_.cols() < dim_)
    throw std::invalid_argument("PolyhedralCone: need at least d generators to span");
  validate(0x636f6e65ull);
}

PolyhedralCone PolyhedralCone::orthant(int dim) {
  if (dim <= 0) throw std::invalid_argument("PolyhedralCone::orthant: dim must be positive");
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  return PolyhedralCone(id, id);
}

PolyhedralCone PolyhedralCone::diagonal2() {
  Eigen::MatrixXd gens(2, 2);
  gens << 1.0, -1.0,
          1.0,  1.0;
  // self-dual: the generators double as inward normals
  Eigen::MatrixXd normals(2, 2);
  normals << 1.0, 1.0,
            -1.0, 1.0;
  return PolyhedralCone(gens, normals);
}

bool PolyhedralCone::contains(const Eigen::VectorXd& x) const {
  require_dim(x, dim_, "PolyhedralCone::contains");
  return (normals_ * x).minCoeff() >= -tol_;
}

bool PolyhedralCone::leq(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  require_dim(x, dim_, "PolyhedralCone::leq");
  require_dim(y, dim_, "PolyhedralCone::leq");
  return contains(y - x);
}

bool PolyhedralCone::lt(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  require_dim(x, dim_, "PolyhedralCone::lt");
  require_dim(y, dim_, "PolyhedralCone::lt");
  return (normals_ * (y - x)).minCoeff() > tol_;
}

Eigen::VectorXd PolyhedralCone::interior_direction() const {
  return generators_.rowwise().sum();
}

void PolyhedralCone::validate(std::uint64_t probe_seed) const {
  // spanning: generator matrix has full row rank
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(generators_);
  qr.setThreshold(1e-10);
  if (qr.rank() != dim_)
    throw std::invalid_argument("PolyhedralCone: generators do not span R^d");

  for (int j = 0; j < generators_.cols(); ++j) {
    const Eigen::VectorXd g = generators_.col(j);
    if ((normals_ * g).minCoeff() < -tol_)
      throw std::invalid_argument("PolyhedralCone: generator violates a halfspace");
    if (g.norm() > tol_ && contains(-g))
      throw std::invalid_argument("PolyhedralCone: not pointed (generator with -g in P)");
  }

  // pointedness on random probes: contains(z) && contains(-z) forces z ~ 0
  Rng rng = Rng::stream(probe_seed, {0x70726f6265ull});
  for (int trial = 0; trial < 256; ++trial) {
    Eigen::VectorXd z(dim_);
    if (trial % 2 == 0) {
      for (int k = 0; k < dim_; ++k) z[k] = rng.uniform(-1.0, 1.0);
    } else {
      // random cone element: nonnegative generator combination
      z.setZero();
      for (int j = 0; j < generators_.cols(); ++j) z += rng.uniform01() * generators_.col(j);
    }
    if (contains(z) && contains(-z) && z.norm() > 16.0 * tol_)
      throw std::invalid_argument("PolyhedralCone: not pointed (probe z with +-z in P)");
  }
}

InvariantSet::InvariantSet(PolyhedralCone cone) : cone_(std::move(cone)) {
  validate(0x696e7661ull);
}

bool InvariantSet::member(const Eigen::VectorXd& x) const { return cone_.contains(x); }

bool InvariantSet::member_shifted(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& a) const {
  return cone_.contains(x - a);
}

RegionTag InvariantSet::region(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& y) const {
  if (!cone_.leq(a, b))
    throw std::invalid_argument("InvariantSet::region: requires a <= b in the cone order");
  if (!member_shifted(y, a)) return RegionTag::Below;
  if (member_shifted(y, b)) return RegionTag::Above;
  return RegionTag::Mid;
}

void InvariantSet::validate(std::uint64_t probe_seed) const {
  Rng rng = Rng::stream(probe_seed, {0x70757265ull});
  const int d = cone_.dim();
  const Eigen::VectorXd e = cone_.interior_direction();

  for (int trial = 0; trial < 64; ++trial) {
    // P-invariance: x in X, a in P implies x + a in X
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < cone_.generators().cols(); ++j) {
      x += rng.uniform01() * cone_.generators().col(j);
      a += rng.uniform01() * cone_.generators().col(j);
    }
    if (!member(x + a))
      throw std::invalid_argument("InvariantSet: P-invariance probe failed");

    // purity: some multiple of the interior direction pushes X past any probe
    Eigen::VectorXd z(d);
    for (int k = 0; k < d; ++k) z[k] = rng.uniform(-8.0, 8.0);
    bool escaped = false;
    for (double t = 1.0; t <= 1e9; t *= 2.0) {
      if (!member(z - t * e)) {
        escaped = true;
        break;
      }
    }
    if (!escaped) throw std::invalid_argument("InvariantSet: purity probe failed");
  }
}

}  // namespace ccrlab
