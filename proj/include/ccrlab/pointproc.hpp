#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ccrlab/grid.hpp"
#include "ccrlab/levy.hpp"
#include "ccrlab/rng.hpp"

namespace ccrlab {

/// Bounded axis-aligned sampling window. Restricting the stationary process
/// to a window is exact: counts in disjoint sets are independent, so the
/// restriction is distributed as the restriction of the global process.
struct Window {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Window(Eigen::VectorXd lo, Eigen::VectorXd hi);

  /// Physical span of an axis-aligned grid. Throws for skew charts.
  static Window of_grid(const Grid& grid);

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(const Eigen::VectorXd& point) const;
};

/// One sample of the point process restricted to a window. Points are stored
/// flat (dim * count doubles); provenance records the stream that made it.
class PointConfiguration {
 public:
  PointConfiguration(int dim, std::vector<double> coords, std::uint64_t seed,
                     std::int64_t replicate);

  int dim() const { return dim_; }
  std::int64_t size() const { return static_cast<std::int64_t>(coords_.size()) / dim_; }
  Eigen::Map<const Eigen::VectorXd> point(std::int64_t i) const {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data() + i * dim_, dim_);
  }
  std::uint64_t seed() const { return seed_; }
  std::int64_t replicate() const { return replicate_; }
  bool operator==(const PointConfiguration& other) const {
    return dim_ == other.dim_ && coords_ == other.coords_;
  }

 private:
  int dim_;
  std::vector<double> coords_;
  std::uint64_t seed_;
  std::int64_t replicate_;
};

/// One sample of the marked process on Y x (0, inf): (point, mark) pairs.
class MarkedConfiguration {
 public:
  MarkedConfiguration(int dim, std::vector<double> coords, std::vector<double> marks,
                      std::uint64_t seed, std::int64_t replicate);

  int dim() const { return dim_; }
  std::int64_t size() const { return static_cast<std::int64_t>(marks_.size()); }
  Eigen::Map<const Eigen::VectorXd> point(std::int64_t i) const {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data() + i * dim_, dim_);
  }
  double mark(std::int64_t i) const { return marks_[static_cast<std::size_t>(i)]; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t replicate() const { return replicate_; }

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> marks_;
  std::uint64_t seed_;
  std::int64_t replicate_;
};

/// Poisson sample on the window with intensity intensity_scale * Lebesgue:
/// count ~ Poisson(scale * volume), points i.i.d. uniform. Deterministic in
/// (seed, replicate).
PointConfiguration sample_poisson(const Window& window, double intensity_scale,
                                  std::uint64_t seed, std::int64_t replicate);

/// Marked Poisson sample with intensity rho0_scale * Lebesgue (x) nu:
/// count ~ Poisson(rho0_scale * volume * nu total mass), points uniform,
/// marks i.i.d. nu / mass, independent of the points.
MarkedConfiguration sample_marked(const Window& window, double rho0_scale,
                                  const LevyMeasure& nu, std::uint64_t seed,
                                  std::int64_t replicate);

using PointPredicate = std::function<bool(Eigen::Map<const Eigen::VectorXd>)>;

/// eta(B): number of configuration points satisfying the predicate.
std::int64_t eta_count(const PointConfiguration& config, const PointPredicate& in_B);

/// xi(B) = sum of marks over pairs with the point in B.
double xi_mass(const MarkedConfiguration& config, const PointPredicate& in_B);

/// e^{eta(u)} evaluated pathwise: product of e^{u(y_i)} over points.
Complex exp_functional(const PointConfiguration& config, const GridFunction& u);

/// E(e^{eta(u)}) = exp(integral (e^u - 1) dlambda), exact on the grid.
Complex master_equation_rhs(const GridFunction& u);

/// E(e^{-xi(u)}) = exp(-integral rho0(dy) integral (1 - e^{-u(y) r}) nu(dr))
/// for simple u >= 0 on the grid. The grid's measure plays rho0.
double compound_laplace_rhs(const GridFunction& u, const LevyMeasure& nu);

/// Monte Carlo mean with standard error. stderr = sample sd / sqrt(n) with
/// |.|^2 deviations for complex values.
struct MCEstimate {
  Complex mean;
  double std_error;
  std::int64_t n;
};

/// Sampler specs bind a window and intensities so Monte Carlo loops are a
/// pure function of (seed, replicate).
struct PoissonSampler {
  Window window;
  double intensity_scale;
  PointConfiguration sample(std::uint64_t seed, std::int64_t replicate) const {
    return sample_poisson(window, intensity_scale, seed, replicate);
  }
};

struct MarkedSampler {
  Window window;
  double rho0_scale;
  LevyMeasure nu;
  MarkedConfiguration sample(std::uint64_t seed, std::int64_t replicate) const {
    return sample_marked(window, rho0_scale, nu, seed, replicate);
  }
};

double pairwise_sum(std::span<const double> values);
Complex pairwise_sum(std::span<const Complex> values);

int resolve_workers(int workers);

namespace detail {

/// Evaluate fn(replicate) for replicate in [0, n) into a vector, optionally
/// on several threads. Each entry depends only on its index, so the result
/// is identical for every worker count.
template <class Fn>
std::vector<Complex> replicate_values(std::int64_t n, int workers, Fn&& fn) {
  std::vector<Complex> values(static_cast<std::size_t>(n));
  const int w = resolve_workers(workers);
  if (w <= 1 || n < 256) {
    for (std::int64_t r = 0; r < n; ++r) values[static_cast<std::size_t>(r)] = fn(r);
    return values;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::int64_t block = (n + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    const std::int64_t lo = t * block;
    const std::int64_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t r = lo; r < hi; ++r) values[static_cast<std::size_t>(r)] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return values;
}

MCEstimate reduce_estimate(const std::vector<Complex>& values);

}  // namespace detail

/// Monte Carlo mean of a configuration functional over n independent
/// replicates. Deterministic given the seed; independent of worker count
/// (per-replicate streams plus fixed pairwise reduction).
template <class Sampler, class Fn>
MCEstimate mc_mean(const Sampler& sampler, Fn&& functional, std::int64_t n,
                   std::uint64_t seed, int workers = 1) {
  if (n < 2) throw std::invalid_argument("mc_mean: need at least 2 replicates");
  auto values = detail::replicate_values(n, workers, [&](std::int64_t r) {
    return Complex(functional(sampler.sample(seed, r)));
  });
  return detail::reduce_estimate(values);
}

}  // namespace ccrlab
