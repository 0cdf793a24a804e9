#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ccrlab/rng.hpp"

namespace ccrlab {

/// Finite discretization of a measure on (0, inf): nodes with positive
/// weights. Atoms of an atomic measure, or quadrature nodes otherwise.
struct MarkGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Laguerre rule of the given order: integrates h against e^{-t} dt
/// on (0, inf) exactly for polynomials up to degree 2n-1.
MarkGrid gauss_laguerre(int n);

/// Levy measure nu on (0, inf) with finite total mass, one of three
/// families:
///   finite-atomic     nu = sum_k w_k delta_{r_k}
///   exponential       nu(dr) = mass * rate * e^{-rate r} dr
///   truncated gamma   nu(dr) = shape * e^{-rate r} / r dr on [r_min, inf)
/// The truncated family is the finite-activity cutoff of an infinite-activity
/// measure; the discarded small-jump mass is reported, not hidden.
class LevyMeasure {
 public:
  enum class Family { FiniteAtomic, ExponentialDensity, TruncatedGamma };

  static LevyMeasure atomic(std::vector<std::pair<double, double>> atoms);
  static LevyMeasure exponential(double mass, double rate);
  static LevyMeasure truncated_gamma(double shape, double rate, double r_min);

  Family family() const { return family_; }
  const char* family_name() const;

  /// nu((0, inf)); finite for all three families.
  double total_mass() const;

  /// integral (r ^ 1) nu(dr), the Levy condition value; closed form.
  double levy_condition_integral() const;

  /// integral (1 - e^{-t r}) nu(dr) for t >= 0. Closed form for the atomic
  /// and exponential families; adaptive quadrature (abs tol 1e-10) for the
  /// truncated gamma family.
  double omexp_integral(double t) const;

  /// Mean of nu / total_mass; closed form (used as a sampling oracle).
  double mean_mark() const;

  /// integral_0^{r_min} (r ^ 1) nu_full(dr) for the truncated family: the
  /// small-jump mass removed by the cutoff. Zero for the other families.
  double truncated_small_jump_mass() const;

  /// One mark from nu / total_mass.
  double sample_mark(Rng& rng) const;

  /// Node/weight discretization: atoms verbatim for the atomic family,
  /// Gauss-type nodes mapped through the density otherwise.
  MarkGrid discretize(int node_count) const;

  // family parameters (meaning depends on family)
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
  double mass() const { return mass_; }
  double rate() const { return rate_; }
  double shape() const { return shape_; }
  double r_min() const { return r_min_; }

 private:
  LevyMeasure() = default;

  Family family_ = Family::FiniteAtomic;
  std::vector<std::pair<double, double>> atoms_;
  std::vector<double> atom_cumulative_;
  double mass_ = 0.0;   // exponential family total mass
  double rate_ = 0.0;   // exponential / truncated gamma rate
  double shape_ = 0.0;  // truncated gamma shape
  double r_min_ = 0.0;  // truncated gamma cutoff
};

/// Adaptive Simpson quadrature on [lo, hi] to the given absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& h, double lo, double hi,
                        double abs_tol);

}  // namespace ccrlab
