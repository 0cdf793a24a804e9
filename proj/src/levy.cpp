#include "ccrlab/levy.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <stdexcept>

namespace ccrlab {

namespace {

// E_1(x) = integral_x^inf e^{-t}/t dt
double expint_e1(double x) { return boost::math::expint(1, x); }

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive_simpson_rec(const std::function<double(double)>& h, double lo, double hi,
                            double flo, double fmid, double fhi, double whole,
                            double abs_tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double flmid = h(0.5 * (lo + mid));
  const double frmid = h(0.5 * (mid + hi));
  const double left = simpson(lo, mid, flo, flmid, fmid);
  const double right = simpson(mid, hi, fmid, frmid, fhi);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * abs_tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(h, lo, mid, flo, flmid, fmid, left, 0.5 * abs_tol, depth - 1) +
         adaptive_simpson_rec(h, mid, hi, fmid, frmid, fhi, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& h, double lo, double hi,
                        double abs_tol) {
  if (!(hi > lo)) return 0.0;
  const double flo = h(lo);
  const double fmid = h(0.5 * (lo + hi));
  const double fhi = h(hi);
  const double whole = simpson(lo, hi, flo, fmid, fhi);
  return adaptive_simpson_rec(h, lo, hi, flo, fmid, fhi, whole, abs_tol, 48);
}

MarkGrid gauss_laguerre(int n) {
  if (n <= 0) throw std::invalid_argument("gauss_laguerre: order must be positive");
  // Golub-Welsch on the Laguerre Jacobi matrix: diag 2k+1, offdiag k.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = 2.0 * k + 1.0;
    if (k + 1 < n) {
      jacobi(k, k + 1) = k + 1.0;
      jacobi(k + 1, k) = k + 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  MarkGrid out;
  out.nodes.resize(n);
  out.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    out.nodes[k] = solver.eigenvalues()[k];
    const double v0 = solver.eigenvectors()(0, k);
    out.weights[k] = v0 * v0;  // mu_0 = integral e^{-t} dt = 1
  }
  return out;
}

LevyMeasure LevyMeasure::atomic(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw std::invalid_argument("LevyMeasure::atomic: no atoms");
  LevyMeasure nu;
  nu.family_ = Family::FiniteAtomic;
  nu.atoms_ = std::move(atoms);
  double cum = 0.0;
  for (const auto& [r, w] : nu.atoms_) {
    if (!(r > 0.0)) throw std::invalid_argument("LevyMeasure::atomic: atoms must lie in (0, inf)");
    if (!(w > 0.0)) throw std::invalid_argument("LevyMeasure::atomic: weights must be positive");
    cum += w;
    nu.atom_cumulative_.push_back(cum);
  }
  return nu;
}

LevyMeasure LevyMeasure::exponential(double mass, double rate) {
  if (!(mass > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("LevyMeasure::exponential: mass and rate must be positive");
  LevyMeasure nu;
  nu.family_ = Family::ExponentialDensity;
  nu.mass_ = mass;
  nu.rate_ = rate;
  return nu;
}

LevyMeasure LevyMeasure::truncated_gamma(double shape, double rate, double r_min) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("LevyMeasure::truncated_gamma: shape and rate must be positive");
  if (!(r_min > 0.0))
    throw std::invalid_argument(
        "LevyMeasure::truncated_gamma: r_min must be positive (the untruncated measure has "
        "infinite total mass)");
  LevyMeasure nu;
  nu.family_ = Family::TruncatedGamma;
  nu.shape_ = shape;
  nu.rate_ = rate;
  nu.r_min_ = r_min;
  return nu;
}

const char* LevyMeasure::family_name() const {
  switch (family_) {
    case Family::FiniteAtomic: return "atomic";
    case Family::ExponentialDensity: return "exponential";
    case Family::TruncatedGamma: return "truncated-gamma";
  }
  return "?";
}

double LevyMeasure::total_mass() const {
  switch (family_) {
    case Family::FiniteAtomic:
      return atom_cumulative_.back();
    case Family::ExponentialDensity:
      return mass_;
    case Family::TruncatedGamma:
      return shape_ * expint_e1(rate_ * r_min_);
  }
  return 0.0;
}

double LevyMeasure::levy_condition_integral() const {
  switch (family_) {
    case Family::FiniteAtomic: {
      double sum = 0.0;
      for (const auto& [r, w] : atoms_) sum += w * std::min(r, 1.0);
      return sum;
    }
    case Family::ExponentialDensity:
      // integral (r^1) rate e^{-rate r} dr = (1 - e^{-rate}) / rate
      return mass_ * (-std::expm1(-rate_)) / rate_;
    case Family::TruncatedGamma: {
      const double r1 = std::max(r_min_, 1.0);
      return shape_ * ((std::exp(-rate_ * r_min_) - std::exp(-rate_ * r1)) / rate_ +
                       expint_e1(rate_ * r1));
    }
  }
  return 0.0;
}

double LevyMeasure::omexp_integral(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("LevyMeasure::omexp_integral: t must be >= 0");
  if (t == 0.0) return 0.0;
  switch (family_) {
    case Family::FiniteAtomic: {
      double sum = 0.0;
      for (const auto& [r, w] : atoms_) sum += w * (-std::expm1(-t * r));
      return sum;
    }
    case Family::ExponentialDensity:
      return mass_ * t / (t + rate_);
    case Family::TruncatedGamma: {
      // adaptive quadrature, documented absolute tolerance 1e-10; the
      // truncated tail beyond r_max is below 1e-14 of the value
      const double r_max = r_min_ + 42.0 / rate_;
      auto integrand = [this, t](double r) {
        return (-std::expm1(-t * r)) * shape_ * std::exp(-rate_ * r) / r;
      };
      return adaptive_simpson(integrand, r_min_, r_max, 1e-12);
    }
  }
  return 0.0;
}

double LevyMeasure::mean_mark() const {
  switch (family_) {
    case Family::FiniteAtomic: {
      double sum = 0.0;
      for (const auto& [r, w] : atoms_) sum += w * r;
      return sum / total_mass();
    }
    case Family::ExponentialDensity:
      return 1.0 / rate_;
    case Family::TruncatedGamma:
      // integral_{r_min}^inf r e^{-rate r}/r dr = e^{-rate r_min} / rate
      return std::exp(-rate_ * r_min_) / (rate_ * expint_e1(rate_ * r_min_));
  }
  return 0.0;
}

double LevyMeasure::truncated_small_jump_mass() const {
  if (family_ != Family::TruncatedGamma) return 0.0;
  // integral_0^{r_min} (r ^ 1) e^{-rate r}/r dr, with (r ^ 1) = r below 1
  const double r0 = std::min(r_min_, 1.0);
  double mass = shape_ * (-std::expm1(-rate_ * r0)) / rate_;
  if (r_min_ > 1.0) mass += shape_ * (expint_e1(rate_) - expint_e1(rate_ * r_min_));
  return mass;
}

double LevyMeasure::sample_mark(Rng& rng) const {
  switch (family_) {
    case Family::FiniteAtomic:
      return atoms_[rng.discrete_cumulative(atom_cumulative_)].first;
    case Family::ExponentialDensity:
      return rng.exponential(rate_);
    case Family::TruncatedGamma: {
      // rejection: proposal r_min + Exp(rate), accept with prob r_min / r
      for (;;) {
        const double r = r_min_ + rng.exponential(rate_);
        if (rng.uniform01() * r <= r_min_) return r;
      }
    }
  }
  return 0.0;
}

MarkGrid LevyMeasure::discretize(int node_count) const {
  switch (family_) {
    case Family::FiniteAtomic: {
      MarkGrid grid;
      for (const auto& [r, w] : atoms_) {
        grid.nodes.push_back(r);
        grid.weights.push_back(w);
      }
      return grid;
    }
    case Family::ExponentialDensity: {
      MarkGrid gl = gauss_laguerre(node_count);
      MarkGrid grid;
      grid.nodes.resize(gl.size());
      grid.weights.resize(gl.size());
      for (std::size_t k = 0; k < gl.size(); ++k) {
        grid.nodes[k] = gl.nodes[k] / rate_;
        grid.weights[k] = mass_ * gl.weights[k];
      }
      return grid;
    }
    case Family::TruncatedGamma: {
      MarkGrid gl = gauss_laguerre(node_count);
      MarkGrid grid;
      grid.nodes.resize(gl.size());
      grid.weights.resize(gl.size());
      const double front = shape_ * std::exp(-rate_ * r_min_) / rate_;
      for (std::size_t k = 0; k < gl.size(); ++k) {
        const double r = r_min_ + gl.nodes[k] / rate_;
        grid.nodes[k] = r;
        grid.weights[k] = front * gl.weights[k] / r;
      }
      return grid;
    }
  }
  return {};
}

}  // namespace ccrlab
