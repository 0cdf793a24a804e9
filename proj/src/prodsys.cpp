#include "ccrlab/prodsys.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccrlab {

namespace {

constexpr std::uint64_t kSigmaInnerSalt = 0x7369676d61ull;

PoissonSampler sampler_of(const Grid& grid) {
  return PoissonSampler{Window::of_grid(grid), grid.intensity_scale()};
}

/// Extracts (c, B) from u = c 1_B; throws unless u has that form.
std::pair<double, std::vector<char>> split_indicator(const GridFunction& u) {
  double c = 0.0;
  std::vector<char> mask(u.values().size(), 0);
  for (std::size_t i = 0; i < u.values().size(); ++i) {
    const Complex v = u.values()[i];
    if (v == Complex(0, 0)) continue;
    if (v.imag() != 0.0 || v.real() <= 0.0)
      throw std::invalid_argument("expected u = c 1_B with c > 0");
    if (c == 0.0)
      c = v.real();
    else if (v.real() != c)
      throw std::invalid_argument("expected u = c 1_B: found two distinct levels");
    mask[i] = 1;
  }
  if (c == 0.0) throw std::invalid_argument("expected u = c 1_B: u is identically zero");
  return {c, std::move(mask)};
}

}  // namespace

Complex measurable_log(Complex z) {
  if (z == Complex(0, 0))
    throw std::invalid_argument("measurable_log: log of zero");
  return std::log(z);  // principal branch, arg in (-pi, pi]
}

GridFunction u_from_f(const GridFunction& f) {
  std::vector<Complex> values(f.values().begin(), f.values().end());
  for (Complex& v : values) {
    if (v == Complex(-1, 0))
      throw std::invalid_argument("u_from_f: cell value -1 has no logarithm of 1 + f");
    v = (v == Complex(0, 0)) ? Complex(0, 0) : measurable_log(1.0 + v);
  }
  return GridFunction(f.grid_ptr(), std::move(values));
}

SigmaLabel::SigmaLabel(GridFunction f, LatticeVector fiber)
    : f_(std::move(f)), fiber_(std::move(fiber)) {
  if (!lattice_nonneg(fiber_))
    throw std::invalid_argument("SigmaLabel: fiber must be a cone element");
  for (const Complex& v : f_.values())
    if (v == Complex(-1, 0))
      throw std::invalid_argument("SigmaLabel: cell value -1 is excluded");
  if (!supported_in(f_, Region::below(fiber_)))
    throw std::invalid_argument("SigmaLabel: support must lie in L_a = X\\(X+a)");
  integral_ = f_.integral();
  norm_factor_ = std::exp(-integral_);
}

Complex sigma_eval(const SigmaLabel& label, const PointConfiguration& config) {
  Complex product(1, 0);
  for (std::int64_t i = 0; i < config.size(); ++i) {
    const Complex v = label.label().eval(config.point(i));
    if (v != Complex(0, 0)) product *= 1.0 + v;
  }
  return product * label.normalization();
}

Complex sigma_eval_via_log(const SigmaLabel& label, const PointConfiguration& config) {
  const GridFunction u = u_from_f(label.label());
  return exp_functional(config, u) / master_equation_rhs(u);
}

SigmaInnerResult sigma_inner_mc(const SigmaLabel& f, const SigmaLabel& g, std::int64_t n,
                                std::uint64_t seed, int workers) {
  if (!f.grid().same_layout(g.grid()))
    throw std::invalid_argument("sigma_inner_mc: grid mismatch");
  const PoissonSampler sampler = sampler_of(f.grid());
  MCEstimate estimate = mc_mean(
      sampler,
      [&](const PointConfiguration& omega) {
        return sigma_eval(f, omega) * std::conj(sigma_eval(g, omega));
      },
      n, seed ^ kSigmaInnerSalt, workers);
  return SigmaInnerResult{estimate, std::exp(inner(f.label(), g.label()))};
}

SigmaLabel shift_sigma(const SigmaLabel& label, const LatticeVector& c) {
  return SigmaLabel(shift(label.label(), c), lattice_add(c, label.fiber()));
}

SigmaLabel sigma_product(const SigmaLabel& f, const SigmaLabel& g) {
  if (!f.grid().same_layout(g.grid()))
    throw std::invalid_argument("sigma_product: grid mismatch");
  GridFunction h = f.label() + shift(g.label(), f.fiber());
  return SigmaLabel(std::move(h), lattice_add(f.fiber(), g.fiber()));
}

SigmaLabel project_fiber(const SigmaLabel& label, const LatticeVector& a) {
  if (!lattice_nonneg(a) || !lattice_leq(a, label.fiber()))
    throw std::invalid_argument("project_fiber: requires 0 <= a <= fiber");
  return SigmaLabel(restrict_to(label.label(), Region::below(a)), a);
}

std::pair<SigmaLabel, SigmaLabel> decompose(const SigmaLabel& label,
                                            const LatticeVector& b) {
  const LatticeVector& a = label.fiber();
  if (!lattice_nonneg(b) || !lattice_leq(b, a))
    throw std::invalid_argument("decompose: requires 0 <= b <= fiber");
  SigmaLabel left(restrict_to(label.label(), Region::below(b)), b);
  GridFunction band = restrict_to(label.label(), Region::band(b, a));
  SigmaLabel right(adjoint_shift(band, b), lattice_sub(a, b));
  return {std::move(left), std::move(right)};
}

bool ThetaReport::all_pass() const {
  for (const auto& e : gram)
    if (!e.pass) return false;
  for (const auto& e : products)
    if (!e.pass) return false;
  return true;
}

ThetaReport theta_check(const std::vector<SigmaLabel>& corpus, std::int64_t n,
                        std::uint64_t seed, int workers) {
  if (corpus.empty()) throw std::invalid_argument("theta_check: empty corpus");
  for (const SigmaLabel& l : corpus)
    if (l.fiber() != corpus.front().fiber())
      throw std::invalid_argument("theta_check: corpus labels must share one fiber");

  ThetaReport report;
  const LatticeVector& fiber = corpus.front().fiber();
  for (std::size_t j = 0; j < corpus.size(); ++j) {
    for (std::size_t k = j; k < corpus.size(); ++k) {
      const FockVector ej = FockVector::exponential(fiber, corpus[j].label());
      const FockVector ek = FockVector::exponential(fiber, corpus[k].label());
      const Complex fock_value = fock_inner(ej, ek);
      SigmaInnerResult mc = sigma_inner_mc(corpus[j], corpus[k], n,
                                           seed + 0x101 * (j * corpus.size() + k), workers);
      const double z = mc.estimate.std_error > 0.0
                           ? std::abs(mc.estimate.mean - mc.target) / mc.estimate.std_error
                           : (mc.estimate.mean == mc.target ? 0.0 : INFINITY);
      const bool exact_match = std::abs(fock_value - mc.target) <=
                               1e-12 * std::max(1.0, std::abs(mc.target));
      report.gram.push_back({j, k, fock_value, mc.target, mc.estimate,
                             z, exact_match && z <= 4.0});
    }
  }

  for (std::size_t j = 0; j < corpus.size(); ++j) {
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const FockVector fock_prod =
          ccr_product(FockVector::exponential(fiber, corpus[j].label()),
                      FockVector::exponential(fiber, corpus[k].label()));
      const SigmaLabel sigma_prod = sigma_product(corpus[j], corpus[k]);
      const double diff =
          max_abs_diff(fock_prod.terms().front().label, sigma_prod.label());
      report.products.push_back({j, k, diff, diff == 0.0});
    }
  }
  return report;
}

CompoundLabel::CompoundLabel(GridFunction u, const LevyMeasure& nu, int mark_nodes)
    : u_(std::move(u)) {
  auto [c, mask] = split_indicator(u_);
  c_ = c;
  in_B_ = std::move(mask);
  marks_ = nu.discretize(mark_nodes);
  nu_integral_ = nu.omexp_integral(c_);

  std::int64_t b_cells = 0;
  for (char m : in_B_) b_cells += m;
  rho0_B_ = static_cast<double>(b_cells) * u_.grid().cell_measure();

  values_.assign(in_B_.size() * marks_.size(), 0.0);
  for (std::size_t cell = 0; cell < in_B_.size(); ++cell) {
    if (!in_B_[cell]) continue;
    for (std::size_t node = 0; node < marks_.size(); ++node) {
      const double g = std::expm1(-c_ * marks_.nodes[node]);
      if (g == -1.0) {
        std::ostringstream msg;
        msg << "embed_g0: value at mark " << marks_.nodes[node]
            << " reaches -1 (c too large for a valid label)";
        throw std::invalid_argument(msg.str());
      }
      values_[cell * marks_.size() + node] = g;
    }
  }
}

double CompoundLabel::value(std::int64_t space_cell, std::size_t node) const {
  return values_[static_cast<std::size_t>(space_cell) * marks_.size() + node];
}

double CompoundLabel::eval_pathwise(const MarkedConfiguration& config) const {
  double product = 1.0;
  for (std::int64_t i = 0; i < config.size(); ++i) {
    std::int64_t cell = 0;
    if (!u_.grid().locate(config.point(i), cell)) continue;
    if (!in_B_[static_cast<std::size_t>(cell)]) continue;
    product *= 1.0 + std::expm1(-c_ * config.mark(i));
  }
  return product * std::exp(rho0_B_ * nu_integral_);
}

CompoundLabel embed_g0(const GridFunction& u, const LevyMeasure& nu, int mark_nodes) {
  return CompoundLabel(u, nu, mark_nodes);
}

double xi_vector_eval(const GridFunction& u, const MarkedConfiguration& config,
                      const LevyMeasure& nu) {
  auto [c, mask] = split_indicator(u);
  double numerator = 1.0;
  for (std::int64_t i = 0; i < config.size(); ++i) {
    std::int64_t cell = 0;
    if (!u.grid().locate(config.point(i), cell)) continue;
    if (!mask[static_cast<std::size_t>(cell)]) continue;
    numerator *= std::exp(-c * config.mark(i));
  }
  return numerator / compound_laplace_rhs(u, nu);
}

int totality_rank(const MarkGrid& marks, const std::vector<double>& c_values) {
  const std::size_t m = marks.size();
  const std::size_t k = c_values.size();
  if (m == 0) throw std::invalid_argument("totality_rank: empty mark grid");
  if (k < m) throw std::invalid_argument("totality_rank: need at least m test values c");
  for (std::size_t j = 0; j < k; ++j) {
    if (!(c_values[j] > 0.0))
      throw std::invalid_argument("totality_rank: c values must be positive");
    for (std::size_t l = 0; l < j; ++l)
      if (c_values[j] == c_values[l])
        throw std::invalid_argument("totality_rank: duplicate c value");
  }
  for (double w : marks.weights)
    if (!(w > 0.0)) throw std::invalid_argument("totality_rank: weights must be positive");

  Eigen::MatrixXd matrix(k, m);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i)
      matrix(j, i) = -std::expm1(-c_values[j] * marks.nodes[i]) * std::sqrt(marks.weights[i]);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  return rank;
}

}  // namespace ccrlab
