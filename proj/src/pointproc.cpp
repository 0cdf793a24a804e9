#include "ccrlab/pointproc.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace ccrlab {

namespace {

constexpr std::uint64_t kPoissonSalt = 0x65746173616d70ull;  // eta sampler
constexpr std::uint64_t kMarkedSalt = 0x7869736d61726bull;   // xi sampler

}  // namespace

Window::Window(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("Window: bounds must be nonempty and of equal dimension");
  for (int k = 0; k < lower.size(); ++k) {
    if (!(lower[k] < upper[k]))
      throw std::invalid_argument("Window: lower < upper must hold componentwise");
  }
  if (!std::isfinite(volume()) || !(volume() > 0.0))
    throw std::invalid_argument("Window: degenerate volume");
}

Window Window::of_grid(const Grid& grid) {
  if (!grid.axis_aligned())
    throw std::invalid_argument("Window::of_grid: grid chart is not axis-aligned");
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(grid.dim());
  LatticeVector top = grid.cells_per_axis();
  return Window(lo, grid.to_physical(top));
}

double Window::volume() const {
  double v = 1.0;
  for (int k = 0; k < lower.size(); ++k) v *= upper[k] - lower[k];
  return v;
}

bool Window::contains(const Eigen::VectorXd& point) const {
  for (int k = 0; k < lower.size(); ++k)
    if (point[k] < lower[k] || point[k] >= upper[k]) return false;
  return true;
}

PointConfiguration::PointConfiguration(int dim, std::vector<double> coords,
                                       std::uint64_t seed, std::int64_t replicate)
    : dim_(dim), coords_(std::move(coords)), seed_(seed), replicate_(replicate) {
  if (dim_ <= 0 || coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw std::invalid_argument("PointConfiguration: bad coordinate buffer");
}

MarkedConfiguration::MarkedConfiguration(int dim, std::vector<double> coords,
                                         std::vector<double> marks, std::uint64_t seed,
                                         std::int64_t replicate)
    : dim_(dim),
      coords_(std::move(coords)),
      marks_(std::move(marks)),
      seed_(seed),
      replicate_(replicate) {
  if (dim_ <= 0 || coords_.size() != marks_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("MarkedConfiguration: bad buffers");
  for (double r : marks_)
    if (!(r > 0.0)) throw std::invalid_argument("MarkedConfiguration: marks must be positive");
}

PointConfiguration sample_poisson(const Window& window, double intensity_scale,
                                  std::uint64_t seed, std::int64_t replicate) {
  if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale))
    throw std::invalid_argument("sample_poisson: intensity scale must be positive");
  const double mean = intensity_scale * window.volume();
  if (!std::isfinite(mean)) throw std::invalid_argument("sample_poisson: infinite mean");

  Rng rng = Rng::stream(seed, {kPoissonSalt, static_cast<std::uint64_t>(replicate)});
  const std::int64_t count = rng.poisson(mean);
  const int d = window.dim();
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(count) * d);
  for (std::int64_t i = 0; i < count; ++i)
    for (int k = 0; k < d; ++k) coords.push_back(rng.uniform(window.lower[k], window.upper[k]));
  return PointConfiguration(d, std::move(coords), seed, replicate);
}

MarkedConfiguration sample_marked(const Window& window, double rho0_scale,
                                  const LevyMeasure& nu, std::uint64_t seed,
                                  std::int64_t replicate) {
  if (!(rho0_scale > 0.0) || !std::isfinite(rho0_scale))
    throw std::invalid_argument("sample_marked: rho0 scale must be positive");
  const double mass = nu.total_mass();
  if (!std::isfinite(mass) || !(mass > 0.0))
    throw std::invalid_argument("sample_marked: nu must have positive finite total mass");

  Rng rng = Rng::stream(seed, {kMarkedSalt, static_cast<std::uint64_t>(replicate)});
  const std::int64_t count = rng.poisson(rho0_scale * window.volume() * mass);
  const int d = window.dim();
  std::vector<double> coords;
  std::vector<double> marks;
  coords.reserve(static_cast<std::size_t>(count) * d);
  marks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    for (int k = 0; k < d; ++k) coords.push_back(rng.uniform(window.lower[k], window.upper[k]));
    marks.push_back(nu.sample_mark(rng));
  }
  return MarkedConfiguration(d, std::move(coords), std::move(marks), seed, replicate);
}

std::int64_t eta_count(const PointConfiguration& config, const PointPredicate& in_B) {
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < config.size(); ++i)
    if (in_B(config.point(i))) ++count;
  return count;
}

double xi_mass(const MarkedConfiguration& config, const PointPredicate& in_B) {
  double mass = 0.0;
  for (std::int64_t i = 0; i < config.size(); ++i)
    if (in_B(config.point(i))) mass += config.mark(i);
  return mass;
}

Complex exp_functional(const PointConfiguration& config, const GridFunction& u) {
  Complex product(1, 0);
  for (std::int64_t i = 0; i < config.size(); ++i) {
    const Complex value = u.eval(config.point(i));
    if (value != Complex(0, 0)) product *= std::exp(value);
  }
  return product;
}

Complex master_equation_rhs(const GridFunction& u) {
  Complex sum(0, 0);
  for (const Complex& v : u.values())
    if (v != Complex(0, 0)) sum += std::exp(v) - 1.0;
  return std::exp(sum * u.grid().cell_measure());
}

double compound_laplace_rhs(const GridFunction& u, const LevyMeasure& nu) {
  // group cells by exact value so the nu-integral runs once per level
  std::map<double, std::int64_t> levels;
  for (const Complex& v : u.values()) {
    if (v.imag() != 0.0 || v.real() < 0.0)
      throw std::invalid_argument("compound_laplace_rhs: u must be real and nonnegative");
    if (v.real() > 0.0) ++levels[v.real()];
  }
  double exponent = 0.0;
  for (const auto& [t, cells] : levels)
    exponent += static_cast<double>(cells) * u.grid().cell_measure() * nu.omexp_integral(t);
  return std::exp(-exponent);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Complex pairwise_sum(std::span<const Complex> values) {
  if (values.size() <= 8) {
    Complex sum(0, 0);
    for (const Complex& v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

MCEstimate reduce_estimate(const std::vector<Complex>& values) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  const Complex mean = pairwise_sum(std::span<const Complex>(values)) / static_cast<double>(n);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i] - mean);
  const double ss = pairwise_sum(std::span<const double>(sq));
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return MCEstimate{mean, sd / std::sqrt(static_cast<double>(n)), n};
}

}  // namespace detail

}  // namespace ccrlab
