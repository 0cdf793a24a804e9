#include "ccrlab/suites.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "ccrlab/fock.hpp"
#include "ccrlab/prodsys.hpp"

namespace ccrlab {

namespace {

// ---------------------------------------------------------------------------
// row collection
// ---------------------------------------------------------------------------

class SuiteBuilder {
 public:
  SuiteBuilder(std::string suite, SuiteParams params, std::string filter)
      : suite_(std::move(suite)), params_(std::move(params)), filter_(std::move(filter)) {
    start_ = std::chrono::steady_clock::now();
  }

  const SuiteParams& params() const { return params_; }
  std::string full_id(const std::string& local) const { return suite_ + "/" + local; }
  bool wants(const std::string& local) const {
    return filter_.empty() || full_id(local) == filter_;
  }
  std::uint64_t seed_for(const std::string& local) const {
    return params_.seed ^ key_of(full_id(local).c_str());
  }

  void exact(const std::string& local, const std::function<std::pair<Complex, Complex>()>& eval) {
    if (!wants(local)) return;
    auto [value, target] = eval();
    report_.rows.push_back(exact_row(full_id(local), value, target));
  }

  void indicator(const std::string& local, const std::function<bool()>& eval) {
    if (!wants(local)) return;
    report_.rows.push_back(indicator_row(full_id(local), eval()));
  }

  void mc(const std::string& local,
          const std::function<std::pair<MCEstimate, Complex>(std::uint64_t)>& eval) {
    if (!wants(local)) return;
    auto [estimate, target] = eval(seed_for(local));
    report_.rows.push_back(mc_row(full_id(local), estimate, target));
  }

  SuiteReport finish() {
    report_.suite = suite_;
    report_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  std::string suite_;
  SuiteParams params_;
  std::string filter_;
  SuiteReport report_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// corpora
// ---------------------------------------------------------------------------

LatticeVector frac_corner(const Grid& grid, double t) {
  LatticeVector corner(grid.dim());
  for (int k = 0; k < grid.dim(); ++k)
    corner[k] = std::llround(t * static_cast<double>(grid.axis_cells(k)));
  return corner;
}

GridFunction box_fn(const GridPtr& grid, double f0, double f1, Complex value) {
  return GridFunction::indicator(grid, frac_corner(*grid, f0), frac_corner(*grid, f1), value);
}

GridFunction oscillation_fn(const GridPtr& grid, double f0, double f1, double amp,
                            double freq) {
  GridFunction f = GridFunction::zero(grid);
  const LatticeVector from = frac_corner(*grid, f0);
  const LatticeVector to = frac_corner(*grid, f1);
  int counter = 0;
  for (std::int64_t c = 0; c < grid->total_cells(); ++c) {
    const LatticeVector coords = grid->coords_of(c);
    bool inside = true;
    for (int k = 0; k < grid->dim(); ++k)
      inside = inside && coords[k] >= from[k] && coords[k] < to[k];
    if (!inside) continue;
    ++counter;
    f.at(c) = amp * std::exp(Complex(0, freq * counter));
  }
  return f;
}

/// Named labels supported in L_a for a at the given fraction of each axis.
std::vector<std::pair<std::string, SigmaLabel>> label_corpus(const GridPtr& grid,
                                                             double fiber_frac) {
  const double f = fiber_frac;
  const LatticeVector fiber = frac_corner(*grid, f);
  std::vector<std::pair<std::string, SigmaLabel>> corpus;
  auto add = [&](const std::string& name, GridFunction fn) {
    corpus.emplace_back(name, SigmaLabel(std::move(fn), fiber));
  };
  add("zero", GridFunction::zero(grid));
  add("ind-b", box_fn(grid, 0.0, 0.5 * f, Complex(1, 0)));
  add("half", box_fn(grid, 0.0, f, Complex(0.5, 0)));
  add("neg", box_fn(grid, 0.25 * f, 0.75 * f, Complex(-0.5, 0)));
  add("cplx", box_fn(grid, 0.125 * f, 0.875 * f, Complex(0.3, 0.4)));
  add("imhigh", box_fn(grid, 0.5 * f, f, Complex(0, 0.8)));
  add("osc", oscillation_fn(grid, 0.0, f, 0.4, 0.7));
  add("expm1", box_fn(grid, 0.0, 0.5 * f, Complex(std::numbers::e - 1.0, 0)));
  return corpus;
}

const SigmaLabel& find_label(const std::vector<std::pair<std::string, SigmaLabel>>& corpus,
                             const std::string& name) {
  for (const auto& [key, label] : corpus)
    if (key == name) return label;
  throw ConfigError("unknown label '" + name + "' in built-in corpus");
}

/// Simple test functions u for the master equation, covering real, complex
/// and e^u - 1 < 0 cases.
std::vector<std::pair<std::string, GridFunction>> master_corpus(const GridPtr& grid) {
  std::vector<std::pair<std::string, GridFunction>> corpus;
  corpus.emplace_back("u-ind", box_fn(grid, 0.0, 0.25, Complex(1, 0)));
  corpus.emplace_back("u-ipi", box_fn(grid, 0.0, 0.25, Complex(0, std::numbers::pi)));
  corpus.emplace_back("u-neg", box_fn(grid, 0.0, 0.5, Complex(-1, 0)));
  corpus.emplace_back("u-log2", box_fn(grid, 0.0, 0.125, Complex(std::log(2.0), 0)));
  corpus.emplace_back("u-cplx", box_fn(grid, 0.125, 0.5625, Complex(0.5, -0.3)));
  corpus.emplace_back("u-two-level", box_fn(grid, 0.0, 0.25, Complex(0.7, 0)) +
                                         box_fn(grid, 0.5, 0.75, Complex(-0.4, 0.2)));
  corpus.emplace_back("u-deep-neg", box_fn(grid, 0.0, 1.0, Complex(-3, 0)));
  corpus.emplace_back("u-imag2", box_fn(grid, 0.3125, 0.625, Complex(0, 2)));
  corpus.emplace_back("u-broad", box_fn(grid, 0.0, 1.0, Complex(0.3, 0)));
  corpus.emplace_back("u-mix", box_fn(grid, 0.375, 0.8125, Complex(-0.2, 1.1)));
  return corpus;
}

GridFunction build_label_from_spec(const GridPtr& grid, const LabelSpec& spec) {
  if (spec.preset == "cells") {
    GridFunction f = GridFunction::zero(grid);
    for (const auto& [cell, re, im] : spec.cells) {
      if (cell < 0 || cell >= grid->total_cells())
        throw ConfigError("label cell index out of range");
      f.at(cell) = Complex(re, im);
    }
    return f;
  }
  if (spec.preset == "indicator")
    return GridFunction::indicator(grid, spec.from, spec.to, spec.value);
  // oscillation over an explicit box
  GridFunction f = GridFunction::zero(grid);
  int counter = 0;
  for (std::int64_t c = 0; c < grid->total_cells(); ++c) {
    const LatticeVector coords = grid->coords_of(c);
    bool inside = true;
    for (int k = 0; k < grid->dim(); ++k)
      inside = inside && coords[k] >= spec.from[k] && coords[k] < spec.to[k];
    if (!inside) continue;
    ++counter;
    f.at(c) = spec.value * std::exp(Complex(0, spec.frequency * counter));
  }
  return f;
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

PoissonSampler sampler_of(const Grid& grid) {
  return PoissonSampler{Window::of_grid(grid), grid.intensity_scale()};
}

void require_sampling_grid(const ExperimentConfig& cfg, const std::string& suite) {
  if (!cfg.grid->axis_aligned())
    throw ConfigError("suite '" + suite +
                      "' samples point processes and needs an axis-aligned (orthant) grid");
}

GridFunction random_fn(const GridPtr& grid, double support_frac, std::uint64_t key) {
  Rng rng = Rng::stream(0xF00DF00Dull, {key});
  GridFunction f = GridFunction::zero(grid);
  const LatticeVector to = frac_corner(*grid, support_frac);
  for (std::int64_t c = 0; c < grid->total_cells(); ++c) {
    const LatticeVector coords = grid->coords_of(c);
    bool inside = true;
    for (int k = 0; k < grid->dim(); ++k) inside = inside && coords[k] < to[k];
    if (inside) f.at(c) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return f;
}

double max_relative_gap(Complex lhs, Complex rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

/// Max coefficient gap between two Fock vectors with identical label sets;
/// infinity when the label sets differ.
double fock_vector_gap(const FockVector& u, const FockVector& v) {
  if (u.terms().size() != v.terms().size()) return INFINITY;
  double worst = 0.0;
  for (const auto& [c, label] : u.terms()) {
    bool found = false;
    for (const auto& [d, other] : v.terms()) {
      if (label == other) {
        worst = std::max(worst, std::abs(c - d));
        found = true;
        break;
      }
    }
    if (!found) return INFINITY;
  }
  return worst;
}

struct Box {
  Eigen::VectorXd lo, hi;
  bool contains(Eigen::Map<const Eigen::VectorXd> p) const {
    for (int k = 0; k < lo.size(); ++k)
      if (p[k] < lo[k] || p[k] >= hi[k]) return false;
    return true;
  }
};

Box frac_box(const Grid& grid, double f0, double f1) {
  return Box{grid.to_physical(frac_corner(grid, f0)), grid.to_physical(frac_corner(grid, f1))};
}

double box_volume(const Box& box) {
  double v = 1.0;
  for (int k = 0; k < box.lo.size(); ++k) v *= box.hi[k] - box.lo[k];
  return v;
}

// ---------------------------------------------------------------------------
// individual suites
// ---------------------------------------------------------------------------

void suite_master_equation(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "master-equation");
  const PoissonSampler sampler = sampler_of(*cfg.grid);
  for (const auto& [name, u] : master_corpus(cfg.grid)) {
    b.mc(name, [&](std::uint64_t seed) {
      MCEstimate est = mc_mean(
          sampler,
          [&u](const PointConfiguration& omega) { return exp_functional(omega, u); },
          b.params().n, seed, b.params().workers);
      return std::make_pair(est, master_equation_rhs(u));
    });
  }
}

void suite_stationarity(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "stationarity");
  const PoissonSampler sampler = sampler_of(*cfg.grid);
  const Box base = frac_box(*cfg.grid, 0.0, 0.25);
  const std::vector<double> shifts = {0.25, 0.5};
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    Box moved = base;
    const Eigen::VectorXd offset =
        cfg.grid->to_physical(frac_corner(*cfg.grid, shifts[s]));
    moved.lo += offset;
    moved.hi += offset;
    const std::string tag = "x" + std::to_string(s + 1);
    b.mc("mean-diff/" + tag, [&, moved](std::uint64_t seed) {
      MCEstimate est = mc_mean(
          sampler,
          [&](const PointConfiguration& omega) {
            const double n1 = static_cast<double>(
                eta_count(omega, [&](auto p) { return base.contains(p); }));
            const double n2 = static_cast<double>(
                eta_count(omega, [&](auto p) { return moved.contains(p); }));
            return Complex(n1 - n2, 0);
          },
          b.params().n, seed, b.params().workers);
      return std::make_pair(est, Complex(0, 0));
    });
    b.mc("m2-diff/" + tag, [&, moved](std::uint64_t seed) {
      MCEstimate est = mc_mean(
          sampler,
          [&](const PointConfiguration& omega) {
            const double n1 = static_cast<double>(
                eta_count(omega, [&](auto p) { return base.contains(p); }));
            const double n2 = static_cast<double>(
                eta_count(omega, [&](auto p) { return moved.contains(p); }));
            return Complex(n1 * n1 - n2 * n2, 0);
          },
          b.params().n, seed, b.params().workers);
      return std::make_pair(est, Complex(0, 0));
    });
  }
}

void suite_independence(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "independence");
  const PoissonSampler sampler = sampler_of(*cfg.grid);
  const double scale = cfg.grid->intensity_scale();
  const std::vector<std::pair<Box, Box>> pairs = {
      {frac_box(*cfg.grid, 0.0, 0.25), frac_box(*cfg.grid, 0.5, 0.75)},
      {frac_box(*cfg.grid, 0.0, 0.5), frac_box(*cfg.grid, 0.75, 1.0)},
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Box& b1 = pairs[i].first;
    const Box& b2 = pairs[i].second;
    const double mean1 = scale * box_volume(b1);
    const double mean2 = scale * box_volume(b2);
    b.mc("cov/" + std::to_string(i + 1), [&, mean1, mean2](std::uint64_t seed) {
      MCEstimate est = mc_mean(
          sampler,
          [&](const PointConfiguration& omega) {
            const double n1 = static_cast<double>(
                eta_count(omega, [&](auto p) { return b1.contains(p); }));
            const double n2 = static_cast<double>(
                eta_count(omega, [&](auto p) { return b2.contains(p); }));
            return Complex((n1 - mean1) * (n2 - mean2), 0);
          },
          b.params().n, seed, b.params().workers);
      return std::make_pair(est, Complex(0, 0));
    });
  }
  const Box& b1 = pairs[0].first;
  const double mean1 = scale * box_volume(b1);
  b.mc("var-matches-mean", [&, mean1](std::uint64_t seed) {
    MCEstimate est = mc_mean(
        sampler,
        [&](const PointConfiguration& omega) {
          const double c = static_cast<double>(
              eta_count(omega, [&](auto p) { return b1.contains(p); }));
          return Complex((c - mean1) * (c - mean1) - mean1, 0);
        },
        b.params().n, seed, b.params().workers);
    return std::make_pair(est, Complex(0, 0));
  });
}

void suite_shift_laws(const ExperimentConfig& cfg, SuiteBuilder& b) {
  struct Scenario {
    std::string name;
    GridPtr grid;
  };
  std::vector<Scenario> scenarios;
  scenarios.push_back({"config", cfg.grid});
  scenarios.push_back({"orthant2", Grid::make(PolyhedralCone::orthant(2), {8, 8}, 0.5)});
  scenarios.push_back({"diagonal2", Grid::make(PolyhedralCone::diagonal2(), {8, 8}, 0.5)});

  for (const Scenario& sc : scenarios) {
    const GridPtr& grid = sc.grid;
    const GridFunction f = random_fn(grid, 0.25, key_of(sc.name.c_str()));
    const GridFunction g = random_fn(grid, 0.25, key_of(sc.name.c_str()) + 1);
    LatticeVector a(grid->dim()), bb(grid->dim());
    for (int k = 0; k < grid->dim(); ++k) {
      a[k] = std::max<std::int64_t>(1, grid->axis_cells(k) / 8);
      bb[k] = std::max<std::int64_t>(1, grid->axis_cells(k) / 4);
    }
    b.exact(sc.name + "/semigroup", [&] {
      const double diff = max_abs_diff(shift(shift(f, a), bb), shift(f, lattice_add(a, bb)));
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });
    b.exact(sc.name + "/isometry", [&] {
      return std::make_pair(inner(shift(f, a), shift(g, a)), inner(f, g));
    });
    b.exact(sc.name + "/norm", [&] {
      return std::make_pair(Complex(l2_norm(shift(f, a)), 0), Complex(l2_norm(f), 0));
    });
    b.exact(sc.name + "/range", [&] {
      const double leak = l2_norm(restrict_to(shift(f, a), Region::below(a)));
      return std::make_pair(Complex(leak, 0), Complex(0, 0));
    });
    b.exact(sc.name + "/adjoint-inverse", [&] {
      const double diff = max_abs_diff(adjoint_shift(shift(f, a), a), f);
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });
    b.exact(sc.name + "/adjoint-range", [&] {
      const double diff =
          max_abs_diff(shift(adjoint_shift(f, a), a), restrict_to(f, Region::above(a)));
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });
    b.exact(sc.name + "/adjoint-pairing", [&] {
      return std::make_pair(inner(adjoint_shift(f, a), g), inner(f, shift(g, a)));
    });
    b.exact(sc.name + "/restrict-partition", [&] {
      const LatticeVector zero(grid->dim(), 0);
      const GridFunction sum =
          restrict_to(f, Region::band(zero, a)) + restrict_to(f, Region::band(a, bb));
      const double diff = max_abs_diff(sum, restrict_to(f, Region::band(zero, bb)));
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });
  }
}

void suite_fock_laws(const ExperimentConfig& cfg, SuiteBuilder& b) {
  const GridPtr& grid = cfg.grid;
  auto gram_corpus = label_corpus(grid, 0.5);
  const LatticeVector gram_fiber = frac_corner(*grid, 0.5);

  auto min_gram_eig = [&](std::size_t count) {
    Eigen::MatrixXcd gram(count, count);
    for (std::size_t j = 0; j < count; ++j)
      for (std::size_t k = 0; k < count; ++k)
        gram(j, k) = fock_inner(FockVector::exponential(gram_fiber, gram_corpus[j].second.label()),
                                FockVector::exponential(gram_fiber, gram_corpus[k].second.label()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
    return solver.eigenvalues().minCoeff();
  };
  b.indicator("gram-pd-4", [&] { return min_gram_eig(4) > 0.0; });
  b.indicator("gram-pd-8", [&] { return min_gram_eig(8) > 0.0; });

  // product multiplicativity: <e(f)e(g), e(f')e(g')> = <e(f),e(f')><e(g),e(g')>
  auto prod_corpus = label_corpus(grid, 0.25);
  const LatticeVector fiber = frac_corner(*grid, 0.25);
  auto expv = [&](const std::string& name) {
    return FockVector::exponential(fiber, find_label(prod_corpus, name).label());
  };
  const std::vector<std::array<std::string, 4>> quads = {
      {"ind-b", "half", "cplx", "imhigh"},
      {"osc", "neg", "half", "ind-b"},
      {"cplx", "cplx", "imhigh", "osc"},
  };
  for (std::size_t q = 0; q < quads.size(); ++q) {
    b.exact("multiplicative/" + std::to_string(q + 1), [&] {
      const Complex lhs = fock_inner(ccr_product(expv(quads[q][0]), expv(quads[q][1])),
                                     ccr_product(expv(quads[q][2]), expv(quads[q][3])));
      const Complex rhs = fock_inner(expv(quads[q][0]), expv(quads[q][2])) *
                          fock_inner(expv(quads[q][1]), expv(quads[q][3]));
      return std::make_pair(lhs, rhs);
    });
  }

  // associativity on exponential-combination vectors
  b.exact("associativity", [&] {
    FockVector u(fiber, {{Complex(1, 0), find_label(prod_corpus, "ind-b").label()},
                         {Complex(0.5, -0.2), find_label(prod_corpus, "cplx").label()}});
    FockVector v(fiber, {{Complex(1, 0), find_label(prod_corpus, "half").label()},
                         {Complex(0, -0.7), find_label(prod_corpus, "imhigh").label()}});
    FockVector w(fiber, {{Complex(1, 0), find_label(prod_corpus, "osc").label()},
                         {Complex(0.3, 0), find_label(prod_corpus, "zero").label()}});
    const double gap = fock_vector_gap(ccr_product(ccr_product(u, v), w),
                                       ccr_product(u, ccr_product(v, w)));
    return std::make_pair(Complex(gap, 0), Complex(0, 0));
  });

  // second quantization preserves inner products; the vacuum is fixed
  b.exact("sq-preserves-inner", [&] {
    const FockVector u = expv("cplx");
    const FockVector v = expv("osc");
    return std::make_pair(fock_inner(second_quantize(u, fiber), second_quantize(v, fiber)),
                          fock_inner(u, v));
  });
  b.exact("sq-vacuum", [&] {
    const FockVector vac = FockVector::vacuum(grid, fiber);
    const double diff = fock_vector_gap(
        second_quantize(vac, fiber),
        FockVector::vacuum(grid, lattice_add(fiber, fiber)));
    return std::make_pair(Complex(diff, 0), Complex(0, 0));
  });
}

void suite_sigma_inner(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "sigma-inner");
  std::vector<std::pair<std::string, std::pair<SigmaLabel, SigmaLabel>>> pairs;
  if (b.params().corpus == "default") {
    auto corpus = label_corpus(cfg.grid, 0.5);
    const std::vector<std::pair<std::string, std::string>> names = {
        {"zero", "zero"},     {"zero", "ind-b"},  {"ind-b", "ind-b"},
        {"ind-b", "imhigh"},  {"ind-b", "half"},  {"half", "half"},
        {"neg", "half"},      {"neg", "cplx"},    {"cplx", "cplx"},
        {"cplx", "osc"},      {"osc", "osc"},     {"imhigh", "imhigh"},
        {"imhigh", "osc"},    {"expm1", "ind-b"}, {"expm1", "expm1"},
        {"neg", "imhigh"},
    };
    for (const auto& [fn, gn] : names)
      pairs.emplace_back(fn + "." + gn,
                         std::make_pair(find_label(corpus, fn), find_label(corpus, gn)));
  } else {
    // comma-separated label names from the config's labels block
    std::vector<std::string> names;
    std::stringstream ss(b.params().corpus);
    for (std::string item; std::getline(ss, item, ',');) names.push_back(item);
    std::vector<std::pair<std::string, SigmaLabel>> labels;
    for (const std::string& name : names) {
      auto it = cfg.labels.find(name);
      if (it == cfg.labels.end())
        throw ConfigError("sigma-inner corpus references undefined label '" + name + "'");
      labels.emplace_back(name, SigmaLabel(build_label_from_spec(cfg.grid, it->second),
                                           it->second.fiber));
    }
    for (std::size_t j = 0; j < labels.size(); ++j)
      for (std::size_t k = j; k < labels.size(); ++k)
        pairs.emplace_back(labels[j].first + "." + labels[k].first,
                           std::make_pair(labels[j].second, labels[k].second));
  }

  for (const auto& [name, fg] : pairs) {
    b.mc(name, [&](std::uint64_t seed) {
      SigmaInnerResult r =
          sigma_inner_mc(fg.first, fg.second, b.params().n, seed, b.params().workers);
      return std::make_pair(r.estimate, r.target);
    });
  }
}

void suite_product_law(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "product-law");
  struct Scenario {
    std::string name;
    GridPtr grid;
  };
  std::vector<Scenario> scenarios = {{"config", cfg.grid}};
  if (cfg.grid->dim() == 1)
    scenarios.push_back({"orthant2", Grid::make(PolyhedralCone::orthant(2), {8, 8}, 0.5)});

  const std::vector<std::pair<std::string, std::string>> pair_names = {
      {"ind-b", "half"}, {"cplx", "imhigh"},  {"osc", "neg"},
      {"expm1", "cplx"}, {"half", "osc"},     {"ind-b", "ind-b"},
  };

  for (const Scenario& sc : scenarios) {
    auto corpus = label_corpus(sc.grid, 0.25);
    const PoissonSampler sampler = sampler_of(*sc.grid);

    for (const auto& [fn, gn] : pair_names) {
      const SigmaLabel& f = find_label(corpus, fn);
      const SigmaLabel& g = find_label(corpus, gn);
      const std::string tag = sc.name + "/" + fn + "." + gn;
      b.exact("pathwise/" + tag, [&] {
        const SigmaLabel h = sigma_product(f, g);
        const SigmaLabel shifted_g = shift_sigma(g, f.fiber());
        double worst = 0.0;
        const std::uint64_t seed = b.seed_for("pathwise/" + tag);
        for (std::int64_t r = 0; r < 100; ++r) {
          const PointConfiguration omega = sampler.sample(seed, r);
          const Complex lhs = sigma_eval(f, omega) * sigma_eval(shifted_g, omega);
          const Complex rhs = sigma_eval(h, omega);
          worst = std::max(worst, max_relative_gap(lhs, rhs));
        }
        return std::make_pair(Complex(worst, 0), Complex(0, 0));
      });
    }

    b.exact("unit-right/" + sc.name, [&] {
      const SigmaLabel& f = find_label(corpus, "cplx");
      const SigmaLabel& zero = find_label(corpus, "zero");
      const double diff = max_abs_diff(sigma_product(f, zero).label(), f.label());
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });
    b.exact("unit-left/" + sc.name, [&] {
      const SigmaLabel& g = find_label(corpus, "cplx");
      const SigmaLabel& zero = find_label(corpus, "zero");
      const double diff = max_abs_diff(sigma_product(zero, g).label(),
                                       shift(g.label(), zero.fiber()));
      return std::make_pair(Complex(diff, 0), Complex(0, 0));
    });

    const std::vector<std::array<std::string, 3>> triples = {
        {"ind-b", "half", "cplx"}, {"osc", "neg", "imhigh"}};
    for (std::size_t t = 0; t < triples.size(); ++t) {
      b.exact("associativity/" + sc.name + "/" + std::to_string(t + 1), [&] {
        const SigmaLabel& x = find_label(corpus, triples[t][0]);
        const SigmaLabel& y = find_label(corpus, triples[t][1]);
        const SigmaLabel& z = find_label(corpus, triples[t][2]);
        const double diff = max_abs_diff(sigma_product(sigma_product(x, y), z).label(),
                                         sigma_product(x, sigma_product(y, z)).label());
        return std::make_pair(Complex(diff, 0), Complex(0, 0));
      });
    }
  }
}

void suite_projection(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "projection");
  auto corpus = label_corpus(cfg.grid, 0.5);
  auto inner_corpus = label_corpus(cfg.grid, 0.25);
  const PoissonSampler sampler = sampler_of(*cfg.grid);

  const std::vector<std::string> f_names = {"half", "cplx", "osc", "neg", "expm1"};
  const std::vector<double> a_fracs = {0.25, 0.375};
  int triple = 0;
  for (const std::string& fn : f_names) {
    for (double a_frac : a_fracs) {
      ++triple;
      const SigmaLabel& f = find_label(corpus, fn);
      const LatticeVector a = frac_corner(*cfg.grid, a_frac);
      const SigmaLabel& g =
          find_label(inner_corpus, triple % 2 == 0 ? "ind-b" : "cplx");
      const std::string tag = std::to_string(triple);

      b.exact("target/" + tag, [&] {
        const SigmaLabel qf = project_fiber(f, a);
        return std::make_pair(std::exp(inner(qf.label(), g.label())),
                              std::exp(inner(f.label(), g.label())));
      });
      b.mc("mc-paired/" + tag, [&](std::uint64_t seed) {
        const SigmaLabel qf = project_fiber(f, a);
        MCEstimate est = mc_mean(
            sampler,
            [&](const PointConfiguration& omega) {
              return (sigma_eval(qf, omega) - sigma_eval(f, omega)) *
                     std::conj(sigma_eval(g, omega));
            },
            b.params().n, seed, b.params().workers);
        return std::make_pair(est, Complex(0, 0));
      });
      if (triple % 3 == 1) {
        b.mc("mc-direct/" + tag, [&](std::uint64_t seed) {
          const SigmaLabel qf = project_fiber(f, a);
          SigmaInnerResult r = sigma_inner_mc(qf, g, b.params().n, seed, b.params().workers);
          return std::make_pair(r.estimate, r.target);
        });
      }
    }
  }

  // a = 0 projects onto the unit: the label collapses to 0 and E(Sigma_f) = 1
  b.exact("a0-label", [&] {
    const SigmaLabel& f = find_label(corpus, "cplx");
    const SigmaLabel q0 = project_fiber(f, LatticeVector(cfg.grid->dim(), 0));
    return std::make_pair(Complex(l2_norm(q0.label()), 0), Complex(0, 0));
  });
  b.mc("unit-mean", [&](std::uint64_t seed) {
    const SigmaLabel& f = find_label(corpus, "cplx");
    MCEstimate est = mc_mean(
        sampler, [&](const PointConfiguration& omega) { return sigma_eval(f, omega); },
        b.params().n, seed, b.params().workers);
    return std::make_pair(est, Complex(1, 0));
  });
}

void suite_decompose(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "decompose");
  auto corpus = label_corpus(cfg.grid, 0.5);
  const PoissonSampler sampler = sampler_of(*cfg.grid);
  const std::vector<std::string> names = {"half", "cplx", "osc", "neg", "expm1"};

  // every lattice b <= a (capped to keep high-dimensional grids tractable)
  std::vector<LatticeVector> splits;
  {
    const LatticeVector a = frac_corner(*cfg.grid, 0.5);
    LatticeVector cursor(a.size(), 0);
    for (;;) {
      splits.push_back(cursor);
      int axis = static_cast<int>(a.size()) - 1;
      while (axis >= 0) {
        if (++cursor[axis] <= a[axis]) break;
        cursor[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
      if (splits.size() >= 128) break;
    }
  }

  for (const std::string& name : names) {
    const SigmaLabel& f = find_label(corpus, name);
    b.exact("roundtrip/" + name, [&] {
      double worst = 0.0;
      for (const LatticeVector& split : splits) {
        auto [left, right] = decompose(f, split);
        worst = std::max(worst, max_abs_diff(sigma_product(left, right).label(), f.label()));
      }
      return std::make_pair(Complex(worst, 0), Complex(0, 0));
    });
  }

  b.exact("pathwise/cplx", [&] {
    const SigmaLabel& f = find_label(corpus, "cplx");
    const LatticeVector split = frac_corner(*cfg.grid, 0.25);
    auto [left, right] = decompose(f, split);
    const SigmaLabel shifted_right = shift_sigma(right, split);
    double worst = 0.0;
    const std::uint64_t seed = b.seed_for("pathwise/cplx");
    for (std::int64_t r = 0; r < 100; ++r) {
      const PointConfiguration omega = sampler.sample(seed, r);
      const Complex lhs = sigma_eval(left, omega) * sigma_eval(shifted_right, omega);
      worst = std::max(worst, max_relative_gap(lhs, sigma_eval(f, omega)));
    }
    return std::make_pair(Complex(worst, 0), Complex(0, 0));
  });
}

void suite_theta_iso(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "theta-iso");
  auto corpus = label_corpus(cfg.grid, 0.5);
  std::vector<SigmaLabel> labels;
  for (const std::string& name : {"zero", "ind-b", "cplx", "osc"})
    labels.push_back(find_label(corpus, name));

  // run the full check once, then report entrywise
  if (b.wants("all")) {
    const ThetaReport report =
        theta_check(labels, b.params().n, b.seed_for("all"), b.params().workers);
    b.indicator("all", [&] { return report.all_pass(); });
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    for (std::size_t k = j; k < labels.size(); ++k) {
      const std::string tag = std::to_string(j) + "-" + std::to_string(k);
      b.exact("gram-exact/" + tag, [&] {
        const Complex fock = fock_inner(
            FockVector::exponential(labels[j].fiber(), labels[j].label()),
            FockVector::exponential(labels[k].fiber(), labels[k].label()));
        return std::make_pair(fock, std::exp(inner(labels[j].label(), labels[k].label())));
      });
      b.mc("gram-mc/" + tag, [&](std::uint64_t seed) {
        SigmaInnerResult r =
            sigma_inner_mc(labels[j], labels[k], b.params().n, seed, b.params().workers);
        return std::make_pair(r.estimate, r.target);
      });
    }
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const std::string tag = std::to_string(j) + "-" + std::to_string(k);
      b.exact("intertwine/" + tag, [&] {
        const FockVector fock_prod = ccr_product(
            FockVector::exponential(labels[j].fiber(), labels[j].label()),
            FockVector::exponential(labels[k].fiber(), labels[k].label()));
        const double diff = max_abs_diff(fock_prod.terms().front().label,
                                         sigma_product(labels[j], labels[k]).label());
        return std::make_pair(Complex(diff, 0), Complex(0, 0));
      });
    }
  }
}

void suite_compound_laplace(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "compound-laplace");
  if (cfg.levy.empty()) throw ConfigError("compound-laplace: no Levy measures configured");
  const GridPtr& grid = cfg.grid;
  const Window window = Window::of_grid(*grid);
  const std::vector<double> ts = {0.5, 1.0, 2.0};

  for (const auto& [name, nu] : cfg.levy) {
    b.indicator("levy-finite/" + name, [&] {
      const double value = nu.levy_condition_integral();
      return std::isfinite(value) && value > 0.0;
    });
    b.indicator("cutoff-reported/" + name, [&] {
      return std::isfinite(nu.truncated_small_jump_mass());
    });
    const MarkedSampler sampler{window, grid->intensity_scale(), nu};
    for (double t : ts) {
      std::ostringstream tag;
      tag << "laplace/" << name << "/t" << t;
      b.mc(tag.str(), [&, t](std::uint64_t seed) {
        const GridFunction u = box_fn(grid, 0.0, 0.25, Complex(t, 0));
        std::vector<char> mask(static_cast<std::size_t>(grid->total_cells()), 0);
        for (std::int64_t c = 0; c < grid->total_cells(); ++c)
          if (u.value(c) != Complex(0, 0)) mask[static_cast<std::size_t>(c)] = 1;
        MCEstimate est = mc_mean(
            sampler,
            [&](const MarkedConfiguration& omega) {
              double xi_B = 0.0;
              for (std::int64_t i = 0; i < omega.size(); ++i) {
                std::int64_t cell = 0;
                if (grid->locate(omega.point(i), cell) &&
                    mask[static_cast<std::size_t>(cell)])
                  xi_B += omega.mark(i);
              }
              return Complex(std::exp(-t * xi_B), 0);
            },
            b.params().n, seed, b.params().workers);
        return std::make_pair(est, Complex(compound_laplace_rhs(u, nu), 0));
      });
    }
  }
}

void suite_compound_g0(const ExperimentConfig& cfg, SuiteBuilder& b) {
  require_sampling_grid(cfg, "compound-g0");
  const GridPtr& grid = cfg.grid;
  const Window window = Window::of_grid(*grid);

  // c ranges keep c * mark small enough that 1 + g0 stays far from the
  // cancellation regime, preserving the 1e-12 pathwise budget
  struct Combo {
    std::string levy;
    double c;
  };
  const std::vector<Combo> combos = {
      {"atom1", 1.0}, {"atom1", 2.0},  {"atom3", 0.5},  {"atom3", 2.0},
      {"exp1", 0.25}, {"exp1", 0.5},   {"tgamma", 0.25}, {"tgamma", 0.5},
  };

  for (const Combo& combo : combos) {
    const LevyMeasure& nu = cfg.levy_by_name(combo.levy);
    std::ostringstream tag_stream;
    tag_stream << combo.levy << "/c" << combo.c;
    const std::string tag = tag_stream.str();
    const GridFunction u = box_fn(grid, 0.0, 0.25, Complex(combo.c, 0));

    b.indicator("validity/" + tag, [&] {
      const CompoundLabel label = embed_g0(u, nu, 16);
      for (std::int64_t cell = 0; cell < grid->total_cells(); ++cell)
        for (std::size_t node = 0; node < label.marks().size(); ++node)
          if (label.value(cell, node) == -1.0) return false;
      return true;
    });

    b.exact("node-value/" + tag, [&] {
      const CompoundLabel label = embed_g0(u, nu, 16);
      std::int64_t first_b = -1;
      for (std::int64_t cell = 0; cell < grid->total_cells(); ++cell)
        if (u.value(cell) != Complex(0, 0)) {
          first_b = cell;
          break;
        }
      const double stored = label.value(first_b, 0);
      const double formula = -(1.0 - std::exp(-combo.c * label.marks().nodes[0]));
      return std::make_pair(Complex(stored, 0), Complex(formula, 0));
    });

    b.exact("pathwise/" + tag, [&] {
      const CompoundLabel label = embed_g0(u, nu, 16);
      const MarkedSampler sampler{window, grid->intensity_scale(), nu};
      double worst = 0.0;
      const std::uint64_t seed = b.seed_for("pathwise/" + tag);
      for (std::int64_t r = 0; r < 100; ++r) {
        const MarkedConfiguration omega = sampler.sample(seed, r);
        const double lhs = label.eval_pathwise(omega);
        const double rhs = xi_vector_eval(u, omega, nu);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
      }
      return std::make_pair(Complex(worst, 0), Complex(0, 0));
    });
  }
}

void suite_totality(const ExperimentConfig& cfg, SuiteBuilder& b) {
  auto geometric_cs = [](std::size_t k) {
    std::vector<double> cs(k);
    for (std::size_t j = 0; j < k; ++j)
      cs[j] = 0.1 * std::pow(200.0, static_cast<double>(j) / static_cast<double>(k - 1));
    return cs;
  };
  b.exact("rank-m1", [&] {
    const MarkGrid marks = LevyMeasure::atomic({{1.0, 1.0}}).discretize(1);
    return std::make_pair(Complex(totality_rank(marks, geometric_cs(5)), 0), Complex(1, 0));
  });
  const LevyMeasure& exp_nu = cfg.levy_by_family(LevyMeasure::Family::ExponentialDensity);
  b.exact("rank-m4", [&] {
    return std::make_pair(
        Complex(totality_rank(exp_nu.discretize(4), geometric_cs(8)), 0), Complex(4, 0));
  });
  b.exact("rank-m8", [&] {
    return std::make_pair(
        Complex(totality_rank(exp_nu.discretize(8), geometric_cs(12)), 0), Complex(8, 0));
  });
}

using SuiteFn = void (*)(const ExperimentConfig&, SuiteBuilder&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"master-equation", suite_master_equation},
      {"stationarity", suite_stationarity},
      {"independence", suite_independence},
      {"shift-laws", suite_shift_laws},
      {"fock-laws", suite_fock_laws},
      {"sigma-inner", suite_sigma_inner},
      {"product-law", suite_product_law},
      {"projection", suite_projection},
      {"decompose", suite_decompose},
      {"theta-iso", suite_theta_iso},
      {"compound-laplace", suite_compound_laplace},
      {"compound-g0", suite_compound_g0},
      {"totality", suite_totality},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const ExperimentConfig& config, const std::string& suite,
                      const std::string& filter_id) {
  for (const auto& [name, fn] : registry()) {
    if (name != suite) continue;
    SuiteBuilder builder(name, config.params_for(name), filter_id);
    fn(config, builder);
    return builder.finish();
  }
  throw ConfigError("unknown suite '" + suite + "'");
}

std::vector<ConvergenceRow> emit_convergence(const ExperimentConfig& config,
                                             const std::string& check_id,
                                             const std::vector<std::int64_t>& ladder) {
  const auto slash = check_id.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("emit_convergence: check id must be <suite>/<check>");
  const std::string suite = check_id.substr(0, slash);
  if (ladder.empty()) throw std::invalid_argument("emit_convergence: empty ladder");

  std::vector<ConvergenceRow> rows;
  for (std::int64_t rung : ladder) {
    ExperimentConfig scaled = config;
    SuiteParams params = scaled.params_for(suite);
    params.n = rung;
    scaled.suite_params[suite] = params;
    const SuiteReport report = run_suite(scaled, suite, check_id);
    bool found = false;
    for (const CheckRow& row : report.rows) {
      if (row.id != check_id) continue;
      if (row.kind != CheckRow::Kind::MC)
        throw std::invalid_argument("emit_convergence: '" + check_id +
                                    "' is an exact-kind check");
      rows.push_back({rung, std::abs(row.value - row.target), row.std_error});
      found = true;
      break;
    }
    if (!found)
      throw std::invalid_argument("emit_convergence: no check named '" + check_id + "'");
  }
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "n,abs_error,stderr\n";
  for (const ConvergenceRow& row : rows)
    out << row.n << ',' << format_double(row.abs_error) << ',' << format_double(row.std_error)
        << '\n';
  return out.str();
}

}  // namespace ccrlab
