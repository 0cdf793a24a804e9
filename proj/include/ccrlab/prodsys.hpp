#pragma once

#include <utility>
#include <vector>

#include "ccrlab/fock.hpp"
#include "ccrlab/pointproc.hpp"

namespace ccrlab {

/// Measurable logarithm, fixed to the principal branch: e^{ell(z)} = z for
/// z != 0 and ell(x) = log(x) for x > 0; the argument lies in (-pi, pi].
Complex measurable_log(Complex z);

/// u_f = ell(1 + f), cellwise. Throws when some cell value is exactly -1.
GridFunction u_from_f(const GridFunction& f);

/// Label of the normalized multiplicative functional
///   Sigma_f = prod_i (1 + f(y_i)) * exp(-integral f dlambda),
/// carried in the fiber at a with supp(f) in L_a = X\(X+a). Labels with a
/// cell value of exactly -1 are rejected. The normalization is cached.
class SigmaLabel {
 public:
  SigmaLabel(GridFunction f, LatticeVector fiber);

  const GridFunction& label() const { return f_; }
  const LatticeVector& fiber() const { return fiber_; }
  const Grid& grid() const { return f_.grid(); }
  Complex integral() const { return integral_; }
  Complex normalization() const { return norm_factor_; }

 private:
  GridFunction f_;
  LatticeVector fiber_;
  Complex integral_;
  Complex norm_factor_;
};

/// Sigma_f(omega) by the product formula.
Complex sigma_eval(const SigmaLabel& label, const PointConfiguration& config);

/// Sigma_f(omega) by the logarithmic route e^{eta(u_f)} / E(e^{eta(u_f)}).
/// Pathwise equal to sigma_eval; kept as an independent evaluation path.
Complex sigma_eval_via_log(const SigmaLabel& label, const PointConfiguration& config);

struct SigmaInnerResult {
  MCEstimate estimate;
  Complex target;
};

/// Monte Carlo estimate of E(Sigma_f conj(Sigma_g)) against the closed-form
/// target exp(<f, g>). Samples the Poisson process on the grid's window at
/// the grid's intensity.
SigmaInnerResult sigma_inner_mc(const SigmaLabel& f, const SigmaLabel& g, std::int64_t n,
                                std::uint64_t seed, int workers = 1);

/// Cone shift of a label: S_c Sigma_f = Sigma_{V_c f}, fiber moves to c + a.
SigmaLabel shift_sigma(const SigmaLabel& label, const LatticeVector& c);

/// Product label: (a, Sigma_f)(b, Sigma_g) = (a+b, Sigma_{f + V_a g}).
/// Pathwise exact because supp(f) and supp(V_a g) are disjoint.
SigmaLabel sigma_product(const SigmaLabel& f, const SigmaLabel& g);

/// Conditional expectation onto F_a: E{Sigma_f | F_a} = Sigma_{f 1_{L_a}}.
/// Requires a <= fiber.
SigmaLabel project_fiber(const SigmaLabel& label, const LatticeVector& a);

/// Split a fiber-a label across b <= a: left = f 1_{L_b} in fiber b,
/// right = V_b^*(f 1_{L_{b,a}}) in fiber a-b. sigma_product(left, right)
/// recomposes the original label exactly.
std::pair<SigmaLabel, SigmaLabel> decompose(const SigmaLabel& label,
                                            const LatticeVector& b);

/// Certificate that e(f) -> Sigma_f matches inner products and products.
struct ThetaReport {
  struct GramEntry {
    std::size_t j, k;
    Complex fock_value;  // <e(f_j), e(f_k)>
    Complex target;      // exp(<f_j, f_k>)
    MCEstimate sigma_estimate;
    double z;
    bool pass;
  };
  struct ProductEntry {
    std::size_t j, k;
    double label_diff;  // max cell difference between the two product routes
    bool pass;
  };
  std::vector<GramEntry> gram;
  std::vector<ProductEntry> products;
  bool all_pass() const;
};

/// Gram agreement (Fock inner products vs closed form vs Monte Carlo) and
/// product intertwining (ccr_product vs sigma_product labels) over a corpus
/// of labels sharing one fiber.
ThetaReport theta_check(const std::vector<SigmaLabel>& corpus, std::int64_t n,
                        std::uint64_t seed, int workers = 1);

/// The compound-case label g0(y, r) = -(1 - e^{-c r}) 1_B(y) on the product
/// of the space grid and a mark discretization of nu. Sigma_{g0} evaluates
/// pathwise on marked configurations through the functional form, and equals
/// the normalized compound vector e^{-xi(c 1_B)} / E(e^{-xi(c 1_B)}).
class CompoundLabel {
 public:
  CompoundLabel(GridFunction u, const LevyMeasure& nu, int mark_nodes);

  const GridFunction& base_u() const { return u_; }
  double c() const { return c_; }
  const MarkGrid& marks() const { return marks_; }
  /// Stored product-grid value at (space cell, mark node).
  double value(std::int64_t space_cell, std::size_t node) const;
  /// rho0(B), using the grid measure as rho0.
  double rho0_B() const { return rho0_B_; }
  /// integral (1 - e^{-c r}) nu(dr).
  double nu_integral() const { return nu_integral_; }
  /// integral g0 dlambda = -rho0(B) * nu_integral().
  double integral() const { return -rho0_B_ * nu_integral_; }

  /// Sigma_{g0}(omega) = prod_i (1 + g0(y_i, r_i)) * exp(-integral g0).
  double eval_pathwise(const MarkedConfiguration& config) const;

 private:
  GridFunction u_;
  double c_;
  std::vector<char> in_B_;
  MarkGrid marks_;
  std::vector<double> values_;
  double rho0_B_;
  double nu_integral_;
};

/// Builds the g0 label for u = c 1_B. Throws when u is not of that form or
/// when a product-grid value collides with -1.
CompoundLabel embed_g0(const GridFunction& u, const LevyMeasure& nu, int mark_nodes = 16);

/// The normalized compound vector e^{-xi(u)}(omega) / E(e^{-xi(u)}) for
/// u = c 1_B, evaluated directly from the marked configuration.
double xi_vector_eval(const GridFunction& u, const MarkedConfiguration& config,
                      const LevyMeasure& nu);

/// Numerical rank of [(1 - e^{-c_j r_i}) sqrt(w_i)] over a mark
/// discretization; full rank certifies desk-scale totality of
/// {1 - e^{-c r} : c > 0} in L^2(nu). Singular values below
/// 1e-10 * sigma_max do not count.
int totality_rank(const MarkGrid& marks, const std::vector<double>& c_values);

}  // namespace ccrlab
