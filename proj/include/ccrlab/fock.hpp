#pragma once

#include <complex>
#include <vector>

#include "ccrlab/grid.hpp"

namespace ccrlab {

/// A vector of the exponential domain of symmetric Fock space over
/// L^2(L_a): a finite combination sum_k c_k e(f_k) with the labels f_k
/// held as grid functions supported in L_a = X\(X+a). All inner products
/// are exact over the finite term lists via <e(f), e(g)> = exp<f, g>.
class FockVector {
 public:
  struct Term {
    Complex coeff;
    GridFunction label;
  };

  FockVector(LatticeVector fiber, std::vector<Term> terms);

  /// c * e(f) in the fiber at a.
  static FockVector exponential(LatticeVector fiber, GridFunction label,
                                Complex coeff = Complex(1, 0));
  /// The vacuum e(0).
  static FockVector vacuum(GridPtr grid, LatticeVector fiber);

  const LatticeVector& fiber() const { return fiber_; }
  const std::vector<Term>& terms() const { return terms_; }
  const Grid& grid() const;

 private:
  LatticeVector fiber_;
  std::vector<Term> terms_;
};

/// <v, w> = sum_{j,k} c_j conj(d_k) exp(<f_j, g_k>). Fibers must match.
Complex fock_inner(const FockVector& v, const FockVector& w);

/// Second quantization of V_a applied termwise: e(f) -> e(V_a f), fiber
/// re-based from b to a + b.
FockVector second_quantize(const FockVector& v, const LatticeVector& a);

/// CCR-flow product: bilinear extension of e(f) e(g) = e(f + V_a g) from
/// fibers a and b into fiber a + b. Duplicate labels merge by coefficient
/// addition; exact-zero coefficients are dropped.
FockVector ccr_product(const FockVector& v, const FockVector& w);

}  // namespace ccrlab
