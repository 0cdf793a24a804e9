#include "ccrlab/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace ccrlab {

FockVector::FockVector(LatticeVector fiber, std::vector<Term> terms)
    : fiber_(std::move(fiber)), terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("FockVector: needs at least one term");
  if (!lattice_nonneg(fiber_))
    throw std::invalid_argument("FockVector: fiber must be a cone element");
  const Region region = Region::below(fiber_);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    if (!terms_[j].label.grid().same_layout(terms_[0].label.grid()))
      throw std::invalid_argument("FockVector: labels on mismatched grids");
    if (!supported_in(terms_[j].label, region))
      throw std::invalid_argument("FockVector: label not supported in L_a");
    for (std::size_t k = 0; k < j; ++k)
      if (terms_[j].label == terms_[k].label)
        throw std::invalid_argument("FockVector: duplicate labels");
  }
}

FockVector FockVector::exponential(LatticeVector fiber, GridFunction label, Complex coeff) {
  std::vector<Term> terms;
  terms.push_back(Term{coeff, std::move(label)});
  return FockVector(std::move(fiber), std::move(terms));
}

FockVector FockVector::vacuum(GridPtr grid, LatticeVector fiber) {
  return exponential(std::move(fiber), GridFunction::zero(std::move(grid)));
}

const Grid& FockVector::grid() const { return terms_.front().label.grid(); }

Complex fock_inner(const FockVector& v, const FockVector& w) {
  if (v.fiber() != w.fiber())
    throw std::invalid_argument("fock_inner: fiber mismatch");
  Complex sum(0, 0);
  for (const auto& [c, f] : v.terms())
    for (const auto& [d, g] : w.terms()) sum += c * std::conj(d) * std::exp(inner(f, g));
  return sum;
}

FockVector second_quantize(const FockVector& v, const LatticeVector& a) {
  std::vector<FockVector::Term> terms;
  terms.reserve(v.terms().size());
  for (const auto& [c, f] : v.terms()) terms.push_back({c, shift(f, a)});
  return FockVector(lattice_add(a, v.fiber()), std::move(terms));
}

FockVector ccr_product(const FockVector& v, const FockVector& w) {
  if (!v.grid().same_layout(w.grid()))
    throw std::invalid_argument("ccr_product: grid mismatch");
  const LatticeVector& a = v.fiber();
  std::vector<FockVector::Term> merged;
  for (const auto& [c, f] : v.terms()) {
    for (const auto& [d, g] : w.terms()) {
      GridFunction label = f + shift(g, a);
      const Complex coeff = c * d;
      bool found = false;
      for (auto& term : merged) {
        if (term.label == label) {
          term.coeff += coeff;
          found = true;
          break;
        }
      }
      if (!found) merged.push_back({coeff, std::move(label)});
    }
  }
  std::vector<FockVector::Term> terms;
  for (auto& term : merged)
    if (term.coeff != Complex(0, 0)) terms.push_back(std::move(term));
  if (terms.empty())
    throw std::invalid_argument("ccr_product: all terms cancelled (zero vector)");
  return FockVector(lattice_add(a, w.fiber()), std::move(terms));
}

}  // namespace ccrlab
