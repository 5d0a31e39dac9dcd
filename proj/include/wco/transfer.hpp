#pragma once

#include <map>
#include <utility>

#include "wco/wco.hpp"

namespace wco {

/// Fibers of phi^n: fibers[x] = (phi^n)^{-1}({x}) within the window,
/// complete[x] true when that is the full preimage.
struct FiberPartition {
  int order = 1;
  std::vector<std::vector<int>> fibers;
  std::vector<uint8_t> complete;
};

/// Memoized per-order data of one wco: iterated weights w_n, fiber partitions
/// of phi^n and Radon-Nikodym densities h_n. Write-once per order; not
/// shared across threads.
class TransferCache {
 public:
  explicit TransferCache(DiscreteWco wco) : wco_(std::move(wco)) {}

  const DiscreteWco& wco() const { return wco_; }
  int size() const { return wco_.size(); }

  const Masked& weights(int n);
  const FiberPartition& fibers(int n);
  const Density& density(int n);

 private:
  DiscreteWco wco_;
  std::map<int, Masked> weights_;
  std::map<int, FiberPartition> fibers_;
  std::map<int, Density> densities_;
};

/// h_n(x) = (1/mu(x)) sum_{y in (phi^n)^{-1}(x)} |w_n(y)|^2 mu(y); masked at
/// points whose fiber is cut by the window boundary.
Density radon_nikodym(TransferCache& cache, int n);
Density radon_nikodym(const DiscreteWco& wco, int n);

/// E_n(f): mu_{w_n}-weighted average of f over fibers of phi^n, defined at
/// points y with w_n(y) != 0; masked where the fiber is incomplete or f is
/// masked at a weighted fiber point.
Masked conditional_expectation(TransferCache& cache, int n, const Masked& f);

/// Representative G with G о phi^n = g a.e. [mu_{w_n}] and G = 0 on {h_n = 0}.
/// Throws not_fiber_measurable when g varies across a weighted fiber by more
/// than the tolerance.
Masked pullback_inverse(TransferCache& cache, int n, const Masked& g, double tol = 1e-9);

/// P f = w * E_1(f_w) with f_w = f/w on {w != 0} and 0 elsewhere; the
/// orthogonal projection onto the closure of the operator's range.
Masked range_projection(TransferCache& cache, const Masked& f);

/// Pair (w_{n,phi}, w_{phi,n}): the weight of the phase of C^n and the weight
/// of the n-th power of the phase. Quotients 0/0 evaluate to 0; a nonzero
/// numerator over a vanishing density at an in-window point signals
/// inconsistent input and throws zero_denominator_at_weighted_point.
std::pair<Masked, Masked> phase_weights(TransferCache& cache, int n);

/// Max over unmasked points of |h_{n+k} - pullback(E_n(h_k)) * h_n|; the
/// composition identity for Radon-Nikodym derivatives. Throws
/// window_too_shallow when no point is testable.
double verify_chain_rule(TransferCache& cache, int n, int k);

/// Converts a density into a masked complex function.
Masked to_masked(const Density& d);

}  // namespace wco
