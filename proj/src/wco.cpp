#include "wco/wco.hpp"

namespace wco {

DiscreteWco::DiscreteWco(std::vector<std::string> labels, std::vector<double> mass,
                         std::vector<int> phi, std::vector<Complex> weight)
    : DiscreteWco(std::move(labels), std::move(mass), std::move(phi), std::move(weight),
                  {}, {}) {}

DiscreteWco::DiscreteWco(std::vector<std::string> labels, std::vector<double> mass,
                         std::vector<int> phi, std::vector<Complex> weight,
                         std::vector<uint8_t> fiber_complete,
                         std::vector<uint8_t> phi_arbitrary)
    : labels_(std::move(labels)),
      mass_(std::move(mass)),
      phi_(std::move(phi)),
      weight_(std::move(weight)),
      fiber_complete_(std::move(fiber_complete)),
      phi_arbitrary_(std::move(phi_arbitrary)) {
  const size_t n = labels_.size();
  if (mass_.size() != n || phi_.size() != n || weight_.size() != n)
    throw Error(Errc::invalid_argument, "wco fields must have equal length");
  if (fiber_complete_.empty()) fiber_complete_.assign(n, 1);
  if (phi_arbitrary_.empty()) phi_arbitrary_.assign(n, 0);
  if (fiber_complete_.size() != n || phi_arbitrary_.size() != n)
    throw Error(Errc::invalid_argument, "wco flags must have equal length");
  finish();
}

void DiscreteWco::finish() {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (mass_[i] <= 0.0)
      throw Error(Errc::invalid_argument, "point mass must be positive at " + labels_[i]);
    if (phi_[i] != kExit && (phi_[i] < 0 || phi_[i] >= n))
      throw Error(Errc::invalid_argument, "phi image out of range at " + labels_[i]);
  }
  fiber_.assign(n, {});
  for (int i = 0; i < n; ++i)
    if (phi_[i] != kExit) fiber_[phi_[i]].push_back(i);
}

int DiscreteWco::iterate_phi(int i, int n) const {
  int cur = i;
  for (int j = 0; j < n; ++j) {
    if (cur == kExit) return kExit;
    cur = phi_[cur];
  }
  return cur;
}

bool DiscreteWco::is_composition() const {
  for (int i = 0; i < size(); ++i)
    if (weight_[i] != Complex(1.0, 0.0)) return false;
  return true;
}

DiscreteWco from_weighted_shift(const WeightedShift& shift, const TruncationWindow& window) {
  const DirectedTree& tree = *shift.tree;
  const int n = window.count();
  std::vector<std::string> labels(n);
  std::vector<double> mass(n, 1.0);
  std::vector<int> phi(n, DiscreteWco::kExit);
  std::vector<Complex> weight(n, Complex(0, 0));
  std::vector<uint8_t> complete(n, 1);
  std::vector<uint8_t> arbitrary(n, 0);

  for (int i = 0; i < n; ++i) {
    const int v = window.members[i];
    labels[i] = tree.label(v);
    complete[i] = window.interior_mask[i];
    const int p = tree.parent(v);
    if (p == -1) {
      if (window.top_cut) {
        phi[i] = DiscreteWco::kExit;  // the true parent left the window
        weight[i] = shift.lambda[v];  // weight of the cut incoming edge
      } else {
        phi[i] = i;  // any extension works since w vanishes at the root
        arbitrary[i] = 1;
        weight[i] = Complex(0, 0);
      }
    } else {
      const int pr = window.rank_of(p);
      if (pr < 0) {
        phi[i] = DiscreteWco::kExit;
        weight[i] = shift.lambda[v];
      } else {
        phi[i] = pr;
        weight[i] = shift.lambda[v];
      }
    }
  }
  return DiscreteWco(std::move(labels), std::move(mass), std::move(phi), std::move(weight),
                     std::move(complete), std::move(arbitrary));
}

DiscreteWco from_weighted_shift(const ShiftInstance& instance) {
  return from_weighted_shift(instance.shift, instance.window);
}

Masked iterate_weights(const DiscreteWco& wco, int n) {
  if (n < 0) throw Error(Errc::invalid_argument, "weight order must be nonnegative");
  const int N = wco.size();
  Masked out(N, Complex(1.0, 0.0), true);
  if (n == 0) return out;
  for (int i = 0; i < N; ++i) {
    Complex prod(1.0, 0.0);
    int cur = i;
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      if (cur == DiscreteWco::kExit) {
        ok = false;
        break;
      }
      prod *= wco.weight(cur);
      cur = wco.phi(cur);
    }
    // The j-th factor needs phi^j(x) inside the window; the final image may
    // exit without masking w_n itself.
    if (!ok) {
      out.valid[i] = 0;
      out.value[i] = Complex(0, 0);
    } else {
      out.value[i] = prod;
    }
  }
  bool any = false;
  for (int i = 0; i < N; ++i)
    if (out.valid[i]) any = true;
  if (!any)
    throw Error(Errc::window_too_shallow,
                "every point is masked for weight order " + std::to_string(n));
  return out;
}

}  // namespace wco
