#include "wco/transfer.hpp"

#include <cmath>

namespace wco {

const Masked& TransferCache::weights(int n) {
  auto it = weights_.find(n);
  if (it != weights_.end()) return it->second;
  return weights_.emplace(n, iterate_weights(wco_, n)).first->second;
}

const FiberPartition& TransferCache::fibers(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "fiber order must be >= 1");
  auto it = fibers_.find(n);
  if (it != fibers_.end()) return it->second;

  FiberPartition part;
  part.order = n;
  const int N = wco_.size();
  part.fibers.assign(N, {});
  part.complete.assign(N, 1);
  if (n == 1) {
    for (int x = 0; x < N; ++x) {
      part.fibers[x] = wco_.fiber(x);
      part.complete[x] = wco_.fiber_complete(x) ? 1 : 0;
    }
  } else {
    const FiberPartition& prev = fibers(n - 1);
    for (int x = 0; x < N; ++x) {
      bool complete = wco_.fiber_complete(x);
      for (int y : wco_.fiber(x)) {
        const auto& deeper = prev.fibers[y];
        part.fibers[x].insert(part.fibers[x].end(), deeper.begin(), deeper.end());
        if (!prev.complete[y]) complete = false;
      }
      part.complete[x] = complete ? 1 : 0;
    }
  }
  return fibers_.emplace(n, std::move(part)).first->second;
}

const Density& TransferCache::density(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "density order must be >= 1");
  auto it = densities_.find(n);
  if (it != densities_.end()) return it->second;

  const Masked& wn = weights(n);
  const FiberPartition& part = fibers(n);
  Density d;
  d.order = n;
  const int N = wco_.size();
  d.value.assign(N, 0.0);
  d.valid.assign(N, 1);
  for (int x = 0; x < N; ++x) {
    double sum = 0.0;
    for (int y : part.fibers[x]) {
      // Members of an in-window fiber have their whole ancestor path inside
      // the window, so w_n is always computable there.
      sum += std::norm(wn.value[y]) * wco_.mass(y);
    }
    d.value[x] = sum / wco_.mass(x);
    d.valid[x] = part.complete[x];
  }
  return densities_.emplace(n, std::move(d)).first->second;
}

Density radon_nikodym(TransferCache& cache, int n) { return cache.density(n); }

Density radon_nikodym(const DiscreteWco& wco, int n) {
  TransferCache cache(wco);
  return cache.density(n);
}

Masked to_masked(const Density& d) {
  Masked m(d.size());
  for (int i = 0; i < d.size(); ++i) {
    m.value[i] = Complex(d.value[i], 0.0);
    m.valid[i] = d.valid[i];
  }
  return m;
}

Masked conditional_expectation(TransferCache& cache, int n, const Masked& f) {
  const DiscreteWco& wco = cache.wco();
  const int N = wco.size();
  if (f.size() != N) throw Error(Errc::invalid_argument, "function size mismatch");
  const Masked& wn = cache.weights(n);
  const FiberPartition& part = cache.fibers(n);

  Masked out(N, Complex(0, 0), false);
  for (int x = 0; x < N; ++x) {
    const auto& fiber = part.fibers[x];
    if (fiber.empty()) continue;
    double denom = 0.0;
    Complex numer(0, 0);
    bool fiber_ok = part.complete[x] != 0;
    for (int z : fiber) {
      const double m = std::norm(wn.value[z]) * wco.mass(z);
      if (m == 0.0) continue;
      if (!f.valid[z]) fiber_ok = false;
      denom += m;
      numer += m * f.value[z];
    }
    if (denom == 0.0) continue;  // mu_{w_n}-null fiber, nothing to define
    const Complex avg = fiber_ok ? numer / denom : Complex(0, 0);
    for (int y : fiber) {
      if (!wn.valid[y] || wn.value[y] == Complex(0, 0)) continue;
      out.value[y] = avg;
      out.valid[y] = fiber_ok ? 1 : 0;
    }
  }
  return out;
}

Masked pullback_inverse(TransferCache& cache, int n, const Masked& g, double tol) {
  const DiscreteWco& wco = cache.wco();
  const int N = wco.size();
  if (g.size() != N) throw Error(Errc::invalid_argument, "function size mismatch");
  const Masked& wn = cache.weights(n);
  const FiberPartition& part = cache.fibers(n);

  Masked out(N, Complex(0, 0), false);
  for (int x = 0; x < N; ++x) {
    if (!part.complete[x]) continue;
    bool ok = true;
    bool have = false;
    Complex first(0, 0);
    double denom = 0.0;
    Complex numer(0, 0);
    for (int z : part.fibers[x]) {
      const double m = std::norm(wn.value[z]) * wco.mass(z);
      if (m == 0.0) continue;
      if (!g.valid[z]) {
        ok = false;
        break;
      }
      if (!have) {
        first = g.value[z];
        have = true;
      } else if (std::abs(g.value[z] - first) >
                 std::max(tol, tol * std::abs(first))) {
        throw Error(Errc::not_fiber_measurable,
                    "function varies on the fiber over " + wco.label(x));
      }
      denom += m;
      numer += m * g.value[z];
    }
    if (!ok) continue;
    out.valid[x] = 1;
    out.value[x] = have ? numer / denom : Complex(0, 0);
  }
  return out;
}

Masked range_projection(TransferCache& cache, const Masked& f) {
  const DiscreteWco& wco = cache.wco();
  const int N = wco.size();
  if (f.size() != N) throw Error(Errc::invalid_argument, "function size mismatch");
  Masked fw(N, Complex(0, 0), true);
  for (int i = 0; i < N; ++i) {
    if (wco.weighted(i)) {
      fw.value[i] = f.value[i] / wco.weight(i);
      fw.valid[i] = f.valid[i];
    }
    // Unweighted points carry 0 and never enter the fiber averages.
  }
  const Masked e = conditional_expectation(cache, 1, fw);
  Masked out(N, Complex(0, 0), true);
  for (int i = 0; i < N; ++i) {
    if (!wco.weighted(i)) continue;  // result supported in {w != 0}
    out.value[i] = wco.weight(i) * e.value[i];
    out.valid[i] = e.valid[i];
  }
  return out;
}

std::pair<Masked, Masked> phase_weights(TransferCache& cache, int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "phase order must be >= 1");
  const DiscreteWco& wco = cache.wco();
  const int N = wco.size();
  const Masked& wn = cache.weights(n);
  const Density& hn = cache.density(n);
  const Density& h1 = cache.density(1);

  Masked wnphi(N, Complex(0, 0), false);
  for (int x = 0; x < N; ++x) {
    if (!wn.valid[x]) continue;
    if (wn.value[x] == Complex(0, 0)) {
      wnphi.value[x] = Complex(0, 0);
      wnphi.valid[x] = 1;
      continue;
    }
    const int img = wco.iterate_phi(x, n);
    if (img == DiscreteWco::kExit || !hn.valid[img]) continue;
    if (hn.value[img] <= 0.0)
      throw Error(Errc::zero_denominator_at_weighted_point,
                  "h_" + std::to_string(n) + " vanishes at " + wco.label(img) +
                      " under a weighted point");
    wnphi.value[x] = wn.value[x] / std::sqrt(hn.value[img]);
    wnphi.valid[x] = 1;
  }

  Masked wphin(N, Complex(0, 0), false);
  for (int x = 0; x < N; ++x) {
    Complex prod(1.0, 0.0);
    int cur = x;
    bool ok = true;
    bool zero = false;
    for (int j = 0; j < n && ok; ++j) {
      if (cur == DiscreteWco::kExit) {
        ok = false;
        break;
      }
      const Complex wj = wco.weight(cur);
      if (wj == Complex(0, 0)) {
        zero = true;  // later factors cannot resurrect the product
        break;
      }
      const int next = wco.phi(cur);
      if (next == DiscreteWco::kExit || !h1.valid[next]) {
        ok = false;
        break;
      }
      if (h1.value[next] <= 0.0)
        throw Error(Errc::zero_denominator_at_weighted_point,
                    "h_1 vanishes at " + wco.label(next) + " under a weighted point");
      prod *= wj / std::sqrt(h1.value[next]);
      cur = next;
    }
    if (zero) {
      wphin.value[x] = Complex(0, 0);
      wphin.valid[x] = 1;
    } else if (ok) {
      wphin.value[x] = prod;
      wphin.valid[x] = 1;
    }
  }
  return {std::move(wnphi), std::move(wphin)};
}

double verify_chain_rule(TransferCache& cache, int n, int k) {
  if (n < 1 || k < 1) throw Error(Errc::invalid_argument, "chain rule needs n,k >= 1");
  const Density& hn = cache.density(n);
  const Density& hk = cache.density(k);
  const Density& hnk = cache.density(n + k);
  const Masked e = conditional_expectation(cache, n, to_masked(hk));
  const Masked g = pullback_inverse(cache, n, e);

  double residual = -1.0;
  for (int x = 0; x < cache.size(); ++x) {
    if (!hn.valid[x] || !hnk.valid[x] || !g.valid[x]) continue;
    const double lhs = hnk.value[x];
    const double rhs = (g.value[x] * Complex(hn.value[x], 0)).real();
    residual = std::max(residual, std::abs(lhs - rhs));
  }
  if (residual < 0.0)
    throw Error(Errc::window_too_shallow, "no point deep enough for orders (" +
                                              std::to_string(n) + "," + std::to_string(k) + ")");
  return residual;
}

}  // namespace wco
