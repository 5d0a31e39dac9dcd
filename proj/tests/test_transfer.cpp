#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/random_trees.hpp"
#include "wco/transfer.hpp"

using namespace wco;

namespace {

/// Star with weights lambda_{l1}=1, lambda_{l2}=2.
DiscreteWco star_one_two() {
  DirectedTree t = DirectedTree::build({"r", "l1", "l2"}, {{"r", "l1"}, {"r", "l2"}});
  WeightedShift s;
  s.tree = std::make_shared<DirectedTree>(t);
  s.lambda = {Complex(0, 0), Complex(1, 0), Complex(2, 0)};
  TruncationWindow w = whole_tree_window(*s.tree, 0, 1, false, {});
  return from_weighted_shift(s, w);
}

Masked basis_vector(int n, int i) {
  Masked f(n, Complex(0, 0), true);
  f.value[i] = Complex(1, 0);
  return f;
}

}  // namespace

TEST_CASE("binary densities are powers of two") {
  TransferCache cache(from_weighted_shift(make_binary(6)));
  const Density& h1 = cache.density(1);
  const Density& h2 = cache.density(2);
  int checked1 = 0, checked2 = 0;
  for (int x = 0; x < cache.size(); ++x) {
    if (h1.valid[x]) {
      CHECK(h1.value[x] == doctest::Approx(2.0));
      ++checked1;
    }
    if (h2.valid[x]) {
      CHECK(h2.value[x] == doctest::Approx(4.0));
      ++checked2;
    }
  }
  CHECK(checked1 > 0);
  CHECK(checked2 > 0);
}

TEST_CASE("zero weights give zero densities") {
  DiscreteWco w({"a", "b"}, {1, 1}, {0, 0}, {Complex(0, 0), Complex(0, 0)});
  TransferCache cache(w);
  for (int n = 1; n <= 3; ++n)
    for (int x = 0; x < 2; ++x) CHECK(cache.density(n).value[x] == 0.0);
}

TEST_CASE("density satisfies the defining summation identity") {
  // sum f(phi^n x) |w_n(x)|^2 mu(x) = sum f(x) h_n(x) mu(x) for basis f.
  std::mt19937_64 rng(31);
  wco::testing::RandomShiftOptions opt;
  for (int rep = 0; rep < 25; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    DiscreteWco w = from_weighted_shift(inst);
    TransferCache cache(w);
    for (int n = 1; n <= 3; ++n) {
      const Masked& wn = cache.weights(n);
      const Density& hn = cache.density(n);
      for (int i = 0; i < w.size(); ++i) {
        double lhs = 0.0;
        for (int x = 0; x < w.size(); ++x)
          if (w.iterate_phi(x, n) == i) lhs += std::norm(wn.value[x]) * w.mass(x);
        const double rhs = hn.value[i] * w.mass(i);
        REQUIRE(hn.valid[i]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("conditional expectation of a constant is the constant") {
  TransferCache cache(from_weighted_shift(make_blackblack(5)));
  Masked c(cache.size(), Complex(3.5, -1.0), true);
  for (int n = 1; n <= 2; ++n) {
    Masked e = conditional_expectation(cache, n, c);
    int seen = 0;
    for (int x = 0; x < cache.size(); ++x) {
      if (!e.valid[x]) continue;
      CHECK(std::abs(e.value[x] - Complex(3.5, -1.0)) <= 1e-14);
      ++seen;
    }
    CHECK(seen > 0);
  }
}

TEST_CASE("blackblack: E_1(h_2) averages to 3/2 on the fiber over 0") {
  ShiftInstance inst = make_blackblack(5);
  const DirectedTree& t = *inst.shift.tree;
  TransferCache cache(from_weighted_shift(inst));
  const Density& h2 = cache.density(2);
  const int a = inst.window.rank_of(t.index_of("(1,1)"));
  const int b = inst.window.rank_of(t.index_of("(1,2)"));
  REQUIRE(h2.valid[a]);
  REQUIRE(h2.valid[b]);
  CHECK(h2.value[a] == doctest::Approx(1.0));
  CHECK(h2.value[b] == doctest::Approx(2.0));
  Masked e = conditional_expectation(cache, 1, to_masked(h2));
  REQUIRE(e.valid[a]);
  REQUIRE(e.valid[b]);
  CHECK(e.value[a].real() == doctest::Approx(1.5));
  CHECK(e.value[b].real() == doctest::Approx(1.5));
}

TEST_CASE("binary: E_1 fixes the constant density h_2") {
  TransferCache cache(from_weighted_shift(make_binary(6)));
  Masked e = conditional_expectation(cache, 1, to_masked(cache.density(2)));
  int seen = 0;
  for (int x = 0; x < cache.size(); ++x) {
    if (!e.valid[x]) continue;
    CHECK(e.value[x].real() == doctest::Approx(4.0));
    ++seen;
  }
  CHECK(seen > 0);
}

TEST_CASE("conditional expectation is idempotent, positive and contractive") {
  std::mt19937_64 rng(47);
  wco::testing::RandomShiftOptions opt;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    DiscreteWco w = from_weighted_shift(inst);
    TransferCache cache(w);
    Masked f(w.size(), Complex(0, 0), true);
    for (int i = 0; i < w.size(); ++i) f.value[i] = Complex(u(rng), u(rng));
    for (int n = 1; n <= 3; ++n) {
      const Masked& wn = cache.weights(n);
      Masked e = conditional_expectation(cache, n, f);
      Masked ee = conditional_expectation(cache, n, e);
      double norm_f = 0.0, norm_e = 0.0;
      for (int i = 0; i < w.size(); ++i) {
        const double m = std::norm(wn.value[i]) * w.mass(i);
        if (m == 0.0) continue;
        REQUIRE(e.valid[i]);
        CHECK(std::abs(ee.value[i] - e.value[i]) <= 1e-12);
        norm_f += m * std::norm(f.value[i]);
        norm_e += m * std::norm(e.value[i]);
      }
      CHECK(norm_e <= norm_f + 1e-12);

      // Positivity: nonnegative input, nonnegative output.
      Masked g(w.size(), Complex(0, 0), true);
      for (int i = 0; i < w.size(); ++i) g.value[i] = Complex(std::abs(u(rng)), 0);
      Masked eg = conditional_expectation(cache, n, g);
      for (int i = 0; i < w.size(); ++i)
        if (eg.valid[i]) CHECK(eg.value[i].real() >= -1e-15);
    }
  }
}

TEST_CASE("pullback of a constant is the constant on {h_n > 0}") {
  TransferCache cache(from_weighted_shift(make_rooted_full_binary(3)));
  Masked c(cache.size(), Complex(2.5, 0), true);
  Masked g = pullback_inverse(cache, 1, c);
  const Density& h1 = cache.density(1);
  for (int x = 0; x < cache.size(); ++x) {
    REQUIRE(g.valid[x]);
    if (h1.value[x] > 0)
      CHECK(std::abs(g.value[x] - Complex(2.5, 0)) <= 1e-14);
    else
      CHECK(g.value[x] == Complex(0, 0));
  }
}

TEST_CASE("pullback on the star sends sibling constants to the parent") {
  DiscreteWco star = star_one_two();
  TransferCache cache(star);
  Masked g(3, Complex(0, 0), true);
  g.value[1] = Complex(7, 0);
  g.value[2] = Complex(7, 0);
  Masked back = pullback_inverse(cache, 1, g);
  CHECK(back.value[0] == Complex(7, 0));  // parent carries the sibling value
  CHECK(back.value[1] == Complex(0, 0));  // leaves have empty fibers
  CHECK(back.value[2] == Complex(0, 0));
}

TEST_CASE("pullback rejects functions varying on a weighted fiber") {
  DiscreteWco star = star_one_two();
  TransferCache cache(star);
  Masked g(3, Complex(0, 0), true);
  g.value[1] = Complex(1, 0);
  g.value[2] = Complex(2, 0);
  CHECK_THROWS_AS(pullback_inverse(cache, 1, g), Error);
}

TEST_CASE("pullback round trip: G o phi^n = E_n(f) at weighted points") {
  std::mt19937_64 rng(53);
  wco::testing::RandomShiftOptions opt;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    DiscreteWco w = from_weighted_shift(inst);
    TransferCache cache(w);
    Masked f(w.size(), Complex(0, 0), true);
    for (int i = 0; i < w.size(); ++i) f.value[i] = Complex(u(rng), u(rng));
    for (int n = 1; n <= 3; ++n) {
      const Masked& wn = cache.weights(n);
      Masked e = conditional_expectation(cache, n, f);
      Masked back = pullback_inverse(cache, n, e);
      for (int i = 0; i < w.size(); ++i) {
        if (wn.value[i] == Complex(0, 0)) continue;
        const int img = w.iterate_phi(i, n);
        REQUIRE(img >= 0);
        REQUIRE(back.valid[img]);
        CHECK(std::abs(back.value[img] - e.value[i]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("range projection on the 1-2 star") {
  DiscreteWco star = star_one_two();
  TransferCache cache(star);
  Masked f = basis_vector(3, 1);  // e_{l1}
  Masked p = range_projection(cache, f);
  CHECK(p.value[0] == Complex(0, 0));
  CHECK(p.value[1].real() == doctest::Approx(0.2));
  CHECK(p.value[2].real() == doctest::Approx(0.4));
}

TEST_CASE("range projection fixes range vectors and kills e_root") {
  ShiftInstance inst = make_rooted_full_binary(3);
  DiscreteWco w = from_weighted_shift(inst);
  TransferCache cache(w);

  // f = w * (g o phi) lies in the range for any g.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Masked g(w.size(), Complex(0, 0), true);
  for (int i = 0; i < w.size(); ++i) g.value[i] = Complex(u(rng), u(rng));
  Masked f(w.size(), Complex(0, 0), true);
  for (int i = 0; i < w.size(); ++i) f.value[i] = w.weight(i) * g.value[w.phi(i)];
  Masked p = range_projection(cache, f);
  for (int i = 0; i < w.size(); ++i) {
    REQUIRE(p.valid[i]);
    CHECK(std::abs(p.value[i] - f.value[i]) <= 1e-12);
  }

  Masked e_root = basis_vector(w.size(), 0);
  Masked pr = range_projection(cache, e_root);
  for (int i = 0; i < w.size(); ++i) CHECK(std::abs(pr.value[i]) <= 1e-15);
}

TEST_CASE("phase weights") {
  SUBCASE("binary order 1 is 1/sqrt(2)") {
    TransferCache cache(from_weighted_shift(make_binary(6)));
    auto [wnphi, wphin] = phase_weights(cache, 1);
    int seen = 0;
    for (int x = 0; x < cache.size(); ++x) {
      if (!wnphi.valid[x] || cache.wco().phi_exits(x)) continue;
      CHECK(wnphi.value[x].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
      ++seen;
    }
    CHECK(seen > 0);
  }
  SUBCASE("the two definitions coincide at order 1") {
    std::mt19937_64 rng(61);
    wco::testing::RandomShiftOptions opt;
    for (int rep = 0; rep < 20; ++rep) {
      auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
      TransferCache cache(from_weighted_shift(inst));
      auto [a, b] = phase_weights(cache, 1);
      for (int x = 0; x < cache.size(); ++x) {
        CHECK(a.valid[x] == b.valid[x]);
        if (a.valid[x]) CHECK(std::abs(a.value[x] - b.value[x]) <= 1e-14);
      }
    }
  }
  SUBCASE("unit path weights give unit phases at order 2") {
    TransferCache cache(from_weighted_shift(make_zplus_path(6)));
    auto [wnphi, wphin] = phase_weights(cache, 2);
    const Masked& w2 = cache.weights(2);
    for (int x = 0; x < cache.size(); ++x) {
      if (!wnphi.valid[x] || w2.value[x] == Complex(0, 0)) continue;
      CHECK(wnphi.value[x].real() == doctest::Approx(1.0));
      CHECK(wphin.value[x].real() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("non-uniform point masses") {
  std::mt19937_64 rng(83);
  wco::testing::RandomShiftOptions opt;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    DiscreteWco w = wco::testing::with_random_masses(inst, rng);
    TransferCache cache(w);
    for (int n = 1; n <= 3; ++n) {
      // Defining identity of the density against the masses.
      const Masked& wn = cache.weights(n);
      const Density& hn = cache.density(n);
      for (int i = 0; i < w.size(); ++i) {
        double lhs = 0.0;
        for (int x = 0; x < w.size(); ++x)
          if (w.iterate_phi(x, n) == i) lhs += std::norm(wn.value[x]) * w.mass(x);
        CHECK(lhs == doctest::Approx(hn.value[i] * w.mass(i)).epsilon(1e-12));
      }
      // Fiber averages stay idempotent and fix constants.
      Masked f(w.size(), Complex(0, 0), true);
      for (int i = 0; i < w.size(); ++i) f.value[i] = Complex(u(rng), u(rng));
      Masked e = conditional_expectation(cache, n, f);
      Masked ee = conditional_expectation(cache, n, e);
      for (int i = 0; i < w.size(); ++i)
        if (e.valid[i]) CHECK(std::abs(ee.value[i] - e.value[i]) <= 1e-12);
    }
    for (auto [n, k] : {std::pair{1, 1}, {1, 2}, {2, 1}})
      CHECK(verify_chain_rule(cache, n, k) <= 1e-12);
  }
}

TEST_CASE("chain rule") {
  SUBCASE("binary constants: |h_2 - 2*2| = 0") {
    TransferCache cache(from_weighted_shift(make_binary(6)));
    CHECK(verify_chain_rule(cache, 1, 1) <= 1e-12);
  }
  SUBCASE("randomized instances satisfy the identity to 1e-12") {
    std::mt19937_64 rng(71);
    wco::testing::RandomShiftOptions opt;
    for (int rep = 0; rep < 40; ++rep) {
      auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
      TransferCache cache(from_weighted_shift(inst));
      for (auto [n, k] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {1, 3}})
        CHECK(verify_chain_rule(cache, n, k) <= 1e-12);
    }
  }
}
