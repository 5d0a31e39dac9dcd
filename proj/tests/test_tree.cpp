#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "support/random_trees.hpp"
#include "wco/tree.hpp"
#include "wco/treespec.hpp"

using namespace wco;

namespace {

DirectedTree two_child_star() {
  return DirectedTree::build({"0", "(1,1)", "(1,2)"}, {{"0", "(1,1)"}, {"0", "(1,2)"}});
}

}  // namespace

TEST_CASE("build detects the root of a two-child star") {
  DirectedTree t = two_child_star();
  CHECK(t.size() == 3);
  CHECK(t.top() == t.index_of("0"));
  CHECK(t.parent(t.top()) == -1);
  CHECK(t.children(t.index_of("0")).size() == 2);
  CHECK(t.label(t.children(t.top())[0]) == "(1,1)");
  CHECK(t.label(t.children(t.top())[1]) == "(1,2)");
}

TEST_CASE("build rejects bad inputs") {
  CHECK_THROWS_WITH_AS(DirectedTree::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}),
                       doctest::Contains("parent walk"), Error);
  try {
    DirectedTree::build({"a", "b"}, {{"a", "b"}, {"b", "a"}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cycle_detected);
  }
  try {
    DirectedTree::build({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::disconnected);
  }
  try {
    DirectedTree::build({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::duplicate_parent);
  }
  try {
    DirectedTree::build({"a"}, {{"a", "zz"}});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_vertex);
  }
}

TEST_CASE("blackblack window matches the drawn topology") {
  ShiftInstance inst = make_blackblack(6);
  const DirectedTree& t = *inst.shift.tree;
  StructuralProfile p = structural_profile(t, inst.window);
  CHECK_FALSE(p.rooted);
  CHECK(p.leafless);
  REQUIRE(p.branching.size() == 2);
  CHECK(t.label(p.branching[0]) == "0");
  CHECK(t.label(p.branching[1]) == "(2,2)");
}

TEST_CASE("ancestor walks the parent chain") {
  ShiftInstance zm = make_z_minus(8);
  const DirectedTree& t = *zm.shift.tree;
  const int v0 = t.index_of("0");
  CHECK(t.label(*t.ancestor(v0, 3)) == "-3");
  CHECK(*t.ancestor(v0, 0) == v0);

  DirectedTree star = two_child_star();
  CHECK_FALSE(star.ancestor(star.index_of("(1,1)"), 2).has_value());
}

TEST_CASE("ancestor composes additively") {
  std::mt19937_64 rng(7);
  wco::testing::RandomShiftOptions opt;
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    const DirectedTree& t = *inst.shift.tree;
    for (int v = 0; v < t.size(); ++v)
      for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k) {
          auto a = t.ancestor(v, j);
          auto lhs = a ? t.ancestor(*a, k) : std::nullopt;
          auto rhs = t.ancestor(v, j + k);
          CHECK(lhs == rhs);
        }
  }
}

TEST_CASE("generations partition window members by depth levels") {
  ShiftInstance bin = make_binary(3);
  auto classes = generations(*bin.shift.tree, bin.window);
  REQUIRE(classes.size() == 4);
  CHECK(classes[0].size() == 1);
  CHECK(classes[1].size() == 2);
  CHECK(classes[2].size() == 4);
  CHECK(classes[3].size() == 8);
}

TEST_CASE("generations agree with the pairwise ancestor relation") {
  // Brute-force partition: u ~ v iff par^k(u) == par^k(v) for some k >= 1.
  std::mt19937_64 rng(11);
  wco::testing::RandomShiftOptions opt;
  opt.max_vertices = 30;
  for (int rep = 0; rep < 25; ++rep) {
    auto inst = wco::testing::random_rooted_shift(rng, opt, "t");
    const DirectedTree& t = *inst.shift.tree;
    auto classes = generations(t, inst.window);
    std::vector<int> class_of(t.size(), -1);
    for (size_t c = 0; c < classes.size(); ++c)
      for (int v : classes[c]) class_of[v] = static_cast<int>(c);

    for (int u = 0; u < t.size(); ++u) {
      for (int v = 0; v < t.size(); ++v) {
        bool related = u == v;
        for (int k = 1; k <= t.size() && !related; ++k) {
          auto a = t.ancestor(u, k);
          auto b = t.ancestor(v, k);
          if (a && b && *a == *b) related = true;
        }
        CHECK(related == (class_of[u] == class_of[v]));
      }
    }
  }
}

TEST_CASE("blackblack puts (2,1) and (2,2) in one class") {
  ShiftInstance inst = make_blackblack(6);
  const DirectedTree& t = *inst.shift.tree;
  const int a = t.index_of("(2,1)");
  const int b = t.index_of("(2,2)");
  auto classes = generations(t, inst.window);
  int ca = -1, cb = -1;
  for (size_t c = 0; c < classes.size(); ++c)
    for (int v : classes[c]) {
      if (v == a) ca = static_cast<int>(c);
      if (v == b) cb = static_cast<int>(c);
    }
  CHECK(ca == cb);
  CHECK(t.meeting_height(a, b) == 2);
}

TEST_CASE("a parentless singleton forms its own class") {
  DirectedTree t = DirectedTree::build({"x"}, {});
  TruncationWindow w = whole_tree_window(t, 0, 0, false, {});
  auto classes = generations(t, w);
  REQUIRE(classes.size() == 1);
  CHECK(classes[0] == std::vector<int>{0});
}

TEST_CASE("truncate on a rooted path") {
  std::vector<std::string> v{"0", "1", "2", "3", "4", "5"};
  std::vector<std::pair<std::string, std::string>> e;
  for (int i = 1; i < 6; ++i) e.emplace_back(v[i - 1], v[i]);
  DirectedTree t = DirectedTree::build(v, e);
  TruncationWindow w = truncate(t, t.index_of("0"), 3);
  REQUIRE(w.members.size() == 4);
  CHECK(t.label(w.members[3]) == "3");
  CHECK(w.interior_mask[0]);
  CHECK(w.interior_mask[2]);
  CHECK_FALSE(w.interior_mask[3]);  // child 4 left out
  CHECK_FALSE(w.top_cut);
}

TEST_CASE("truncate from a leaf climbs and fans out") {
  ShiftInstance fin = make_rooted_full_binary(4);
  const DirectedTree& t = *fin.shift.tree;
  const int base = t.index_of("r0000");
  TruncationWindow w = truncate(t, base, 2);
  // Highest ancestor r00; its depth-2 subtree has 7 vertices.
  CHECK(w.members.size() == 7);
  CHECK(w.top_cut);  // r00 has a parent in the full tree
  CHECK(w.rank_of(base) >= 0);
}

TEST_CASE("truncate members grow monotonically with depth") {
  ShiftInstance fin = make_rooted_full_binary(5);
  const DirectedTree& t = *fin.shift.tree;
  const int base = t.index_of("r01010");
  for (int d = 0; d + 1 <= 5; ++d) {
    TruncationWindow a = truncate(t, base, d);
    TruncationWindow b = truncate(t, base, d + 1);
    for (int m : a.members) CHECK(b.rank_of(m) >= 0);
  }
}

TEST_CASE("structural profiles of the builtin instances") {
  ShiftInstance zm = make_z_minus(8);
  StructuralProfile pz = structural_profile(*zm.shift.tree, zm.window);
  CHECK_FALSE(pz.rooted);
  REQUIRE(pz.leaves.size() == 1);
  CHECK(zm.shift.tree->label(pz.leaves[0]) == "0");
  CHECK(pz.branching.empty());
  CHECK(pz.z_minus_isomorphic);

  ShiftInstance bin = make_binary(5);
  StructuralProfile pb = structural_profile(*bin.shift.tree, bin.window);
  CHECK_FALSE(pb.rooted);
  CHECK(pb.leafless);
  CHECK(pb.branching.size() > 0);
  CHECK_FALSE(pb.z_minus_isomorphic);

  // Single rooted path of length 3, finite truth.
  DirectedTree path = DirectedTree::build({"a", "b", "c", "d"},
                                          {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  StructuralProfile pp = structural_profile(path);
  CHECK(pp.rooted);
  REQUIRE(pp.leaves.size() == 1);
  CHECK(pp.finite_depth == 3);
}

TEST_CASE("z_minus profile implies one leaf and no branching") {
  for (int d : {3, 5, 9}) {
    ShiftInstance zm = make_z_minus(d);
    StructuralProfile p = structural_profile(*zm.shift.tree, zm.window);
    REQUIRE(p.z_minus_isomorphic);
    CHECK(p.leaves.size() == 1);
    CHECK(p.branching.empty());
  }
}

TEST_CASE("tree-spec round trip") {
  std::string text =
      "# demo\n"
      "vertex 0\n"
      "vertex (1,1)\n"
      "vertex (1,2)\n"
      "root 0\n"
      "edge 0 (1,1) 1\n"
      "edge 0 (1,2) 2 -0.5\n";
  std::istringstream in(text);
  ShiftInstance inst = parse_tree_spec(in, "demo");
  CHECK(inst.shift.tree->size() == 3);
  CHECK(inst.shift.lambda[inst.shift.tree->index_of("(1,2)")] == Complex(2.0, -0.5));

  std::ostringstream out;
  emit_tree_spec(inst, out);
  std::istringstream in2(out.str());
  ShiftInstance again = parse_tree_spec(in2, "demo2");
  CHECK(again.shift.tree->size() == 3);
  CHECK(again.shift.lambda[again.shift.tree->index_of("(1,2)")] == Complex(2.0, -0.5));
  CHECK(again.shift.lambda[again.shift.tree->index_of("(1,1)")] == Complex(1.0, 0.0));
}

TEST_CASE("generator callbacks window an infinite chain like the builtin") {
  // The tree isomorphic to the negative integers: every vertex has a parent,
  // 0 is a genuine leaf. Enumeration must agree with the builtin, including
  // the cut-top flag and the completeness mask.
  TreeGenerator gen;
  gen.parent_of = [](const std::string& v) -> std::optional<std::string> {
    return std::to_string(std::stoi(v) - 1);
  };
  gen.children_of = [](const std::string& v) {
    const int k = std::stoi(v);
    return k < 0 ? std::vector<std::string>{std::to_string(k + 1)} : std::vector<std::string>{};
  };
  gen.weight_of = [](const std::string&) { return Complex(1, 0); };

  ShiftInstance from_gen = materialize_window(gen, "0", 6, "z_minus");
  ShiftInstance builtin = make_z_minus(6);
  REQUIRE(from_gen.shift.tree->size() == builtin.shift.tree->size());
  for (int i = 0; i < builtin.shift.tree->size(); ++i) {
    CHECK(from_gen.shift.tree->label(i) == builtin.shift.tree->label(i));
    CHECK(from_gen.window.interior_mask[i] == builtin.window.interior_mask[i]);
    CHECK(from_gen.shift.lambda[i] == builtin.shift.lambda[i]);
  }
  CHECK(from_gen.window.top_cut);
  CHECK(structural_profile(*from_gen.shift.tree, from_gen.window).z_minus_isomorphic);
}

TEST_CASE("generator windows close genuine roots and leaves") {
  // A rooted one-sided path with a true leaf at depth 2.
  TreeGenerator gen;
  gen.parent_of = [](const std::string& v) -> std::optional<std::string> {
    const int k = std::stoi(v);
    return k > 0 ? std::optional<std::string>(std::to_string(k - 1)) : std::nullopt;
  };
  gen.children_of = [](const std::string& v) {
    const int k = std::stoi(v);
    return k < 2 ? std::vector<std::string>{std::to_string(k + 1)} : std::vector<std::string>{};
  };
  gen.weight_of = [](const std::string&) { return Complex(1, 0); };

  ShiftInstance inst = materialize_window(gen, "0", 5, "short_path");
  CHECK(inst.shift.tree->size() == 3);
  CHECK_FALSE(inst.window.top_cut);
  StructuralProfile p = structural_profile(*inst.shift.tree, inst.window);
  CHECK(p.rooted);
  CHECK(p.finite_depth == 2);
}

TEST_CASE("tree-spec parse errors") {
  std::istringstream bad("vertex a\nvertex b\nedge a b 1\nedge b a 1\n");
  CHECK_THROWS_AS(parse_tree_spec(bad, "bad"), Error);
  std::istringstream unknown("frobnicate x\n");
  try {
    parse_tree_spec(unknown, "bad");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}
