#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wco/tree.hpp"

namespace wco {

using Complex = std::complex<double>;

/// A weighted shift on a directed tree: weights lambda[v] sit on the edge
/// (parent(v), v). The entry for the tree's top vertex is meaningful only
/// when an evaluation window declares the top cut (the true tree continues
/// upward and the incoming edge carries that weight); for a genuine root it
/// is ignored.
struct WeightedShift {
  std::shared_ptr<const DirectedTree> tree;
  std::vector<Complex> lambda;

  /// sup over children-complete window members of sum_{children} |lambda|^2.
  double bound_certificate(const TruncationWindow& window) const;
};

/// A shift together with its declared evaluation window.
struct ShiftInstance {
  WeightedShift shift;
  TruncationWindow window;
  std::string name;
};

/// Builtin instances reproducing the worked examples. `depth` controls how
/// far the corresponding infinite tree is unrolled; the returned window
/// carries honest completeness flags.
ShiftInstance make_binary(int depth);             // rootless leafless, valency 2
ShiftInstance make_y_tree(int depth);             // chain into one branching vertex, two rays
ShiftInstance make_z_minus(int depth);            // rootless chain ending in a leaf
ShiftInstance make_blackblack(int depth);         // chain, split at 0, second split at (2,2)
ShiftInstance make_zplus_path(int depth);         // rooted infinite path, truncated below
ShiftInstance make_rooted_full_binary(int depth); // genuinely finite full binary tree

/// Dispatch by name; throws unknown_builtin. Names: binary, y_tree, z_minus,
/// blackblack, zplus_path, rooted_full_binary_d3.
ShiftInstance builtin_instance(const std::string& name, int depth);
std::vector<std::string> builtin_tree_names();

/// Lazily generated (possibly infinite) weighted tree: parent/children
/// callbacks plus a weight for every vertex with a parent.
struct TreeGenerator {
  std::function<std::optional<std::string>(const std::string&)> parent_of;
  std::function<std::vector<std::string>(const std::string&)> children_of;
  std::function<Complex(const std::string&)> weight_of;
};

/// Bounded enumeration window into a generated tree: climb at most `depth`
/// parent steps from `base`, then include every descendant of the highest
/// ancestor within distance `depth` of it. The returned window carries
/// honest flags (expanded vertices are children-complete, frontier vertices
/// are not, the top is cut when the generator still has a parent for it);
/// all global predicates evaluated on it are "verified on window".
ShiftInstance materialize_window(const TreeGenerator& generator, const std::string& base,
                                 int depth, const std::string& name);

/// Removes every edge whose child weight is zero and returns the connected
/// components as shifts with nonzero weights. Component windows inherit the
/// completeness flags; a component top created by cutting a zero edge is a
/// genuine root of its piece. The union of the components' vertex sets is the
/// original vertex set.
std::vector<ShiftInstance> decompose_at_zero_weights(const ShiftInstance& instance);

}  // namespace wco
