#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wco/errors.hpp"

namespace wco {

/// A finite directed tree: every vertex except one has a unique parent, no
/// cycles, connected. Vertices are opaque string ids; internally they are
/// re-indexed in breadth-first order from the top vertex (children keep the
/// insertion order of the edge list), so matrices and reports built on top of
/// a tree are reproducible.
class DirectedTree {
 public:
  /// Validates vertex/edge data and builds the tree.
  /// Throws Error with code cycle_detected, disconnected, duplicate_parent
  /// or unknown_vertex.
  static DirectedTree build(const std::vector<std::string>& vertices,
                            const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of a vertex id; throws unknown_vertex.
  int index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  /// Parent index or -1 for the top vertex.
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }

  /// The unique parentless vertex. Whether it is a genuine root or a
  /// truncation artifact is recorded on the window, not here.
  int top() const { return top_; }
  int depth(int v) const { return depth_[v]; }
  int max_depth() const { return max_depth_; }

  /// k-fold parent, or nullopt when the walk leaves the tree.
  std::optional<int> ancestor(int v, int k) const;

  /// Minimal k >= 1 with par^k(u) == par^k(v); 0 when u == v by convention;
  /// nullopt when the vertices never meet (different depths, or a parentless
  /// vertex paired with anything else).
  std::optional<int> meeting_height(int u, int v) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  int top_ = 0;
  int max_depth_ = 0;
};

/// A finite evaluation window over a tree. `members` is parent-closed up to
/// its own top vertex and ordered by tree index (breadth-first).
/// `interior_mask[i]` is true when all true children of members[i] are
/// themselves members, i.e. the order-1 fiber of that vertex is complete.
/// `top_cut` records that the window's top vertex has a parent outside the
/// window (the underlying tree continues upward).
struct TruncationWindow {
  int base = 0;
  int depth = 0;
  std::vector<int> members;
  std::vector<uint8_t> interior_mask;
  bool top_cut = false;

  int count() const { return static_cast<int>(members.size()); }
  int top_member() const { return members.front(); }

  /// Window rank of a tree index, or -1.
  int rank_of(int tree_index) const {
    if (tree_index < 0 || tree_index >= static_cast<int>(rank_.size())) return -1;
    return rank_[tree_index];
  }

  std::vector<int> rank_;  // tree index -> member rank or -1

  void rebuild_rank(int tree_size);
};

/// Members = all vertices reachable by <= depth parent steps from base plus
/// every descendant of those ancestors within distance `depth` of the highest
/// ancestor reached. interior_mask is computed against the tree.
TruncationWindow truncate(const DirectedTree& tree, int base, int depth);

/// Window covering the whole tree. `incomplete` lists vertices whose true
/// children extend beyond the materialized tree (generator knowledge);
/// `top_cut` marks a materialized top that has a parent in the true tree.
TruncationWindow whole_tree_window(const DirectedTree& tree, int base, int depth,
                                   bool top_cut, const std::vector<int>& incomplete);

/// Partition of window members into generations: u ~ v iff par^k(u) == par^k(v)
/// for some k >= 1, computed within the window's ancestor closure. A
/// parentless vertex relates only to itself. Classes come out ordered by
/// depth, members in tree order.
std::vector<std::vector<int>> generations(const DirectedTree& tree,
                                          const TruncationWindow& window);

struct StructuralProfile {
  bool rooted = false;            // the window top is a genuine root
  std::vector<int> leaves;        // members whose true children set is empty
  std::vector<int> branching;     // members with >= 2 children in the window
  bool z_minus_isomorphic = false;
  bool leafless = false;
  std::optional<int> finite_depth;
  bool window_limited = false;    // some statement could not be decided on the window
};

/// Profile of the tree as seen through a window; all verdicts are honest on
/// the window (a vertex with incomplete children is never reported as a leaf).
StructuralProfile structural_profile(const DirectedTree& tree,
                                     const TruncationWindow& window);

/// Profile of a finite tree taken as the whole truth.
StructuralProfile structural_profile(const DirectedTree& tree);

}  // namespace wco
