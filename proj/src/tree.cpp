#include "wco/tree.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace wco {

DirectedTree DirectedTree::build(const std::vector<std::string>& vertices,
                                 const std::vector<std::pair<std::string, std::string>>& edges) {
  std::unordered_map<std::string, int> raw_index;
  raw_index.reserve(vertices.size());
  for (const auto& id : vertices) {
    if (!raw_index.emplace(id, static_cast<int>(raw_index.size())).second)
      throw Error(Errc::invalid_argument, "duplicate vertex id: " + id);
  }
  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw Error(Errc::invalid_argument, "empty vertex list");

  std::vector<int> parent(n, -1);
  std::vector<std::vector<int>> children(n);
  for (const auto& [p, c] : edges) {
    auto ip = raw_index.find(p);
    auto ic = raw_index.find(c);
    if (ip == raw_index.end()) throw Error(Errc::unknown_vertex, "edge parent not declared: " + p);
    if (ic == raw_index.end()) throw Error(Errc::unknown_vertex, "edge child not declared: " + c);
    if (parent[ic->second] != -1)
      throw Error(Errc::duplicate_parent, "vertex has two parents: " + c);
    parent[ic->second] = ip->second;
    children[ip->second].push_back(ic->second);
  }

  // Cycle check: walking parents from any vertex must terminate within n steps.
  for (int v = 0; v < n; ++v) {
    int cur = v;
    for (int steps = 0; cur != -1; ++steps) {
      if (steps > n) throw Error(Errc::cycle_detected, "parent walk from " + vertices[v] + " does not terminate");
      cur = parent[cur];
    }
  }

  int top = -1;
  for (int v = 0; v < n; ++v) {
    if (parent[v] == -1) {
      if (top != -1)
        throw Error(Errc::disconnected, "two parentless vertices: " + vertices[top] + ", " + vertices[v]);
      top = v;
    }
  }
  if (top == -1) throw Error(Errc::cycle_detected, "no parentless vertex");

  // Breadth-first reindexing from the top, children in edge insertion order.
  std::vector<int> order;
  order.reserve(n);
  std::deque<int> queue{top};
  std::vector<int> new_index(n, -1);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    new_index[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (int c : children[v]) queue.push_back(c);
  }
  if (static_cast<int>(order.size()) != n)
    throw Error(Errc::disconnected, "not all vertices reachable from " + vertices[top]);

  DirectedTree t;
  t.labels_.resize(n);
  t.parent_.resize(n);
  t.children_.resize(n);
  t.depth_.resize(n);
  t.top_ = 0;
  for (int rank = 0; rank < n; ++rank) {
    int old = order[rank];
    t.labels_[rank] = vertices[old];
    t.index_.emplace(vertices[old], rank);
    t.parent_[rank] = parent[old] == -1 ? -1 : new_index[parent[old]];
    for (int c : children[old]) t.children_[rank].push_back(new_index[c]);
    t.depth_[rank] = t.parent_[rank] == -1 ? 0 : t.depth_[t.parent_[rank]] + 1;
    t.max_depth_ = std::max(t.max_depth_, t.depth_[rank]);
  }
  return t;
}

int DirectedTree::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::unknown_vertex, "unknown vertex: " + id);
  return it->second;
}

std::optional<int> DirectedTree::ancestor(int v, int k) const {
  if (v < 0 || v >= size()) throw Error(Errc::unknown_vertex, "vertex index out of range");
  if (k < 0) throw Error(Errc::invalid_argument, "ancestor order must be nonnegative");
  int cur = v;
  for (int i = 0; i < k; ++i) {
    cur = parent_[cur];
    if (cur == -1) return std::nullopt;
  }
  return cur;
}

std::optional<int> DirectedTree::meeting_height(int u, int v) const {
  if (u == v) return 0;
  if (depth_[u] != depth_[v]) return std::nullopt;
  int a = u, b = v, k = 0;
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
    ++k;
    if (a == -1 || b == -1) return std::nullopt;
  }
  return k;
}

void TruncationWindow::rebuild_rank(int tree_size) {
  rank_.assign(tree_size, -1);
  for (int i = 0; i < static_cast<int>(members.size()); ++i) rank_[members[i]] = i;
}

TruncationWindow truncate(const DirectedTree& tree, int base, int depth) {
  if (base < 0 || base >= tree.size())
    throw Error(Errc::unknown_vertex, "window base out of range");
  if (depth < 0) throw Error(Errc::invalid_argument, "window depth must be nonnegative");

  // Climb as far as possible, at most `depth` steps.
  int top = base;
  for (int i = 0; i < depth && tree.parent(top) != -1; ++i) top = tree.parent(top);

  // All descendants of the highest ancestor within distance `depth` of it.
  std::vector<uint8_t> in(tree.size(), 0);
  std::deque<std::pair<int, int>> queue{{top, 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    in[v] = 1;
    if (d == depth) continue;
    for (int c : tree.children(v)) queue.push_back({c, d + 1});
  }

  TruncationWindow w;
  w.base = base;
  w.depth = depth;
  for (int v = 0; v < tree.size(); ++v)
    if (in[v]) w.members.push_back(v);
  w.interior_mask.resize(w.members.size());
  for (size_t i = 0; i < w.members.size(); ++i) {
    bool complete = true;
    for (int c : tree.children(w.members[i]))
      if (!in[c]) complete = false;
    w.interior_mask[i] = complete ? 1 : 0;
  }
  w.top_cut = tree.parent(top) != -1;
  w.rebuild_rank(tree.size());
  return w;
}

TruncationWindow whole_tree_window(const DirectedTree& tree, int base, int depth,
                                   bool top_cut, const std::vector<int>& incomplete) {
  TruncationWindow w;
  w.base = base;
  w.depth = depth;
  w.members.resize(tree.size());
  for (int v = 0; v < tree.size(); ++v) w.members[v] = v;
  w.interior_mask.assign(tree.size(), 1);
  for (int v : incomplete) w.interior_mask[v] = 0;
  w.top_cut = top_cut;
  w.rebuild_rank(tree.size());
  return w;
}

std::vector<std::vector<int>> generations(const DirectedTree& tree,
                                          const TruncationWindow& window) {
  // Within a parent-closed window every member descends from the window top,
  // so members at equal depth meet at or below it: generations are depth
  // levels. The parentless top forms its own class (k >= 1 is unsatisfiable).
  const int top = window.top_member();
  const int top_depth = tree.depth(top);
  std::vector<std::vector<int>> classes;
  for (int v : window.members) {
    const int level = tree.depth(v) - top_depth;
    if (level >= static_cast<int>(classes.size())) classes.resize(level + 1);
    classes[level].push_back(v);
  }
  return classes;
}

StructuralProfile structural_profile(const DirectedTree& tree,
                                     const TruncationWindow& window) {
  StructuralProfile p;
  p.rooted = !window.top_cut && tree.parent(window.top_member()) == -1;
  bool any_incomplete = window.top_cut;
  std::vector<uint8_t> in(tree.size(), 0);
  for (int v : window.members) in[v] = 1;

  auto valency_in_window = [&](int v) {
    int k = 0;
    for (int c : tree.children(v))
      if (in[c]) ++k;
    return k;
  };

  for (size_t i = 0; i < window.members.size(); ++i) {
    const int v = window.members[i];
    const int val = valency_in_window(v);
    if (val >= 2) p.branching.push_back(v);
    if (window.interior_mask[i]) {
      if (val == 0 && tree.children(v).empty()) p.leaves.push_back(v);
    } else {
      any_incomplete = true;
    }
  }
  p.leafless = p.leaves.empty();
  p.window_limited = any_incomplete;

  bool all_single = true;
  for (size_t i = 0; i < window.members.size(); ++i)
    if (valency_in_window(window.members[i]) > 1) all_single = false;
  p.z_minus_isomorphic = !p.rooted && p.leaves.size() == 1 && p.branching.empty() && all_single;

  if (p.rooted && !p.leafless) {
    // Finite depth is only certain when no member hides children outside the
    // window.
    bool complete_everywhere = true;
    for (uint8_t m : window.interior_mask)
      if (!m) complete_everywhere = false;
    if (complete_everywhere) {
      int top_depth = tree.depth(window.top_member());
      int d = 0;
      for (int v : window.members) d = std::max(d, tree.depth(v) - top_depth);
      p.finite_depth = d;
    }
  }
  return p;
}

StructuralProfile structural_profile(const DirectedTree& tree) {
  TruncationWindow w = whole_tree_window(tree, tree.top(), tree.max_depth(), false, {});
  return structural_profile(tree, w);
}

}  // namespace wco
