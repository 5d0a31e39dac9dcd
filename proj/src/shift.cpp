#include "wco/shift.hpp"

#include <algorithm>
#include <deque>

namespace wco {

double WeightedShift::bound_certificate(const TruncationWindow& window) const {
  double sup = 0.0;
  for (int v : window.members) {
    double s = 0.0;
    for (int c : tree->children(v))
      if (window.rank_of(c) >= 0) s += std::norm(lambda[c]);
    sup = std::max(sup, s);
  }
  return sup;
}

namespace {

struct Builder {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, Complex>> weights;

  void vertex(const std::string& id) { vertices.push_back(id); }
  void edge(const std::string& p, const std::string& c, Complex w = Complex(1.0, 0.0)) {
    edges.emplace_back(p, c);
    weights.emplace_back(c, w);
  }

  ShiftInstance finish(const std::string& name, const std::string& base, int depth,
                       bool top_cut, Complex top_lambda,
                       const std::vector<std::string>& incomplete) const {
    auto tree = std::make_shared<DirectedTree>(DirectedTree::build(vertices, edges));
    WeightedShift shift;
    shift.tree = tree;
    shift.lambda.assign(tree->size(), Complex(0.0, 0.0));
    for (const auto& [id, w] : weights) shift.lambda[tree->index_of(id)] = w;
    if (top_cut) shift.lambda[tree->top()] = top_lambda;
    std::vector<int> inc;
    for (const auto& id : incomplete) inc.push_back(tree->index_of(id));
    TruncationWindow window =
        whole_tree_window(*tree, tree->index_of(base), depth, top_cut, inc);
    return ShiftInstance{std::move(shift), std::move(window), name};
  }
};

std::string pair_id(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

ShiftInstance make_binary(int depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "binary depth must be >= 1");
  Builder b;
  // Path-string labels below the window top; every vertex has two children
  // down to `depth`, where the true tree continues.
  std::vector<std::string> level{"v"};
  b.vertex("v");
  std::vector<std::string> incomplete;
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next;
    for (const auto& p : level) {
      for (char bit : {'0', '1'}) {
        std::string c = p + bit;
        b.vertex(c);
        b.edge(p, c);
        next.push_back(c);
      }
    }
    level = std::move(next);
  }
  incomplete = level;
  std::string base = "v" + std::string(depth, '0');
  return b.finish("binary", base, depth, /*top_cut=*/true, Complex(1, 0), incomplete);
}

ShiftInstance make_y_tree(int depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "y_tree depth must be >= 1");
  Builder b;
  for (int k = depth; k >= 1; --k) b.vertex(std::to_string(-k));
  b.vertex("0");
  for (int k = depth; k >= 2; --k) b.edge(std::to_string(-k), std::to_string(-k + 1));
  b.edge("-1", "0");
  for (int i : {1, 2}) {
    for (int j = 1; j <= depth; ++j) b.vertex(pair_id(i, j));
    b.edge("0", pair_id(i, 1));
    for (int j = 1; j < depth; ++j) b.edge(pair_id(i, j), pair_id(i, j + 1));
  }
  return b.finish("y_tree", "0", depth, /*top_cut=*/true, Complex(1, 0),
                  {pair_id(1, depth), pair_id(2, depth)});
}

ShiftInstance make_z_minus(int depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "z_minus depth must be >= 1");
  Builder b;
  for (int k = depth; k >= 1; --k) b.vertex(std::to_string(-k));
  b.vertex("0");
  for (int k = depth; k >= 2; --k) b.edge(std::to_string(-k), std::to_string(-k + 1));
  b.edge("-1", "0");
  // 0 is a genuine leaf; only the top's parent is cut.
  return b.finish("z_minus", "0", depth, /*top_cut=*/true, Complex(1, 0), {});
}

ShiftInstance make_blackblack(int depth) {
  if (depth < 3) throw Error(Errc::invalid_argument, "blackblack depth must be >= 3");
  Builder b;
  for (int k = depth; k >= 1; --k) b.vertex(std::to_string(-k));
  b.vertex("0");
  for (int k = depth; k >= 2; --k) b.edge(std::to_string(-k), std::to_string(-k + 1));
  b.edge("-1", "0");
  // Top branch: single ray (1,1) -> (2,1) -> ...
  for (int k = 1; k <= depth; ++k) b.vertex(pair_id(k, 1));
  b.edge("0", pair_id(1, 1));
  for (int k = 1; k < depth; ++k) b.edge(pair_id(k, 1), pair_id(k + 1, 1));
  // Bottom branch splits once more at (2,2).
  b.vertex(pair_id(1, 2));
  b.vertex(pair_id(2, 2));
  b.edge("0", pair_id(1, 2));
  b.edge(pair_id(1, 2), pair_id(2, 2));
  for (int k = 3; k <= depth; ++k) {
    b.vertex(pair_id(k, 2));
    b.vertex(pair_id(k, 3));
  }
  b.edge(pair_id(2, 2), pair_id(3, 2));
  b.edge(pair_id(2, 2), pair_id(3, 3));
  for (int k = 3; k < depth; ++k) {
    b.edge(pair_id(k, 2), pair_id(k + 1, 2));
    b.edge(pair_id(k, 3), pair_id(k + 1, 3));
  }
  return b.finish("blackblack", "0", depth, /*top_cut=*/true, Complex(1, 0),
                  {pair_id(depth, 1), pair_id(depth, 2), pair_id(depth, 3)});
}

ShiftInstance make_zplus_path(int depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "zplus_path depth must be >= 1");
  Builder b;
  b.vertex("0");
  for (int k = 1; k <= depth; ++k) {
    b.vertex(std::to_string(k));
    b.edge(std::to_string(k - 1), std::to_string(k));
  }
  // Genuine root at 0; the path continues past `depth`.
  return b.finish("zplus_path", "0", depth, /*top_cut=*/false, Complex(0, 0),
                  {std::to_string(depth)});
}

ShiftInstance make_rooted_full_binary(int depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "rooted binary depth must be >= 1");
  Builder b;
  std::vector<std::string> level{"r"};
  b.vertex("r");
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next;
    for (const auto& p : level) {
      for (char bit : {'0', '1'}) {
        std::string c = p + bit;
        b.vertex(c);
        b.edge(p, c);
        next.push_back(c);
      }
    }
    level = std::move(next);
  }
  auto inst = b.finish("rooted_full_binary_d" + std::to_string(depth), "r", depth,
                       /*top_cut=*/false, Complex(0, 0), {});
  return inst;
}

ShiftInstance builtin_instance(const std::string& name, int depth) {
  if (name == "binary") return make_binary(depth);
  if (name == "y_tree") return make_y_tree(depth);
  if (name == "z_minus") return make_z_minus(depth);
  if (name == "blackblack") return make_blackblack(depth);
  if (name == "zplus_path") return make_zplus_path(depth);
  if (name == "rooted_full_binary_d3") return make_rooted_full_binary(3);
  throw Error(Errc::unknown_builtin, "unknown builtin: " + name);
}

std::vector<std::string> builtin_tree_names() {
  return {"binary", "y_tree", "z_minus", "blackblack", "zplus_path", "rooted_full_binary_d3"};
}

ShiftInstance materialize_window(const TreeGenerator& generator, const std::string& base,
                                 int depth, const std::string& name) {
  if (depth < 0) throw Error(Errc::invalid_argument, "window depth must be nonnegative");
  std::string top = base;
  for (int i = 0; i < depth; ++i) {
    auto p = generator.parent_of(top);
    if (!p) break;
    top = *p;
  }
  const bool top_cut = generator.parent_of(top).has_value();

  Builder b;
  std::vector<std::string> incomplete;
  std::deque<std::pair<std::string, int>> queue{{top, 0}};
  b.vertex(top);
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == depth) {
      if (!generator.children_of(v).empty()) incomplete.push_back(v);
      continue;
    }
    for (const std::string& c : generator.children_of(v)) {
      b.vertex(c);
      b.edge(v, c, generator.weight_of(c));
      queue.push_back({c, d + 1});
    }
  }
  const Complex top_weight = top_cut ? generator.weight_of(top) : Complex(0, 0);
  ShiftInstance inst = b.finish(name, base, depth, top_cut, top_weight, incomplete);
  return inst;
}

std::vector<ShiftInstance> decompose_at_zero_weights(const ShiftInstance& instance) {
  const DirectedTree& tree = *instance.shift.tree;
  const TruncationWindow& win = instance.window;
  const auto& lambda = instance.shift.lambda;

  // Component of each member after cutting edges whose child weight is zero.
  std::vector<int> comp(tree.size(), -1);
  int n_comp = 0;
  for (int v : win.members) {
    if (comp[v] != -1) continue;
    // Climb within the window along nonzero edges to the piece's top.
    int top = v;
    while (true) {
      int p = tree.parent(top);
      if (p == -1 || win.rank_of(p) < 0) break;
      if (lambda[top] == Complex(0.0, 0.0)) break;
      top = p;
    }
    if (comp[top] != -1) {
      comp[v] = comp[top];
      continue;
    }
    const int id = n_comp++;
    std::deque<int> queue{top};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (comp[u] != -1) continue;
      comp[u] = id;
      for (int c : tree.children(u))
        if (win.rank_of(c) >= 0 && lambda[c] != Complex(0.0, 0.0)) queue.push_back(c);
    }
  }

  std::vector<std::vector<int>> members_of(n_comp);
  for (int v : win.members) members_of[comp[v]].push_back(v);

  std::vector<ShiftInstance> out;
  for (int k = 0; k < n_comp; ++k) {
    const auto& mem = members_of[k];
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;
    vertices.reserve(mem.size());
    for (int v : mem) vertices.push_back(tree.label(v));
    for (int v : mem) {
      int p = tree.parent(v);
      if (p != -1 && win.rank_of(p) >= 0 && comp[p] == k && lambda[v] != Complex(0.0, 0.0))
        edges.emplace_back(tree.label(p), tree.label(v));
    }
    auto sub = std::make_shared<DirectedTree>(DirectedTree::build(vertices, edges));

    WeightedShift shift;
    shift.tree = sub;
    shift.lambda.assign(sub->size(), Complex(0.0, 0.0));
    std::vector<int> incomplete;
    bool top_cut = false;
    for (int i = 0; i < sub->size(); ++i) {
      const int orig = tree.index_of(sub->label(i));
      if (sub->parent(i) != -1) shift.lambda[i] = lambda[orig];
      if (!win.interior_mask[win.rank_of(orig)]) incomplete.push_back(i);
    }
    // The piece's top is a genuine root when its incoming edge was cut by a
    // zero weight; only the original window top can remain cut, and a zero
    // weight on its cut edge severs it just the same.
    const int orig_top = tree.index_of(sub->label(sub->top()));
    if (orig_top == win.top_member() && win.top_cut &&
        lambda[orig_top] != Complex(0.0, 0.0)) {
      top_cut = true;
      shift.lambda[sub->top()] = lambda[orig_top];
    }
    int base = sub->contains(tree.label(win.base)) && comp[win.base] == k
                   ? sub->index_of(tree.label(win.base))
                   : sub->top();
    TruncationWindow window = whole_tree_window(*sub, base, win.depth, top_cut, incomplete);
    out.push_back(ShiftInstance{std::move(shift), std::move(window),
                                instance.name + "#" + std::to_string(k)});
  }
  return out;
}

}  // namespace wco
