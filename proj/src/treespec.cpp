#include "wco/treespec.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wco {

namespace {

double parse_number(const std::string& tok, int line_no) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error,
                "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  }
}

}  // namespace

ShiftInstance parse_tree_spec(std::istream& in, const std::string& name) {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, Complex>> weights;
  std::string declared_root;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    if (tok == "vertex") {
      std::string id;
      if (!(ls >> id)) throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": vertex needs an id");
      vertices.push_back(id);
    } else if (tok == "edge") {
      std::string p, c, re, im;
      if (!(ls >> p >> c >> re))
        throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": edge needs parent, child, weight");
      double wre = parse_number(re, line_no);
      double wim = 0.0;
      if (ls >> im) wim = parse_number(im, line_no);
      std::string extra;
      if (ls >> extra)
        throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": trailing token '" + extra + "'");
      edges.emplace_back(p, c);
      weights.emplace_back(c, Complex(wre, wim));
    } else if (tok == "root") {
      if (!(ls >> declared_root))
        throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": root needs an id");
    } else {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": unknown directive '" + tok + "'");
    }
  }
  if (vertices.empty()) throw Error(Errc::parse_error, "no vertices declared");

  auto tree = std::make_shared<DirectedTree>(DirectedTree::build(vertices, edges));
  if (!declared_root.empty()) {
    int r = tree->index_of(declared_root);
    if (r != tree->top())
      throw Error(Errc::parse_error, "declared root '" + declared_root + "' has a parent");
  }

  WeightedShift shift;
  shift.tree = tree;
  shift.lambda.assign(tree->size(), Complex(0.0, 0.0));
  for (const auto& [id, w] : weights) shift.lambda[tree->index_of(id)] = w;

  TruncationWindow window =
      whole_tree_window(*tree, tree->top(), tree->max_depth(), /*top_cut=*/false, {});
  return ShiftInstance{std::move(shift), std::move(window), name};
}

ShiftInstance parse_tree_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  return parse_tree_spec(in, path);
}

void emit_tree_spec(const ShiftInstance& instance, std::ostream& out) {
  const DirectedTree& tree = *instance.shift.tree;
  const TruncationWindow& win = instance.window;
  for (int v : win.members) out << "vertex " << tree.label(v) << "\n";
  const int top = win.top_member();
  if (!win.top_cut) out << "root " << tree.label(top) << "\n";
  char buf[64];
  for (int v : win.members) {
    int p = tree.parent(v);
    if (p == -1 || win.rank_of(p) < 0) continue;
    const Complex w = instance.shift.lambda[v];
    if (w.imag() == 0.0) {
      std::snprintf(buf, sizeof(buf), "%.17g", w.real());
      out << "edge " << tree.label(p) << " " << tree.label(v) << " " << buf << "\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", w.real());
      out << "edge " << tree.label(p) << " " << tree.label(v) << " " << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", w.imag());
      out << " " << buf << "\n";
    }
  }
}

}  // namespace wco
