// Command-line front end: parse or generate instances, run the centeredness
// check suite, classify types, and emit machine-readable reports.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "wco/centered.hpp"
#include "wco/classify.hpp"
#include "wco/continuous.hpp"
#include "wco/oracle.hpp"
#include "wco/report.hpp"
#include "wco/treespec.hpp"

namespace {

constexpr int kExitCentered = 0;
constexpr int kExitNotCentered = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitInternal = 70;

int exit_code_for(const wco::Error& e) {
  switch (e.code()) {
    case wco::Errc::parse_error:
    case wco::Errc::cycle_detected:
    case wco::Errc::disconnected:
    case wco::Errc::duplicate_parent:
    case wco::Errc::unknown_vertex:
      return kExitParse;
    case wco::Errc::unknown_builtin:
    case wco::Errc::invalid_argument:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

struct CommonOptions {
  std::string builtin;
  std::string input;
  int n_max = 3;
  int depth = 8;
  double tol = 1e-9;
  std::string output;
  std::string format = "json";
  bool timings = false;
  std::string dump_matrix_path;
};

void add_common(CLI::App* cmd, CommonOptions* opt, bool with_input) {
  if (with_input) {
    cmd->add_option("--builtin", opt->builtin, "builtin instance name");
    cmd->add_option("--input", opt->input, "tree-spec file");
  }
  cmd->add_option("--n-max", opt->n_max, "maximal order tested")->capture_default_str();
  cmd->add_option("--depth", opt->depth, "window depth for builtins")->capture_default_str();
  cmd->add_option("--tol", opt->tol, "comparison tolerance")->capture_default_str();
  cmd->add_option("--output", opt->output, "write to file instead of stdout");
  cmd->add_option("--format", opt->format, "json or table")->capture_default_str();
  cmd->add_flag("--timings", opt->timings, "attach timings to the report");
  cmd->add_option("--dump-matrix", opt->dump_matrix_path,
                  "dump the materialized matrix (plain text, re/im pairs)");
}

void validate(const CommonOptions& opt) {
  if (opt.n_max < 1) throw wco::Error(wco::Errc::invalid_argument, "n-max must be >= 1");
  if (opt.depth < opt.n_max + 2)
    throw wco::Error(wco::Errc::invalid_argument,
                     "depth must be at least n-max + 2 so interiors are nonempty");
  if (opt.format != "json" && opt.format != "table")
    throw wco::Error(wco::Errc::invalid_argument, "format must be json or table");
}

wco::ShiftInstance load_instance(const CommonOptions& opt) {
  if (!opt.builtin.empty() && !opt.input.empty())
    throw wco::Error(wco::Errc::invalid_argument, "choose either --builtin or --input");
  if (!opt.builtin.empty()) return wco::builtin_instance(opt.builtin, opt.depth);
  if (!opt.input.empty()) return wco::parse_tree_spec_file(opt.input);
  throw wco::Error(wco::Errc::invalid_argument, "one of --builtin or --input is required");
}

void write_out(const CommonOptions& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.output);
  if (!f) throw wco::Error(wco::Errc::invalid_argument, "cannot write " + opt.output);
  f << text;
}

int cmd_check(const CommonOptions& opt) {
  validate(opt);
  const auto t0 = std::chrono::steady_clock::now();
  wco::ShiftInstance instance = load_instance(opt);
  wco::ReportOptions ropt;
  ropt.n_max = opt.n_max;
  ropt.tol = opt.tol;
  wco::CenteredReport report = wco::full_report(instance, ropt);

  if (!opt.dump_matrix_path.empty()) {
    std::ofstream f(opt.dump_matrix_path);
    if (!f) throw wco::Error(wco::Errc::invalid_argument, "cannot write " + opt.dump_matrix_path);
    wco::dump_matrix(wco::materialize(instance).matrix(), f);
  }

  if (opt.format == "table") {
    write_out(opt, wco::report_to_table(report));
  } else {
    nlohmann::ordered_json j = wco::report_to_json(report);
    if (opt.timings) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      j["timings_ms"] = {{"total", ms}};
    }
    write_out(opt, j.dump(2) + "\n");
  }
  if (report.internal_inconsistency)
    std::cerr << "warning: equivalent conditions disagree on fully tested data\n";
  if (report.any_fail()) return kExitNotCentered;
  if (report.all_pass()) return kExitCentered;
  return kExitInconclusive;
}

int cmd_classify(const CommonOptions& opt) {
  validate(opt);
  wco::ShiftInstance instance = load_instance(opt);

  wco::ReportOptions ropt;
  ropt.n_max = opt.n_max;
  ropt.tol = opt.tol;
  ropt.with_classification = false;
  wco::CenteredReport report = wco::full_report(instance, ropt);
  if (report.any_fail()) {
    std::cerr << "NotCentered: the instance fails the centeredness checks\n";
    return kExitNotCentered;
  }
  if (!report.all_pass()) {
    std::cerr << "inconclusive: window too shallow to certify centeredness\n";
    return kExitInconclusive;
  }

  auto components = wco::decompose_at_zero_weights(instance);
  nlohmann::ordered_json j;
  nlohmann::ordered_json parts = nlohmann::ordered_json::array();
  for (auto& comp : components) {
    wco::TypeVerdict tv = wco::structural_type(comp, opt.n_max, 1e-8);
    nlohmann::ordered_json cj = wco::type_verdict_to_json(tv);
    if (!opt.builtin.empty()) {
      // Stability: the verdict should not move when the window deepens.
      wco::ShiftInstance deeper = wco::builtin_instance(opt.builtin, opt.depth + 2);
      wco::TypeVerdict tv2 = wco::structural_type(deeper, opt.n_max, 1e-8);
      cj["stable_at_deeper_window"] = tv2.label == tv.label;
    } else {
      cj["stable_at_deeper_window"] = nullptr;
    }
    parts.push_back(std::move(cj));
  }
  if (parts.size() == 1)
    j = parts[0];
  else
    j = {{"components", parts}};
  write_out(opt, j.dump(2) + "\n");
  return kExitCentered;
}

int cmd_examples(const std::string& name, const CommonOptions& opt) {
  for (const auto& candidate : wco::builtin_tree_names()) {
    if (candidate != name) continue;
    wco::ShiftInstance instance = wco::builtin_instance(name, opt.depth);
    std::ostringstream out;
    out << "# " << name << " depth=" << opt.depth << "\n";
    wco::emit_tree_spec(instance, out);
    write_out(opt, out.str());
    return 0;
  }
  if (name == "halfline") {
    nlohmann::ordered_json j = {{"model", "halfline"}, {"order", 2}};
    write_out(opt, j.dump(2) + "\n");
    return 0;
  }
  if (name == "linear_gauss") {
    nlohmann::ordered_json j = {{"model", "linear"},
                                {"kappa", 1},
                                {"rho", "poly"},
                                {"coefficients", {0.0, 1.0}},
                                {"matrix", {2.0}}};
    write_out(opt, j.dump(2) + "\n");
    return 0;
  }
  throw wco::Error(wco::Errc::unknown_builtin, "unknown builtin: " + name);
}

struct ContinuousOptions {
  std::string model;
  std::string config;
  std::string rho = "poly";
  std::vector<double> coefficients{0.0, 1.0};
  std::vector<double> matrix{2.0};
  int kappa = 1;
  int order = 1;
  double radius = 10.0;
  int grid = 100000;
  std::string output;
};

int cmd_continuous(ContinuousOptions opt) {
  if (!opt.config.empty()) {
    std::ifstream f(opt.config);
    if (!f) throw wco::Error(wco::Errc::parse_error, "cannot open " + opt.config);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw wco::Error(wco::Errc::parse_error, e.what());
    }
    opt.model = j.value("model", "");
    if (j.contains("kappa")) opt.kappa = j["kappa"].get<int>();
    if (j.contains("rho")) opt.rho = j["rho"].get<std::string>();
    if (j.contains("coefficients")) opt.coefficients = j["coefficients"].get<std::vector<double>>();
    if (j.contains("matrix")) opt.matrix = j["matrix"].get<std::vector<double>>();
    if (j.contains("order")) opt.order = j["order"].get<int>();
  }

  nlohmann::ordered_json j;
  if (opt.model == "halfline") {
    wco::HalflineModel m = wco::halfline_model(opt.order);
    j["model"] = "halfline";
    j["order"] = m.order;
    j["quadrature_residual"] = m.quadrature_residual;
    j["coisometry_residual"] = m.coisometry_residual;
    j["expectation_identity"] = m.expectation_identity;
    j["centered"] = true;
    j["type"] = m.type;
    j["adjoint_type"] = m.adjoint_type;
    j["adjoint_range_dims"] = m.adjoint_range_dims;
  } else if (opt.model == "linear") {
    wco::RadialDensity density = opt.rho == "exp"
                                     ? wco::RadialDensity::exponential()
                                     : wco::RadialDensity::polynomial(opt.coefficients);
    if (static_cast<int>(opt.matrix.size()) != opt.kappa * opt.kappa)
      throw wco::Error(wco::Errc::invalid_argument, "matrix must have kappa^2 entries (row-major)");
    Eigen::MatrixXd a(opt.kappa, opt.kappa);
    for (int r = 0; r < opt.kappa; ++r)
      for (int c = 0; c < opt.kappa; ++c) a(r, c) = opt.matrix[r * opt.kappa + c];
    wco::LinearModel model(opt.kappa, a);
    wco::Boundedness b = wco::boundedness_test(density, model, opt.radius);
    j["model"] = "linear";
    j["kappa"] = opt.kappa;
    j["bounded"] = b.bounded;
    j["norm_sq_estimate"] = b.norm_sq_estimate;
    j["expectation_identity"] = true;  // phi invertible
    j["centered"] = true;
    j["type"] = "IV";
    if (b.bounded) {
      std::vector<wco::TestFunction> fs;
      Eigen::VectorXd c0 = Eigen::VectorXd::Constant(opt.kappa, 2.0);
      fs.push_back(wco::triangle_bump(c0, 1.0));
      const int grid = opt.kappa == 1 ? opt.grid : std::min(opt.grid, 1000);
      j["quadrature_residual"] =
          wco::quadrature_verify(density, model, opt.order, fs, opt.radius, grid);
    }
  } else {
    throw wco::Error(wco::Errc::invalid_argument, "model must be linear or halfline");
  }
  CommonOptions w;
  w.output = opt.output;
  write_out(w, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"centeredness and Morrel-Muhly type checks for weighted composition operators"};
  app.require_subcommand(1);

  CommonOptions check_opt, classify_opt, examples_opt;
  std::string examples_name;
  ContinuousOptions cont_opt;

  CLI::App* check = app.add_subcommand("check", "run the centeredness check suite");
  add_common(check, &check_opt, true);

  CLI::App* classify = app.add_subcommand("classify", "classify a centered instance");
  add_common(classify, &classify_opt, true);

  CLI::App* examples = app.add_subcommand("examples", "emit a builtin instance");
  examples->add_option("name", examples_name, "builtin name")->required();
  add_common(examples, &examples_opt, false);

  CLI::App* continuous = app.add_subcommand("continuous", "continuous-model verification");
  continuous->add_option("--model", cont_opt.model, "linear or halfline");
  continuous->add_option("--config", cont_opt.config, "JSON config file");
  continuous->add_option("--rho", cont_opt.rho, "poly or exp");
  continuous->add_option("--coefficients", cont_opt.coefficients, "polynomial coefficients");
  continuous->add_option("--matrix", cont_opt.matrix, "row-major map entries");
  continuous->add_option("--kappa", cont_opt.kappa, "dimension (<= 3)");
  continuous->add_option("--order", cont_opt.order, "power of the map");
  continuous->add_option("--radius", cont_opt.radius, "quadrature radius");
  continuous->add_option("--grid", cont_opt.grid, "grid points per axis");
  continuous->add_option("--output", cont_opt.output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_opt);
    if (classify->parsed()) return cmd_classify(classify_opt);
    if (examples->parsed()) return cmd_examples(examples_name, examples_opt);
    if (continuous->parsed()) return cmd_continuous(cont_opt);
  } catch (const wco::Error& e) {
    std::cerr << wco::errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
