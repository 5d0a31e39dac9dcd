#include "wco/report.hpp"

#include <iomanip>
#include <sstream>

namespace wco {

namespace {

nlohmann::ordered_json witness_to_json(const Witness& w) {
  nlohmann::ordered_json j;
  j["point"] = w.point;
  j["n"] = w.n;
  if (w.k > 0) j["k"] = w.k;
  j["lhs"] = {w.lhs.real(), w.lhs.imag()};
  j["rhs"] = {w.rhs.real(), w.rhs.imag()};
  return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const CenteredReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["instance"] = {{"name", report.instance_name}, {"points", report.member_count}};
  j["window"] = {{"base", report.base_label},
                 {"depth", report.depth},
                 {"interior_count", report.interior_count}};
  j["n_max"] = report.n_max;
  j["tol"] = report.tol;

  nlohmann::ordered_json conditions = nlohmann::ordered_json::array();
  for (const auto& c : report.conditions) {
    nlohmann::ordered_json cj;
    cj["tag"] = c.tag;
    cj["status"] = status_name(c.status);
    cj["n"] = c.n_range;
    cj["witness"] = c.witness ? witness_to_json(*c.witness) : nlohmann::ordered_json();
    cj["residual"] = c.residual;
    cj["tested"] = c.tested;
    cj["masked"] = c.masked;
    conditions.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conditions);

  if (report.classification.ran) {
    nlohmann::ordered_json cj;
    cj["label"] = report.classification.label;
    nlohmann::ordered_json ev = nlohmann::ordered_json::array();
    for (const auto& [criterion, data] : report.classification.evidence)
      ev.push_back({{"criterion", criterion}, {"data", data}});
    cj["evidence"] = std::move(ev);
    j["classification"] = std::move(cj);
  } else {
    j["classification"] = nullptr;
  }

  if (report.oracle.ran) {
    j["oracle"] = {{"pass", report.oracle.pass},
                   {"max_commutator", report.oracle.max_commutator},
                   {"normalized_commutator", report.oracle.normalized_commutator},
                   {"phase_defect", report.oracle.phase_defect},
                   {"half_commutator", report.oracle.half_commutator},
                   {"weak_pass", report.oracle.weak_pass},
                   {"weak_commutator", report.oracle.weak_commutator},
                   {"valid_order", report.oracle.valid_order},
                   {"norms", report.oracle.norm_method}};
  } else {
    j["oracle"] = nullptr;
  }
  j["internal_inconsistency"] = report.internal_inconsistency;
  return j;
}

nlohmann::ordered_json type_verdict_to_json(const TypeVerdict& verdict) {
  nlohmann::ordered_json j;
  j["label"] = type_label_name(verdict.label);
  nlohmann::ordered_json ev = nlohmann::ordered_json::array();
  for (const auto& [criterion, data] : verdict.evidence)
    ev.push_back({{"criterion", criterion}, {"data", data}});
  j["evidence"] = std::move(ev);
  j["window"] = verdict.window_provenance;
  return j;
}

std::string report_to_table(const CenteredReport& report) {
  std::ostringstream out;
  out << "instance: " << report.instance_name << "  points: " << report.member_count
      << "  window base=" << report.base_label << " depth=" << report.depth << "\n";
  out << std::left << std::setw(12) << "condition" << std::setw(16) << "status"
      << std::setw(14) << "residual" << std::setw(9) << "tested" << std::setw(9) << "masked"
      << "witness\n";
  for (const auto& c : report.conditions) {
    out << std::left << std::setw(12) << c.tag << std::setw(16) << status_name(c.status)
        << std::setw(14) << std::scientific << std::setprecision(2) << c.residual
        << std::setw(9) << c.tested << std::setw(9) << c.masked;
    if (c.witness)
      out << c.witness->point << " @n=" << c.witness->n
          << (c.witness->k > 0 ? ",k=" + std::to_string(c.witness->k) : "");
    out << "\n";
  }
  if (report.oracle.ran) {
    out << "oracle: " << (report.oracle.pass ? "PASS" : "FAIL")
        << "  max_commutator=" << report.oracle.max_commutator
        << "  phase_defect=" << report.oracle.phase_defect << "\n";
  }
  if (report.classification.ran) {
    out << "type: " << report.classification.label;
    for (const auto& [criterion, data] : report.classification.evidence)
      out << "  [" << criterion << ": " << data << "]";
    out << "\n";
  }
  return out.str();
}

}  // namespace wco
