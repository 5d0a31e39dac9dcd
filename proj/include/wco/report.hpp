#pragma once

#include <json.hpp>

#include "wco/centered.hpp"
#include "wco/classify.hpp"

namespace wco {

/// Versioned machine-readable report (schema 1). Key order is fixed and
/// doubles serialize in shortest round-trip form, so identical configurations
/// produce byte-identical documents. Timings are attached only on request
/// since they vary between runs.
nlohmann::ordered_json report_to_json(const CenteredReport& report);

nlohmann::ordered_json type_verdict_to_json(const TypeVerdict& verdict);

/// Human-oriented fixed-width rendering (lossy).
std::string report_to_table(const CenteredReport& report);

}  // namespace wco
