#pragma once

#include "treesmooth/harness.hpp"

#include <json.hpp>

#include <string>

namespace treesmooth {

inline constexpr int kReportSchemaVersion = 1;

// Full report document: schema_version, protocol, the complete effective
// configuration (defaults included), notes, per-repetition rows, summary.
nlohmann::ordered_json report_to_json(const ExperimentReport& report);

// Flat per-repetition table for external plotting. '.' decimal point,
// locale independent.
std::string report_to_csv(const ExperimentReport& report);

void save_report_json(const ExperimentReport& report, const std::string& path);
void save_report_csv(const ExperimentReport& report, const std::string& path);

// Shortest round-trip decimal rendering of a double (to_chars).
std::string format_double(double v);

} // namespace treesmooth
