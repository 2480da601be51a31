#pragma once

#include <string>

#include <json.hpp>

#include "sparta/app/pipeline.hpp"

namespace sparta::app {

inline constexpr const char* kReportSchema = "sparta-report/1";

// Absent optional fields are written as null. Infinite gaps are written as null
// and read back as +inf.
nlohmann::json report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(const nlohmann::json& doc);

void write_report_file(const std::string& path, const ComparisonReport& report);
ComparisonReport read_report_file(const std::string& path);

} // namespace sparta::app
