#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace kornlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.1.0";

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

// Report layout (docs/report_schema.json):
//   { "version", "tool_version", "command": {"name", "argv"},
//     "input_digest": "sha256:<64 hex>", "results": {...}, "timing_ms" }
// timing_ms is the only field allowed to differ between identical runs.
Json make_report(const std::string& command, const std::vector<std::string>& argv, const std::string& input_digest,
                 Json results, double timing_ms);

/// Check object {"value", "tolerance", "pass"} with pass = value <= tolerance.
Json check(double value, double tolerance);

/// Problems found, empty when the report is valid: required keys and types,
/// finite numbers everywhere, and every check object consistent.
std::vector<std::string> validate_report(const Json& report);

/// Pretty-printed with a trailing newline.
std::string dump_report(const Json& report);

}  // namespace kornlab::cli
