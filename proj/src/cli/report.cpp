#include "kornlab/cli/report.hpp"

#include "kornlab/core.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <memory>

namespace kornlab::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Json make_report(const std::string& command, const std::vector<std::string>& argv, const std::string& input_digest,
                 Json results, double timing_ms) {
  Json r;
  r["version"] = kSchemaVersion;
  r["tool_version"] = kToolVersion;
  r["command"] = {{"name", command}, {"argv", argv}};
  r["input_digest"] = "sha256:" + input_digest;
  r["results"] = std::move(results);
  r["timing_ms"] = timing_ms;
  return r;
}

Json check(double value, double tolerance) {
  return {{"value", value}, {"tolerance", tolerance}, {"pass", value <= tolerance}};
}

namespace {

void walk(const Json& j, const std::string& path, std::vector<std::string>& problems) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) problems.push_back(path + ": non-finite number");
  if (j.is_object()) {
    if (j.contains("value") && j.contains("tolerance") && j.contains("pass")) {
      const auto& v = j["value"];
      const auto& t = j["tolerance"];
      const auto& p = j["pass"];
      if (!v.is_number() || !t.is_number() || !p.is_boolean()) {
        problems.push_back(path + ": check object has wrong types");
      } else if (p.get<bool>() != (v.get<double>() <= t.get<double>())) {
        problems.push_back(path + ": pass flag contradicts value and tolerance");
      }
    }
    for (const auto& [key, child] : j.items()) walk(child, path + "." + key, problems);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], path + "[" + std::to_string(i) + "]", problems);
  }
}

}  // namespace

std::vector<std::string> validate_report(const Json& report) {
  std::vector<std::string> problems;
  if (!report.is_object()) return {"report is not an object"};
  auto need = [&](const char* key, bool ok, const char* what) {
    if (!report.contains(key)) {
      problems.push_back(std::string("missing key '") + key + "'");
    } else if (!ok) {
      problems.push_back(std::string("key '") + key + "' must be " + what);
    }
  };
  need("version", report.contains("version") && report["version"] == kSchemaVersion, "the schema version string");
  need("tool_version", report.contains("tool_version") && report["tool_version"].is_string(), "a string");
  bool command_ok = false;
  if (report.contains("command") && report["command"].is_object()) {
    const auto& c = report["command"];
    command_ok = c.contains("name") && c["name"].is_string() && c.contains("argv") && c["argv"].is_array();
    if (command_ok)
      for (const auto& a : c["argv"]) command_ok = command_ok && a.is_string();
  }
  need("command", command_ok, "an object {name: string, argv: [string]}");
  bool digest_ok = false;
  if (report.contains("input_digest") && report["input_digest"].is_string()) {
    const std::string d = report["input_digest"];
    digest_ok = d.size() == 71 && d.rfind("sha256:", 0) == 0 &&
                d.find_first_not_of("0123456789abcdef", 7) == std::string::npos;
  }
  need("input_digest", digest_ok, "'sha256:' followed by 64 lowercase hex digits");
  need("results", report.contains("results") && report["results"].is_object(), "an object");
  need("timing_ms", report.contains("timing_ms") && report["timing_ms"].is_number() && report["timing_ms"] >= 0,
       "a nonnegative number");
  for (const auto& [key, value] : report.items()) {
    if (key != "version" && key != "tool_version" && key != "command" && key != "input_digest" && key != "results" &&
        key != "timing_ms") {
      problems.push_back("unexpected key '" + key + "'");
    }
  }
  walk(report, "$", problems);
  return problems;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace kornlab::cli
