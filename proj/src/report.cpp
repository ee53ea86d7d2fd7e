// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace gaplab {

namespace embedded {
extern const std::string run_config;
extern const std::string summary;
extern const std::string spectral_report;
extern const std::string verify_report;
}  // namespace embedded

std::string tool_version() { return GAPLAB_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json scrub(const Json& j) {
  if (j.is_number_float()) {
    double v = j.get<double>();
    return std::isfinite(v) ? j : Json(nullptr);
  }
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = scrub(*it);
    return out;
  }
  return j;
}

}  // namespace

std::string dump_json(const Json& j) { return scrub(j).dump(2) + "\n"; }

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const SpectralReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["ball_radius"] = r.ball_radius;
  j["dim"] = r.dim;
  Json est = Json::array();
  for (const auto& [m, v] : r.estimates) est.push_back({{"m", m}, {"value", v}});
  j["estimates"] = est;
  Json win = Json::array();
  for (const auto& [m, v] : r.windowed) win.push_back({{"m", m}, {"value", v}});
  j["windowed"] = win;
  j["value"] = r.value;
  j["upper"] = r.upper;
  j["upper_m"] = r.upper_m;
  if (r.norm_bound >= 0.0) j["norm_bound"] = r.norm_bound;
  if (r.eigen_residual >= 0.0) j["eigen_residual"] = r.eigen_residual;
  j["converged"] = r.converged;
  j["flags"] = r.flags;
  return j;
}

Json to_json(const CenteringResult& r) {
  return {{"estimate", to_json(r.estimate)},
          {"stderr", to_json(r.stderr_)},
          {"samples", r.samples},
          {"flagged", r.flagged}};
}

const std::string& schema_text(std::string_view name) {
  if (name == "run_config") return embedded::run_config;
  if (name == "summary") return embedded::summary;
  if (name == "spectral_report") return embedded::spectral_report;
  if (name == "verify_report") return embedded::verify_report;
  throw std::invalid_argument("unknown schema: " + std::string(name));
}

Json schema(std::string_view name) { return Json::parse(schema_text(name)); }

namespace {

bool has_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") {
    if (v.is_number_integer()) return true;
    return v.is_number_float() && std::isfinite(v.get<double>()) && std::floor(v.get<double>()) == v.get<double>();
  }
  if (t == "number") return v.is_number();
  throw std::invalid_argument("schema: unsupported type " + t);
}

void validate_at(const Json& s, const Json& v, const std::string& ptr, std::vector<std::string>& errs) {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errs.push_back(ptr + ": expected type " + s["type"].dump());
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) errs.push_back(ptr + ": expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errs.push_back(ptr + ": not one of " + s["enum"].dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) errs.push_back(ptr + ": below minimum");
    if (s.contains("maximum") && x > s["maximum"].get<double>()) errs.push_back(ptr + ": above maximum");
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      errs.push_back(ptr + ": not above exclusiveMinimum");
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs.push_back(ptr + ": too few items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate_at(s["items"], v[i], ptr + "/" + std::to_string(i), errs);
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) errs.push_back(ptr + ": missing " + r.get<std::string>());
    const Json* props = s.contains("properties") ? &s["properties"] : nullptr;
    const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props && props->contains(it.key())) {
        validate_at((*props)[it.key()], it.value(), ptr + "/" + it.key(), errs);
      } else if (closed) {
        errs.push_back(ptr + ": unknown property " + it.key());
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_schema(const Json& schema, const Json& instance) {
  std::vector<std::string> errs;
  validate_at(schema, instance, "", errs);
  return errs;
}

}  // namespace gaplab
