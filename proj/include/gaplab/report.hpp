// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gaplab/spectral.hpp"
#include "gaplab/walk_engine.hpp"

namespace gaplab {

// Insertion-ordered so that dumps are stable across runs.
using Json = nlohmann::ordered_json;

std::string tool_version();

// FNV-1a 64 over the compact dump, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Pretty dump with a trailing newline; non-finite numbers become null.
std::string dump_json(const Json& j);

Json to_json(const Eigen::MatrixXd& m);
Json to_json(const std::vector<double>& v);
Json to_json(const SpectralReport& r);
Json to_json(const CenteringResult& r);

// Published schemas, embedded at build time: run_config, summary, spectral_report, verify_report.
const std::string& schema_text(std::string_view name);
Json schema(std::string_view name);

/**
 * Validates against the JSON Schema keywords the published schemas use:
 * type, const, enum, properties, required, additionalProperties (boolean),
 * items, minItems, minimum, maximum, exclusiveMinimum.
 *
 * Returns one message per violation, each prefixed by its JSON pointer.
 */
std::vector<std::string> validate_schema(const Json& schema, const Json& instance);

}  // namespace gaplab
