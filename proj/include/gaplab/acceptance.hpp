// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaplab/report.hpp"

namespace gaplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool mandatory = true;
  // Mandatory criteria run at reduced size in quick mode are reported as advisory.
  bool advisory = false;
  bool passed = false;
  double measured = 0.0;
  std::string comparison = "<=";
  Json threshold;
  std::uint64_t seed = 0;
  Json details = Json::object();
  double seconds = 0.0;  // wall time; kept out of the JSON report
};

struct AcceptanceOptions {
  bool quick = false;
  std::uint64_t seed = 20261016;
  std::vector<int> only;  // empty: all criteria
  std::ostream* progress = nullptr;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// True when every criterion that counts toward the exit status passed.
bool mandatory_passed(const std::vector<CriterionResult>& results);
Json to_json(const CriterionResult& r);
// One line per criterion: PASS/FAIL/ADVISORY-FAIL, id, name, measured vs threshold.
void print_table(std::ostream& os, const std::vector<CriterionResult>& results, bool with_times);

}  // namespace gaplab
