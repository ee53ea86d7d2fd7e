// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero iff a mandatory criterion fails. Pass --quick for reduced sizes.

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

#include "gaplab/acceptance.hpp"

int main(int argc, char** argv) {
  gaplab::AcceptanceOptions opt;
  const char* json_path = nullptr;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    else if (std::strcmp(argv[i], "--json") == 0 && i + 1 < argc) json_path = argv[++i];
    else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opt.only.push_back(std::atoi(argv[++i]));
  }
  opt.progress = &std::cout;
  auto results = gaplab::run_acceptance(opt);
  const bool ok = gaplab::mandatory_passed(results);
  if (json_path) {
    gaplab::Json j = gaplab::Json::array();
    for (const auto& r : results) j.push_back(gaplab::to_json(r));
    std::ofstream(json_path) << gaplab::dump_json(j);
  }
  std::cout << (ok ? "acceptance: all mandatory criteria passed\n" : "acceptance: mandatory criterion failed\n");
  return ok ? 0 : 1;
}
