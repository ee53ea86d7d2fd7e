// Copyright 2026 The gaplab Authors
// SPDX-License-Identifier: Apache-2.0

#include "gaplab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gaplab {

namespace {
std::atomic<int> g_override{0};
}

int thread_count() {
  int o = g_override.load();
  if (o > 0) return o;
  if (const char* env = std::getenv("GAPLAB_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace gaplab
