// Copyright 2026 The mpent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs every randomized property suite and prints one line per suite.
// Usage: mpent_properties [cases] [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "properties.hpp"

int main(int argc, char** argv) {
  const std::size_t cases = argc > 1 ? std::stoul(argv[1]) : 1000;
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 20261016;
  bool ok = true;
  for (const auto& r : mpent::properties::run_all(cases, seed)) {
    std::printf("%-26s %s  cases=%zu failures=%zu%s%s\n", r.name.c_str(),
                r.ok() ? "PASS" : "FAIL", r.cases, r.failures,
                r.first_failure.empty() ? "" : "  first: ", r.first_failure.c_str());
    ok = ok && r.ok();
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
