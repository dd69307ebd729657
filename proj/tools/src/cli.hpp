// Copyright 2026 The limbkin Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace limbkin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // infeasible linkage, calibration failure, ...
inline constexpr int kExitUsage = 2;   // bad flags or configuration

/**
 * Runs one `limbkin` invocation. `args` excludes the program name.
 *
 * Without --out-dir the primary data product goes to `out` and the one-line
 * summary to `err`; with --out-dir every product is written atomically into
 * that directory next to a manifest.json and the summary goes to `out`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace limbkin::cli
