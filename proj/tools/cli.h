// Copyright 2026 The chfkit Authors
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

#ifndef CHFKIT_TOOLS_CLI_H_
#define CHFKIT_TOOLS_CLI_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chfkit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;    // malformed input files or records
inline constexpr int kExitNumeric = 4;  // domain, geometry, convergence
inline constexpr int kExitIo = 5;

/// Runs one `chfkit` invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Partition indices persisted by `train` and read by `eval`/`pca-check`.
struct SplitFile {
  std::optional<unsigned long long> seed;
  std::optional<std::size_t> n_records;
  std::optional<std::vector<std::size_t>> train;
  std::optional<std::vector<std::size_t>> validation;
  std::vector<std::size_t> test;
};

void write_split_file(const std::filesystem::path& path, const SplitFile& s);
SplitFile read_split_file(const std::filesystem::path& path);

}  // namespace chfkit::cli

#endif  // CHFKIT_TOOLS_CLI_H_
