// Copyright 2026 The hopkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run manifests written next to every artifact. A manifest holds no
// timestamps or host data, so equal runs produce byte-identical manifests.

#ifndef HOPKIT_RUN_CONFIG_H_
#define HOPKIT_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hopkit {

std::string_view Version();

struct FileDigest {
  std::string role;    // "input", "rules", "lexicon", ...
  std::string source;  // file path, or "builtin:<name>"
  std::string fnv1a64;

  bool operator==(const FileDigest&) const = default;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> args;
  std::vector<FileDigest> inputs;
  std::vector<std::string> outputs;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> settings;
  std::string version = std::string(Version());

  // Digests the file contents (throws when unreadable).
  void AddInputFile(std::string role, const std::string& path);
  // Digests bundled resource text.
  void AddBuiltin(std::string role, std::string_view name, std::string_view contents);

  std::string Serialize() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig ParseRunConfig(std::string_view json_text);

}  // namespace hopkit

#endif  // HOPKIT_RUN_CONFIG_H_
