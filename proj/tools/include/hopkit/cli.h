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

// The hopkit command-line interface. Run() is the whole program; main()
// forwards argv to it so tests can drive every command in-process.

#ifndef HOPKIT_CLI_H_
#define HOPKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace hopkit::cli {

// Exit codes: 0 success, 1 module error or failed verification, 2 usage.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the directory that relative input paths are
// looked up in when they do not exist relative to the working directory.
inline constexpr const char* kDataDirEnv = "HOPKIT_DATA_DIR";

// `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hopkit::cli

#endif  // HOPKIT_CLI_H_
