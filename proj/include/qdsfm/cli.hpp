// Copyright 2026 The Authors.
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

#ifndef QDSFM_CLI_HPP_
#define QDSFM_CLI_HPP_

#include <iostream>
#include <string>
#include <vector>

namespace qdsfm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNonconvergence = 3,
};

// Runs one `qdsfm` invocation; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                std::ostream& err = std::cerr);

}  // namespace qdsfm

#endif  // QDSFM_CLI_HPP_
