// Copyright 2026 The dpopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPOPT_CLI_HPP_
#define DPOPT_CLI_HPP_

#include <string>
#include <vector>

namespace dpopt {

// Entry point behind the dpopt binary; split out so tests can drive the CLI
// in-process. args excludes the program name.
//
// Exit codes: 0 success, 1 failed verification or runtime error, 2 bad
// configuration or usage.
int run_cli(const std::vector<std::string>& args);

}  // namespace dpopt

#endif  // DPOPT_CLI_HPP_
