/*
 * Copyright (C) 2026 The PriBOM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The `pribom` command line: generate, trace, track, check, diff, serve and
// signature subcommands.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pribom {

// Exit statuses beyond 0 (success) and 1 (check found undisclosed data).
inline constexpr int kExitFailure = 2;
inline constexpr int kExitUsage = 64;

// `args` excludes the program name. Reports go to `out`, errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pribom
