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

// File helpers shared by the data-asset loaders, the CLI and the server.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace pribom {

// Whole file as bytes. Throws pribom::Error attributed to `module`.
std::string read_file(const std::filesystem::path& path, const std::string& module);

// Parses a JSON file; syntax errors name the file and byte offset.
nlohmann::json read_json_file(const std::filesystem::path& path, const std::string& module);

// Writes through a temporary file in the same directory and renames it
// over `path`, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Directory holding the bundled data assets: $PRIBOM_DATA_DIR when set,
// otherwise the directory configured at build time.
std::filesystem::path data_dir();

// `data_dir() / name`.
std::filesystem::path asset_path(std::string_view name);

}  // namespace pribom
