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

#include "pribom/io.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pribom/error.hpp"

#ifndef PRIBOM_DEFAULT_DATA_DIR
#define PRIBOM_DEFAULT_DATA_DIR "data"
#endif

namespace pribom {

std::string read_file(const std::filesystem::path& path, const std::string& module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(module, "cannot read " + path.string());
  return ss.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path, const std::string& module) {
  const auto text = read_file(path, module);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(module, path.string() + ": malformed JSON at byte offset " + std::to_string(e.byte));
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("io", "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("io", "cannot replace " + path.string());
  }
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("PRIBOM_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return PRIBOM_DEFAULT_DATA_DIR;
}

std::filesystem::path asset_path(std::string_view name) { return data_dir() / std::string(name); }

}  // namespace pribom
