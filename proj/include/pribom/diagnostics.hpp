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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pribom {

enum class Severity { info, warning, error };

std::string_view to_string(Severity s);

struct Diagnostic {
  std::string module;
  Severity severity = Severity::warning;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

// Soft-failure channel shared by all pipeline stages. Stages append; the
// CLI writes the collected list to the diagnostics sidecar.
class Diagnostics {
 public:
  void add(std::string module, Severity severity, std::string message) {
    items_.push_back({std::move(module), severity, std::move(message)});
  }
  void info(std::string module, std::string message) {
    add(std::move(module), Severity::info, std::move(message));
  }
  void warn(std::string module, std::string message) {
    add(std::move(module), Severity::warning, std::move(message));
  }

  const std::vector<Diagnostic>& items() const noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }

  // Number of diagnostics whose message contains `needle`.
  std::size_t count_containing(std::string_view needle) const;

  void append(const Diagnostics& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

 private:
  std::vector<Diagnostic> items_;
};

}  // namespace pribom
