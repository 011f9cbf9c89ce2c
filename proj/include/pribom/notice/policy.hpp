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

// Privacy-policy segmentation: split text or simple HTML into headed
// paragraphs of sentences, then assign sentences to data types by heading
// keywords, sentence keywords and phrase similarity.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pribom/diagnostics.hpp"
#include "pribom/model.hpp"

namespace pribom::notice {

inline constexpr double kDefaultSimilarityThreshold = 0.5;

struct Sentence {
  std::string text;         // whitespace collapsed, markup and entities removed
  std::size_t offset = 0;   // span in the original input
  std::size_t length = 0;

  bool operator==(const Sentence&) const = default;
};

struct Paragraph {
  std::optional<std::string> heading;  // nearest heading above the paragraph
  std::vector<Sentence> sentences;

  bool operator==(const Paragraph&) const = default;
};

struct PolicyText {
  std::vector<Paragraph> paragraphs;

  bool operator==(const PolicyText&) const = default;
};

// Markup is recognized by h1-h6, p, div, li, br and similar tags; other
// input is plain text, where blank lines separate paragraphs and short
// title-case lines without a terminal period are headings. Throws
// pribom::Error when the input holds no text.
PolicyText split_policy(std::string_view raw);

// Warns when the text does not look like English.
void check_language(const PolicyText& policy, Diagnostics& diags);

struct LexiconEntry {
  std::vector<std::string> heading_keywords;
  std::vector<std::string> sentence_keywords;
  std::vector<std::string> phrases;
};

class KeywordLexicon {
 public:
  // Accepts {"data_types": {...}} or the bare map. Keys must be data-type
  // categories and every list non-empty.
  static KeywordLexicon from_json(const nlohmann::json& j);
  static KeywordLexicon load(const std::filesystem::path& path);

  const std::map<std::string, LexiconEntry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, LexiconEntry> entries_;
};

// Lowercase alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

// Best token-set Jaccard between `phrase` and any window of `sentence`
// tokens as long as the phrase (or the whole sentence when shorter).
double phrase_similarity(std::string_view sentence, std::string_view phrase);

// Case-insensitive match with non-alphanumeric characters (or the text
// ends) on both sides.
bool contains_word(std::string_view text, std::string_view keyword);

// One segment per (sentence, data type) that any rule matches. Evidence
// items read "heading:<keyword>|<heading>", "keyword:<keyword>" or
// "phrase:<phrase>|<score>", sorted.
std::vector<PolicySegment> segment(const PolicyText& policy, const KeywordLexicon& lex,
                                   double threshold = kDefaultSimilarityThreshold);

// Re-runs the rule one evidence item names against the stored sentence.
bool replay_evidence(const std::string& evidence, const std::string& sentence,
                     double threshold = kDefaultSimilarityThreshold);

}  // namespace pribom::notice
