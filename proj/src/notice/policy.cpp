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

#include "pribom/notice/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <regex>
#include <set>

#include "pribom/io.hpp"

namespace pribom::notice {
namespace {

constexpr const char* kModule = "notice-analyzer";

// One character of extracted text and the input bytes it came from.
struct Char {
  char c;
  std::size_t begin;
  std::size_t end;
};

struct Block {
  bool heading = false;
  std::vector<Char> chars;
  // Indices into `chars` where a new sentence must start (list items).
  std::set<std::size_t> breaks;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || u >= 0x80;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string collapse(const std::vector<Char>& chars, std::size_t from, std::size_t to) {
  std::string out;
  bool pending_space = false;
  for (std::size_t i = from; i < to; ++i) {
    if (is_space(chars[i].c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += chars[i].c;
  }
  return out;
}

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> a = {
      "e.g.", "i.e.", "etc.", "vs.", "cf.", "inc.", "ltd.", "co.", "corp.", "llc.", "mr.", "mrs.", "ms.",
      "dr.",  "st.",  "no.",  "u.s.", "u.k.", "e.u.", "approx.", "dept.", "fig.", "al.", "jr.", "sr."};
  return a;
}

// Whether the '.' at chars[i] ends an abbreviation or an initial.
bool guarded_period(const std::vector<Char>& chars, std::size_t i) {
  std::size_t start = i;
  while (start > 0 && !is_space(chars[start - 1].c) && chars[start - 1].c != '(' && chars[start - 1].c != '"') {
    --start;
  }
  std::string word;
  for (std::size_t k = start; k <= i; ++k) word += chars[k].c;
  word = lower(word);
  if (abbreviations().count(word)) return true;
  // A single letter such as the "J." of a name.
  return word.size() == 2 && std::isalpha(static_cast<unsigned char>(word[0]));
}

void split_sentences(const Block& block, std::vector<Sentence>& out) {
  const auto& cs = block.chars;
  auto emit = [&](std::size_t from, std::size_t to) {
    while (from < to && is_space(cs[from].c)) ++from;
    while (to > from && is_space(cs[to - 1].c)) --to;
    if (from == to) return;
    Sentence s;
    s.text = collapse(cs, from, to);
    s.offset = cs[from].begin;
    s.length = cs[to - 1].end - cs[from].begin;
    out.push_back(std::move(s));
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (block.breaks.count(i) && i > start) {
      emit(start, i);
      start = i;
    }
    const char c = cs[i].c;
    if (c != '.' && c != '!' && c != '?') continue;
    // Absorb runs like "?!" or "..." and closing quotes or brackets.
    std::size_t j = i + 1;
    while (j < cs.size() && (cs[j].c == '.' || cs[j].c == '!' || cs[j].c == '?')) ++j;
    while (j < cs.size() && (cs[j].c == '"' || cs[j].c == '\'' || cs[j].c == ')' || cs[j].c == ']')) ++j;
    if (j < cs.size() && !is_space(cs[j].c)) continue;
    if (c == '.' && j == i + 1 && guarded_period(cs, i)) continue;
    emit(start, j);
    start = j;
    i = j - 1;
  }
  if (start < cs.size()) emit(start, cs.size());
}

// ---- plain text ----

const std::set<std::string>& small_words() {
  static const std::set<std::string> s = {"a",  "an", "and", "as", "at", "by", "for", "from", "in", "of",
                                          "on", "or", "the", "to", "we", "with", "your", "our", "how", "what",
                                          "who", "why", "when", "is", "are", "do", "does", "you", "us"};
  return s;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return std::string(s.substr(a, b - a));
}

// Heading text when `line` reads as a heading.
std::optional<std::string> heading_of(const std::string& line) {
  std::string t = trim(line);
  if (!t.empty() && t[0] == '#') {
    t.erase(0, t.find_first_not_of('#'));
    t = trim(t);
    return t.empty() ? std::nullopt : std::optional<std::string>(t);
  }
  if (t.empty() || t.size() > 80) return std::nullopt;
  if (t.back() == ':') t = trim(t.substr(0, t.size() - 1));
  if (t.empty()) return std::nullopt;
  const char last = t.back();
  if (last == '.' || last == '!' || last == '?' || last == ',' || last == ';') return std::nullopt;
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && is_space(t[i])) ++i;
    std::size_t j = i;
    while (j < t.size() && !is_space(t[j])) ++j;
    if (j > i) words.push_back(t.substr(i, j - i));
    i = j;
  }
  if (words.empty() || words.size() > 10) return std::nullopt;
  bool any_letter = false, all_upper = true;
  for (const char c : t) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      any_letter = true;
      if (std::islower(static_cast<unsigned char>(c))) all_upper = false;
    }
  }
  if (!any_letter) return std::nullopt;
  if (all_upper) return t;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto& word = words[w];
    const auto first = static_cast<unsigned char>(word[0]);
    if (!std::isalpha(first)) continue;
    if (w > 0 && small_words().count(lower(word))) continue;
    if (!std::isupper(first)) return std::nullopt;
  }
  return t;
}

// Length of a leading list marker ("- ", "* ", "1. ", bullet) or 0.
std::size_t list_marker(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (line.substr(i, 3) == "\xE2\x80\xA2") i += 3;  // U+2022 bullet
  else if (i < line.size() && (line[i] == '-' || line[i] == '*')) ++i;
  else {
    std::size_t j = i;
    while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
    if (j == i || j >= line.size() || (line[j] != '.' && line[j] != ')')) return 0;
    i = j + 1;
  }
  if (i >= line.size() || !is_space(line[i])) return 0;
  return i + 1;
}

std::vector<Block> plain_blocks(std::string_view raw) {
  std::vector<Block> blocks;
  Block cur;
  auto flush = [&] {
    if (!cur.chars.empty()) blocks.push_back(std::move(cur));
    cur = Block{};
  };
  std::size_t pos = 0;
  bool continuation = false;  // previous line ended mid-sentence
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    const auto line = raw.substr(pos, nl - pos);
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      continuation = false;
    } else if (auto h = (continuation ? std::nullopt : heading_of(std::string(line)))) {
      flush();
      Block hb;
      hb.heading = true;
      const auto lead = line.find_first_not_of(" \t#");
      for (std::size_t k = 0; k < h->size(); ++k) {
        hb.chars.push_back({(*h)[k], pos + lead + k, pos + lead + k + 1});
      }
      blocks.push_back(std::move(hb));
    } else {
      const auto marker = list_marker(line);
      if (marker > 0 && !cur.chars.empty()) cur.breaks.insert(cur.chars.size());
      if (!cur.chars.empty()) cur.chars.push_back({' ', pos - 1, pos});
      for (std::size_t k = marker; k < line.size(); ++k) {
        if (line[k] == '\r') continue;
        cur.chars.push_back({line[k], pos + k, pos + k + 1});
      }
      const char last = t.back();
      continuation = !(last == '.' || last == '!' || last == '?' || last == ':' || last == '"' || last == ')');
    }
    if (nl == raw.size()) break;
    pos = nl + 1;
  }
  flush();
  return blocks;
}

// ---- HTML ----

bool looks_like_html(std::string_view raw) {
  static const std::regex tag(R"(<\s*/?\s*(h[1-6]|p|div|li|br|html|body|ul|ol|section|article|table|tr|td)\b)",
                              std::regex::icase);
  return std::regex_search(raw.begin(), raw.end(), tag);
}

bool is_block_tag(const std::string& name) {
  static const std::set<std::string> b = {"p",      "div",     "li",     "br",    "ul",  "ol",   "section",
                                          "article", "table",  "tr",     "td",    "th",  "body", "html",
                                          "header", "footer",  "main",   "nav",   "blockquote", "dl", "dt",
                                          "dd",     "hr",      "title",  "head"};
  return b.count(name) != 0;
}

// Decoded bytes of the entity starting at raw[i] ('&'), and its length.
std::optional<std::pair<std::string, std::size_t>> entity_at(std::string_view raw, std::size_t i) {
  const auto semi = raw.find(';', i);
  if (semi == std::string_view::npos || semi - i > 10) return std::nullopt;
  const std::string name(raw.substr(i + 1, semi - i - 1));
  static const std::map<std::string, std::string> named = {
      {"amp", "&"},  {"lt", "<"},   {"gt", ">"},   {"quot", "\""},         {"apos", "'"},
      {"nbsp", " "}, {"ndash", "-"}, {"mdash", "-"}, {"rsquo", "'"},       {"lsquo", "'"},
      {"ldquo", "\""}, {"rdquo", "\""}, {"hellip", "..."}};
  if (const auto it = named.find(name); it != named.end()) return std::make_pair(it->second, semi - i + 1);
  if (name.size() > 1 && name[0] == '#') {
    unsigned long cp = 0;
    try {
      cp = (name[1] == 'x' || name[1] == 'X') ? std::stoul(name.substr(2), nullptr, 16) : std::stoul(name.substr(1));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    std::string utf8;
    if (cp < 0x80) utf8 += static_cast<char>(cp);
    else if (cp < 0x800) {
      utf8 += static_cast<char>(0xC0 | (cp >> 6));
      utf8 += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      utf8 += static_cast<char>(0xE0 | (cp >> 12));
      utf8 += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      utf8 += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      return std::nullopt;
    }
    return std::make_pair(utf8, semi - i + 1);
  }
  return std::nullopt;
}

std::vector<Block> html_blocks(std::string_view raw) {
  std::vector<Block> blocks;
  Block cur;
  auto flush = [&] {
    const bool has_text =
        std::any_of(cur.chars.begin(), cur.chars.end(), [](const Char& c) { return !is_space(c.c); });
    if (has_text) blocks.push_back(std::move(cur));
    cur = Block{};
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw.compare(i, 4, "<!--") == 0) {
      const auto end = raw.find("-->", i + 4);
      i = end == std::string_view::npos ? raw.size() : end + 3;
      continue;
    }
    if (raw[i] == '<') {
      const auto close = raw.find('>', i);
      if (close == std::string_view::npos) break;
      std::string tag = lower(raw.substr(i + 1, close - i - 1));
      const bool closing = !tag.empty() && tag[0] == '/';
      if (closing) tag.erase(0, 1);
      const auto name_end = tag.find_first_of(" \t\r\n/");
      const std::string name = tag.substr(0, name_end);
      i = close + 1;
      if (!closing && (name == "script" || name == "style")) {
        const auto end = lower(raw.substr(i)).find("</" + name);
        i = end == std::string::npos ? raw.size() : i + end;
        continue;
      }
      const bool heading = name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
      if (heading) {
        flush();
        cur.heading = !closing;
      } else if (is_block_tag(name)) {
        const bool was_heading = cur.heading;
        flush();
        cur.heading = was_heading;
      }
      continue;
    }
    if (raw[i] == '&') {
      if (const auto e = entity_at(raw, i)) {
        for (const char c : e->first) cur.chars.push_back({c, i, i + e->second});
        i += e->second;
        continue;
      }
    }
    cur.chars.push_back({raw[i], i, i + 1});
    ++i;
  }
  flush();
  return blocks;
}

const std::set<std::string>& english_markers() {
  static const std::set<std::string> s = {"the", "and", "of", "to", "we", "you", "your", "our", "is", "are",
                                          "for", "with", "may", "this", "that", "in", "or", "by", "data",
                                          "information", "use", "not", "be", "it"};
  return s;
}

std::string format_score(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

PolicyText split_policy(std::string_view raw) {
  if (trim(raw).empty()) throw Error(kModule, "the privacy policy is empty");
  const auto blocks = looks_like_html(raw) ? html_blocks(raw) : plain_blocks(raw);
  PolicyText out;
  std::optional<std::string> heading;
  for (const auto& b : blocks) {
    if (b.heading) {
      auto h = collapse(b.chars, 0, b.chars.size());
      if (!h.empty() && h.back() == ':') h.pop_back();
      heading = h.empty() ? std::nullopt : std::optional<std::string>(trim(h));
      continue;
    }
    Paragraph p;
    p.heading = heading;
    split_sentences(b, p.sentences);
    if (!p.sentences.empty()) out.paragraphs.push_back(std::move(p));
  }
  if (out.paragraphs.empty() && !heading) throw Error(kModule, "the privacy policy holds no text");
  return out;
}

void check_language(const PolicyText& policy, Diagnostics& diags) {
  std::size_t total = 0, marked = 0;
  for (const auto& p : policy.paragraphs) {
    for (const auto& s : p.sentences) {
      for (const auto& t : tokenize(s.text)) {
        ++total;
        marked += english_markers().count(t);
      }
    }
  }
  if (total >= 20 && marked * 100 < total * 8) {
    diags.warn(kModule, "the privacy policy does not look like English; segmentation assumes English text");
  }
}

KeywordLexicon KeywordLexicon::from_json(const nlohmann::json& j) {
  const nlohmann::json* types = &j;
  if (j.is_object() && j.contains("data_types")) types = &j.at("data_types");
  if (!types->is_object()) throw Error(kModule, "lexicon must map data types to keyword lists");
  KeywordLexicon lex;
  for (const auto& [dt, rec] : types->items()) {
    if (!is_data_type(dt)) throw Error(kModule, "lexicon key " + dt + " is not a data-type category");
    LexiconEntry e;
    auto list = [&](const char* key) {
      std::vector<std::string> v;
      try {
        v = rec.at(key).get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception&) {
        throw Error(kModule, "lexicon entry " + dt + " lacks a string list \"" + key + "\"");
      }
      if (v.empty()) throw Error(kModule, "lexicon entry " + dt + " has an empty \"" + key + "\"");
      for (const auto& s : v) {
        if (tokenize(s).empty()) throw Error(kModule, "lexicon entry " + dt + " has a blank item in " + key);
      }
      return v;
    };
    e.heading_keywords = list("heading_keywords");
    e.sentence_keywords = list("sentence_keywords");
    e.phrases = list("phrases");
    lex.entries_.emplace(dt, std::move(e));
  }
  if (lex.entries_.empty()) throw Error(kModule, "lexicon is empty");
  return lex;
}

KeywordLexicon KeywordLexicon::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path, kModule));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : text) {
    if (is_word_byte(c)) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double phrase_similarity(std::string_view sentence, std::string_view phrase) {
  const auto st = tokenize(sentence);
  const auto pt = tokenize(phrase);
  const std::set<std::string> ps(pt.begin(), pt.end());
  if (ps.empty() || st.empty()) return 0.0;
  const std::size_t width = std::min(pt.size(), st.size());
  double best = 0.0;
  for (std::size_t i = 0; i + width <= st.size(); ++i) {
    const std::set<std::string> ws(st.begin() + static_cast<std::ptrdiff_t>(i),
                                   st.begin() + static_cast<std::ptrdiff_t>(i + width));
    std::size_t inter = 0;
    for (const auto& t : ws) inter += ps.count(t);
    const double j = static_cast<double>(inter) / static_cast<double>(ws.size() + ps.size() - inter);
    best = std::max(best, j);
  }
  return best;
}

bool contains_word(std::string_view text, std::string_view keyword) {
  if (keyword.empty()) return false;
  const auto t = lower(text);
  const auto k = lower(keyword);
  for (auto pos = t.find(k); pos != std::string::npos; pos = t.find(k, pos + 1)) {
    const bool left = pos == 0 || !is_word_byte(t[pos - 1]) || !is_word_byte(k.front());
    const auto end = pos + k.size();
    const bool right = end == t.size() || !is_word_byte(t[end]) || !is_word_byte(k.back());
    if (left && right) return true;
  }
  return false;
}

std::vector<PolicySegment> segment(const PolicyText& policy, const KeywordLexicon& lex, double threshold) {
  std::vector<PolicySegment> out;
  for (std::size_t p = 0; p < policy.paragraphs.size(); ++p) {
    const auto& para = policy.paragraphs[p];
    for (std::size_t s = 0; s < para.sentences.size(); ++s) {
      const auto& text = para.sentences[s].text;
      for (const auto& [dt, e] : lex.entries()) {
        std::vector<std::string> evidence;
        if (para.heading) {
          for (const auto& kw : e.heading_keywords) {
            if (contains_word(*para.heading, kw)) evidence.push_back("heading:" + kw + "|" + *para.heading);
          }
        }
        for (const auto& kw : e.sentence_keywords) {
          if (contains_word(text, kw)) evidence.push_back("keyword:" + kw);
        }
        for (const auto& ph : e.phrases) {
          const double score = phrase_similarity(text, ph);
          if (score >= threshold) evidence.push_back("phrase:" + ph + "|" + format_score(score));
        }
        if (evidence.empty()) continue;
        std::sort(evidence.begin(), evidence.end());
        evidence.erase(std::unique(evidence.begin(), evidence.end()), evidence.end());
        PolicySegment seg;
        seg.data_type = dt;
        seg.text = text;
        seg.paragraph_index = static_cast<int>(p);
        seg.sentence_index = static_cast<int>(s);
        seg.evidence = std::move(evidence);
        out.push_back(std::move(seg));
      }
    }
  }
  return out;
}

bool replay_evidence(const std::string& evidence, const std::string& sentence, double threshold) {
  const auto colon = evidence.find(':');
  if (colon == std::string::npos) return false;
  const auto rule = evidence.substr(0, colon);
  const auto body = evidence.substr(colon + 1);
  if (rule == "keyword") return contains_word(sentence, body);
  const auto bar = body.rfind('|');
  if (bar == std::string::npos) return false;
  if (rule == "heading") {
    const auto kw = body.substr(0, body.find('|'));
    return contains_word(body.substr(kw.size() + 1), kw);
  }
  if (rule == "phrase") {
    const double score = phrase_similarity(sentence, body.substr(0, bar));
    return score >= threshold && format_score(score) == body.substr(bar + 1);
  }
  return false;
}

}  // namespace pribom::notice
