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

#include "hopkit/text.h"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace hopkit {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char LowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool IsArticle(std::string_view token) {
  return token == "a" || token == "an" || token == "the";
}

// Standard English function words: articles, prepositions, conjunctions,
// auxiliaries, personal pronouns and determiners. Reflexive pronouns and all
// content words are deliberately absent.
constexpr std::string_view kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "down", "during", "each", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her", "here", "hers",
    "him", "his", "how", "i", "if", "in", "into", "is", "it", "its", "me",
    "my", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
    "our", "ours", "out", "over", "own", "same", "she", "should", "so",
    "some", "such", "than", "that", "the", "their", "theirs", "them", "then",
    "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when",
    "where", "which", "while", "who", "whom", "whose", "why", "will", "with",
    "would", "you", "your", "yours",
};

}  // namespace

bool IsAsciiPunct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0 &&
         static_cast<unsigned char>(c) < 0x80;
}

std::string ToLower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), LowerAscii);
  return out;
}

std::string Trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && IsSpace(text[begin])) ++begin;
  while (end > begin && IsSpace(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string NormalizeAnswer(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    if (IsAsciiPunct(c)) continue;
    lowered.push_back(LowerAscii(c));
  }
  std::string out;
  for (const std::string& token : SplitWhitespace(lowered)) {
    if (IsArticle(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::vector<std::string> NormalizedTokens(std::string_view text) {
  return SplitWhitespace(NormalizeAnswer(text));
}

std::vector<std::string> ProbeTokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (const std::string& raw : SplitWhitespace(text)) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && IsAsciiPunct(raw[begin])) ++begin;
    while (end > begin && IsAsciiPunct(raw[end - 1])) --end;
    if (begin == end) continue;
    tokens.push_back(ToLower(std::string_view(raw).substr(begin, end - begin)));
  }
  return tokens;
}

std::optional<std::size_t> FindTokenRun(std::span<const std::string> haystack,
                                        std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(),
                        needle.end());
  if (it == haystack.end()) return std::nullopt;
  return static_cast<std::size_t>(it - haystack.begin());
}

bool ContainsNormalized(std::string_view text, std::string_view needle) {
  std::vector<std::string> needle_tokens = NormalizedTokens(needle);
  if (needle_tokens.empty()) return false;
  std::vector<std::string> text_tokens = NormalizedTokens(text);
  return FindTokenRun(text_tokens, needle_tokens).has_value();
}

const WordSet& DefaultStopwords() {
  static const WordSet* words =
      new WordSet(std::begin(kStopwords), std::end(kStopwords));
  return *words;
}

std::string_view DefaultStopwordsName() { return "hopkit-function-words-v1"; }

WordSet ParseStopwords(std::string_view text) {
  WordSet words;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    for (const std::string& w : SplitWhitespace(line)) words.insert(ToLower(w));
    pos = nl + 1;
  }
  return words;
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HexDigest(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace hopkit
