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

// Text normalization shared by scoring, probing, and label matching. There is
// exactly one normalization authority: NormalizeAnswer().

#ifndef HOPKIT_TEXT_H_
#define HOPKIT_TEXT_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hopkit {

// Lowercase, drop ASCII punctuation, drop the articles a/an/the as whole
// tokens, collapse whitespace. Mirrors the HotpotQA/2Wiki evaluation scripts.
std::string NormalizeAnswer(std::string_view text);

// Whitespace tokens of NormalizeAnswer(text).
std::vector<std::string> NormalizedTokens(std::string_view text);

// Probe tokenizer: split on whitespace, strip leading and trailing
// punctuation, lowercase. Tokens that become empty are dropped.
std::vector<std::string> ProbeTokens(std::string_view text);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::string Trim(std::string_view text);
std::string ToLower(std::string_view text);
bool IsAsciiPunct(char c);

// Index of the first occurrence of `needle` as a contiguous run of `haystack`.
std::optional<std::size_t> FindTokenRun(std::span<const std::string> haystack,
                                        std::span<const std::string> needle);

// True when the normalized tokens of `needle` occur contiguously in the
// normalized tokens of `text`. An empty normalized needle never matches.
bool ContainsNormalized(std::string_view text, std::string_view needle);

using WordSet = std::set<std::string>;

// Pinned English function-word list used by the shortcut probe.
const WordSet& DefaultStopwords();
std::string_view DefaultStopwordsName();

// One word per line; '#' starts a comment. Words are lowercased.
WordSet ParseStopwords(std::string_view text);

// 64-bit FNV-1a. Stable across platforms; used for seeds and file digests.
std::uint64_t Fnv1a64(std::string_view bytes);
std::string HexDigest(std::uint64_t value);

}  // namespace hopkit

#endif  // HOPKIT_TEXT_H_
