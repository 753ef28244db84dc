// Copyright 2026 The Filament Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_LEXICON_H_
#define FORGE_LEXICON_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/symbols.h"

namespace forge {

// Index of an entry in its Lexicon.
enum class WordId : std::uint32_t {};

constexpr std::uint32_t Index(WordId id) {
  return static_cast<std::uint32_t>(id);
}

// A phonemic transcription in two-character codes ("kkonssttan" is
// kk|on|ss|tt|an). Boundary markers are never stored; Serialized() adds them.
class PhonemeString {
 public:
  static constexpr std::string_view kBoundary = "##";

  PhonemeString() = default;
  // Throws std::invalid_argument if the body has odd length or contains
  // whitespace or a '#'.
  explicit PhonemeString(std::string body);

  const std::string& body() const { return body_; }
  std::size_t size() const { return body_.size() / 2; }
  bool empty() const { return body_.empty(); }
  std::string_view code(std::size_t i) const {
    return std::string_view(body_).substr(2 * i, 2);
  }

  // "##" + body + "##".
  std::string Serialized() const;
  // One packed symbol per phoneme code.
  SymbolString Symbols() const;

  friend bool operator==(const PhonemeString&, const PhonemeString&) = default;

 private:
  std::string body_;
};

// Number of phonemes, boundary markers excluded.
inline std::size_t PhonemeLength(const PhonemeString& p) { return p.size(); }

class MorphTag {
 public:
  MorphTag() = default;
  explicit MorphTag(std::string value) : value_(std::move(value)) {}
  const std::string& value() const { return value_; }
  friend bool operator==(const MorphTag&, const MorphTag&) = default;
  friend auto operator<=>(const MorphTag&, const MorphTag&) = default;

 private:
  std::string value_;
};

struct LexiconEntry {
  std::string orthographic;
  PhonemeString phonemes;
  MorphTag tag;
};

enum class LexiconFormat {
  // orthographic<TAB>phonemes<TAB>tag, '#' starts a comment line.
  kTsv,
};

class Lexicon {
 public:
  Lexicon() = default;
  // Throws DuplicateEntryError on a repeated orthographic form and
  // std::invalid_argument on an entry that violates LexiconEntry invariants.
  explicit Lexicon(std::vector<LexiconEntry> entries);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // Throws LookupError if out of range.
  const LexiconEntry& at(WordId id) const;
  const LexiconEntry& operator[](WordId id) const {
    return entries_[Index(id)];
  }
  const std::string& form(WordId id) const {
    return entries_[Index(id)].orthographic;
  }
  const MorphTag& tag(WordId id) const { return entries_[Index(id)].tag; }

  std::optional<WordId> Find(std::string_view orthographic) const;
  // Throws LookupError naming the form.
  WordId Require(std::string_view orthographic) const;

  // Position of the entry when all forms are sorted bytewise. Comparing ranks
  // is equivalent to comparing the orthographic forms.
  std::uint32_t rank(WordId id) const { return rank_[Index(id)]; }
  bool FormLess(WordId a, WordId b) const { return rank(a) < rank(b); }

  const SymbolString& written_symbols(WordId id) const {
    return written_[Index(id)];
  }
  const SymbolString& phoneme_symbols(WordId id) const {
    return phonemic_[Index(id)];
  }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, WordId> index_;
  std::vector<std::uint32_t> rank_;
  std::vector<SymbolString> written_;
  std::vector<SymbolString> phonemic_;
};

// Throws ParseError (with the 1-based line) on malformed records or invalid
// UTF-8 and DuplicateEntryError on repeated forms.
Lexicon ParseLexicon(std::istream& source,
                     LexiconFormat format = LexiconFormat::kTsv);
Lexicon LoadLexicon(const std::filesystem::path& path);

// The serialized window text, e.g. "##kkon".
using FeatureKey = std::string;

// Phoneme n-gram features of the boundary-marked word. Positions are the two
// markers plus one per phoneme; every window of at least `min_len` positions
// is a feature, except the two windows that hold the whole body with exactly
// one marker. The fully marked word is always a feature. Result is sorted and
// duplicate-free.
std::vector<FeatureKey> ExtractFeatures(const PhonemeString& p,
                                        std::size_t min_len = 3);

}  // namespace forge

#endif  // FORGE_LEXICON_H_
