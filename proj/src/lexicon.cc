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

#include "forge/lexicon.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "forge/errors.h"

namespace forge {
namespace {

bool HasSpace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

PhonemeString::PhonemeString(std::string body) : body_(std::move(body)) {
  if (body_.size() % 2 != 0) {
    throw std::invalid_argument("phoneme string '" + body_ +
                                "' has odd length; codes are two characters");
  }
  if (HasSpace(body_) || body_.find('#') != std::string::npos) {
    throw std::invalid_argument("phoneme string '" + body_ +
                                "' contains whitespace or a boundary marker");
  }
}

std::string PhonemeString::Serialized() const {
  std::string out;
  out.reserve(body_.size() + 4);
  out.append(kBoundary).append(body_).append(kBoundary);
  return out;
}

SymbolString PhonemeString::Symbols() const {
  SymbolString out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] =
        (static_cast<Symbol>(static_cast<unsigned char>(body_[2 * i])) << 8) |
        static_cast<unsigned char>(body_[2 * i + 1]);
  }
  return out;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  written_.reserve(entries_.size());
  phonemic_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const LexiconEntry& e = entries_[i];
    if (e.orthographic.empty()) {
      throw std::invalid_argument("entry " + std::to_string(i) +
                                  " has an empty orthographic form");
    }
    if (e.phonemes.empty()) {
      throw std::invalid_argument("entry '" + e.orthographic +
                                  "' has an empty phoneme string");
    }
    if (e.tag.value().empty()) {
      throw std::invalid_argument("entry '" + e.orthographic +
                                  "' has an empty tag");
    }
    if (!index_.emplace(e.orthographic, static_cast<WordId>(i)).second) {
      throw DuplicateEntryError("duplicate orthographic form '" +
                                e.orthographic + "'");
    }
    written_.push_back(DecodeUtf8(e.orthographic));
    phonemic_.push_back(e.phonemes.Symbols());
  }
  std::vector<std::uint32_t> order(entries_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return entries_[a].orthographic < entries_[b].orthographic;
  });
  rank_.resize(entries_.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
}

const LexiconEntry& Lexicon::at(WordId id) const {
  if (Index(id) >= entries_.size()) {
    throw LookupError("word id " + std::to_string(Index(id)) + " out of range");
  }
  return entries_[Index(id)];
}

std::optional<WordId> Lexicon::Find(std::string_view orthographic) const {
  const auto it = index_.find(std::string(orthographic));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Lexicon::Require(std::string_view orthographic) const {
  if (auto id = Find(orthographic)) return *id;
  throw LookupError("unknown word '" + std::string(orthographic) + "'");
}

Lexicon ParseLexicon(std::istream& source, LexiconFormat format) {
  if (format != LexiconFormat::kTsv) {
    throw std::invalid_argument("unsupported lexicon format");
  }
  std::vector<LexiconEntry> entries;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!IsValidUtf8(line)) throw ParseError(line_no, "invalid UTF-8");
    const auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(line_no, "empty field");
    }
    if (HasSpace(fields[0])) {
      throw ParseError(line_no, "orthographic form contains whitespace");
    }
    LexiconEntry entry;
    entry.orthographic = std::string(fields[0]);
    try {
      entry.phonemes = PhonemeString(std::string(fields[1]));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    entry.tag = MorphTag(std::string(fields[2]));
    if (!seen.insert(entry.orthographic).second) {
      throw DuplicateEntryError("line " + std::to_string(line_no) +
                                ": duplicate orthographic form '" +
                                entry.orthographic + "'");
    }
    entries.push_back(std::move(entry));
  }
  return Lexicon(std::move(entries));
}

Lexicon LoadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon " + path.string());
  return ParseLexicon(in);
}

std::vector<FeatureKey> ExtractFeatures(const PhonemeString& p,
                                        std::size_t min_len) {
  if (min_len < 1) throw std::invalid_argument("min_len must be >= 1");
  const std::size_t n = p.size();
  const std::size_t positions = n + 2;
  const auto piece = [&](std::size_t pos) -> std::string_view {
    if (pos == 0 || pos == positions - 1) return PhonemeString::kBoundary;
    return p.code(pos - 1);
  };
  std::vector<FeatureKey> out;
  for (std::size_t len = min_len; len <= positions; ++len) {
    // The whole body with exactly one marker is not a feature.
    if (len == n + 1) continue;
    for (std::size_t start = 0; start + len <= positions; ++start) {
      FeatureKey key;
      key.reserve(2 * len);
      for (std::size_t i = start; i < start + len; ++i) key.append(piece(i));
      out.push_back(std::move(key));
    }
  }
  if (min_len > positions) out.push_back(p.Serialized());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace forge
