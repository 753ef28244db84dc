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

#ifndef FORGE_ANALOGY_H_
#define FORGE_ANALOGY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "forge/lexicon.h"
#include "forge/similarity.h"
#include "forge/symbols.h"

namespace forge {

enum class EditKind : std::uint8_t { kKeep, kDelete, kInsert };

struct EditOp {
  EditKind kind;
  std::uint32_t length;
  // Start of the segment in the signature's material (DELETE and INSERT)
  // or in the first string (KEEP).
  std::uint32_t offset;
  friend bool operator==(const EditOp&, const EditOp&) = default;
};

// A canonical path through the edit lattice of a pair (a, b).
//
// The path follows a longest common subsequence alignment whose kept
// positions are lexicographically smallest in a, then in b. Consecutive
// operations of one kind are merged, and every gap between two kept
// segments reads DELETE then INSERT. Deleted and inserted symbols are copied
// into `material`; kept segments are recorded by position only.
struct AnalogicalSignature {
  std::vector<EditOp> ops;
  SymbolString material;

  // Rebuilds the second string from the first.
  SymbolString Replay(SymbolSpan first) const;

  friend bool operator==(const AnalogicalSignature&,
                         const AnalogicalSignature&) = default;
};

AnalogicalSignature Signature(SymbolSpan a, SymbolSpan b);
void Signature(SymbolSpan a, SymbolSpan b, AnalogicalSignature* out);

// True when both signatures have the same sequence of operation kinds and
// identical deleted and inserted material. What is kept is abstracted away,
// length included: x:xy and z:zy match for any x and z.
bool SignaturesMatch(const AnalogicalSignature& ab,
                     const AnalogicalSignature& cd);

// Signature identity for the single pairing a:b against c:d.
bool SignatureAnalogy(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d);

// Formal analogy a:b::c:d by signatures. Both pairings of the quadruplet
// must agree: a:b against c:d (or b:a against d:c), and a:c against b:d (or
// c:a against d:b). The verdict is invariant under the eight permutations of
// the proportion.
bool CheckAnalogy(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d);

// l(a) - l(b) == l(c) - l(d).
bool LengthPrune(const PhonemeString& a, const PhonemeString& b,
                 const PhonemeString& c, const PhonemeString& d);

// (ta = tb and tc = td) or (ta = tc and tb = td).
bool TagPrune(const MorphTag& ta, const MorphTag& tb, const MorphTag& tc,
              const MorphTag& td);

enum class AnalogyType : char {
  kFamily = 'f',
  kSeries = 's',
  kUndetermined = 'u',
};

// f if the first pair differs in tag, else s if a and c differ, else u.
AnalogyType TypeAnalogy(const MorphTag& ta, const MorphTag& tb,
                        const MorphTag& tc, const MorphTag& td);

using Quad = std::array<WordId, 4>;

struct Analogy {
  Quad words{};
  AnalogyType type = AnalogyType::kUndetermined;
  friend bool operator==(const Analogy&, const Analogy&) = default;
};

Analogy MakeAnalogy(const Lexicon& lexicon, const Quad& words);

// Index maps of the eight equivalent forms of a:b::c:d, identity first:
// a:b::c:d, a:c::b:d, b:a::d:c, b:d::a:c, c:a::d:b, c:d::a:b, d:b::c:a,
// d:c::b:a.
inline constexpr std::array<std::array<int, 4>, 8> kOrbitPermutations = {{
    {0, 1, 2, 3},
    {0, 2, 1, 3},
    {1, 0, 3, 2},
    {1, 3, 0, 2},
    {2, 0, 3, 1},
    {2, 3, 0, 1},
    {3, 1, 2, 0},
    {3, 2, 1, 0},
}};

template <typename T>
std::array<T, 4> Permute(const std::array<T, 4>& q, int which) {
  const auto& p = kOrbitPermutations[which];
  return {q[p[0]], q[p[1]], q[p[2]], q[p[3]]};
}

// The eight permuted forms, identity first (may repeat).
std::array<Quad, 8> PermutationOrbit(const Quad& q);
// Typed forms of the distinct orbit members.
std::vector<Analogy> PermutationOrbit(const Lexicon& lexicon,
                                      const Analogy& an);

// Orbit member whose four forms are lexicographically least.
Quad CanonicalQuad(const Lexicon& lexicon, const Quad& q);

// Analogies stored as one canonical representative per orbit. Holds a
// reference to its lexicon, which must outlive the set.
class AnalogySet {
 public:
  explicit AnalogySet(const Lexicon& lexicon) : lexicon_(&lexicon) {}

  const Lexicon& lexicon() const { return *lexicon_; }

  // Returns true if the orbit was not present.
  bool Insert(const Quad& q);
  bool Contains(const Quad& q) const;
  std::size_t size() const { return canonical_.size(); }
  bool empty() const { return canonical_.empty(); }

  // Canonical representatives in ascending form order, typed.
  std::vector<Analogy> Representatives() const;
  // Every distinct orbit member, typed, in ascending form order.
  std::vector<Analogy> Closed() const;

  friend bool operator==(const AnalogySet& x, const AnalogySet& y) {
    return x.canonical_ == y.canonical_;
  }

 private:
  bool QuadLess(const Quad& x, const Quad& y) const;

  const Lexicon* lexicon_;
  // Sorted by QuadLess.
  std::vector<Quad> canonical_;
};

struct EnumerationCounters {
  std::uint64_t candidates = 0;
  std::uint64_t pruned_by_length = 0;
  std::uint64_t pruned_by_tag = 0;
  std::uint64_t phonemic_pass = 0;
  std::uint64_t orthographic_pass = 0;
  friend bool operator==(const EnumerationCounters&,
                         const EnumerationCounters&) = default;
};

struct EnumerationOptions {
  // Aborts with ConfigError when more candidates would be generated;
  // 0 disables the cap.
  std::uint64_t max_candidates = 0;
  unsigned threads = 0;
};

struct EnumerationResult {
  AnalogySet analogies;
  EnumerationCounters counters;
};

// For each entry a: b and c range over a's neighborhood and d over c's, all
// four words distinct. Candidates go through LengthPrune, TagPrune, then
// CheckAnalogy on phonemes, then CheckAnalogy on written forms. Throws
// ConfigError if a neighborhood is missing or the candidate cap is hit.
EnumerationResult EnumerateAnalogies(
    const Lexicon& lexicon, const std::vector<NeighborList>& neighborhoods,
    const EnumerationOptions& options = {});

// One canonical analogy per line: four forms and the type letter, tab
// separated, in ascending form order.
void WriteAnalogies(std::ostream& out, const AnalogySet& set);
// Throws ParseError on malformed lines or a type letter that disagrees with
// the tags, LookupError on unknown words.
AnalogySet ReadAnalogies(std::istream& in, const Lexicon& lexicon);

}  // namespace forge

#endif  // FORGE_ANALOGY_H_
