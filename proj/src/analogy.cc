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

#include "forge/analogy.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "forge/errors.h"
#include "forge/parallel.h"

namespace forge {
namespace {

// Scratch table for the lattice walk, reused across calls on a thread.
// cell[i * (m + 1) + j] = 2 * LCS(a[i:], b[j:]) + matchable, where matchable
// means a[i] is kept by some optimal alignment of (a[i:], b[j:]) that only
// inserts before keeping it.
struct LatticeScratch {
  std::vector<std::uint32_t> cell;
};

void AppendOp(AnalogicalSignature* sig, EditKind kind, std::uint32_t offset) {
  auto& ops = sig->ops;
  if (!ops.empty() && ops.back().kind == kind) {
    ++ops.back().length;
    return;
  }
  ops.push_back({kind, 1, offset});
}

}  // namespace

SymbolString AnalogicalSignature::Replay(SymbolSpan first) const {
  SymbolString out;
  std::size_t pos = 0;
  for (const EditOp& op : ops) {
    switch (op.kind) {
      case EditKind::kKeep:
        if (pos + op.length > first.size()) {
          throw std::invalid_argument("signature does not fit the string");
        }
        out.insert(out.end(), first.begin() + pos,
                   first.begin() + pos + op.length);
        pos += op.length;
        break;
      case EditKind::kDelete:
        if (pos + op.length > first.size() ||
            !std::equal(material.begin() + op.offset,
                        material.begin() + op.offset + op.length,
                        first.begin() + pos)) {
          throw std::invalid_argument("signature does not fit the string");
        }
        pos += op.length;
        break;
      case EditKind::kInsert:
        out.insert(out.end(), material.begin() + op.offset,
                   material.begin() + op.offset + op.length);
        break;
    }
  }
  if (pos != first.size()) {
    throw std::invalid_argument("signature does not consume the string");
  }
  return out;
}

void Signature(SymbolSpan a, SymbolSpan b, AnalogicalSignature* out) {
  thread_local LatticeScratch scratch;
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t stride = m + 1;
  if (scratch.cell.size() < (n + 1) * stride) {
    scratch.cell.resize((n + 1) * stride);
  }
  std::uint32_t* cell = scratch.cell.data();
  const Symbol* pa = a.data();
  const Symbol* pb = b.data();
  std::fill(cell + n * stride, cell + (n + 1) * stride, 0u);
  for (std::size_t i = n; i-- > 0;) {
    std::uint32_t* row = cell + i * stride;
    const std::uint32_t* below = row + stride;
    const Symbol ai = pa[i];
    row[m] = 0;
    for (std::size_t j = m; j-- > 0;) {
      if (ai == pb[j]) {
        row[j] = ((below[j + 1] >> 1) + 1) << 1 | 1u;
      } else {
        const std::uint32_t right = row[j + 1] >> 1;
        const std::uint32_t down = below[j] >> 1;
        if (right >= down) {
          row[j] = right << 1 | (row[j + 1] & 1u);
        } else {
          row[j] = down << 1;
        }
      }
    }
  }

  out->ops.clear();
  out->material.clear();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      AppendOp(out, EditKind::kKeep, static_cast<std::uint32_t>(i));
      ++i;
      ++j;
    } else if (i < n && j < m && (cell[i * stride + j] & 1u)) {
      AppendOp(out, EditKind::kInsert,
               static_cast<std::uint32_t>(out->material.size()));
      out->material.push_back(b[j]);
      ++j;
    } else if (i < n) {
      AppendOp(out, EditKind::kDelete,
               static_cast<std::uint32_t>(out->material.size()));
      out->material.push_back(a[i]);
      ++i;
    } else {
      AppendOp(out, EditKind::kInsert,
               static_cast<std::uint32_t>(out->material.size()));
      out->material.push_back(b[j]);
      ++j;
    }
  }
}

AnalogicalSignature Signature(SymbolSpan a, SymbolSpan b) {
  AnalogicalSignature sig;
  Signature(a, b, &sig);
  return sig;
}

bool SignaturesMatch(const AnalogicalSignature& ab,
                     const AnalogicalSignature& cd) {
  if (ab.ops.size() != cd.ops.size()) return false;
  for (std::size_t k = 0; k < ab.ops.size(); ++k) {
    const EditOp& x = ab.ops[k];
    const EditOp& y = cd.ops[k];
    if (x.kind != y.kind) return false;
    if (x.kind == EditKind::kKeep) continue;
    if (x.length != y.length) return false;
  }
  // Material is laid out in op order, so identical edits mean identical
  // material.
  return ab.material == cd.material;
}

namespace {

bool PairingMatches(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d) {
  thread_local AnalogicalSignature first;
  thread_local AnalogicalSignature second;
  Signature(a, b, &first);
  Signature(c, d, &second);
  return SignaturesMatch(first, second);
}

}  // namespace

bool SignatureAnalogy(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d) {
  return PairingMatches(a, b, c, d);
}

bool CheckAnalogy(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d) {
  // Necessary for either pairing to match; cheap to test first.
  if (a.size() + d.size() != b.size() + c.size()) return false;
  const bool pairs = PairingMatches(a, b, c, d) || PairingMatches(b, a, d, c);
  if (!pairs) return false;
  return PairingMatches(a, c, b, d) || PairingMatches(c, a, d, b);
}

bool LengthPrune(const PhonemeString& a, const PhonemeString& b,
                 const PhonemeString& c, const PhonemeString& d) {
  // Same as l(a) - l(b) == l(c) - l(d) without signed arithmetic.
  return PhonemeLength(a) + PhonemeLength(d) ==
         PhonemeLength(b) + PhonemeLength(c);
}

bool TagPrune(const MorphTag& ta, const MorphTag& tb, const MorphTag& tc,
              const MorphTag& td) {
  return (ta == tb && tc == td) || (ta == tc && tb == td);
}

AnalogyType TypeAnalogy(const MorphTag& ta, const MorphTag& tb,
                        const MorphTag& tc, const MorphTag& /*td*/) {
  if (ta != tb) return AnalogyType::kFamily;
  if (ta != tc) return AnalogyType::kSeries;
  return AnalogyType::kUndetermined;
}

Analogy MakeAnalogy(const Lexicon& lexicon, const Quad& words) {
  return {words, TypeAnalogy(lexicon.tag(words[0]), lexicon.tag(words[1]),
                             lexicon.tag(words[2]), lexicon.tag(words[3]))};
}

std::array<Quad, 8> PermutationOrbit(const Quad& q) {
  std::array<Quad, 8> out;
  for (int k = 0; k < 8; ++k) out[k] = Permute(q, k);
  return out;
}

std::vector<Analogy> PermutationOrbit(const Lexicon& lexicon,
                                      const Analogy& an) {
  std::vector<Analogy> out;
  for (const Quad& q : PermutationOrbit(an.words)) {
    if (std::none_of(out.begin(), out.end(),
                     [&](const Analogy& x) { return x.words == q; })) {
      out.push_back(MakeAnalogy(lexicon, q));
    }
  }
  return out;
}

namespace {

bool RankLess(const Lexicon& lexicon, const Quad& x, const Quad& y) {
  for (int k = 0; k < 4; ++k) {
    const auto rx = lexicon.rank(x[k]);
    const auto ry = lexicon.rank(y[k]);
    if (rx != ry) return rx < ry;
  }
  return false;
}

}  // namespace

Quad CanonicalQuad(const Lexicon& lexicon, const Quad& q) {
  Quad best = q;
  for (int k = 1; k < 8; ++k) {
    const Quad cand = Permute(q, k);
    if (RankLess(lexicon, cand, best)) best = cand;
  }
  return best;
}

bool AnalogySet::QuadLess(const Quad& x, const Quad& y) const {
  return RankLess(*lexicon_, x, y);
}

bool AnalogySet::Insert(const Quad& q) {
  const Quad canon = CanonicalQuad(*lexicon_, q);
  const auto it = std::lower_bound(
      canonical_.begin(), canonical_.end(), canon,
      [this](const Quad& x, const Quad& y) { return QuadLess(x, y); });
  if (it != canonical_.end() && *it == canon) return false;
  canonical_.insert(it, canon);
  return true;
}

bool AnalogySet::Contains(const Quad& q) const {
  const Quad canon = CanonicalQuad(*lexicon_, q);
  return std::binary_search(
      canonical_.begin(), canonical_.end(), canon,
      [this](const Quad& x, const Quad& y) { return QuadLess(x, y); });
}

std::vector<Analogy> AnalogySet::Representatives() const {
  std::vector<Analogy> out;
  out.reserve(canonical_.size());
  for (const Quad& q : canonical_) out.push_back(MakeAnalogy(*lexicon_, q));
  return out;
}

std::vector<Analogy> AnalogySet::Closed() const {
  std::vector<Analogy> out;
  out.reserve(canonical_.size() * 8);
  for (const Quad& q : canonical_) {
    for (auto& an : PermutationOrbit(*lexicon_, MakeAnalogy(*lexicon_, q))) {
      out.push_back(an);
    }
  }
  std::sort(out.begin(), out.end(), [this](const Analogy& x, const Analogy& y) {
    return QuadLess(x.words, y.words);
  });
  return out;
}

EnumerationResult EnumerateAnalogies(
    const Lexicon& lexicon, const std::vector<NeighborList>& neighborhoods,
    const EnumerationOptions& options) {
  const std::size_t n = lexicon.size();
  if (neighborhoods.size() != n) {
    throw ConfigError("expected " + std::to_string(n) + " neighborhoods, got " +
                      std::to_string(neighborhoods.size()));
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (Index(neighborhoods[w].source) != w) {
      throw ConfigError("missing neighborhood for '" +
                        lexicon.form(WordId{static_cast<std::uint32_t>(w)}) +
                        "'");
    }
  }

  // Sorted neighbor ids per word, for membership tests, and the neighbors
  // of each word grouped by phoneme length.
  std::vector<std::vector<std::uint32_t>> members(n);
  std::vector<std::vector<std::pair<std::size_t, std::vector<WordId>>>>
      by_length(n);
  for (std::size_t w = 0; w < n; ++w) {
    for (const auto& nb : neighborhoods[w].neighbors) {
      members[w].push_back(Index(nb.word));
      const std::size_t len = lexicon[nb.word].phonemes.size();
      auto& buckets = by_length[w];
      auto it = std::find_if(buckets.begin(), buckets.end(),
                             [&](const auto& b) { return b.first == len; });
      if (it == buckets.end()) {
        buckets.push_back({len, {}});
        it = buckets.end() - 1;
      }
      it->second.push_back(nb.word);
    }
    std::sort(members[w].begin(), members[w].end());
  }
  const auto is_member = [&](std::size_t of, WordId w) {
    return std::binary_search(members[of].begin(), members[of].end(), Index(w));
  };
  const auto bucket = [&](std::size_t of,
                          std::size_t len) -> const std::vector<WordId>* {
    for (const auto& b : by_length[of]) {
      if (b.first == len) return &b.second;
    }
    return nullptr;
  };

  // Candidate count per entry: (b, c, d) with b != c and d not in {a, b}.
  std::vector<std::uint64_t> generated(n, 0);
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const WordId wa{static_cast<std::uint32_t>(a)};
    for (const auto& b : neighborhoods[a].neighbors) {
      for (const auto& c : neighborhoods[a].neighbors) {
        if (c.word == b.word) continue;
        const std::size_t nc = Index(c.word);
        generated[a] += members[nc].size() - (is_member(nc, wa) ? 1 : 0) -
                        (is_member(nc, b.word) ? 1 : 0);
      }
    }
    total += generated[a];
  }
  if (options.max_candidates != 0 && total > options.max_candidates) {
    throw ConfigError("candidate cap exceeded: " + std::to_string(total) +
                      " > " + std::to_string(options.max_candidates));
  }

  struct Shard {
    EnumerationCounters counters;
    std::vector<Quad> found;
  };
  std::vector<Shard> shards(n);
  ParallelFor(n, options.threads, [&](std::size_t a) {
    Shard& shard = shards[a];
    const WordId wa{static_cast<std::uint32_t>(a)};
    const LexiconEntry& ea = lexicon[wa];
    std::uint64_t length_ok = 0;
    for (const auto& nb : neighborhoods[a].neighbors) {
      const WordId wb = nb.word;
      const LexiconEntry& eb = lexicon[wb];
      for (const auto& nc : neighborhoods[a].neighbors) {
        const WordId wc = nc.word;
        if (wc == wb) continue;
        const LexiconEntry& ec = lexicon[wc];
        // l(d) = l(c) - l(a) + l(b)
        const std::size_t sum = ec.phonemes.size() + eb.phonemes.size();
        if (sum < ea.phonemes.size()) continue;
        const auto* ds = bucket(Index(wc), sum - ea.phonemes.size());
        if (ds == nullptr) continue;
        for (const WordId wd : *ds) {
          if (wd == wa || wd == wb) continue;
          ++length_ok;
          const LexiconEntry& ed = lexicon[wd];
          if (!TagPrune(ea.tag, eb.tag, ec.tag, ed.tag)) {
            ++shard.counters.pruned_by_tag;
            continue;
          }
          if (!CheckAnalogy(
                  lexicon.phoneme_symbols(wa), lexicon.phoneme_symbols(wb),
                  lexicon.phoneme_symbols(wc), lexicon.phoneme_symbols(wd))) {
            continue;
          }
          ++shard.counters.phonemic_pass;
          if (!CheckAnalogy(
                  lexicon.written_symbols(wa), lexicon.written_symbols(wb),
                  lexicon.written_symbols(wc), lexicon.written_symbols(wd))) {
            continue;
          }
          ++shard.counters.orthographic_pass;
          shard.found.push_back(CanonicalQuad(lexicon, {wa, wb, wc, wd}));
        }
      }
    }
    shard.counters.candidates = generated[a];
    shard.counters.pruned_by_length = generated[a] - length_ok;
  });

  EnumerationResult result{AnalogySet(lexicon), {}};
  std::vector<Quad> all;
  for (auto& shard : shards) {
    result.counters.candidates += shard.counters.candidates;
    result.counters.pruned_by_length += shard.counters.pruned_by_length;
    result.counters.pruned_by_tag += shard.counters.pruned_by_tag;
    result.counters.phonemic_pass += shard.counters.phonemic_pass;
    result.counters.orthographic_pass += shard.counters.orthographic_pass;
    all.insert(all.end(), shard.found.begin(), shard.found.end());
  }
  std::sort(all.begin(), all.end(), [&](const Quad& x, const Quad& y) {
    return RankLess(lexicon, x, y);
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const Quad& q : all) result.analogies.Insert(q);
  return result;
}

void WriteAnalogies(std::ostream& out, const AnalogySet& set) {
  const Lexicon& lex = set.lexicon();
  for (const Analogy& an : set.Representatives()) {
    out << lex.form(an.words[0]) << '\t' << lex.form(an.words[1]) << '\t'
        << lex.form(an.words[2]) << '\t' << lex.form(an.words[3]) << '\t'
        << static_cast<char>(an.type) << '\n';
  }
}

AnalogySet ReadAnalogies(std::istream& in, const Lexicon& lexicon) {
  AnalogySet set(lexicon);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(std::string_view(line).substr(
          start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5 || fields[4].size() != 1) {
      throw ParseError(line_no, "expected four forms and a type letter");
    }
    const Quad q = {lexicon.Require(fields[0]), lexicon.Require(fields[1]),
                    lexicon.Require(fields[2]), lexicon.Require(fields[3])};
    if (static_cast<char>(MakeAnalogy(lexicon, q).type) != fields[4][0]) {
      throw ParseError(line_no, "type letter disagrees with the tags");
    }
    set.Insert(q);
  }
  return set;
}

}  // namespace forge
