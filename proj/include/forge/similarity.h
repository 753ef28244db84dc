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

#ifndef FORGE_SIMILARITY_H_
#define FORGE_SIMILARITY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "forge/lexicon.h"

namespace forge {

using FeatureId = std::uint32_t;

// Row-compressed sparse matrix whose rows each sum to one.
class StochasticMatrix {
 public:
  struct Cell {
    std::uint32_t column;
    double weight;
  };

  StochasticMatrix() = default;
  // Builds the uniform random-walk matrix of an incidence list: row r spreads
  // its mass equally over incidence[r].
  static StochasticMatrix Uniform(
      const std::vector<std::vector<std::uint32_t>>& incidence,
      std::size_t columns);

  std::size_t rows() const {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t columns() const { return columns_; }
  std::span<const Cell> row(std::size_t r) const {
    return {cells_.data() + offsets_[r], cells_.data() + offsets_[r + 1]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Cell> cells_;
  std::size_t columns_ = 0;
};

// Words on one side, phoneme n-gram features on the other.
class BipartiteGraph {
 public:
  static BipartiteGraph Build(const Lexicon& lexicon, std::size_t min_len = 3);

  std::size_t word_count() const { return word_features_.size(); }
  std::size_t feature_count() const { return feature_keys_.size(); }

  std::span<const FeatureId> features_of(WordId w) const {
    return word_features_[Index(w)];
  }
  std::span<const std::uint32_t> owners_of(FeatureId f) const {
    return feature_words_[f];
  }
  std::size_t word_degree(WordId w) const { return features_of(w).size(); }
  std::size_t feature_degree(FeatureId f) const { return owners_of(f).size(); }
  const FeatureKey& feature_key(FeatureId f) const { return feature_keys_[f]; }

  // word -> feature and feature -> word walk matrices.
  const StochasticMatrix& word_to_feature() const { return word_to_feature_; }
  const StochasticMatrix& feature_to_word() const { return feature_to_word_; }

 private:
  std::vector<std::vector<FeatureId>> word_features_;
  std::vector<std::vector<std::uint32_t>> feature_words_;
  std::vector<FeatureKey> feature_keys_;
  StochasticMatrix word_to_feature_;
  StochasticMatrix feature_to_word_;
};

// Sparse word -> mass map, sorted by word id.
struct ActivationVector {
  struct Entry {
    WordId word;
    double mass;
  };
  std::vector<Entry> entries;

  double operator[](WordId w) const;
  double total() const;
};

// Mass 1 on `source`, one uniform step to its features, one uniform step back
// to the words. Throws LookupError if `source` is not a word of `g`.
ActivationVector SpreadActivation(const BipartiteGraph& g, WordId source);

struct Neighbor {
  WordId word;
  double activation;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborList {
  WordId source{};
  // Descending activation; ties in ascending orthographic order.
  std::vector<Neighbor> neighbors;
  friend bool operator==(const NeighborList&, const NeighborList&) = default;
};

inline constexpr std::size_t kDefaultNeighbors = 100;

// The k most activated words other than `source`. Throws LookupError on an
// unknown source and std::invalid_argument if k == 0.
NeighborList NearestNeighbors(const BipartiteGraph& g, const Lexicon& lexicon,
                              WordId source, std::size_t k = kDefaultNeighbors);

// One list per entry, indexed by word id.
std::vector<NeighborList> ComputeNeighborhoods(const BipartiteGraph& g,
                                               const Lexicon& lexicon,
                                               std::size_t k,
                                               unsigned threads = 0);

// One line per word: the source form, then "neighbor activation" fields, all
// tab separated. Activations round-trip exactly.
void WriteNeighborhoods(std::ostream& out, const Lexicon& lexicon,
                        const std::vector<NeighborList>& lists);
// Throws ParseError on malformed lines, LookupError on unknown words, and
// LookupError if some entry has no line.
std::vector<NeighborList> ReadNeighborhoods(std::istream& in,
                                            const Lexicon& lexicon);

}  // namespace forge

#endif  // FORGE_SIMILARITY_H_
