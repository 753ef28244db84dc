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

#include "forge/similarity.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "forge/errors.h"
#include "forge/parallel.h"

namespace forge {

StochasticMatrix StochasticMatrix::Uniform(
    const std::vector<std::vector<std::uint32_t>>& incidence,
    std::size_t columns) {
  StochasticMatrix m;
  m.columns_ = columns;
  m.offsets_.reserve(incidence.size() + 1);
  m.offsets_.push_back(0);
  std::size_t total = 0;
  for (const auto& row : incidence) total += row.size();
  m.cells_.reserve(total);
  for (const auto& row : incidence) {
    const double weight =
        row.empty() ? 0.0 : 1.0 / static_cast<double>(row.size());
    for (const std::uint32_t c : row) m.cells_.push_back({c, weight});
    m.offsets_.push_back(m.cells_.size());
  }
  return m;
}

BipartiteGraph BipartiteGraph::Build(const Lexicon& lexicon,
                                     std::size_t min_len) {
  BipartiteGraph g;
  std::unordered_map<FeatureKey, FeatureId> ids;
  g.word_features_.resize(lexicon.size());
  for (std::uint32_t w = 0; w < lexicon.size(); ++w) {
    const auto keys = ExtractFeatures(lexicon[WordId{w}].phonemes, min_len);
    auto& row = g.word_features_[w];
    row.reserve(keys.size());
    for (const auto& key : keys) {
      auto [it, inserted] =
          ids.emplace(key, static_cast<FeatureId>(g.feature_keys_.size()));
      if (inserted) {
        g.feature_keys_.push_back(key);
        g.feature_words_.emplace_back();
      }
      row.push_back(it->second);
      g.feature_words_[it->second].push_back(w);
    }
  }
  g.word_to_feature_ =
      StochasticMatrix::Uniform(g.word_features_, g.feature_keys_.size());
  g.feature_to_word_ =
      StochasticMatrix::Uniform(g.feature_words_, g.word_features_.size());
  return g;
}

double ActivationVector::operator[](WordId w) const {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), w,
      [](const Entry& e, WordId id) { return Index(e.word) < Index(id); });
  if (it == entries.end() || it->word != w) return 0.0;
  return it->mass;
}

double ActivationVector::total() const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.mass;
  return sum;
}

ActivationVector SpreadActivation(const BipartiteGraph& g, WordId source) {
  if (Index(source) >= g.word_count()) {
    throw LookupError("unknown source word id " +
                      std::to_string(Index(source)));
  }
  thread_local std::vector<double> accumulator;
  thread_local std::vector<std::uint32_t> touched;
  accumulator.assign(g.word_count(), 0.0);
  touched.clear();

  // Step one: the source row of the word -> feature walk. Step two: each
  // feature's share through the feature -> word walk.
  for (const auto& to_feature : g.word_to_feature().row(Index(source))) {
    for (const auto& to_word : g.feature_to_word().row(to_feature.column)) {
      if (accumulator[to_word.column] == 0.0) touched.push_back(to_word.column);
      accumulator[to_word.column] += to_feature.weight * to_word.weight;
    }
  }
  std::sort(touched.begin(), touched.end());
  ActivationVector out;
  out.entries.reserve(touched.size());
  for (const std::uint32_t w : touched) {
    out.entries.push_back({WordId{w}, accumulator[w]});
  }
  return out;
}

NeighborList NearestNeighbors(const BipartiteGraph& g, const Lexicon& lexicon,
                              WordId source, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const ActivationVector act = SpreadActivation(g, source);
  NeighborList list;
  list.source = source;
  list.neighbors.reserve(act.entries.size());
  for (const auto& e : act.entries) {
    if (e.word != source && e.mass > 0.0) {
      list.neighbors.push_back({e.word, e.mass});
    }
  }
  const auto before = [&](const Neighbor& x, const Neighbor& y) {
    if (x.activation != y.activation) return x.activation > y.activation;
    return lexicon.FormLess(x.word, y.word);
  };
  if (list.neighbors.size() > k) {
    std::partial_sort(list.neighbors.begin(), list.neighbors.begin() + k,
                      list.neighbors.end(), before);
    list.neighbors.resize(k);
  } else {
    std::sort(list.neighbors.begin(), list.neighbors.end(), before);
  }
  return list;
}

std::vector<NeighborList> ComputeNeighborhoods(const BipartiteGraph& g,
                                               const Lexicon& lexicon,
                                               std::size_t k,
                                               unsigned threads) {
  std::vector<NeighborList> lists(lexicon.size());
  ParallelFor(lexicon.size(), threads, [&](std::size_t w) {
    lists[w] =
        NearestNeighbors(g, lexicon, WordId{static_cast<std::uint32_t>(w)}, k);
  });
  return lists;
}

void WriteNeighborhoods(std::ostream& out, const Lexicon& lexicon,
                        const std::vector<NeighborList>& lists) {
  char buf[64];
  for (const auto& list : lists) {
    out << lexicon.form(list.source);
    for (const auto& n : list.neighbors) {
      std::snprintf(buf, sizeof(buf), "%.17g", n.activation);
      out << '\t' << lexicon.form(n.word) << ' ' << buf;
    }
    out << '\n';
  }
}

std::vector<NeighborList> ReadNeighborhoods(std::istream& in,
                                            const Lexicon& lexicon) {
  std::vector<NeighborList> lists(lexicon.size());
  std::vector<bool> present(lexicon.size(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t start = 0;
    std::size_t tab = line.find('\t');
    const WordId source = lexicon.Require(line.substr(0, tab));
    if (present[Index(source)]) {
      throw ParseError(line_no,
                       "repeated source '" + lexicon.form(source) + "'");
    }
    present[Index(source)] = true;
    NeighborList& list = lists[Index(source)];
    list.source = source;
    while (tab != std::string::npos) {
      start = tab + 1;
      tab = line.find('\t', start);
      const std::string_view field = std::string_view(line).substr(
          start, tab == std::string::npos ? std::string::npos : tab - start);
      const std::size_t space = field.rfind(' ');
      if (space == std::string_view::npos) {
        throw ParseError(line_no, "neighbor field without activation");
      }
      double mass = 0.0;
      const auto num = field.substr(space + 1);
      const auto res =
          std::from_chars(num.data(), num.data() + num.size(), mass);
      if (res.ec != std::errc() || res.ptr != num.data() + num.size()) {
        throw ParseError(line_no, "bad activation '" + std::string(num) + "'");
      }
      list.neighbors.push_back({lexicon.Require(field.substr(0, space)), mass});
    }
  }
  for (std::size_t w = 0; w < present.size(); ++w) {
    if (!present[w]) {
      throw LookupError("no neighborhood for '" +
                        lexicon.form(WordId{static_cast<std::uint32_t>(w)}) +
                        "'");
    }
  }
  return lists;
}

}  // namespace forge
