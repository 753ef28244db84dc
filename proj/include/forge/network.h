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

#ifndef FORGE_NETWORK_H_
#define FORGE_NETWORK_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string_view>
#include <vector>

#include "forge/analogy.h"
#include "forge/lexicon.h"

namespace forge {

// Ordered word pair.
struct Edge {
  WordId from{};
  WordId to{};
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& x, const Edge& y) {
    if (auto c = Index(x.from) <=> Index(y.from); c != 0) return c;
    return Index(x.to) <=> Index(y.to);
  }
};

using EdgeSet = std::set<Edge>;

// Exact non-negative fraction, used for clustering coefficients and their
// threshold.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  // Parses "0.66", "1", "2/3". Throws std::invalid_argument.
  static Ratio Parse(std::string_view text);
  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator>=(const Ratio& x, const Ratio& y) {
    return static_cast<unsigned __int128>(x.num) * y.den >=
           static_cast<unsigned __int128>(y.num) * x.den;
  }
  friend bool operator==(const Ratio& x, const Ratio& y) {
    return static_cast<unsigned __int128>(x.num) * y.den ==
           static_cast<unsigned __int128>(y.num) * x.den;
  }
};

// The weighted graph G = (V, E, w) of an analogy set. E holds the first pairs
// of the permutation-closed analogies; w(e) counts the closed analogies whose
// first pair is e.
class RelationGraph {
 public:
  // Throws std::invalid_argument on an empty set.
  static RelationGraph Build(const AnalogySet& analogies);

  const Lexicon& lexicon() const { return *lexicon_; }
  const std::map<Edge, std::uint32_t>& weights() const { return weights_; }
  bool Contains(const Edge& e) const { return weights_.contains(e); }
  // 0 when e is not an edge.
  std::uint32_t weight(const Edge& e) const;

  // Closed analogies, sorted by first pair.
  const std::vector<Analogy>& closed() const { return closed_; }
  // Closed analogies whose first pair is e.
  std::span<const Analogy> with_first_pair(const Edge& e) const;

 private:
  const Lexicon* lexicon_ = nullptr;
  std::map<Edge, std::uint32_t> weights_;
  std::vector<Analogy> closed_;
  // first pair -> [begin, end) into closed_.
  std::map<Edge, std::pair<std::size_t, std::size_t>> spans_;
};

// Edges that are the first pair of some f- or u-typed closed analogy.
EdgeSet FamilyCandidates(const RelationGraph& g);

// Members of `families` with w(e) >= threshold. Throws std::invalid_argument
// if threshold is 0.
EdgeSet ReliableFamilies(const EdgeSet& families, const RelationGraph& g,
                         std::uint32_t threshold = 10);

// (a, c) and (b, d) for every closed a:b::c:d whose first pair is reliable.
EdgeSet InducedSeries(const EdgeSet& reliable, const RelationGraph& g);

// Sorted successor lists of an edge set: s(a) = {c : (a, c) in edges}.
using SeriesMap = std::map<WordId, std::vector<WordId>, std::less<>>;
SeriesMap ToSeriesMap(const EdgeSet& edges);

// Triangles over triples for c within the series of a:
// |(s(a) \ {c}) & (s(c) \ {a})| / (|s(a)| - 1). Requires |s(a)| >= 2.
Ratio ClusteringCoefficient(WordId a, WordId c, const SeriesMap& series);

// Members of s(a) whose coefficient reaches the threshold; empty when
// |s(a)| <= 1.
std::vector<WordId> ClusteringReduce(WordId a, const SeriesMap& series,
                                     const Ratio& threshold);

// Typed relations plus the analogies that license them. Every licensing
// analogy has a family edge as its first pair.
struct Network {
  EdgeSet family;
  EdgeSet series;
  std::set<Quad> analogies;

  bool Includes(const Network& other) const;
  void Merge(const Network& other);
  friend bool operator==(const Network&, const Network&) = default;
};

// G0: the reliable families, the series they induce, and the analogies
// behind them.
Network InducedNetwork(const EdgeSet& reliable, const RelationGraph& g);

// Removes from G0's families every (a, b) whose sub-series misses the
// reduced series of a. The seed keeps the surviving family edges and what
// they induce.
Network ExtractSeed(const Network& g0, const RelationGraph& g,
                    const Ratio& cc_threshold);

struct Filament {
  WordId entry{};
  WordId pivot{};
  // Ascending form order.
  std::vector<WordId> sub_series;
  friend bool operator==(const Filament&, const Filament&) = default;
};

// One filament per family pivot b of a (an f- or u-typed closed analogy
// a:b::c:d exists) with series(a, b) = {c : a:b::c:d in the closed set}.
// Pivots in ascending form order.
std::vector<Filament> FilamentsOf(WordId a, const AnalogySet& analogies);

// Filaments of a network: for every family edge (a, b), the c such that a
// licensing analogy a:b::c:d exists and (a, c) is a series edge. Empty
// sub-series are dropped. Sorted by (entry, pivot) form order.
std::vector<Filament> NetworkFilaments(const Lexicon& lexicon,
                                       const Network& net);

// Decides formal analogy on both phonemes and written forms.
using QuadVerifier = std::function<bool(const Lexicon&, const Quad&)>;
bool SignatureVerifier(const Lexicon& lexicon, const Quad& q);

struct BootstrapOptions {
  std::uint32_t min_subseries = 5;
  // First step index at which min_subseries applies.
  std::uint32_t subseries_from_step = 2;
  std::uint32_t max_iterations = 50;
  unsigned threads = 0;
};

struct BootstrapResult {
  // M_0 ... M_k with M_k the fixed point.
  std::vector<Network> iterations;
  Network merged;
  const Network& fixed_point() const { return iterations.back(); }
};

// Extends the seed to a fixed point. At step i the families of M_i are
// closed transitively; every a:b::c:d with (a, b) inside one family and
// (c, d) inside one family is verified, kept if f- or u-typed with (a, b)
// and (a, c) in G, and grouped into filaments by (a, b). From
// subseries_from_step on, filaments with fewer than min_subseries members
// are dropped. The fixed point is merged with G0. Throws StageError if
// max_iterations steps do not reach a fixed point.
BootstrapResult Bootstrap(const Network& seed, const Network& g0,
                          const RelationGraph& g,
                          const BootstrapOptions& options = {},
                          const QuadVerifier& verify = SignatureVerifier);

// Connected components of the family relation, each sorted by form, ordered
// by their first member.
std::vector<std::vector<WordId>> FamilyComponents(const Lexicon& lexicon,
                                                  const EdgeSet& family);

// "a<TAB>b<TAB>family|series<TAB>weight" in (a, b, type) form order.
void WriteTypedEdges(std::ostream& out, const Network& net,
                     const RelationGraph& g);
// "a<TAB>b<TAB>c<TAB>d" licensing analogies in form order.
void WriteLicensing(std::ostream& out, const Lexicon& lexicon,
                    const Network& net);
// Inverse of the two writers. Throws ParseError or LookupError.
Network ReadNetwork(std::istream& edges, std::istream& licensing,
                    const Lexicon& lexicon);
// All of E with its weight; type is family for members of F, else series.
void WriteGraph(std::ostream& out, const RelationGraph& g,
                const EdgeSet& family_candidates);

}  // namespace forge

#endif  // FORGE_NETWORK_H_
