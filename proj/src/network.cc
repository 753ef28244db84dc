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

#include "forge/network.h"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "forge/errors.h"
#include "forge/parallel.h"

namespace forge {
namespace {

std::uint64_t ParseUnsigned(std::string_view text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() ||
      res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an unsigned integer: '" +
                                std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos
                                         ? std::string_view::npos
                                         : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

Ratio Ratio::Parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    Ratio r{ParseUnsigned(text.substr(0, slash)),
            ParseUnsigned(text.substr(slash + 1))};
    if (r.den == 0) throw std::invalid_argument("zero denominator");
    return r;
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return {ParseUnsigned(text), 1};
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  if (frac.size() > 18) throw std::invalid_argument("too many decimals");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::uint64_t w = whole.empty() ? 0 : ParseUnsigned(whole);
  const std::uint64_t f = frac.empty() ? 0 : ParseUnsigned(frac);
  return {w * den + f, den};
}

RelationGraph RelationGraph::Build(const AnalogySet& analogies) {
  if (analogies.empty()) {
    throw std::invalid_argument("relation graph needs at least one analogy");
  }
  RelationGraph g;
  g.lexicon_ = &analogies.lexicon();
  g.closed_ = analogies.Closed();
  std::stable_sort(g.closed_.begin(), g.closed_.end(),
                   [](const Analogy& x, const Analogy& y) {
                     return Edge{x.words[0], x.words[1]} <
                            Edge{y.words[0], y.words[1]};
                   });
  for (std::size_t i = 0; i < g.closed_.size(); ++i) {
    const Edge e{g.closed_[i].words[0], g.closed_[i].words[1]};
    ++g.weights_[e];
    auto [it, inserted] = g.spans_.try_emplace(e, i, i + 1);
    if (!inserted) it->second.second = i + 1;
  }
  return g;
}

std::uint32_t RelationGraph::weight(const Edge& e) const {
  const auto it = weights_.find(e);
  return it == weights_.end() ? 0 : it->second;
}

std::span<const Analogy> RelationGraph::with_first_pair(const Edge& e) const {
  const auto it = spans_.find(e);
  if (it == spans_.end()) return {};
  return {closed_.data() + it->second.first,
          closed_.data() + it->second.second};
}

EdgeSet FamilyCandidates(const RelationGraph& g) {
  EdgeSet out;
  for (const Analogy& an : g.closed()) {
    if (an.type != AnalogyType::kSeries) {
      out.insert({an.words[0], an.words[1]});
    }
  }
  return out;
}

EdgeSet ReliableFamilies(const EdgeSet& families, const RelationGraph& g,
                         std::uint32_t threshold) {
  if (threshold == 0) throw std::invalid_argument("threshold must be >= 1");
  EdgeSet out;
  for (const Edge& e : families) {
    if (g.weight(e) >= threshold) out.insert(e);
  }
  return out;
}

EdgeSet InducedSeries(const EdgeSet& reliable, const RelationGraph& g) {
  EdgeSet out;
  for (const Edge& e : reliable) {
    for (const Analogy& an : g.with_first_pair(e)) {
      out.insert({an.words[0], an.words[2]});
      out.insert({an.words[1], an.words[3]});
    }
  }
  return out;
}

SeriesMap ToSeriesMap(const EdgeSet& edges) {
  SeriesMap out;
  for (const Edge& e : edges) out[e.from].push_back(e.to);
  for (auto& [w, members] : out) {
    std::sort(members.begin(), members.end(),
              [](WordId x, WordId y) { return Index(x) < Index(y); });
  }
  return out;
}

namespace {

const std::vector<WordId>& SeriesOf(const SeriesMap& series, WordId w) {
  static const std::vector<WordId> kEmpty;
  const auto it = series.find(w);
  return it == series.end() ? kEmpty : it->second;
}

}  // namespace

Ratio ClusteringCoefficient(WordId a, WordId c, const SeriesMap& series) {
  const auto& sa = SeriesOf(series, a);
  if (sa.size() < 2) {
    throw std::invalid_argument("clustering needs a series of two or more");
  }
  const auto& sc = SeriesOf(series, c);
  std::uint64_t triangles = 0;
  // Both lists are sorted by id.
  auto i = sa.begin();
  auto j = sc.begin();
  while (i != sa.end() && j != sc.end()) {
    if (Index(*i) < Index(*j)) {
      ++i;
    } else if (Index(*j) < Index(*i)) {
      ++j;
    } else {
      if (*i != c && *i != a) ++triangles;
      ++i;
      ++j;
    }
  }
  return {triangles, sa.size() - 1};
}

std::vector<WordId> ClusteringReduce(WordId a, const SeriesMap& series,
                                     const Ratio& threshold) {
  const auto& sa = SeriesOf(series, a);
  std::vector<WordId> out;
  if (sa.size() < 2) return out;
  for (const WordId c : sa) {
    if (ClusteringCoefficient(a, c, series) >= threshold) out.push_back(c);
  }
  return out;
}

bool Network::Includes(const Network& other) const {
  return std::includes(family.begin(), family.end(), other.family.begin(),
                       other.family.end()) &&
         std::includes(series.begin(), series.end(), other.series.begin(),
                       other.series.end()) &&
         std::includes(analogies.begin(), analogies.end(),
                       other.analogies.begin(), other.analogies.end());
}

void Network::Merge(const Network& other) {
  family.insert(other.family.begin(), other.family.end());
  series.insert(other.series.begin(), other.series.end());
  analogies.insert(other.analogies.begin(), other.analogies.end());
}

namespace {

// Licensing analogies of the given family edges, with the series they
// induce.
Network Licensed(const EdgeSet& family, const RelationGraph& g) {
  Network net;
  net.family = family;
  for (const Edge& e : family) {
    for (const Analogy& an : g.with_first_pair(e)) {
      net.analogies.insert(an.words);
      net.series.insert({an.words[0], an.words[2]});
      net.series.insert({an.words[1], an.words[3]});
    }
  }
  return net;
}

}  // namespace

Network InducedNetwork(const EdgeSet& reliable, const RelationGraph& g) {
  return Licensed(reliable, g);
}

Network ExtractSeed(const Network& g0, const RelationGraph& g,
                    const Ratio& cc_threshold) {
  const SeriesMap s0 = ToSeriesMap(g0.series);
  std::map<WordId, std::vector<WordId>, std::less<>> reduced;
  EdgeSet kept;
  for (const Edge& e : g0.family) {
    auto it = reduced.find(e.from);
    if (it == reduced.end()) {
      it = reduced.emplace(e.from, ClusteringReduce(e.from, s0, cc_threshold))
               .first;
    }
    const auto& central = it->second;
    const auto licensing = g.with_first_pair(e);
    const bool touches =
        std::any_of(licensing.begin(), licensing.end(), [&](const Analogy& an) {
          return std::find(central.begin(), central.end(), an.words[2]) !=
                 central.end();
        });
    if (touches) kept.insert(e);
  }
  return Licensed(kept, g);
}

std::vector<Filament> FilamentsOf(WordId a, const AnalogySet& analogies) {
  const Lexicon& lex = analogies.lexicon();
  std::map<WordId, std::vector<WordId>, std::less<>> by_pivot;
  std::set<WordId, std::less<>> family_pivots;
  const auto by_id = [](WordId x, WordId y) { return Index(x) < Index(y); };
  for (const Analogy& an : analogies.Closed()) {
    if (an.words[0] != a) continue;
    by_pivot[an.words[1]].push_back(an.words[2]);
    if (an.type != AnalogyType::kSeries) family_pivots.insert(an.words[1]);
  }
  std::vector<Filament> out;
  for (auto& [pivot, members] : by_pivot) {
    if (!family_pivots.contains(pivot) || members.empty()) continue;
    std::sort(members.begin(), members.end(), by_id);
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::sort(members.begin(), members.end(),
              [&](WordId x, WordId y) { return lex.FormLess(x, y); });
    out.push_back({a, pivot, std::move(members)});
  }
  std::sort(out.begin(), out.end(), [&](const Filament& x, const Filament& y) {
    return lex.FormLess(x.pivot, y.pivot);
  });
  return out;
}

std::vector<Filament> NetworkFilaments(const Lexicon& lexicon,
                                       const Network& net) {
  std::map<Edge, std::vector<WordId>> members;
  for (const Quad& q : net.analogies) {
    const Edge first{q[0], q[1]};
    if (!net.family.contains(first)) continue;
    if (!net.series.contains({q[0], q[2]})) continue;
    members[first].push_back(q[2]);
  }
  std::vector<Filament> out;
  for (auto& [e, list] : members) {
    std::sort(list.begin(), list.end(),
              [&](WordId x, WordId y) { return lexicon.FormLess(x, y); });
    list.erase(std::unique(list.begin(), list.end()), list.end());
    out.push_back({e.from, e.to, std::move(list)});
  }
  std::sort(out.begin(), out.end(), [&](const Filament& x, const Filament& y) {
    if (x.entry != y.entry) return lexicon.FormLess(x.entry, y.entry);
    return lexicon.FormLess(x.pivot, y.pivot);
  });
  return out;
}

bool SignatureVerifier(const Lexicon& lexicon, const Quad& q) {
  return CheckAnalogy(
             lexicon.phoneme_symbols(q[0]), lexicon.phoneme_symbols(q[1]),
             lexicon.phoneme_symbols(q[2]), lexicon.phoneme_symbols(q[3])) &&
         CheckAnalogy(
             lexicon.written_symbols(q[0]), lexicon.written_symbols(q[1]),
             lexicon.written_symbols(q[2]), lexicon.written_symbols(q[3]));
}

std::vector<std::vector<WordId>> FamilyComponents(const Lexicon& lexicon,
                                                  const EdgeSet& family) {
  std::map<WordId, WordId, std::less<>> parent;
  const auto find = [&](WordId x) {
    WordId root = x;
    while (parent.at(root) != root) root = parent.at(root);
    while (parent.at(x) != root) {
      const WordId next = parent.at(x);
      parent[x] = root;
      x = next;
    }
    return root;
  };
  for (const Edge& e : family) {
    parent.try_emplace(e.from, e.from);
    parent.try_emplace(e.to, e.to);
  }
  for (const Edge& e : family) {
    const WordId x = find(e.from);
    const WordId y = find(e.to);
    if (x != y) parent[y] = x;
  }
  std::map<WordId, std::vector<WordId>, std::less<>> groups;
  for (const auto& [w, p] : parent) groups[find(w)].push_back(w);
  std::vector<std::vector<WordId>> out;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end(),
              [&](WordId x, WordId y) { return lexicon.FormLess(x, y); });
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    return lexicon.FormLess(x.front(), y.front());
  });
  return out;
}

namespace {

// One bootstrap step: the extension induced by the families of `current`.
Network Extension(const Network& current, const RelationGraph& g,
                  std::uint32_t step, const BootstrapOptions& options,
                  const QuadVerifier& verify) {
  const Lexicon& lex = g.lexicon();
  const auto components = FamilyComponents(lex, current.family);

  // Intra-family ordered pairs, bucketed by phoneme length difference.
  std::vector<Edge> pairs;
  for (const auto& comp : components) {
    for (const WordId a : comp) {
      for (const WordId b : comp) {
        if (a != b) pairs.push_back({a, b});
      }
    }
  }
  const auto diff = [&](const Edge& e) {
    return static_cast<long>(lex[e.from].phonemes.size()) -
           static_cast<long>(lex[e.to].phonemes.size());
  };
  std::map<long, std::vector<std::size_t>> by_diff;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    by_diff[diff(pairs[i])].push_back(i);
  }

  std::vector<std::vector<Quad>> found(pairs.size());
  ParallelFor(pairs.size(), options.threads, [&](std::size_t i) {
    const Edge ab = pairs[i];
    if (!g.Contains(ab)) return;
    for (const std::size_t j : by_diff.at(diff(ab))) {
      const Edge cd = pairs[j];
      if (cd.from == ab.from || cd.from == ab.to || cd.to == ab.from ||
          cd.to == ab.to) {
        continue;
      }
      if (!g.Contains({ab.from, cd.from})) continue;
      const Quad q{ab.from, ab.to, cd.from, cd.to};
      if (!TagPrune(lex.tag(q[0]), lex.tag(q[1]), lex.tag(q[2]),
                    lex.tag(q[3]))) {
        continue;
      }
      if (MakeAnalogy(lex, q).type == AnalogyType::kSeries) continue;
      if (!verify(lex, q)) continue;
      found[i].push_back(q);
    }
  });

  Network ext;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& group = found[i];
    if (group.empty()) continue;
    std::set<WordId> sub;
    for (const Quad& q : group) sub.insert(q[2]);
    if (step >= options.subseries_from_step &&
        sub.size() < options.min_subseries) {
      continue;
    }
    ext.family.insert(pairs[i]);
    for (const Quad& q : group) {
      ext.analogies.insert(q);
      ext.series.insert({q[0], q[2]});
      if (g.Contains({q[1], q[3]})) ext.series.insert({q[1], q[3]});
    }
  }
  return ext;
}

}  // namespace

BootstrapResult Bootstrap(const Network& seed, const Network& g0,
                          const RelationGraph& g,
                          const BootstrapOptions& options,
                          const QuadVerifier& verify) {
  BootstrapResult result;
  result.iterations.push_back(seed);
  for (std::uint32_t step = 0;; ++step) {
    if (step >= options.max_iterations) {
      throw StageError("bootstrap", "no fixed point after " +
                                        std::to_string(options.max_iterations) +
                                        " iterations");
    }
    Network next = result.iterations.back();
    next.Merge(Extension(result.iterations.back(), g, step, options, verify));
    if (next == result.iterations.back()) break;
    result.iterations.push_back(std::move(next));
  }
  result.merged = result.iterations.back();
  result.merged.Merge(g0);
  return result;
}

void WriteTypedEdges(std::ostream& out, const Network& net,
                     const RelationGraph& g) {
  const Lexicon& lex = g.lexicon();
  struct Row {
    Edge e;
    const char* type;
  };
  std::vector<Row> rows;
  for (const Edge& e : net.family) rows.push_back({e, "family"});
  for (const Edge& e : net.series) rows.push_back({e, "series"});
  std::sort(rows.begin(), rows.end(), [&](const Row& x, const Row& y) {
    if (x.e.from != y.e.from) return lex.FormLess(x.e.from, y.e.from);
    if (x.e.to != y.e.to) return lex.FormLess(x.e.to, y.e.to);
    return std::string_view(x.type) < std::string_view(y.type);
  });
  for (const Row& r : rows) {
    out << lex.form(r.e.from) << '\t' << lex.form(r.e.to) << '\t' << r.type
        << '\t' << g.weight(r.e) << '\n';
  }
}

void WriteLicensing(std::ostream& out, const Lexicon& lexicon,
                    const Network& net) {
  std::vector<Quad> quads(net.analogies.begin(), net.analogies.end());
  std::sort(quads.begin(), quads.end(), [&](const Quad& x, const Quad& y) {
    for (int k = 0; k < 4; ++k) {
      if (x[k] != y[k]) return lexicon.FormLess(x[k], y[k]);
    }
    return false;
  });
  for (const Quad& q : quads) {
    out << lexicon.form(q[0]) << '\t' << lexicon.form(q[1]) << '\t'
        << lexicon.form(q[2]) << '\t' << lexicon.form(q[3]) << '\n';
  }
}

Network ReadNetwork(std::istream& edges, std::istream& licensing,
                    const Lexicon& lexicon) {
  Network net;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = SplitTabs(line);
    if (f.size() != 4) throw ParseError(line_no, "expected 4 fields");
    const Edge e{lexicon.Require(f[0]), lexicon.Require(f[1])};
    if (f[2] == "family") {
      net.family.insert(e);
    } else if (f[2] == "series") {
      net.series.insert(e);
    } else {
      throw ParseError(line_no,
                       "unknown edge type '" + std::string(f[2]) + "'");
    }
  }
  line_no = 0;
  while (std::getline(licensing, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = SplitTabs(line);
    if (f.size() != 4) throw ParseError(line_no, "expected 4 forms");
    net.analogies.insert({lexicon.Require(f[0]), lexicon.Require(f[1]),
                          lexicon.Require(f[2]), lexicon.Require(f[3])});
  }
  return net;
}

void WriteGraph(std::ostream& out, const RelationGraph& g,
                const EdgeSet& family_candidates) {
  const Lexicon& lex = g.lexicon();
  std::vector<std::pair<Edge, std::uint32_t>> rows(g.weights().begin(),
                                                   g.weights().end());
  std::sort(rows.begin(), rows.end(), [&](const auto& x, const auto& y) {
    if (x.first.from != y.first.from) {
      return lex.FormLess(x.first.from, y.first.from);
    }
    return lex.FormLess(x.first.to, y.first.to);
  });
  for (const auto& [e, w] : rows) {
    out << lex.form(e.from) << '\t' << lex.form(e.to) << '\t'
        << (family_candidates.contains(e) ? "family" : "series") << '\t' << w
        << '\n';
  }
}

}  // namespace forge
