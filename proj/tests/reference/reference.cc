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

#include "reference/reference.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "oracle/oracle.h"

namespace forge::testing {
namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

struct Net {
  std::set<Pair> family;
  std::set<Pair> series;
  std::set<ReferenceQuad> analogies;

  bool operator==(const Net&) const = default;
  void Add(const Net& o) {
    family.insert(o.family.begin(), o.family.end());
    series.insert(o.series.begin(), o.series.end());
    analogies.insert(o.analogies.begin(), o.analogies.end());
  }
};

}  // namespace

std::vector<ReferenceQuad> ReferenceAnalogies(const Lexicon& lexicon,
                                              std::size_t oracle_max_symbols) {
  const std::uint32_t n = static_cast<std::uint32_t>(lexicon.size());
  std::vector<SymbolString> phon(n), text(n);
  std::vector<std::string> tag(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const LexiconEntry& e = lexicon[WordId{i}];
    // Two characters per phoneme, compared as one symbol.
    const std::string& body = e.phonemes.Serialized();
    for (std::size_t k = 0; k + 1 < body.size(); k += 2) {
      phon[i].push_back(static_cast<unsigned char>(body[k]) * 256u +
                        static_cast<unsigned char>(body[k + 1]));
    }
    text[i] = DecodeUtf8(e.orthographic);
    tag[i] = e.tag.value();
  }
  std::vector<ReferenceQuad> out;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      for (std::uint32_t c = 0; c < n; ++c) {
        for (std::uint32_t d = 0; d < n; ++d) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) {
            continue;
          }
          if (phon[a].size() + phon[d].size() !=
                  phon[b].size() + phon[c].size() ||
              text[a].size() + text[d].size() !=
                  text[b].size() + text[c].size()) {
            continue;
          }
          if (!((tag[a] == tag[b] && tag[c] == tag[d]) ||
                (tag[a] == tag[c] && tag[b] == tag[d]))) {
            continue;
          }
          if (OracleAnalogy(phon[a], phon[b], phon[c], phon[d],
                            oracle_max_symbols) &&
              OracleAnalogy(text[a], text[b], text[c], text[d],
                            oracle_max_symbols)) {
            out.push_back({a, b, c, d});
          }
        }
      }
    }
  }
  return out;
}

ReferenceRun ReferenceFilaments(const Lexicon& lexicon,
                                const ReferenceOptions& options) {
  ReferenceRun run;
  run.analogies = ReferenceAnalogies(lexicon, options.oracle_max_symbols);
  const auto& all = run.analogies;
  const auto form = [&](std::uint32_t i) -> const std::string& {
    return lexicon[WordId{i}].orthographic;
  };
  const auto tag = [&](std::uint32_t i) -> const std::string& {
    return lexicon[WordId{i}].tag.value();
  };
  const auto serial = [&](const ReferenceQuad& q) {
    return tag(q[0]) == tag(q[1]) && tag(q[0]) != tag(q[2]);
  };

  std::map<Pair, std::uint32_t> weight;
  std::set<Pair> candidates;
  for (const auto& q : all) {
    ++weight[{q[0], q[1]}];
    if (!serial(q)) candidates.insert({q[0], q[1]});
  }
  std::set<Pair> reliable;
  for (const Pair& p : candidates) {
    if (weight[p] >= options.w_threshold) reliable.insert(p);
  }
  const auto licensed = [&](const std::set<Pair>& family) {
    Net net;
    net.family = family;
    for (const auto& q : all) {
      if (!family.contains({q[0], q[1]})) continue;
      net.analogies.insert(q);
      net.series.insert({q[0], q[2]});
      net.series.insert({q[1], q[3]});
    }
    return net;
  };
  const Net g0 = licensed(reliable);

  std::map<std::uint32_t, std::set<std::uint32_t>> s0;
  for (const Pair& p : g0.series) s0[p.first].insert(p.second);
  const auto central = [&](std::uint32_t a, std::uint32_t c) {
    const auto& sa = s0[a];
    if (sa.size() < 2) return false;
    std::uint64_t shared = 0;
    for (const std::uint32_t x : sa) {
      if (x != c && x != a && s0[c].contains(x)) ++shared;
    }
    return shared * options.cc_den >= options.cc_num * (sa.size() - 1);
  };
  std::set<Pair> kept;
  for (const Pair& p : reliable) {
    for (const auto& q : all) {
      if (q[0] == p.first && q[1] == p.second && s0[p.first].contains(q[2]) &&
          central(p.first, q[2])) {
        kept.insert(p);
        break;
      }
    }
  }
  Net current = licensed(kept);

  for (std::uint32_t step = 0;; ++step) {
    if (step >= options.max_iterations) {
      throw std::runtime_error("reference bootstrap did not converge");
    }
    // Components of the undirected family graph.
    std::map<std::uint32_t, std::uint32_t> comp;
    std::map<std::uint32_t, std::vector<std::uint32_t>> adj;
    for (const Pair& p : current.family) {
      adj[p.first].push_back(p.second);
      adj[p.second].push_back(p.first);
    }
    for (const auto& [start, unused] : adj) {
      if (comp.contains(start)) continue;
      std::vector<std::uint32_t> todo{start};
      comp[start] = start;
      while (!todo.empty()) {
        const std::uint32_t x = todo.back();
        todo.pop_back();
        for (const std::uint32_t y : adj[x]) {
          if (comp.emplace(y, start).second) todo.push_back(y);
        }
      }
    }
    const auto same = [&](std::uint32_t x, std::uint32_t y) {
      const auto i = comp.find(x);
      const auto j = comp.find(y);
      return i != comp.end() && j != comp.end() && i->second == j->second;
    };
    std::map<Pair, std::vector<ReferenceQuad>> groups;
    for (const auto& q : all) {
      if (same(q[0], q[1]) && same(q[2], q[3]) && !serial(q)) {
        groups[{q[0], q[1]}].push_back(q);
      }
    }
    Net ext;
    for (const auto& [p, qs] : groups) {
      std::set<std::uint32_t> sub;
      for (const auto& q : qs) sub.insert(q[2]);
      if (step >= options.subseries_from_step &&
          sub.size() < options.min_subseries) {
        continue;
      }
      ext.family.insert(p);
      for (const auto& q : qs) {
        ext.analogies.insert(q);
        ext.series.insert({q[0], q[2]});
        if (weight.contains({q[1], q[3]})) ext.series.insert({q[1], q[3]});
      }
    }
    Net next = current;
    next.Add(ext);
    if (next == current) break;
    current = std::move(next);
    ++run.iterations;
  }
  current.Add(g0);

  std::map<Pair, std::set<std::string>> members;
  for (const auto& q : current.analogies) {
    if (current.family.contains({q[0], q[1]}) &&
        current.series.contains({q[0], q[2]})) {
      members[{q[0], q[1]}].insert(form(q[2]));
    }
  }
  std::vector<std::pair<std::pair<std::string, std::string>, std::string>>
      lines;
  for (const auto& [p, set] : members) {
    std::string joined;
    for (const std::string& m : set) {
      if (!joined.empty()) joined += ' ';
      joined += m;
    }
    lines.push_back({{form(p.first), form(p.second)}, joined});
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [key, joined] : lines) {
    run.filaments += key.first + '\t' + key.second + '\t' + joined + '\n';
  }
  return run;
}

}  // namespace forge::testing
