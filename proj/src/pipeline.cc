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

#include "forge/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "forge/errors.h"
#include "forge/similarity.h"
#include "json.hpp"

namespace forge {
namespace fs = std::filesystem;

const char* StageName(Stage stage) {
  switch (stage) {
    case Stage::kLexicon:
      return "lexicon";
    case Stage::kNeighbors:
      return "neighbors";
    case Stage::kAnalogies:
      return "analogies";
    case Stage::kGraph:
      return "graph";
    case Stage::kSeed:
      return "seed";
    case Stage::kBootstrap:
      return "bootstrap";
    case Stage::kExport:
      return "export";
    case Stage::kStats:
      return "stats";
  }
  return "unknown";
}

Ratio PipelineConfig::cc_ratio() const {
  try {
    return Ratio::Parse(cc_threshold);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("cc_threshold '" + cc_threshold + "': " + e.what());
  }
}

void PipelineConfig::Validate() const {
  if (lexicon.empty()) throw ConfigError("no lexicon given");
  if (min_ngram == 0) throw ConfigError("min_ngram must be positive");
  if (neighbors == 0) throw ConfigError("neighbors must be positive");
  if (w_threshold == 0) throw ConfigError("w_threshold must be positive");
  if (min_subseries == 0) throw ConfigError("min_subseries must be positive");
  if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
  const Ratio cc = cc_ratio();
  if (cc.num == 0 || cc.num > cc.den) {
    throw ConfigError("cc_threshold must lie in (0, 1]");
  }
}

namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T v{};
  const auto res =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() ||
      res.ptr != value.data() + value.size()) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
  return v;
}

}  // namespace

void ApplyConfigValue(PipelineConfig* cfg, const std::string& key,
                      const std::string& value) {
  if (key == "lexicon") {
    cfg->lexicon = value;
  } else if (key == "output" || key == "output_dir") {
    cfg->output_dir = value;
  } else if (key == "min_ngram") {
    cfg->min_ngram = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "neighbors") {
    cfg->neighbors = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "w_threshold") {
    cfg->w_threshold = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "cc_threshold") {
    cfg->cc_threshold = value;
  } else if (key == "min_subseries") {
    cfg->min_subseries = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "subseries_from_step") {
    cfg->subseries_from_step = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "max_iterations") {
    cfg->max_iterations = ParseNumber<std::uint32_t>(key, value);
  } else if (key == "max_candidates") {
    cfg->max_candidates = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "threads") {
    cfg->threads = ParseNumber<unsigned>(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

PipelineConfig LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = Trim(line);
    if (text.empty() || text.front() == '#' || text.front() == '[') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = Trim(std::string_view(text).substr(0, eq));
    std::string value = Trim(std::string_view(text).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    ApplyConfigValue(&cfg, key, value);
  }
  const fs::path base = path.parent_path();
  if (!cfg.lexicon.empty() && cfg.lexicon.is_relative()) {
    cfg.lexicon = base / cfg.lexicon;
  }
  if (cfg.output_dir.is_relative()) cfg.output_dir = base / cfg.output_dir;
  return cfg;
}

std::string FormatDecimal2(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "0.00";
  const unsigned __int128 scaled =
      (static_cast<unsigned __int128>(num) * 200 + den) / (2 * den);
  const auto hundredths = static_cast<std::uint64_t>(scaled);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%llu.%02llu",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

NetworkStats ComputeStats(const std::vector<Filament>& filaments) {
  NetworkStats stats;
  std::vector<std::uint32_t> entries;
  for (const Filament& f : filaments) {
    ++stats.filaments;
    stats.serial_relations += f.sub_series.size();
    entries.push_back(Index(f.entry));
  }
  std::sort(entries.begin(), entries.end());
  stats.entries = static_cast<std::uint64_t>(
      std::unique(entries.begin(), entries.end()) - entries.begin());
  stats.series_per_filament =
      FormatDecimal2(stats.serial_relations, stats.filaments);
  stats.filaments_per_entry = FormatDecimal2(stats.filaments, stats.entries);
  return stats;
}

void ExportFilaments(std::ostream& out, const Lexicon& lexicon,
                     const std::vector<Filament>& filaments) {
  std::vector<const Filament*> order;
  for (const Filament& f : filaments) order.push_back(&f);
  std::sort(order.begin(), order.end(),
            [&](const Filament* x, const Filament* y) {
              if (x->entry != y->entry) {
                return lexicon.FormLess(x->entry, y->entry);
              }
              return lexicon.FormLess(x->pivot, y->pivot);
            });
  for (const Filament* f : order) {
    std::vector<WordId> members = f->sub_series;
    std::sort(members.begin(), members.end(),
              [&](WordId x, WordId y) { return lexicon.FormLess(x, y); });
    out << lexicon.form(f->entry) << '\t' << lexicon.form(f->pivot) << '\t';
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) out << ' ';
      out << lexicon.form(members[i]);
    }
    out << '\n';
  }
}

namespace {

void WriteFileAtomically(const fs::path& path,
                         const std::function<void(std::ostream&)>& body) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

void ExportFilaments(const fs::path& path, const Lexicon& lexicon,
                     const std::vector<Filament>& filaments) {
  WriteFileAtomically(path, [&](std::ostream& out) {
    ExportFilaments(out, lexicon, filaments);
  });
}

std::vector<Filament> ReadFilaments(std::istream& in, const Lexicon& lexicon) {
  std::vector<Filament> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError(line_no, "expected entry, pivot and members");
    }
    Filament f;
    f.entry = lexicon.Require(std::string_view(line).substr(0, t1));
    f.pivot =
        lexicon.Require(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    std::istringstream members(line.substr(t2 + 1));
    std::string m;
    while (members >> m) f.sub_series.push_back(lexicon.Require(m));
    if (f.sub_series.empty()) throw ParseError(line_no, "empty sub-series");
    out.push_back(std::move(f));
  }
  return out;
}

void WriteReportJson(std::ostream& out, const NetworkStats& s) {
  nlohmann::ordered_json j;
  j["entries"] = s.entries;
  j["filaments"] = s.filaments;
  j["serial_relations"] = s.serial_relations;
  j["series_per_filament"] = s.series_per_filament;
  j["filaments_per_entry"] = s.filaments_per_entry;
  j["analogies"] = s.analogies;
  j["candidates"] = {
      {"generated", s.counters.candidates},
      {"pruned_by_length", s.counters.pruned_by_length},
      {"pruned_by_tag", s.counters.pruned_by_tag},
      {"phonemic_pass", s.counters.phonemic_pass},
      {"orthographic_pass", s.counters.orthographic_pass},
  };
  j["graph"] = {
      {"edges", s.graph_edges},
      {"family_candidates", s.family_candidates},
      {"reliable_families", s.reliable_families},
      {"induced_series", s.induced_series},
      {"seed_families", s.seed_families},
  };
  j["bootstrap_iterations"] = s.bootstrap_iterations;
  out << j.dump(2) << '\n';
}

namespace {

std::uint64_t Fnv1a(std::string_view data,
                    std::uint64_t h = 0xcbf29ce484222325ull) {
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string FileHash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return Hex(Fnv1a(data));
}

constexpr std::string_view kHashPrefix = "# config-hash: ";

// Header lines ("# key: value") at the top of a checkpoint.
std::map<std::string, std::string> ReadHeader(const fs::path& path) {
  std::map<std::string, std::string> header;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    header[line.substr(2, colon - 2)] = line.substr(colon + 2);
  }
  return header;
}

class Checkpoints {
 public:
  Checkpoints(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  fs::path path(const std::string& name) const { return dir_ / name; }

  // True if `name` exists and was written with `hash`. Throws StageError if
  // it was written under another config and force is off.
  bool Reusable(Stage stage, const std::string& name,
                const std::string& hash) const {
    const fs::path p = path(name);
    if (!fs::exists(p)) return false;
    const auto header = ReadHeader(p);
    const auto it = header.find("config-hash");
    if (it != header.end() && it->second == hash) return true;
    if (force_) return false;
    throw StageError(StageName(stage),
                     "checkpoint " + p.string() +
                         " was written under a different config; rerun with "
                         "--force to overwrite it");
  }

  void Write(const std::string& name, const std::string& hash,
             const std::vector<std::pair<std::string, std::string>>& extra,
             const std::function<void(std::ostream&)>& body) const {
    WriteFileAtomically(path(name), [&](std::ostream& out) {
      out << kHashPrefix << hash << '\n';
      for (const auto& [k, v] : extra) out << "# " << k << ": " << v << '\n';
      body(out);
    });
  }

  std::ifstream Open(const std::string& name) const {
    std::ifstream in(path(name));
    if (!in) throw std::runtime_error("cannot open " + path(name).string());
    return in;
  }

 private:
  fs::path dir_;
  bool force_;
};

// Runs fn, reporting any failure as a StageError that names `input`.
template <typename Fn>
auto RunStage(Stage stage, const fs::path& input, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(StageName(stage), input.string() + ": " + e.what());
  }
}

std::string CountersLine(const EnumerationCounters& c) {
  std::ostringstream s;
  s << c.candidates << ' ' << c.pruned_by_length << ' ' << c.pruned_by_tag
    << ' ' << c.phonemic_pass << ' ' << c.orthographic_pass;
  return s.str();
}

EnumerationCounters ParseCounters(const std::string& line) {
  EnumerationCounters c;
  std::istringstream s(line);
  if (!(s >> c.candidates >> c.pruned_by_length >> c.pruned_by_tag >>
        c.phonemic_pass >> c.orthographic_pass)) {
    throw std::runtime_error("bad counters header '" + line + "'");
  }
  return c;
}

}  // namespace

RunReport RunPipeline(const PipelineConfig& cfg) {
  RunReport report;
  NetworkStats& stats = report.stats;
  cfg.Validate();
  RunStage(Stage::kLexicon, cfg.output_dir, [&] {
    fs::create_directories(cfg.output_dir);
    return 0;
  });
  const Checkpoints ckpt(cfg.output_dir, cfg.force);

  const Lexicon lexicon = RunStage(Stage::kLexicon, cfg.lexicon, [&] {
    Lexicon lex = LoadLexicon(cfg.lexicon);
    if (lex.empty()) {
      throw std::runtime_error("no entries");
    }
    return lex;
  });
  if (cfg.stage == Stage::kLexicon) return report;

  const std::string neighbors_key =
      "lexicon=" + FileHash(cfg.lexicon) +
      ";min_ngram=" + std::to_string(cfg.min_ngram) +
      ";neighbors=" + std::to_string(cfg.neighbors);
  const std::string neighbors_hash = Hex(Fnv1a(neighbors_key));
  const std::vector<NeighborList> neighborhoods =
      RunStage(Stage::kNeighbors, ckpt.path("neighbors.tsv"), [&] {
        const std::string name = "neighbors.tsv";
        if (ckpt.Reusable(Stage::kNeighbors, name, neighbors_hash)) {
          report.reused.push_back(name);
          auto in = ckpt.Open(name);
          return ReadNeighborhoods(in, lexicon);
        }
        const auto graph = BipartiteGraph::Build(lexicon, cfg.min_ngram);
        auto lists =
            ComputeNeighborhoods(graph, lexicon, cfg.neighbors, cfg.threads);
        ckpt.Write(name, neighbors_hash, {}, [&](std::ostream& out) {
          WriteNeighborhoods(out, lexicon, lists);
        });
        return lists;
      });
  if (cfg.stage == Stage::kNeighbors) return report;

  const std::string analogies_hash = Hex(Fnv1a(neighbors_key + ";analogies"));
  const AnalogySet analogies =
      RunStage(Stage::kAnalogies, ckpt.path("analogies.tsv"), [&] {
        const std::string name = "analogies.tsv";
        if (ckpt.Reusable(Stage::kAnalogies, name, analogies_hash)) {
          report.reused.push_back(name);
          const auto header = ReadHeader(ckpt.path(name));
          stats.counters = ParseCounters(header.at("counters"));
          auto in = ckpt.Open(name);
          return ReadAnalogies(in, lexicon);
        }
        EnumerationOptions options;
        options.max_candidates = cfg.max_candidates;
        options.threads = cfg.threads;
        EnumerationResult result =
            EnumerateAnalogies(lexicon, neighborhoods, options);
        stats.counters = result.counters;
        ckpt.Write(
            name, analogies_hash, {{"counters", CountersLine(result.counters)}},
            [&](std::ostream& out) { WriteAnalogies(out, result.analogies); });
        return std::move(result.analogies);
      });
  stats.analogies = analogies.size();
  if (cfg.stage == Stage::kAnalogies) return report;

  // An empty analogy set yields an empty network.
  std::optional<RelationGraph> graph;
  EdgeSet reliable;
  Network g0;
  RunStage(Stage::kGraph, ckpt.path("graph.tsv"), [&] {
    EdgeSet family;
    if (!analogies.empty()) {
      graph.emplace(RelationGraph::Build(analogies));
      family = FamilyCandidates(*graph);
      reliable = ReliableFamilies(family, *graph, cfg.w_threshold);
      g0 = InducedNetwork(reliable, *graph);
      stats.graph_edges = graph->weights().size();
    }
    stats.family_candidates = family.size();
    stats.reliable_families = reliable.size();
    stats.induced_series = g0.series.size();
    ckpt.Write("graph.tsv", analogies_hash, {}, [&](std::ostream& out) {
      if (graph) WriteGraph(out, *graph, family);
    });
    return 0;
  });
  if (cfg.stage == Stage::kGraph) return report;

  const std::string seed_key =
      neighbors_key + ";analogies;w=" + std::to_string(cfg.w_threshold) +
      ";cc=" + cfg.cc_threshold;
  const std::string seed_hash = Hex(Fnv1a(seed_key));
  const Network seed = RunStage(Stage::kSeed, ckpt.path("seed.tsv"), [&] {
    if (ckpt.Reusable(Stage::kSeed, "seed.tsv", seed_hash) &&
        ckpt.Reusable(Stage::kSeed, "seed.analogies.tsv", seed_hash)) {
      report.reused.push_back("seed.tsv");
      auto edges = ckpt.Open("seed.tsv");
      auto lic = ckpt.Open("seed.analogies.tsv");
      return ReadNetwork(edges, lic, lexicon);
    }
    Network net;
    if (graph) net = ExtractSeed(g0, *graph, cfg.cc_ratio());
    ckpt.Write("seed.tsv", seed_hash, {}, [&](std::ostream& out) {
      if (graph) WriteTypedEdges(out, net, *graph);
    });
    ckpt.Write("seed.analogies.tsv", seed_hash, {},
               [&](std::ostream& out) { WriteLicensing(out, lexicon, net); });
    return net;
  });
  stats.seed_families = seed.family.size();
  if (cfg.stage == Stage::kSeed) return report;

  const std::string network_hash = Hex(
      Fnv1a(seed_key + ";min_subseries=" + std::to_string(cfg.min_subseries) +
            ";from=" + std::to_string(cfg.subseries_from_step) +
            ";max_iterations=" + std::to_string(cfg.max_iterations)));
  const Network network =
      RunStage(Stage::kBootstrap, ckpt.path("network.tsv"), [&] {
        if (ckpt.Reusable(Stage::kBootstrap, "network.tsv", network_hash) &&
            ckpt.Reusable(Stage::kBootstrap, "network.analogies.tsv",
                          network_hash)) {
          report.reused.push_back("network.tsv");
          const auto header = ReadHeader(ckpt.path("network.tsv"));
          stats.bootstrap_iterations = std::stoull(header.at("iterations"));
          auto edges = ckpt.Open("network.tsv");
          auto lic = ckpt.Open("network.analogies.tsv");
          return ReadNetwork(edges, lic, lexicon);
        }
        Network merged;
        if (graph) {
          BootstrapOptions options;
          options.min_subseries = cfg.min_subseries;
          options.subseries_from_step = cfg.subseries_from_step;
          options.max_iterations = cfg.max_iterations;
          options.threads = cfg.threads;
          BootstrapResult result = Bootstrap(seed, g0, *graph, options);
          for (std::size_t i = 0; i < result.iterations.size(); ++i) {
            ckpt.Write("iteration_" + std::to_string(i) + ".tsv", network_hash,
                       {}, [&](std::ostream& out) {
                         WriteTypedEdges(out, result.iterations[i], *graph);
                       });
          }
          stats.bootstrap_iterations = result.iterations.size() - 1;
          merged = std::move(result.merged);
        }
        const std::vector<std::pair<std::string, std::string>> extra = {
            {"iterations", std::to_string(stats.bootstrap_iterations)}};
        ckpt.Write("network.tsv", network_hash, extra, [&](std::ostream& out) {
          if (graph) WriteTypedEdges(out, merged, *graph);
        });
        ckpt.Write(
            "network.analogies.tsv", network_hash, extra,
            [&](std::ostream& out) { WriteLicensing(out, lexicon, merged); });
        return merged;
      });
  if (cfg.stage == Stage::kBootstrap) return report;

  const std::vector<Filament> filaments =
      RunStage(Stage::kExport, ckpt.path("filaments.tsv"), [&] {
        auto list = NetworkFilaments(lexicon, network);
        ExportFilaments(ckpt.path("filaments.tsv"), lexicon, list);
        return list;
      });
  if (cfg.stage == Stage::kExport) return report;

  RunStage(Stage::kStats, ckpt.path("report.json"), [&] {
    const NetworkStats counted = ComputeStats(filaments);
    stats.entries = counted.entries;
    stats.filaments = counted.filaments;
    stats.serial_relations = counted.serial_relations;
    stats.series_per_filament = counted.series_per_filament;
    stats.filaments_per_entry = counted.filaments_per_entry;
    WriteFileAtomically(ckpt.path("report.json"), [&](std::ostream& out) {
      WriteReportJson(out, stats);
    });
    if (cfg.report_path) {
      WriteFileAtomically(*cfg.report_path, [&](std::ostream& out) {
        WriteReportJson(out, stats);
      });
    }
    return 0;
  });
  return report;
}

}  // namespace forge
