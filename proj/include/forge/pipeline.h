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

#ifndef FORGE_PIPELINE_H_
#define FORGE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forge/analogy.h"
#include "forge/lexicon.h"
#include "forge/network.h"

namespace forge {

enum class Stage {
  kLexicon,
  kNeighbors,
  kAnalogies,
  kGraph,
  kSeed,
  kBootstrap,
  kExport,
  kStats,
};

const char* StageName(Stage stage);

struct PipelineConfig {
  std::filesystem::path lexicon;
  std::filesystem::path output_dir = "forge-out";
  std::uint32_t min_ngram = 3;
  std::uint32_t neighbors = 100;
  std::uint32_t w_threshold = 10;
  std::string cc_threshold = "0.66";
  std::uint32_t min_subseries = 5;
  std::uint32_t subseries_from_step = 2;
  std::uint32_t max_iterations = 50;
  std::uint64_t max_candidates = 0;
  unsigned threads = 0;
  // Last stage to run.
  Stage stage = Stage::kStats;
  // Recompute and overwrite checkpoints written under another config.
  bool force = false;
  // Extra copy of report.json.
  std::optional<std::filesystem::path> report_path;

  // Throws ConfigError.
  void Validate() const;
  Ratio cc_ratio() const;
};

// Reads "key = value" lines ('#' comments, optional double quotes around
// values). A relative lexicon or output path is taken relative to the file.
// Throws ConfigError on unknown keys or bad values.
PipelineConfig LoadConfig(const std::filesystem::path& path);
void ApplyConfigValue(PipelineConfig* cfg, const std::string& key,
                      const std::string& value);

struct NetworkStats {
  std::uint64_t entries = 0;
  std::uint64_t filaments = 0;
  std::uint64_t serial_relations = 0;
  // Two decimals, rounded half up from the exact ratio.
  std::string series_per_filament = "0.00";
  std::string filaments_per_entry = "0.00";

  EnumerationCounters counters;
  std::uint64_t analogies = 0;
  std::uint64_t graph_edges = 0;
  std::uint64_t family_candidates = 0;
  std::uint64_t reliable_families = 0;
  std::uint64_t induced_series = 0;
  std::uint64_t seed_families = 0;
  std::uint64_t bootstrap_iterations = 0;
};

// "12.00"-style rendering of num / den; "0.00" when den is 0.
std::string FormatDecimal2(std::uint64_t num, std::uint64_t den);

NetworkStats ComputeStats(const std::vector<Filament>& filaments);

// entry<TAB>pivot<TAB>members separated by single spaces; one line per
// filament, sorted by (entry, pivot).
void ExportFilaments(std::ostream& out, const Lexicon& lexicon,
                     const std::vector<Filament>& filaments);
void ExportFilaments(const std::filesystem::path& path, const Lexicon& lexicon,
                     const std::vector<Filament>& filaments);
// Throws ParseError or LookupError.
std::vector<Filament> ReadFilaments(std::istream& in, const Lexicon& lexicon);

struct RunReport {
  NetworkStats stats;
  // Stages whose checkpoint was loaded instead of recomputed.
  std::vector<std::string> reused;
};

// Runs lexicon -> neighbors -> analogies -> graph -> seed -> bootstrap ->
// export -> stats up to cfg.stage, loading checkpoints from cfg.output_dir
// when their config hash matches. Throws StageError naming the failing
// stage; a checkpoint written under another config is refused unless
// cfg.force.
RunReport RunPipeline(const PipelineConfig& cfg);

void WriteReportJson(std::ostream& out, const NetworkStats& stats);

}  // namespace forge

#endif  // FORGE_PIPELINE_H_
