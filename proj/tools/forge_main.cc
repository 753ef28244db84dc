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

// forge: builds a filament network from a tagged, phonetized lexicon.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forge/errors.h"
#include "forge/pipeline.h"

namespace {

struct Flags {
  std::string config;
  std::string lexicon;
  std::string out;
  std::string report;
  std::string cc_threshold;
  std::optional<std::uint32_t> min_ngram, neighbors, w_threshold, min_subseries,
      subseries_from_step, max_iterations;
  std::optional<std::uint64_t> max_candidates;
  std::optional<unsigned> threads;
  bool force = false;
};

void AddFlags(CLI::App* cmd, Flags* f) {
  cmd->add_option("--config", f->config, "Flat key = value config file");
  cmd->add_option("--lexicon", f->lexicon, "Lexicon TSV");
  cmd->add_option("--out", f->out, "Output directory");
  cmd->add_option("--report", f->report, "Extra copy of report.json");
  cmd->add_option("--min-ngram", f->min_ngram, "Shortest feature window");
  cmd->add_option("--neighbors", f->neighbors, "Neighborhood size k");
  cmd->add_option("--max-candidates", f->max_candidates,
                  "Candidate cap for analogy enumeration (0: none)");
  cmd->add_option("--w-threshold", f->w_threshold, "Family weight threshold");
  cmd->add_option("--cc-threshold", f->cc_threshold,
                  "Clustering threshold (decimal or a/b)");
  cmd->add_option("--min-subseries", f->min_subseries,
                  "Smallest sub-series kept during bootstrap");
  cmd->add_option("--subseries-from-step", f->subseries_from_step,
                  "First bootstrap step applying --min-subseries");
  cmd->add_option("--max-iterations", f->max_iterations,
                  "Bootstrap iteration cap");
  cmd->add_option("--threads", f->threads, "Worker threads (0: all cores)");
  cmd->add_flag("--force", f->force,
                "Overwrite checkpoints written under another config");
}

forge::PipelineConfig BuildConfig(const Flags& f, forge::Stage stage) {
  forge::PipelineConfig cfg;
  if (!f.config.empty()) cfg = forge::LoadConfig(f.config);
  if (!f.lexicon.empty()) cfg.lexicon = f.lexicon;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (!f.report.empty()) cfg.report_path = f.report;
  if (!f.cc_threshold.empty()) cfg.cc_threshold = f.cc_threshold;
  if (f.min_ngram) cfg.min_ngram = *f.min_ngram;
  if (f.neighbors) cfg.neighbors = *f.neighbors;
  if (f.w_threshold) cfg.w_threshold = *f.w_threshold;
  if (f.min_subseries) cfg.min_subseries = *f.min_subseries;
  if (f.subseries_from_step) cfg.subseries_from_step = *f.subseries_from_step;
  if (f.max_iterations) cfg.max_iterations = *f.max_iterations;
  if (f.max_candidates) cfg.max_candidates = *f.max_candidates;
  if (f.threads) cfg.threads = *f.threads;
  cfg.force = f.force;
  cfg.stage = stage;
  return cfg;
}

void PrintSummary(const forge::RunReport& report, forge::Stage stage) {
  const forge::NetworkStats& s = report.stats;
  for (const std::string& name : report.reused) {
    std::cerr << "reused checkpoint " << name << '\n';
  }
  if (stage >= forge::Stage::kAnalogies) {
    std::cout << "analogies\t" << s.analogies << '\n';
  }
  if (stage >= forge::Stage::kSeed) {
    std::cout << "seed_families\t" << s.seed_families << '\n';
  }
  if (stage >= forge::Stage::kBootstrap) {
    std::cout << "bootstrap_iterations\t" << s.bootstrap_iterations << '\n';
  }
  if (stage >= forge::Stage::kStats) {
    std::cout << "entries\t" << s.entries << '\n'
              << "filaments\t" << s.filaments << '\n'
              << "serial_relations\t" << s.serial_relations << '\n'
              << "series_per_filament\t" << s.series_per_filament << '\n'
              << "filaments_per_entry\t" << s.filaments_per_entry << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builds a morphological filament network from a lexicon"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    forge::Stage stage;
  };
  const std::vector<Command> commands = {
      {"run", "Run every stage", forge::Stage::kStats},
      {"neighbors", "Compute neighborhoods", forge::Stage::kNeighbors},
      {"analogies", "Enumerate analogies", forge::Stage::kAnalogies},
      {"seed", "Build the relation graph and the seed network",
       forge::Stage::kSeed},
      {"bootstrap", "Bootstrap the network to its fixed point",
       forge::Stage::kBootstrap},
      {"export", "Write filaments.tsv", forge::Stage::kExport},
      {"stats", "Write report.json", forge::Stage::kStats},
  };
  Flags flags;
  std::vector<std::pair<CLI::App*, forge::Stage>> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    AddFlags(sub, &flags);
    subs.emplace_back(sub, c.stage);
  }
  CLI11_PARSE(app, argc, argv);

  forge::Stage stage = forge::Stage::kStats;
  for (const auto& [sub, s] : subs) {
    if (sub->parsed()) stage = s;
  }
  try {
    const forge::PipelineConfig cfg = BuildConfig(flags, stage);
    const forge::RunReport report = forge::RunPipeline(cfg);
    PrintSummary(report, stage);
  } catch (const forge::StageError& e) {
    std::cerr << "forge: " << e.what() << '\n';
    return 1;
  } catch (const forge::ConfigError& e) {
    std::cerr << "forge: config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
