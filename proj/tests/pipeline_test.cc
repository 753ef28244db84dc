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

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "forge/errors.h"
#include "forge/pipeline.h"
#include "support/support.h"

namespace forge {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;
using testing::ReadFile;
using testing::TempDir;

PipelineConfig ToyConfig(const fs::path& out) {
  PipelineConfig cfg = LoadConfig(DataPath("toy.conf"));
  cfg.output_dir = out;
  cfg.threads = 2;
  return cfg;
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = ReadFile(entry.path());
  }
  return files;
}

TEST(ConfigTest, LoadsFlatKeyValueFile) {
  const PipelineConfig cfg = LoadConfig(DataPath("toy.conf"));
  EXPECT_EQ(cfg.lexicon, DataPath("toy_lexicon.tsv"));
  EXPECT_EQ(cfg.w_threshold, 3u);
  EXPECT_EQ(cfg.min_subseries, 3u);
  EXPECT_EQ(cfg.cc_ratio(), (Ratio{66, 100}));
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(ConfigTest, RejectsBadValues) {
  TempDir dir("config");
  std::ofstream(dir / "bad.conf") << "lexicon = x.tsv\nfoo = 1\n";
  EXPECT_THROW(LoadConfig(dir / "bad.conf"), ConfigError);
  std::ofstream(dir / "bad2.conf") << "neighbors = many\n";
  EXPECT_THROW(LoadConfig(dir / "bad2.conf"), ConfigError);
  EXPECT_THROW(LoadConfig(dir / "absent.conf"), ConfigError);

  PipelineConfig cfg;
  cfg.lexicon = "x.tsv";
  EXPECT_NO_THROW(cfg.Validate());
  for (const char* cc : {"0", "1.5", "3/2", "abc"}) {
    PipelineConfig c = cfg;
    c.cc_threshold = cc;
    EXPECT_THROW(c.Validate(), ConfigError) << cc;
  }
  PipelineConfig zero = cfg;
  zero.w_threshold = 0;
  EXPECT_THROW(zero.Validate(), ConfigError);
  PipelineConfig none;
  EXPECT_THROW(none.Validate(), ConfigError);
}

TEST(StatsTest, FormatDecimal2RoundsHalfUp) {
  EXPECT_EQ(FormatDecimal2(7, 1), "7.00");
  EXPECT_EQ(FormatDecimal2(2, 3), "0.67");
  EXPECT_EQ(FormatDecimal2(1, 8), "0.13");
  EXPECT_EQ(FormatDecimal2(1160098, 96107), "12.07");
  EXPECT_EQ(FormatDecimal2(5, 0), "0.00");
}

TEST(StatsTest, SingleFilament) {
  Filament f{WordId{0}, WordId{1}, {}};
  for (std::uint32_t i = 2; i < 9; ++i) f.sub_series.push_back(WordId{i});
  const NetworkStats s = ComputeStats({f});
  EXPECT_EQ(s.entries, 1u);
  EXPECT_EQ(s.filaments, 1u);
  EXPECT_EQ(s.serial_relations, 7u);
  EXPECT_EQ(s.series_per_filament, "7.00");
  EXPECT_EQ(s.filaments_per_entry, "1.00");
}

TEST(ExportTest, EmptyNetworkGivesEmptyFile) {
  TempDir dir("export");
  const Lexicon lex = LoadLexicon(DataPath("toy_lexicon.tsv"));
  ExportFilaments(dir / "f.tsv", lex, {});
  EXPECT_EQ(ReadFile(dir / "f.tsv"), "");
}

TEST(ExportTest, RoundTrip) {
  const Lexicon lex = LoadLexicon(DataPath("toy_lexicon.tsv"));
  std::ifstream golden(DataPath("toy_filaments.golden.tsv"));
  const auto filaments = ReadFilaments(golden, lex);
  ASSERT_FALSE(filaments.empty());
  std::ostringstream out;
  ExportFilaments(out, lex, filaments);
  EXPECT_EQ(out.str(), ReadFile(DataPath("toy_filaments.golden.tsv")));
  std::istringstream in(out.str());
  EXPECT_EQ(ReadFilaments(in, lex), filaments);
  std::istringstream bad("modifier\tmodification\n");
  EXPECT_THROW(ReadFilaments(bad, lex), ParseError);
}

TEST(PipelineTest, EmptyLexiconFailsAtLexiconStage) {
  TempDir dir("empty");
  std::ofstream(dir / "empty.tsv") << "# nothing\n";
  PipelineConfig cfg;
  cfg.lexicon = dir / "empty.tsv";
  cfg.output_dir = dir / "out";
  try {
    RunPipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "lexicon");
  }
}

TEST(PipelineTest, MalformedLexiconNamesTheInput) {
  TempDir dir("malformed");
  std::ofstream(dir / "bad.tsv") << "constant\tkkonssttan\tNcms\nx\ty\n";
  PipelineConfig cfg;
  cfg.lexicon = dir / "bad.tsv";
  cfg.output_dir = dir / "out";
  try {
    RunPipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "lexicon");
    EXPECT_NE(std::string(e.what()).find("bad.tsv"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(PipelineTest, ToyExportMatchesGolden) {
  TempDir dir("toy");
  const RunReport report = RunPipeline(ToyConfig(dir.path()));
  EXPECT_EQ(ReadFile(dir / "filaments.tsv"),
            ReadFile(DataPath("toy_filaments.golden.tsv")));
  EXPECT_TRUE(report.reused.empty());
  for (const char* name :
       {"neighbors.tsv", "analogies.tsv", "graph.tsv", "seed.tsv",
        "seed.analogies.tsv", "iteration_0.tsv", "network.tsv",
        "network.analogies.tsv", "filaments.tsv", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
}

TEST(PipelineTest, StatsMatchARecountOfTheExport) {
  TempDir dir("stats");
  const RunReport report = RunPipeline(ToyConfig(dir.path()));
  std::istringstream in(ReadFile(dir / "filaments.tsv"));
  std::string line;
  std::set<std::string> entries;
  std::uint64_t filaments = 0, members = 0;
  while (std::getline(in, line)) {
    ++filaments;
    entries.insert(line.substr(0, line.find('\t')));
    const std::string list = line.substr(line.rfind('\t') + 1);
    members += 1 + std::count(list.begin(), list.end(), ' ');
  }
  const NetworkStats& s = report.stats;
  EXPECT_EQ(s.filaments, filaments);
  EXPECT_EQ(s.entries, entries.size());
  EXPECT_EQ(s.serial_relations, members);
  EXPECT_EQ(s.series_per_filament, FormatDecimal2(members, filaments));
  EXPECT_EQ(s.filaments_per_entry, FormatDecimal2(filaments, entries.size()));
  EXPECT_NE(ReadFile(dir / "report.json").find("\"serial_relations\": " +
                                                std::to_string(members)),
            std::string::npos);
}

TEST(PipelineTest, RerunIsByteIdenticalAndReusesCheckpoints) {
  TempDir dir("rerun");
  const PipelineConfig cfg = ToyConfig(dir.path());
  const RunReport first = RunPipeline(cfg);
  const auto before = Snapshot(dir.path());
  const RunReport second = RunPipeline(cfg);
  EXPECT_EQ(Snapshot(dir.path()), before);
  EXPECT_EQ(second.reused,
            (std::vector<std::string>{"neighbors.tsv", "analogies.tsv",
                                      "seed.tsv", "network.tsv"}));
  EXPECT_EQ(second.stats.counters, first.stats.counters);
  EXPECT_EQ(second.stats.bootstrap_iterations,
            first.stats.bootstrap_iterations);

  TempDir fresh("rerun-fresh");
  RunPipeline(ToyConfig(fresh.path()));
  EXPECT_EQ(Snapshot(fresh.path()), before);
}

TEST(PipelineTest, StagedRunEqualsEndToEnd) {
  TempDir staged("staged");
  PipelineConfig cfg = ToyConfig(staged.path());
  for (Stage stage : {Stage::kLexicon, Stage::kNeighbors, Stage::kAnalogies,
                      Stage::kGraph, Stage::kSeed, Stage::kBootstrap,
                      Stage::kExport, Stage::kStats}) {
    cfg.stage = stage;
    RunPipeline(cfg);
  }
  TempDir whole("whole");
  RunPipeline(ToyConfig(whole.path()));
  EXPECT_EQ(Snapshot(staged.path()), Snapshot(whole.path()));
}

TEST(PipelineTest, StaleCheckpointIsRefusedUnlessForced) {
  TempDir dir("stale");
  PipelineConfig cfg = ToyConfig(dir.path());
  RunPipeline(cfg);
  cfg.w_threshold = 4;
  try {
    RunPipeline(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "seed");
  }
  cfg.force = true;
  const RunReport forced = RunPipeline(cfg);
  EXPECT_EQ(forced.reused,
            (std::vector<std::string>{"neighbors.tsv", "analogies.tsv"}));

  PipelineConfig other = ToyConfig(dir.path());
  other.neighbors = 5;
  try {
    RunPipeline(other);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "neighbors");
  }
}

TEST(PipelineTest, NoAnalogiesGivesAnEmptyExport) {
  TempDir dir("none");
  std::ofstream(dir / "lex.tsv") << "constant\tkkonssttan\tNcms\n"
                                    "restant\trraissttan\tNcms\n";
  PipelineConfig cfg;
  cfg.lexicon = dir / "lex.tsv";
  cfg.output_dir = dir / "out";
  const RunReport report = RunPipeline(cfg);
  EXPECT_EQ(ReadFile(dir / "out" / "filaments.tsv"), "");
  EXPECT_EQ(report.stats.filaments, 0u);
  EXPECT_EQ(report.stats.analogies, 0u);
  EXPECT_EQ(report.stats.series_per_filament, "0.00");
}

TEST(PipelineTest, GazouillardeFilament) {
  TempDir dir("gz");
  PipelineConfig cfg = LoadConfig(DataPath("gazouillarde.conf"));
  cfg.output_dir = dir.path();
  RunPipeline(cfg);
  EXPECT_NE(ReadFile(dir / "filaments.tsv")
                .find("gazouillarde\tgazouiller\tcitrouillarde douillarde "
                      "grenouillarde rouillarde souillarde vadrouillarde "
                      "vasouillarde\n"),
            std::string::npos);
}

}  // namespace
}  // namespace forge
