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

#include "support/support.h"

#include <atomic>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace forge::testing {

std::filesystem::path DataPath(std::string_view name) {
  return std::filesystem::path(FORGE_TEST_DATA_DIR) / name;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Lexicon MakeLexicon(
    std::initializer_list<std::initializer_list<std::string_view>> rows) {
  std::ostringstream tsv;
  for (const auto& row : rows) {
    const auto* it = row.begin();
    tsv << it[0] << '\t' << it[1] << '\t' << it[2] << '\n';
  }
  std::istringstream in(tsv.str());
  return ParseLexicon(in);
}

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("forge-" + std::string(tag) + "-" + std::to_string(::getpid()) +
           "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace forge::testing
