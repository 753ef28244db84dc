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

#ifndef FORGE_TESTS_SUPPORT_SUPPORT_H_
#define FORGE_TESTS_SUPPORT_SUPPORT_H_

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include "forge/lexicon.h"

namespace forge::testing {

std::filesystem::path DataPath(std::string_view name);

std::string ReadFile(const std::filesystem::path& path);

// Lexicon from "form phonemes tag" triples.
Lexicon MakeLexicon(
    std::initializer_list<std::initializer_list<std::string_view>> rows);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace forge::testing

#endif  // FORGE_TESTS_SUPPORT_SUPPORT_H_
