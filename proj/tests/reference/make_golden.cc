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

// Prints the reference filament export for a lexicon.
// Usage: make_golden <lexicon> <w> <cc_num> <cc_den> <min_subseries>

#include <cstdlib>
#include <iostream>

#include "forge/lexicon.h"
#include "reference/reference.h"

int main(int argc, char** argv) {
  if (argc != 6) {
    std::cerr << "usage: make_golden <lexicon> <w> <cc_num> <cc_den> "
                 "<min_subseries>\n";
    return 2;
  }
  const forge::Lexicon lexicon = forge::LoadLexicon(argv[1]);
  forge::testing::ReferenceOptions options;
  options.w_threshold = static_cast<std::uint32_t>(std::atoi(argv[2]));
  options.cc_num = std::strtoull(argv[3], nullptr, 10);
  options.cc_den = std::strtoull(argv[4], nullptr, 10);
  options.min_subseries = static_cast<std::uint32_t>(std::atoi(argv[5]));
  const auto run = forge::testing::ReferenceFilaments(lexicon, options);
  std::cerr << run.analogies.size() << " analogies, " << run.iterations
            << " growth steps\n";
  std::cout << run.filaments;
  return 0;
}
