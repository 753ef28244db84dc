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

#ifndef FORGE_SYMBOLS_H_
#define FORGE_SYMBOLS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// A single comparison unit for the analogy machinery: a Unicode code point
// for written forms, or a packed two-character code for phonemes.
using Symbol = std::uint32_t;
using SymbolString = std::vector<Symbol>;
using SymbolSpan = std::span<const Symbol>;

// Decodes UTF-8 into code points. Throws std::invalid_argument on malformed
// input (overlong forms, surrogates, truncated sequences).
SymbolString DecodeUtf8(std::string_view text);

bool IsValidUtf8(std::string_view text);

// Treats every byte as one symbol. Handy for ASCII test strings.
SymbolString BytesToSymbols(std::string_view text);

}  // namespace forge

#endif  // FORGE_SYMBOLS_H_
