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

#include "forge/symbols.h"

#include <stdexcept>

namespace forge {
namespace {

// Returns the number of bytes consumed, or 0 if the sequence at `pos` is
// malformed.
std::size_t DecodeOne(std::string_view text, std::size_t pos, Symbol* out) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  std::size_t len = 0;
  Symbol cp = 0;
  Symbol min = 0;
  if (lead < 0x80) {
    *out = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
    min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
    min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
    min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char cont = byte(pos + i);
    if ((cont & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (cont & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  *out = cp;
  return len;
}

}  // namespace

SymbolString DecodeUtf8(std::string_view text) {
  SymbolString out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    Symbol cp = 0;
    const std::size_t used = DecodeOne(text, pos, &cp);
    if (used == 0) {
      throw std::invalid_argument("invalid UTF-8 at byte " +
                                  std::to_string(pos));
    }
    out.push_back(cp);
    pos += used;
  }
  return out;
}

bool IsValidUtf8(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    Symbol cp = 0;
    const std::size_t used = DecodeOne(text, pos, &cp);
    if (used == 0) return false;
    pos += used;
  }
  return true;
}

SymbolString BytesToSymbols(std::string_view text) {
  SymbolString out;
  out.reserve(text.size());
  for (const char c : text) out.push_back(static_cast<unsigned char>(c));
  return out;
}

}  // namespace forge
