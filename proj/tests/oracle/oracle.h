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

#ifndef FORGE_TESTS_ORACLE_ORACLE_H_
#define FORGE_TESTS_ORACLE_ORACLE_H_

#include <cstddef>
#include <stdexcept>

#include "forge/symbols.h"

namespace forge::testing {

class OracleRefusal : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kOracleMaxSymbols = 40;

// Complete test for a:b::c:d. True iff the strings split into the same
// number of factors with, for every i, (a_i = c_i and b_i = d_i) or
// (a_i = b_i and c_i = d_i). Factors may be empty.
//
// Decided by reachability in the four-dimensional position lattice: a step
// consumes one equal symbol from a and c, from b and d, from a and b, or from
// c and d. Refuses inputs longer than `max_symbols` in total.
bool OracleAnalogy(SymbolSpan a, SymbolSpan b, SymbolSpan c, SymbolSpan d,
                   std::size_t max_symbols = kOracleMaxSymbols);

}  // namespace forge::testing

#endif  // FORGE_TESTS_ORACLE_ORACLE_H_
