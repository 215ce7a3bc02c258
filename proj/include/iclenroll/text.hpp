// Copyright 2026 The icl-enroll Authors
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

#ifndef ICLENROLL_TEXT_HPP_
#define ICLENROLL_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace iclenroll {

// Scoring-side text normalization: lowercase, strip punctuation except
// intra-word apostrophes, collapse whitespace, split on spaces.
// Empty input yields an empty token list.
std::vector<std::string> normalize_text(std::string_view text);

// Tokens rejoined with single spaces; the canonical phrase form used for
// phrase-disjoint splits and the built-in embedder.
std::string normalize_joined(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace iclenroll

#endif  // ICLENROLL_TEXT_HPP_
