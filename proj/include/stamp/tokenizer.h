// Copyright 2026 The Stamp Authors
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

#ifndef STAMP_TOKENIZER_H_
#define STAMP_TOKENIZER_H_

#include <span>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"

namespace stamp {

// A token and its byte range [begin, end) in the source text.
struct Token {
  std::string text;
  size_t begin = 0;
  size_t end = 0;

  bool operator==(const Token&) const = default;
};

// Splits on ASCII whitespace, then peels leading and trailing ASCII
// punctuation off each piece as one-character tokens. Interior punctuation
// stays, so "123-45-6789" and "don't" are single tokens.
std::vector<Token> Tokenize(absl::string_view text);

std::vector<std::string> TokenTexts(std::span<const Token> tokens);

// Rebuilds `original` with token i replaced by replacements[i]. Text between
// tokens (whitespace) is copied through unchanged.
std::string Detokenize(absl::string_view original, std::span<const Token> tokens,
                       std::span<const std::string> replacements);

bool IsValidUtf8(absl::string_view text);

}  // namespace stamp

#endif  // STAMP_TOKENIZER_H_
