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

#include "stamp/tokenizer.h"

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace stamp {
namespace {

bool IsPunct(char c) {
  return absl::ascii_ispunct(static_cast<unsigned char>(c));
}

}  // namespace

std::vector<Token> Tokenize(absl::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (absl::ascii_isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    size_t end = i;
    while (end < text.size() &&
           !absl::ascii_isspace(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    size_t core_begin = i;
    size_t core_end = end;
    while (core_begin < core_end && IsPunct(text[core_begin])) ++core_begin;
    while (core_end > core_begin && IsPunct(text[core_end - 1])) --core_end;

    for (size_t p = i; p < core_begin; ++p) {
      tokens.push_back(Token{std::string(1, text[p]), p, p + 1});
    }
    if (core_begin < core_end) {
      tokens.push_back(Token{
          std::string(text.substr(core_begin, core_end - core_begin)),
          core_begin, core_end});
    }
    for (size_t p = core_end; p < end; ++p) {
      tokens.push_back(Token{std::string(1, text[p]), p, p + 1});
    }
    i = end;
  }
  return tokens;
}

std::vector<std::string> TokenTexts(std::span<const Token> tokens) {
  std::vector<std::string> texts;
  texts.reserve(tokens.size());
  for (const Token& token : tokens) texts.push_back(token.text);
  return texts;
}

std::string Detokenize(absl::string_view original, std::span<const Token> tokens,
                       std::span<const std::string> replacements) {
  std::string out;
  out.reserve(original.size());
  size_t cursor = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    absl::StrAppend(&out, original.substr(cursor, tokens[i].begin - cursor),
                    i < replacements.size() ? replacements[i] : tokens[i].text);
    cursor = tokens[i].end;
  }
  absl::StrAppend(&out, original.substr(cursor));
  return out;
}

bool IsValidUtf8(absl::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    size_t extra = 0;
    uint32_t code = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      code = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      code = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      code = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      const unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      code = (code << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and values past U+10FFFF.
    if ((extra == 1 && code < 0x80) || (extra == 2 && code < 0x800) ||
        (extra == 3 && code < 0x10000) || code > 0x10FFFF ||
        (code >= 0xD800 && code <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

}  // namespace stamp
