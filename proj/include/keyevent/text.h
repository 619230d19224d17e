// Copyright 2026 The keyevent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KEYEVENT_TEXT_H_
#define KEYEVENT_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace keyevent {

using Tokens = std::vector<std::string>;

// Lowercases and splits UTF-8 text on every non-alphanumeric code point.
// Code points outside ASCII count as alphanumeric unless they fall in a
// punctuation, symbol or space block.
Tokens tokenize(std::string_view text);

// Splits on '.', '?' or '!' followed by whitespace (or end of text). The
// returned sentences are trimmed and never empty.
std::vector<std::string> split_sentences(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

// Canonical phrase form: tokenized and joined with single spaces.
std::string normalize_phrase(std::string_view phrase);

}  // namespace keyevent

#endif  // KEYEVENT_TEXT_H_
