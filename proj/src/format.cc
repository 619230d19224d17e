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

#include "keyevent/format.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "keyevent/error.h"

namespace keyevent {

std::string format_double(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, r.ptr);
}

std::string format_fixed(double value, int digits) {
  if (value == 0.0) value = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

namespace {

[[noreturn]] void bad_number(std::string_view text, std::string_view what,
                             std::size_t line) {
  throw DataError("line " + std::to_string(line) + ": bad " + std::string(what) +
                  " '" + std::string(text) + "'");
}

}  // namespace

double parse_double(std::string_view text, std::string_view what,
                    std::size_t line) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    bad_number(text, what, line);
  }
  return v;
}

std::size_t parse_size(std::string_view text, std::string_view what,
                       std::size_t line) {
  std::size_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
    bad_number(text, what, line);
  }
  return v;
}

long long parse_int(std::string_view text, std::string_view what,
                    std::size_t line) {
  long long v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
    bad_number(text, what, line);
  }
  return v;
}

}  // namespace keyevent
