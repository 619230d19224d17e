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

// Small helpers shared by the TSV readers and writers.

#ifndef KEYEVENT_FORMAT_H_
#define KEYEVENT_FORMAT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace keyevent {

// Shortest representation that parses back to the identical double.
std::string format_double(double value);

// Fixed-point with `digits` decimals, for human-readable reports.
std::string format_fixed(double value, int digits = 6);

std::vector<std::string> split_tabs(std::string_view line);

// Strict numeric parsing; `what` and `line` end up in the DataError message.
double parse_double(std::string_view text, std::string_view what,
                    std::size_t line);
std::size_t parse_size(std::string_view text, std::string_view what,
                       std::size_t line);
long long parse_int(std::string_view text, std::string_view what,
                    std::size_t line);

}  // namespace keyevent

#endif  // KEYEVENT_FORMAT_H_
