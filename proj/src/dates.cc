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

#include "keyevent/dates.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <regex>

namespace keyevent {
namespace {

namespace chr = std::chrono;

const std::string kMonth =
    "(jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|"
    "aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|"
    "dec(?:ember)?)";

const std::regex& month_day_re() {
  static const std::regex re("\\b" + kMonth +
                             "\\.?\\s+(\\d{1,2})(?:st|nd|rd|th)?\\b"
                             "(?:,?\\s+(\\d{4})\\b)?");
  return re;
}

const std::regex& day_month_re() {
  static const std::regex re("\\b(\\d{1,2})(?:st|nd|rd|th)?\\s+(?:of\\s+)?" +
                             kMonth + "\\b\\.?(?:,?\\s+(\\d{4})\\b)?");
  return re;
}

const std::regex& iso_re() {
  static const std::regex re("\\b(\\d{4})-(\\d{2})-(\\d{2})\\b");
  return re;
}

const std::regex& weekday_re() {
  static const std::regex re(
      "\\b(?:(on|last|next)\\s+)?"
      "(sunday|monday|tuesday|wednesday|thursday|friday|saturday)\\b");
  return re;
}

unsigned month_number(const std::string& name) {
  static const std::array<const char*, 12> prefixes = {
      "jan", "feb", "mar", "apr", "may", "jun",
      "jul", "aug", "sep", "oct", "nov", "dec"};
  for (unsigned i = 0; i < prefixes.size(); ++i) {
    if (name.compare(0, 3, prefixes[i]) == 0) return i + 1;
  }
  return 0;
}

unsigned weekday_number(const std::string& name) {
  static const std::array<const char*, 7> names = {
      "sunday", "monday", "tuesday", "wednesday",
      "thursday", "friday", "saturday"};
  for (unsigned i = 0; i < names.size(); ++i) {
    if (name == names[i]) return i;
  }
  return 0;
}

int to_int(const std::string& s) { return std::atoi(s.c_str()); }

std::optional<int> valid_days(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month},
                                chr::day{day}};
  if (!ymd.ok()) return std::nullopt;
  return static_cast<int>(chr::sys_days{ymd}.time_since_epoch().count());
}

// Closest year to the anchor for a yearless month/day.
std::optional<int> resolve_yearless(unsigned month, unsigned day, int anchor) {
  const int year = from_epoch_days(anchor).year;
  std::optional<int> best;
  for (int y : {year - 1, year, year + 1}) {
    const auto d = valid_days(y, month, day);
    if (!d) continue;
    if (!best) {
      best = d;
      continue;
    }
    const int gap = std::abs(*d - anchor);
    const int best_gap = std::abs(*best - anchor);
    if (gap < best_gap) best = d;
  }
  return best;
}

}  // namespace

std::optional<CivilDate> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  int year = 0;
  unsigned month = 0, day = 0;
  auto parse = [](std::string_view s, auto& out) {
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
  };
  if (!parse(text.substr(0, 4), year) || !parse(text.substr(5, 2), month) ||
      !parse(text.substr(8, 2), day)) {
    return std::nullopt;
  }
  if (!valid_days(year, month, day)) return std::nullopt;
  return CivilDate{year, month, day};
}

std::string format_iso(const CivilDate& date) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", date.year, date.month,
                date.day);
  return buf;
}

int to_epoch_days(const CivilDate& date) {
  const chr::year_month_day ymd{chr::year{date.year}, chr::month{date.month},
                                chr::day{date.day}};
  return static_cast<int>(chr::sys_days{ymd}.time_since_epoch().count());
}

CivilDate from_epoch_days(int days) {
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  return CivilDate{static_cast<int>(ymd.year()),
                   static_cast<unsigned>(ymd.month()),
                   static_cast<unsigned>(ymd.day())};
}

std::vector<int> extract_dates(std::string_view text, int anchor_days) {
  std::string lower(text);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  std::vector<int> found;

  for (std::sregex_iterator it(lower.begin(), lower.end(), month_day_re()), end;
       it != end; ++it) {
    const auto& m = *it;
    const unsigned month = month_number(m[1].str());
    const auto day = static_cast<unsigned>(to_int(m[2].str()));
    const auto d = m[3].matched ? valid_days(to_int(m[3].str()), month, day)
                                : resolve_yearless(month, day, anchor_days);
    if (d) found.push_back(*d);
  }
  for (std::sregex_iterator it(lower.begin(), lower.end(), day_month_re()), end;
       it != end; ++it) {
    const auto& m = *it;
    const auto day = static_cast<unsigned>(to_int(m[1].str()));
    const unsigned month = month_number(m[2].str());
    const auto d = m[3].matched ? valid_days(to_int(m[3].str()), month, day)
                                : resolve_yearless(month, day, anchor_days);
    if (d) found.push_back(*d);
  }
  for (std::sregex_iterator it(lower.begin(), lower.end(), iso_re()), end;
       it != end; ++it) {
    const auto& m = *it;
    const auto d = valid_days(to_int(m[1].str()),
                              static_cast<unsigned>(to_int(m[2].str())),
                              static_cast<unsigned>(to_int(m[3].str())));
    if (d) found.push_back(*d);
  }
  const auto anchor_weekday =
      chr::weekday{chr::sys_days{chr::days{anchor_days}}}.c_encoding();
  for (std::sregex_iterator it(lower.begin(), lower.end(), weekday_re()), end;
       it != end; ++it) {
    const auto& m = *it;
    const std::string modifier = m[1].matched ? m[1].str() : "";
    const int target = static_cast<int>(weekday_number(m[2].str()));
    int back = (static_cast<int>(anchor_weekday) - target + 7) % 7;
    if (modifier == "next") {
      const int forward = (target - static_cast<int>(anchor_weekday) + 7) % 7;
      found.push_back(anchor_days + (forward == 0 ? 7 : forward));
      continue;
    }
    if (modifier == "last" && back == 0) back = 7;
    found.push_back(anchor_days - back);
  }

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

}  // namespace keyevent
