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

#ifndef KEYEVENT_DATES_H_
#define KEYEVENT_DATES_H_

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace keyevent {

struct CivilDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const CivilDate&) const = default;
};

// Strict "YYYY-MM-DD"; rejects impossible calendar days.
std::optional<CivilDate> parse_iso_date(std::string_view text);

std::string format_iso(const CivilDate& date);

// Days since 1970-01-01 (proleptic Gregorian).
int to_epoch_days(const CivilDate& date);
CivilDate from_epoch_days(int days);

// Explicit date expressions found in `text`, resolved to epoch days.
//
// Recognized forms (case-insensitive):
//   "Month D", "Month D, YYYY", "Mon. D"      e.g. "August 12", "Aug 12, 2019"
//   "D Month", "D Month YYYY"                e.g. "12 August 2019"
//   "YYYY-MM-DD"
//   "[on|last|next] Weekday"                  e.g. "on Monday", "last Friday"
//
// Yearless dates take the year (publication year -1, 0 or +1) that lands
// closest to `anchor_days`, preferring the past on ties. A bare or "on"/"last"
// weekday resolves to the most recent such day at or before the anchor
// ("last" is strictly before); "next" resolves to the first one after it.
std::vector<int> extract_dates(std::string_view text, int anchor_days);

}  // namespace keyevent

#endif  // KEYEVENT_DATES_H_
