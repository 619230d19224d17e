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

#include <vector>

#include "doctest.h"

namespace keyevent {
namespace {

int ep(const char* iso) { return to_epoch_days(*parse_iso_date(iso)); }

TEST_CASE("parse_iso_date") {
  CHECK(parse_iso_date("2024-02-29").has_value());
  CHECK_FALSE(parse_iso_date("2023-02-29").has_value());
  CHECK_FALSE(parse_iso_date("2024-13-01").has_value());
  CHECK_FALSE(parse_iso_date("2024-1-01").has_value());
  CHECK_FALSE(parse_iso_date("2024-01-01x").has_value());
  CHECK(format_iso(*parse_iso_date("2019-08-12")) == "2019-08-12");
}

TEST_CASE("epoch day conversion") {
  CHECK(to_epoch_days({1970, 1, 1}) == 0);
  CHECK(to_epoch_days({2000, 3, 1}) == 11017);
  CHECK(to_epoch_days({1969, 12, 31}) == -1);
  for (int d = -1000; d < 30000; d += 7) {
    CHECK(to_epoch_days(from_epoch_days(d)) == d);
  }
}

TEST_CASE("extract_dates month forms") {
  const int anchor = ep("2019-08-14");
  CHECK(extract_dates("Protests on August 12 turned violent", anchor) ==
        std::vector<int>{ep("2019-08-12")});
  CHECK(extract_dates("Aug. 12, 2018 was quiet", anchor) ==
        std::vector<int>{ep("2018-08-12")});
  CHECK(extract_dates("by 12 August 2019", anchor) ==
        std::vector<int>{ep("2019-08-12")});
  CHECK(extract_dates("filed 2019-07-01", anchor) ==
        std::vector<int>{ep("2019-07-01")});
  CHECK(extract_dates("nothing here, may be", anchor).empty());
}

TEST_CASE("extract_dates picks the closest year") {
  CHECK(extract_dates("since December 30", ep("2020-01-02")) ==
        std::vector<int>{ep("2019-12-30")});
  CHECK(extract_dates("until January 3", ep("2019-12-30")) ==
        std::vector<int>{ep("2020-01-03")});
}

TEST_CASE("extract_dates weekdays") {
  const int wed = ep("2019-08-14");
  CHECK(extract_dates("on Monday", wed) == std::vector<int>{ep("2019-08-12")});
  CHECK(extract_dates("Wednesday", wed) == std::vector<int>{wed});
  CHECK(extract_dates("last Wednesday", wed) ==
        std::vector<int>{ep("2019-08-07")});
  CHECK(extract_dates("next Monday", wed) == std::vector<int>{ep("2019-08-19")});
}

}  // namespace
}  // namespace keyevent
