#include "aerolog/time_util.hpp"

#include <cinttypes>
#include <cstdio>

namespace aerolog {
namespace {

// Civil <-> days conversions, valid far beyond any plausible telemetry range.
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y += (m <= 2);
}

int days_in_month(std::int64_t y, int m) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[m - 1];
}

}  // namespace

std::string format_iso8601(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  int m, d;
  civil_from_days(days, y, m, d);
  const int hh = static_cast<int>(rem / 3600);
  const int mm = static_cast<int>((rem / 60) % 60);
  const int ss = static_cast<int>(rem % 60);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04" PRId64 "-%02d-%02dT%02d:%02d:%02dZ", y,
                m, d, hh, mm, ss);
  return buf;
}

std::optional<std::int64_t> parse_iso8601(const std::string& text) {
  if (text.size() != 20) return std::nullopt;
  long long y;
  int mo, d, hh, mm, ss;
  char tsep, zsep;
  int consumed = 0;
  const int n =
      std::sscanf(text.c_str(), "%4lld-%2d-%2d%c%2d:%2d:%2d%c%n", &y, &mo, &d,
                  &tsep, &hh, &mm, &ss, &zsep, &consumed);
  if (n != 8 || consumed != 20 || tsep != 'T' || zsep != 'Z') {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) {
    return std::nullopt;
  }
  if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 59) {
    return std::nullopt;
  }
  return days_from_civil(y, mo, d) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::optional<std::int64_t> parse_instant(const std::string& text) {
  if (auto iso = parse_iso8601(text)) return iso;
  if (text.empty()) return std::nullopt;
  std::size_t i = text[0] == '-' ? 1 : 0;
  if (i == text.size()) return std::nullopt;
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') return std::nullopt;
  }
  try {
    return std::stoll(text);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace aerolog
