#include "topkbench/types.hpp"

#include <chrono>
#include <cstdio>

namespace topkbench {

std::string to_string(Gender g) {
    return g == Gender::Male ? "male" : "female";
}

Gender gender_from_string(const std::string& s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw std::invalid_argument("unknown gender: \"" + s + "\"");
}

TimeParts time_parts(Timestamp ts) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{ts}};
    const auto dp = floor<days>(tp);
    const year_month_day ymd{dp};
    const hh_mm_ss<seconds> tod{tp - dp};
    TimeParts p;
    p.year = static_cast<int>(ymd.year());
    p.month = static_cast<unsigned>(ymd.month());
    p.day = static_cast<unsigned>(ymd.day());
    p.hour = static_cast<unsigned>(tod.hours().count());
    p.minute = static_cast<unsigned>(tod.minutes().count());
    p.second = static_cast<unsigned>(tod.seconds().count());
    return p;
}

Timestamp parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n != 7 || (sep != ' ' && sep != 'T'))
        throw std::invalid_argument("malformed timestamp: \"" + text + "\"");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
        throw std::invalid_argument("timestamp field out of range: \"" + text + "\"");
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date: \"" + text + "\"");
    const sys_days dp{ymd};
    return duration_cast<seconds>(dp.time_since_epoch()).count() + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp ts) {
    const TimeParts p = time_parts(ts);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ", p.year, p.month, p.day,
                  p.hour, p.minute, p.second);
    return buf;
}

}  // namespace topkbench
