#include "pod/money.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pod {

Micros Micros::from_units(double units) {
    double scaled = std::round(units * kPerUnit);
    if (!std::isfinite(scaled) || std::fabs(scaled) > 9.0e18) throw std::out_of_range("amount out of range");
    return Micros{static_cast<std::int64_t>(scaled)};
}

Micros Micros::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty amount");
    bool negative = false;
    if (text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || frac.size() > 6) throw std::invalid_argument("malformed amount");
    std::int64_t w = 0;
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
    if (ec != std::errc{} || p != whole.data() + whole.size()) throw std::invalid_argument("malformed amount");
    std::int64_t f = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        int digit = 0;
        if (i < frac.size()) {
            if (frac[i] < '0' || frac[i] > '9') throw std::invalid_argument("malformed amount");
            digit = frac[i] - '0';
        }
        f = f * 10 + digit;
    }
    if (w > (INT64_MAX - f) / kPerUnit) throw std::out_of_range("amount out of range");
    std::int64_t raw = w * kPerUnit + f;
    return Micros{negative ? -raw : raw};
}

std::string Micros::str() const {
    std::int64_t a = raw_ < 0 ? -raw_ : raw_;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%06lld", raw_ < 0 ? "-" : "", static_cast<long long>(a / kPerUnit),
                  static_cast<long long>(a % kPerUnit));
    return buf;
}

}  // namespace pod
