#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pod {

/// Currency amount in integer micro-units (1 unit = 10^6 micros). All ledger
/// arithmetic happens here so balances never drift.
class Micros {
public:
    static constexpr std::int64_t kPerUnit = 1'000'000;

    constexpr Micros() = default;
    constexpr explicit Micros(std::int64_t raw) : raw_(raw) {}

    static Micros from_units(double units);
    /// Parses a plain decimal with at most six fractional digits.
    static Micros parse(std::string_view text);

    constexpr std::int64_t raw() const { return raw_; }
    double units() const { return static_cast<double>(raw_) / kPerUnit; }
    /// Fixed six-decimal rendering, exact.
    std::string str() const;

    constexpr auto operator<=>(const Micros&) const = default;
    constexpr Micros operator+(Micros o) const { return Micros{raw_ + o.raw_}; }
    constexpr Micros operator-(Micros o) const { return Micros{raw_ - o.raw_}; }
    constexpr Micros operator-() const { return Micros{-raw_}; }
    constexpr Micros operator*(std::int64_t k) const { return Micros{raw_ * k}; }
    constexpr Micros& operator+=(Micros o) {
        raw_ += o.raw_;
        return *this;
    }
    constexpr Micros& operator-=(Micros o) {
        raw_ -= o.raw_;
        return *this;
    }

private:
    std::int64_t raw_ = 0;
};

}  // namespace pod
