#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pbs {

using Wide = boost::multiprecision::int256_t;

// Token / ETH amount with 18 fractional decimal digits, stored as a raw
// integer count of 1e-18 units. Arithmetic that can overflow 128 bits is
// routed through 256-bit intermediates.
class Amount {
public:
    static constexpr int64_t kScale = 1'000'000'000'000'000'000LL;

    constexpr Amount() = default;

    static constexpr Amount from_raw(__int128 raw) {
        Amount a;
        a.raw_ = raw;
        return a;
    }

    static constexpr Amount from_units(int64_t whole) {
        return from_raw(static_cast<__int128>(whole) * kScale);
    }

    // Nearest-unit rounding; values beyond ~1.7e20 whole tokens are rejected.
    static Amount from_double(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("Amount::from_double: non-finite");
        long double scaled = static_cast<long double>(v) * static_cast<long double>(kScale);
        if (std::fabs(scaled) >= 1.7e38L) throw std::overflow_error("Amount::from_double: overflow");
        return from_raw(static_cast<__int128>(std::round(scaled)));
    }

    constexpr __int128 raw() const { return raw_; }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(raw_) / static_cast<long double>(kScale));
    }

    std::string to_string() const;
    static std::optional<Amount> parse(std::string_view s);

    constexpr bool is_zero() const { return raw_ == 0; }
    constexpr bool is_negative() const { return raw_ < 0; }

    friend constexpr Amount operator+(Amount a, Amount b) { return from_raw(a.raw_ + b.raw_); }
    friend constexpr Amount operator-(Amount a, Amount b) { return from_raw(a.raw_ - b.raw_); }
    friend constexpr Amount operator-(Amount a) { return from_raw(-a.raw_); }
    constexpr Amount& operator+=(Amount b) { raw_ += b.raw_; return *this; }
    constexpr Amount& operator-=(Amount b) { raw_ -= b.raw_; return *this; }
    friend constexpr auto operator<=>(Amount a, Amount b) { return a.raw_ <=> b.raw_; }
    friend constexpr bool operator==(Amount a, Amount b) { return a.raw_ == b.raw_; }

    // floor(a * num / den) computed in 256 bits.
    static Amount mul_div(Amount a, Wide num, Wide den);

private:
    __int128 raw_{0};
};

// Product of two amounts as a 256-bit integer in 1e-36 units. Used for the
// constant-product invariant, which exceeds 128 bits for large reserves.
inline Wide raw_product(Amount a, Amount b) {
    return Wide(a.raw()) * Wide(b.raw());
}

}  // namespace pbs
