#include "pbs/amount.hpp"

#include <array>
#include <charconv>

namespace pbs {

namespace {

std::string u128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

std::string Amount::to_string() const {
    unsigned __int128 mag = raw_ < 0 ? static_cast<unsigned __int128>(-(raw_ + 1)) + 1
                                     : static_cast<unsigned __int128>(raw_);
    unsigned __int128 whole = mag / kScale;
    unsigned __int128 frac = mag % kScale;
    std::string out = raw_ < 0 ? "-" : "";
    out += u128_to_string(whole);
    if (frac != 0) {
        std::string f = u128_to_string(frac);
        f.insert(f.begin(), 18 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += '.';
        out += f;
    }
    return out;
}

std::optional<Amount> Amount::parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    bool neg = false;
    size_t i = 0;
    if (s[0] == '-') { neg = true; i = 1; }
    if (i >= s.size()) return std::nullopt;
    unsigned __int128 whole = 0;
    bool any_digit = false;
    for (; i < s.size() && s[i] != '.'; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        whole = whole * 10 + static_cast<unsigned>(s[i] - '0');
        if (whole > (static_cast<unsigned __int128>(1) << 100)) return std::nullopt;
        any_digit = true;
    }
    unsigned __int128 frac = 0;
    int frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size()) return std::nullopt;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            if (frac_digits < 18) {
                frac = frac * 10 + static_cast<unsigned>(s[i] - '0');
                ++frac_digits;
            } else if (s[i] != '0') {
                return std::nullopt;  // sub-1e-18 precision is not representable
            }
            any_digit = true;
        }
    }
    if (!any_digit) return std::nullopt;
    for (; frac_digits < 18; ++frac_digits) frac *= 10;
    unsigned __int128 mag = whole * static_cast<unsigned __int128>(kScale) + frac;
    __int128 raw = static_cast<__int128>(mag);
    if (raw < 0) return std::nullopt;
    return from_raw(neg ? -raw : raw);
}

Amount Amount::mul_div(Amount a, Wide num, Wide den) {
    if (den == 0) throw std::invalid_argument("Amount::mul_div: zero denominator");
    Wide r = Wide(a.raw_) * num / den;
    return from_raw(static_cast<__int128>(r));
}

}  // namespace pbs
