#include "capdim/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace capdim {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool parse_digits(std::string_view s, __int128& out) {
    if (s.empty()) return false;
    out = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
        out = out * 10 + (ch - '0');
        if (out > kMax) return false;
    }
    return true;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(n, d);
}

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n > kMax || n < -kMax || d > kMax) {
        throw RationalOverflow("rational overflow");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

std::int64_t Rational::floor() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    const auto fail = [&]() -> Rational {
        throw std::invalid_argument("not an exact rational: '" + std::string(text) + "'");
    };
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return fail();

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational n = parse(s.substr(0, slash));
        const Rational d = parse(s.substr(slash + 1));
        if (!n.is_integer() || !d.is_integer() || d.num() == 0) return fail();
        return Rational(n.num(), d.num());
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    int exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const std::string_view es = s.substr(e + 1);
        const auto [ptr, ec] = std::from_chars(es.data() + (es.starts_with('+') ? 1 : 0),
                                               es.data() + es.size(), exponent);
        if (ec != std::errc{} || ptr != es.data() + es.size() || exponent < -18 || exponent > 18) {
            return fail();
        }
        s = s.substr(0, e);
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view ip = s.substr(0, dot);
        const std::string_view fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) return fail();
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<int>(fp.size());
    } else {
        digits = std::string(s);
    }
    __int128 mantissa = 0;
    if (!parse_digits(digits, mantissa)) return fail();
    if (negative) mantissa = -mantissa;
    __int128 num = mantissa;
    __int128 den = 1;
    for (int i = 0; i < exponent; ++i) {
        num *= 10;
        if (num > kMax || num < -kMax) return fail();
    }
    if (exponent < -36) return fail();
    for (int i = 0; i > exponent; --i) den *= 10;
    try {
        return from_wide(num, den);
    } catch (const RationalOverflow&) {
        return fail();
    }
}

Rational& Rational::operator+=(const Rational& o) {
    const __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    return *this = from_wide(n, d);
}

Rational& Rational::operator-=(const Rational& o) {
    const __int128 n = static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
    const __int128 d = static_cast<__int128>(den_) * o.den_;
    return *this = from_wide(n, d);
}

Rational& Rational::operator*=(const Rational& o) {
    return *this = from_wide(static_cast<__int128>(num_) * o.num_,
                             static_cast<__int128>(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return *this = from_wide(static_cast<__int128>(num_) * o.den_,
                             static_cast<__int128>(den_) * o.num_);
}

Rational operator-(const Rational& a) {
    Rational r = a;
    r.num_ = -r.num_;
    return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, unsigned exponent) {
    Rational result(1);
    for (unsigned i = 0; i < exponent; ++i) result *= base;
    return result;
}

}  // namespace capdim
