#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace capdim {

/// Thrown when an exact operation leaves the 64-bit numerator/denominator range.
class RationalOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: den > 0 and gcd(|num|, den) = 1. Intermediate products
/// are carried in 128 bits; a result that does not fit throws RationalOverflow
/// instead of wrapping.
class Rational {
public:
    constexpr Rational() noexcept = default;
    constexpr Rational(std::int64_t n) noexcept : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d);

    [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }

    [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }
    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    [[nodiscard]] int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    /// Largest integer not above the value.
    [[nodiscard]] std::int64_t floor() const noexcept;
    [[nodiscard]] std::int64_t ceil() const noexcept;

    /// "n" for integers, "n/d" otherwise.
    [[nodiscard]] std::string str() const;

    /// Parses "a/b", integers, and terminating decimals ("0.125", "-1.5e-2")
    /// exactly. Anything that cannot be represented exactly is rejected.
    static Rational parse(std::string_view text);

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static Rational from_wide(__int128 n, __int128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

[[nodiscard]] inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
[[nodiscard]] Rational pow(const Rational& base, unsigned exponent);
[[nodiscard]] inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
[[nodiscard]] inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace capdim

namespace Eigen {

template <>
struct NumTraits<capdim::Rational> : GenericNumTraits<capdim::Rational> {
    using Real = capdim::Rational;
    using NonInteger = capdim::Rational;
    using Literal = capdim::Rational;
    using Nested = capdim::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 8,
        MulCost = 8
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 18; }
};

}  // namespace Eigen

namespace capdim {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RationalRow = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

}  // namespace capdim
