#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capdim/core_model.hpp"

namespace capdim {

/// Exponent of an empirical L_p pseudo-metric: a positive integer or infinity.
class PNorm {
public:
    static constexpr PNorm infinity() noexcept { return PNorm(0); }
    static PNorm finite(unsigned p);
    /// "inf", "infinity" or a positive integer.
    static PNorm parse(std::string_view text);

    [[nodiscard]] constexpr bool is_infinite() const noexcept { return order_ == 0; }
    [[nodiscard]] constexpr unsigned order() const noexcept { return order_; }
    [[nodiscard]] std::string str() const;

    friend constexpr bool operator==(PNorm, PNorm) = default;

private:
    constexpr explicit PNorm(unsigned order) noexcept : order_(order) {}
    unsigned order_;
};

/// d_p(f, f') on the exact comparison scale: d^p for finite p, d itself for
/// p = infinity. Comparisons d >= eps are done as power >= eps^p.
struct Distance {
    Rational power;
    PNorm p = PNorm::infinity();

    [[nodiscard]] double value() const;
};

/// A radius on the same exact scale as Distance::power.
struct Radius {
    Rational power;
    PNorm p = PNorm::infinity();

    static Radius of(const Rational& eps, PNorm p);
    /// eps * divisor^(-1/p), held exactly as eps^p / divisor. For p = infinity
    /// the divisor has no effect.
    static Radius scaled(const Rational& eps, const Rational& divisor, PNorm p);

    [[nodiscard]] double value() const;
    [[nodiscard]] Radius doubled() const;
};

/// Values of every function on the sample points: functions x n.
[[nodiscard]] RationalMatrix restrict_to(const ScoreClass& F, const Sample& sample);

[[nodiscard]] Distance row_distance(const RationalMatrix& restricted, std::size_t f, std::size_t g, PNorm p);
[[nodiscard]] Distance dist(const ScoreClass& F, std::string_view f, std::string_view g, const Sample& sample,
                            PNorm p);

enum class PackingMode { exact, greedy };

struct PackingResult {
    std::size_t value = 0;
    std::vector<std::string> witness;  // pairwise separated function names
    bool exact = false;
    std::optional<Sample> sample;      // maximizing sample (uniform packing only)
};

struct CoveringResult {
    std::size_t value = 0;
    std::vector<std::string> centers;
};

inline constexpr std::size_t kDefaultFunctionCap = 64;

/// Largest subset with pairwise distance >= eps. Exact mode runs a maximum
/// clique search on the separation graph of the distinct restrictions.
[[nodiscard]] PackingResult packing_number(const ScoreClass& F, const Sample& sample, const Radius& eps,
                                           PackingMode mode = PackingMode::exact,
                                           std::size_t cap = kDefaultFunctionCap);
[[nodiscard]] PackingResult packing_number(const ScoreClass& F, const Sample& sample, const Rational& eps,
                                           PNorm p, PackingMode mode = PackingMode::exact,
                                           std::size_t cap = kDefaultFunctionCap);

/// Fewest class members whose open eps-balls cover the class.
[[nodiscard]] CoveringResult proper_covering_number(const ScoreClass& F, const Sample& sample, const Radius& eps,
                                                    std::size_t cap = kDefaultFunctionCap);
[[nodiscard]] CoveringResult proper_covering_number(const ScoreClass& F, const Sample& sample,
                                                    const Rational& eps, PNorm p,
                                                    std::size_t cap = kDefaultFunctionCap);

/// Maximum packing number over all n-samples from the class domain.
/// Exhaustive over multisets when there are at most `budget` of them,
/// otherwise `budget` seeded random samples (exact = false).
[[nodiscard]] PackingResult uniform_packing(const ScoreClass& F, std::size_t n, const Radius& eps,
                                            std::uint64_t budget, std::uint64_t seed = 0,
                                            std::size_t cap = kDefaultFunctionCap);
[[nodiscard]] PackingResult uniform_packing(const ScoreClass& F, std::size_t n, const Rational& eps, PNorm p,
                                            std::uint64_t budget, std::uint64_t seed = 0,
                                            std::size_t cap = kDefaultFunctionCap);

/// Number of size-n multisets over d elements, saturating at UINT64_MAX.
[[nodiscard]] std::uint64_t multiset_count(std::size_t d, std::size_t n);

/// Calls visit(sample) for every size-n multiset of the domain, in
/// lexicographic order of domain positions.
template <typename Visit>
void for_each_multiset(const ScoreClass& F, std::size_t n, Visit&& visit) {
    const std::size_t d = F.domain_size();
    if (n == 0 || d == 0) return;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        std::vector<LabeledPoint> pts;
        pts.reserve(n);
        for (std::size_t i : idx) pts.push_back(F.domain()[i]);
        visit(Sample(std::move(pts)));
        std::size_t i = n;
        while (i > 0 && idx[i - 1] == d - 1) --i;
        if (i == 0) return;
        const std::size_t v = idx[i - 1] + 1;
        for (std::size_t j = i - 1; j < n; ++j) idx[j] = v;
    }
}

}  // namespace capdim
