#include "capdim/rademacher.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "capdim/errors.hpp"
#include "capdim/metrics.hpp"
#include "capdim/rng.hpp"

namespace capdim {

namespace {

// V scaled by the least common denominator, when that fits in int64 with
// room for 2^20-term sums.
struct Integerized {
    std::vector<std::vector<std::int64_t>> rows;
    std::int64_t scale = 1;
};

std::optional<Integerized> integerize(const RationalMatrix& V) {
    constexpr std::int64_t kLimit = std::int64_t{1} << 40;
    std::int64_t l = 1;
    for (Eigen::Index i = 0; i < V.size(); ++i) {
        const std::int64_t d = V(i).den();
        const std::int64_t g = std::gcd(l, d);
        if (l / g > kLimit / d) return std::nullopt;
        l = l / g * d;
    }
    Integerized out;
    out.scale = l;
    out.rows.assign(static_cast<std::size_t>(V.rows()), std::vector<std::int64_t>(static_cast<std::size_t>(V.cols())));
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
        for (Eigen::Index c = 0; c < V.cols(); ++c) {
            const __int128 v = static_cast<__int128>(V(r, c).num()) * (l / V(r, c).den());
            if (v > kLimit || v < -kLimit) return std::nullopt;
            out.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = static_cast<std::int64_t>(v);
        }
    }
    return out;
}

// Gray-code walk over sign vectors with running per-row sums.
template <typename T>
double gray_walk(const std::vector<std::vector<T>>& rows, std::size_t n, double scale) {
    std::vector<T> sums(rows.size(), T{0});
    std::vector<int> sigma(n, -1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < n; ++j) sums[r] -= rows[r][j];
    }
    using Acc = std::conditional_t<std::is_integral_v<T>, __int128, double>;
    Acc total = 0;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t step = 0;; ++step) {
        T best = sums.front();
        for (const T& s : sums) best = std::max(best, s);
        total += best;
        if (step + 1 == count) break;
        const auto j = static_cast<std::size_t>(std::countr_zero(step + 1));
        sigma[j] = -sigma[j];
        for (std::size_t r = 0; r < rows.size(); ++r) sums[r] += 2 * sigma[j] * rows[r][j];
    }
    return static_cast<double>(total) / static_cast<double>(count) / scale;
}

}  // namespace

RademacherEstimate expected_supremum(const RationalMatrix& V, RademacherMode mode, std::uint64_t draws,
                                     std::uint64_t seed) {
    require(V.rows() >= 1, "functions", "need at least one function");
    const auto n = static_cast<std::size_t>(V.cols());
    require(n >= 1, "sample", "need at least one coordinate");
    RademacherEstimate est;
    est.mode = mode;
    if (mode == RademacherMode::exact) {
        require(n <= kExactSignCap, "exact_cap",
                "exact enumeration needs at most " + std::to_string(kExactSignCap) + " sign coordinates");
        if (auto ints = integerize(V)) {
            est.value = gray_walk(ints->rows, n, static_cast<double>(ints->scale));
        } else {
            std::vector<std::vector<double>> rows(static_cast<std::size_t>(V.rows()), std::vector<double>(n));
            for (Eigen::Index r = 0; r < V.rows(); ++r) {
                for (Eigen::Index c = 0; c < V.cols(); ++c) rows[r][c] = V(r, c).to_double();
            }
            est.value = gray_walk(rows, n, 1.0);
        }
        return est;
    }
    require(draws >= 2, "draws", "Monte Carlo needs at least two draws");
    const Eigen::MatrixXd D = V.unaryExpr([](const Rational& q) { return q.to_double(); });
    const std::size_t words = (n + 63) / 64;
    const std::uint64_t key = splitmix64(seed);
    double mean = 0;
    double m2 = 0;
    Eigen::VectorXd sigma(static_cast<Eigen::Index>(n));
    for (std::uint64_t t = 0; t < draws; ++t) {
        for (std::size_t w = 0; w < words; ++w) {
            const std::uint64_t bits = splitmix64(key ^ splitmix64(t * words + w));
            for (std::size_t j = w * 64; j < std::min(n, (w + 1) * 64); ++j) {
                sigma(static_cast<Eigen::Index>(j)) = ((bits >> (j - w * 64)) & 1U) ? 1.0 : -1.0;
            }
        }
        const double sup = (D * sigma).maxCoeff();
        // Welford update.
        const double delta = sup - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (sup - mean);
    }
    est.value = mean;
    est.draws = draws;
    est.std_error = std::sqrt(m2 / static_cast<double>(draws - 1) / static_cast<double>(draws));
    return est;
}

RademacherEstimate empirical_rademacher(const ScoreClass& F, const Sample& sample, RademacherMode mode,
                                        std::uint64_t draws, std::uint64_t seed) {
    RademacherEstimate est = expected_supremum(restrict_to(F, sample), mode, draws, seed);
    const auto n = static_cast<double>(sample.size());
    est.value /= n;
    if (est.std_error) *est.std_error /= n;
    return est;
}

RademacherEstimate maurer_rhs(const FiniteFunctionClass& G, const Sample& sample, RademacherMode mode,
                              std::uint64_t draws, std::uint64_t seed) {
    const std::size_t n = sample.size();
    const std::size_t C = G.num_categories();
    RationalMatrix V(static_cast<Eigen::Index>(G.num_functions()), static_cast<Eigen::Index>(n * C));
    for (std::size_t i = 0; i < n; ++i) {
        require(sample[i].x < G.num_points(), "sample", "sample point outside the description space");
        for (std::size_t f = 0; f < G.num_functions(); ++f) {
            for (std::size_t k = 0; k < C; ++k) {
                V(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i * C + k)) = G.value(f, sample[i].x, k);
            }
        }
    }
    RademacherEstimate est = expected_supremum(V, mode, draws, seed);
    const double scale = std::numbers::sqrt2 * static_cast<double>(n);
    est.value /= scale;
    if (est.std_error) *est.std_error /= scale;
    return est;
}

}  // namespace capdim
