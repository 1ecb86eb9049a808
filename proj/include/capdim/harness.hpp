#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "capdim/core_model.hpp"
#include "capdim/dims.hpp"

namespace capdim {

/// Knobs shared by every verification suite. Defaults keep all oracles
/// exhaustive.
struct HarnessConfig {
    std::uint64_t seed = 1;
    std::size_t instances = 200;
    std::size_t max_points = 2;
    std::size_t num_categories = 3;
    std::size_t max_functions = 8;
    std::size_t max_sample = 4;
    std::vector<Rational> gammas{Rational(1, 8), Rational(1, 4), Rational(1, 2)};
    Rational grid_step{1, 8};
    Rational bound{1};
    SearchCaps caps{};
    std::uint64_t mc_draws = 100000;
    std::size_t mc_instances = 20;  // instances that also run Monte Carlo
    std::size_t hull_grid_resolution = 2;
};

struct VerificationReport {
    std::string lemma_id;
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;
    double worst_slack = std::numeric_limits<double>::infinity();  // min(bound - computed)
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const noexcept { return failures == 0; }
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Multiples of `step` in [-M, M].
[[nodiscard]] std::vector<Rational> value_grid(const Rational& step, const Rational& M);

/// Deterministic pseudo-random class with values drawn from `grid`.
[[nodiscard]] FiniteFunctionClass gen_class(std::uint64_t seed, std::size_t num_points, std::size_t num_categories,
                                            std::size_t num_functions, const std::vector<Rational>& grid,
                                            const Rational& bound = Rational(1));

struct SvmSampleSpec {
    std::size_t feature_dim = 2;
    std::size_t num_functions = 8;
    std::size_t num_points = 2;
    Rational Lambda{1};
    Rational Lambda_X{1};
    std::size_t num_categories = 3;
    std::uint64_t seed = 0;
};

/// Linear multi-class SVM class: h_k(x) = <w_k, x> with sum_k w_k = 0,
/// sum_k |w_k|^2 <= Lambda^2 and |x| <= Lambda_X, all exact.
[[nodiscard]] FiniteFunctionClass gen_svm_class(const SvmSampleSpec& spec);

/// Two functions on one point: g1 = (3/4, 1/4, 0), g2 = (0, 1/2, 1/2).
[[nodiscard]] FiniteFunctionClass example1_class();

/// A pair of functions whose discretized squashed margins differ by >= 2 at z,
/// with the witness b and alternative category c built from them.
struct SeparatedPair {
    std::size_t g = 0;
    std::size_t g_prime = 0;
    LabeledPoint z;
    std::int64_t b = 0;
    std::size_t c = 0;
};

[[nodiscard]] std::vector<SeparatedPair> separated_pairs(const FiniteFunctionClass& G, const Rational& gamma,
                                                         const Rational& eta);

struct SeparationReplay {
    bool strong_fat = false;  // squashed pair strongly shatters ({z}, b)
    bool strong_g = false;    // unsquashed pair strongly G-shatters ({z}, b)
    bool strong_n = false;    // unsquashed pair strongly N-shatters ({z}, b, c)
};

[[nodiscard]] SeparationReplay replay_separation(const FiniteFunctionClass& G, const Rational& gamma,
                                                 const Rational& eta, const SeparatedPair& pair);

[[nodiscard]] const std::vector<std::string>& lemma_ids();

/// Runs the paired oracle / bound computation for one statement.
[[nodiscard]] VerificationReport verify(std::string_view lemma_id, const HarnessConfig& config);

/// gamma-N-dim(rho_G) <= sum_{k<l} gamma-dim(absconv(G_k u G_l)) on one class.
/// Each hull dimension is exact (LP per dichotomy); a grid subclass of the
/// hull is also searched and must never exceed it. Overflowing instances
/// are counted as skipped.
[[nodiscard]] VerificationReport verify_lemma9_hull(const FiniteFunctionClass& G, const Rational& gamma,
                                                    std::size_t hull_grid_resolution);

/// Worker count: hardware concurrency, capped by CAPDIM_THREADS when set.
[[nodiscard]] std::size_t worker_count();

/// results[i] = fn(i), evaluated on up to worker_count() threads.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn);

}  // namespace capdim

#include "capdim/detail/parallel.hpp"
