#pragma once

#include <cstdint>
#include <optional>

#include "capdim/core_model.hpp"

namespace capdim {

enum class RademacherMode { exact, monte_carlo };

struct RademacherEstimate {
    double value = 0;
    RademacherMode mode = RademacherMode::exact;
    std::optional<std::uint64_t> draws;  // Monte Carlo only
    std::optional<double> std_error;     // Monte Carlo only
};

inline constexpr std::size_t kExactSignCap = 20;

/// (1/n) E_sigma sup_f sum_i sigma_i f(t_i). Exact mode enumerates all 2^n
/// sign vectors (n <= 20); Monte Carlo uses a counter-based sign stream, so a
/// given (seed, draw) pair always yields the same signs.
[[nodiscard]] RademacherEstimate empirical_rademacher(const ScoreClass& F, const Sample& sample,
                                                      RademacherMode mode, std::uint64_t draws = 100000,
                                                      std::uint64_t seed = 0);

/// 1/(sqrt(2) n) E sup_g sum_i sum_k sigma_ik g_k(x_i) over an n x C sign
/// matrix; exact mode needs n C <= 20.
[[nodiscard]] RademacherEstimate maurer_rhs(const FiniteFunctionClass& G, const Sample& sample, RademacherMode mode,
                                            std::uint64_t draws = 100000, std::uint64_t seed = 0);

/// E_sigma sup_r sum_j sigma_j V(r, j) for a finite set of rows.
[[nodiscard]] RademacherEstimate expected_supremum(const RationalMatrix& V, RademacherMode mode,
                                                   std::uint64_t draws = 100000, std::uint64_t seed = 0);

}  // namespace capdim
