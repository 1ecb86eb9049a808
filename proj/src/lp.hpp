#pragma once

#include <vector>

#include "capdim/rational.hpp"

namespace capdim::detail {

enum class Relation { le, ge, eq };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::le;
    Rational rhs;
};

/// True iff some x >= 0 satisfies every constraint. Exact two-phase simplex
/// (phase I only) with Bland's rule, so it terminates.
[[nodiscard]] bool lp_feasible(const std::vector<LinearConstraint>& rows, std::size_t num_vars);

}  // namespace capdim::detail
