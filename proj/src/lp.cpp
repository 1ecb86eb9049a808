#include "lp.hpp"

#include <cstddef>

namespace capdim::detail {

bool lp_feasible(const std::vector<LinearConstraint>& rows, std::size_t num_vars) {
    const std::size_t m = rows.size();
    if (m == 0) return true;
    // Column layout: original | one slack or surplus per inequality | artificials | rhs.
    std::size_t num_slack = 0;
    std::size_t num_art = 0;
    for (const auto& r : rows) {
        if (r.rel != Relation::eq) ++num_slack;
    }
    std::vector<std::vector<Rational>> t(m);
    std::vector<Relation> rel(m);
    std::vector<Rational> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        t[i] = rows[i].coeffs;
        t[i].resize(num_vars);
        rel[i] = rows[i].rel;
        rhs[i] = rows[i].rhs;
        if (rhs[i] < Rational(0)) {
            for (auto& v : t[i]) v = -v;
            rhs[i] = -rhs[i];
            if (rel[i] == Relation::le) {
                rel[i] = Relation::ge;
            } else if (rel[i] == Relation::ge) {
                rel[i] = Relation::le;
            }
        }
        if (rel[i] != Relation::le) ++num_art;
    }
    const std::size_t art0 = num_vars + num_slack;
    const std::size_t cols = art0 + num_art;
    std::vector<std::size_t> basis(m);
    std::size_t s = num_vars;
    std::size_t a = art0;
    for (std::size_t i = 0; i < m; ++i) {
        t[i].resize(cols + 1, Rational(0));
        t[i][cols] = rhs[i];
        if (rel[i] == Relation::le) {
            t[i][s] = Rational(1);
            basis[i] = s++;
        } else {
            if (rel[i] == Relation::ge) t[i][s++] = Rational(-1);
            t[i][a] = Rational(1);
            basis[i] = a++;
        }
    }
    // Reduced costs of the phase I objective sum(artificials).
    std::vector<Rational> cost(cols + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < art0) continue;
        for (std::size_t j = 0; j <= cols; ++j) {
            if (j < art0) cost[j] -= t[i][j];
        }
        cost[cols] -= t[i][cols];
    }
    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < art0; ++j) {
            if (cost[j] < Rational(0)) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= Rational(0)) continue;
            const Rational ratio = t[i][cols] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) break;  // unbounded direction; phase I objective is bounded below, so unreachable
        const Rational piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == Rational(0)) continue;
            const Rational f = t[i][enter];
            for (std::size_t j = 0; j <= cols; ++j) {
                if (t[leave][j] != Rational(0)) t[i][j] -= f * t[leave][j];
            }
        }
        if (cost[enter] != Rational(0)) {
            const Rational f = cost[enter];
            for (std::size_t j = 0; j <= cols; ++j) {
                if (t[leave][j] != Rational(0)) cost[j] -= f * t[leave][j];
            }
        }
        basis[leave] = enter;
    }
    // Phase I optimum is -cost[cols]; feasible iff it is zero.
    return cost[cols] == Rational(0);
}

}  // namespace capdim::detail
