#include "capdim/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "capdim/errors.hpp"

namespace capdim {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kLn2 = std::numbers::ln2;

double finite_or_throw(double v, const char* what) {
    require(std::isfinite(v), "overflow", std::string(what) + " is not representable as a finite double");
    return v;
}

double from_log2(double lg, const char* what) { return finite_or_throw(std::exp2(lg), what); }

void check_margin(double eps, double gamma) {
    require(std::isfinite(gamma) && gamma > 0, "gamma", "gamma must be positive");
    require(std::isfinite(eps) && eps > 0 && eps <= gamma, "eps", "eps must lie in (0, gamma]");
}

void check_dim(double d, const char* name) {
    require(std::isfinite(d) && d >= 0, name, "dimension must be nonnegative");
}

void check_sample(double n, double d) {
    require(std::isfinite(n) && n >= 1, "n", "sample size must be at least 1");
    require(n >= d, "n", "sample size must be at least the dimension");
}

void check_categories(int C) { require(C >= 3, "C", "C must be at least 3"); }

void check_params(const BoundParams& p) {
    check_categories(p.C);
    require(std::isfinite(p.gamma) && p.gamma > 0 && p.gamma <= 1, "gamma", "gamma must lie in (0, 1]");
    require(p.delta > 0 && p.delta < 1, "delta", "delta must lie in (0, 1)");
    require(std::isfinite(p.M_G) && p.M_G >= 1, "M_G", "M_G must be at least 1");
    require(std::isfinite(p.K1) && p.K1 > 0, "K1", "K1 must be positive");
    require(std::isfinite(p.K2) && p.K2 > 0, "K2", "K2 must be positive");
    require(p.d_GC > 0 && p.d_GC <= 2, "d_GC", "d_GC must lie in (0, 2]");
    require(std::isfinite(p.d_Ggamma) && p.d_Ggamma > 0, "d_Ggamma", "d_Ggamma must be positive");
    require(std::isfinite(p.m) && p.m >= 1, "m", "m must be at least 1");
}

}  // namespace

ChainSchedule::ChainSchedule(std::vector<double> h) : h_(std::move(h)) {
    require(h_.size() >= 2, "schedule", "a schedule needs h(0) and at least one further radius");
    for (std::size_t j = 0; j < h_.size(); ++j) {
        require(std::isfinite(h_[j]) && h_[j] > 0, "schedule", "radii must be positive");
        if (j > 0) require(h_[j] <= h_[j - 1], "schedule", "radii must be nonincreasing");
    }
}

ChainSchedule ChainSchedule::geometric(double gamma, double d, std::size_t N) {
    require(gamma > 0, "gamma", "gamma must be positive");
    require(d > 0 && d < 2, "d_Ggamma", "the geometric schedule needs d in (0, 2)");
    require(N >= 1, "N", "depth must be at least 1");
    std::vector<double> h(N + 1);
    for (std::size_t j = 0; j <= N; ++j) h[j] = gamma * std::exp2(-2.0 * static_cast<double>(j) / (2.0 - d));
    return ChainSchedule(std::move(h));
}

double packing_bound_linfty_G_old_log2(double eps, double gamma, double n, double dG) {
    check_margin(eps, gamma);
    check_dim(dG, "dG");
    check_sample(n, dG);
    if (dG == 0) return 1.0;
    const double exponent = std::ceil(dG * std::log2(2 * gamma * kE * n / (dG * eps)));
    return 1.0 + exponent * std::log2(4 * gamma * gamma * n / (eps * eps));
}

double packing_bound_linfty_G_old(double eps, double gamma, double n, double dG) {
    return from_log2(packing_bound_linfty_G_old_log2(eps, gamma, n, dG), "old L_inf graph packing bound");
}

double packing_bound_linfty_G_log2(double eps, double gamma, double n, double dG) {
    check_margin(eps, gamma);
    check_dim(dG, "dG");
    check_sample(n, dG);
    if (dG == 0) return 0.0;
    return dG * std::log2(2 * gamma * kE * n / (dG * eps)) * std::log2(6 * gamma * n / eps);
}

double packing_bound_linfty_G(double eps, double gamma, double n, double dG) {
    return from_log2(packing_bound_linfty_G_log2(eps, gamma, n, dG), "L_inf graph packing bound");
}

double packing_bound_l2_G_log2(double eps, double gamma, double dG) {
    check_margin(eps, gamma);
    check_dim(dG, "dG");
    return 20 * dG * std::log2(5 * gamma / eps);
}

double packing_bound_l2_G(double eps, double gamma, double dG) {
    return from_log2(packing_bound_l2_G_log2(eps, gamma, dG), "L_2 graph packing bound");
}

double packing_bound_linfty_N_log2(double eps, double gamma, double n, int C, double dN) {
    check_margin(eps, gamma);
    check_categories(C);
    check_dim(dN, "dN");
    check_sample(n, dN);
    if (dN == 0) return 0.0;
    const double c1 = C - 1;
    return dN * std::log2(2 * gamma * c1 * kE * n / (dN * eps)) * std::log2(6 * gamma * std::sqrt(c1) * n / eps);
}

double packing_bound_linfty_N(double eps, double gamma, double n, int C, double dN) {
    return from_log2(packing_bound_linfty_N_log2(eps, gamma, n, C, dN), "L_inf Natarajan packing bound");
}

double packing_bound_l2_N_log2(double eps, double gamma, int C, double dN) {
    check_margin(eps, gamma);
    check_categories(C);
    check_dim(dN, "dN");
    const double r = 6 * gamma / eps;
    const double c1 = C - 1;
    const double exponent = 4 * std::log2(r * r * r * std::sqrt(c1)) * dN;
    return exponent * (std::log2(c1) + 5 * std::log2(r));
}

double packing_bound_l2_N(double eps, double gamma, int C, double dN) {
    return from_log2(packing_bound_l2_N_log2(eps, gamma, C, dN), "L_2 Natarajan packing bound");
}

double decomposition_constant(int C) {
    check_categories(C);
    const double ratio = static_cast<double>(C) / (C - 2);
    return std::min(4 * ratio * ratio, 16.0);
}

double fat_decomposition_bound(double eps, int C, double M_G, const std::vector<double>& fat_dims) {
    check_categories(C);
    require(std::isfinite(eps) && eps > 0, "eps", "eps must be positive");
    require(std::isfinite(M_G) && M_G >= 1, "M_G", "M_G must be at least 1");
    require(fat_dims.size() == static_cast<std::size_t>(C), "fat_dims", "one fat dimension per category");
    double sum = 0;
    for (double d : fat_dims) {
        check_dim(d, "fat_dims");
        sum += d;
    }
    const double l = std::log2(2.0 * C);
    const double log_term = std::log(48 * M_G * std::pow(l, 1.0 / 7) / eps);
    return finite_or_throw(10 * decomposition_constant(C) * l / kLn2 * log_term * sum, "fat decomposition bound");
}

double graph_to_natarajan_alpha(int C) {
    check_categories(C);
    return 2 + 2 / (2 * std::log(C - 1.0) + 1);
}

double graph_to_natarajan_beta(int C) {
    check_categories(C);
    return 1 + 1 / (4 * std::log(C - 1.0) + 2);
}

double graph_to_natarajan_bound(int C, double dN) {
    check_categories(C);
    check_dim(dN, "dN");
    if (dN == 0) return 0.0;
    return finite_or_throw(42 * std::pow(std::log(C - 1.0) + 1, graph_to_natarajan_alpha(C)) *
                               std::pow(dN, graph_to_natarajan_beta(C)),
                           "graph-to-Natarajan bound");
}

double natarajan_structural_bound(int C, const std::vector<double>& pair_fat_dims) {
    check_categories(C);
    require(pair_fat_dims.size() == static_cast<std::size_t>(C * (C - 1) / 2), "pair_fat_dims",
            "one entry per category pair k < l");
    double sum = 0;
    for (double d : pair_fat_dims) {
        check_dim(d, "pair_fat_dims");
        sum += d;
    }
    return sum;
}

double svm_natarajan_bound(int C, double Lambda, double Lambda_X, double gamma) {
    check_categories(C);
    require(std::isfinite(Lambda) && Lambda > 0, "Lambda", "Lambda must be positive");
    require(std::isfinite(Lambda_X) && Lambda_X > 0, "Lambda_X", "Lambda_X must be positive");
    require(gamma > 0 && gamma <= Lambda * Lambda_X, "gamma", "gamma must lie in (0, Lambda Lambda_X]");
    const double r = Lambda * Lambda_X / (2 * gamma);
    return C * r * r;
}

double hypothesis_nat_dim(double eps, const BoundParams& params) {
    check_params(params);
    require(eps > 0 && eps <= params.M_G, "eps", "eps must lie in (0, M_G]");
    return finite_or_throw(params.K_rho() * std::pow(params.C, params.d_GC) * std::pow(eps, -params.d_Ggamma),
                           "hypothesis Natarajan dimension");
}

double metric_entropy_linfty(const BoundParams& p, Pathway variant) {
    check_params(p);
    const double power = std::pow(8 / p.gamma, p.d_Ggamma);
    if (variant == Pathway::old_bound) {
        require(p.m >= 0.5 * p.K2 * power, "m", "old L_inf entropy needs m >= K2 (8/gamma)^d / 2");
        const double l = std::log2(128 * p.M_G * p.M_G * p.m / (p.gamma * p.gamma));
        return finite_or_throw(p.C * (1 + p.K2 * l * l * power), "old L_inf entropy");
    }
    const double lead = p.K_rho() * std::pow(p.C, p.d_GC);
    require(p.m >= 0.5 * lead * power, "m", "new L_inf entropy needs m >= K_rho C^d_GC (8/gamma)^d / 2");
    const double l = std::log2(24.0 * (p.C - 1) * p.m);
    return finite_or_throw(lead * l * l * power, "new L_inf entropy");
}

double metric_entropy_l2(double eps, const BoundParams& p, Pathway variant) {
    check_params(p);
    check_margin(eps, p.gamma);
    if (variant == Pathway::old_bound) {
        const double sc = std::sqrt(static_cast<double>(p.C));
        return finite_or_throw(20 * p.K2 * p.C * std::log(12 * p.M_G * sc / eps) * std::pow(48 * sc / eps, p.d_Ggamma),
                               "old L_2 entropy");
    }
    const double l = std::log((p.C - 1) * std::pow(6 * p.gamma / eps, 5));
    return finite_or_throw(6 * p.K_rho() * std::pow(p.C, p.d_GC) * l * l * std::pow(12 / eps, p.d_Ggamma),
                           "new L_2 entropy");
}

double covering_decomposition_bound(const std::vector<std::uint64_t>& per_category) {
    require(!per_category.empty(), "per_category", "at least one category");
    double prod = 1;
    for (auto v : per_category) {
        require(v >= 1, "per_category", "covering numbers are at least 1");
        prod *= static_cast<double>(v);
    }
    return finite_or_throw(prod, "covering product");
}

double guaranteed_risk_linfty(const BoundParams& p, double entropy_log2) {
    check_params(p);
    require(std::isfinite(entropy_log2) && entropy_log2 >= 0, "entropy_log2", "entropy must be nonnegative");
    return std::sqrt(2 / p.m * (entropy_log2 * kLn2 + std::log(2 / p.delta))) + 1 / p.m;
}

double chaining_term(const EntropyFn& entropy, const ChainSchedule& s, std::size_t j, double n) {
    require(n >= 1, "n", "sample size must be at least 1");
    require(j >= 1 && j <= s.depth(), "j", "term index must lie in 1..N");
    const double e = entropy(s(j));
    require(std::isfinite(e) && e >= 0, "entropy", "entropy values must be finite and nonnegative");
    return 2 * (s(j) + s(j - 1)) * std::sqrt(e / n);
}

double chaining_bound(const EntropyFn& entropy, const ChainSchedule& s, double n) {
    double total = s(s.depth());
    for (std::size_t j = 1; j <= s.depth(); ++j) total += chaining_term(entropy, s, j, n);
    return finite_or_throw(total, "chaining bound");
}

double phase_F1(const BoundParams& p) {
    check_params(p);
    return finite_or_throw(std::pow(12, p.d_Ggamma) * p.K_rho() * std::pow(p.C, p.d_GC), "F1");
}

double phase_F2(const BoundParams& p) {
    check_params(p);
    require(p.d_Ggamma < 2, "d_Ggamma", "F2 needs d_Ggamma < 2");
    return std::log(std::sqrt(p.C - 1.0)) + 5 * (std::log(std::sqrt(6.0)) + (1 + kLn2) / (2 - p.d_Ggamma));
}

double chained_term(const BoundParams& p, const ChainSchedule& s, std::size_t j) {
    require(j >= 1 && j <= s.depth(), "j", "term index must lie in 1..N");
    const double h = s(j);
    if (h > p.gamma) return 0.0;
    return 5 * std::sqrt(phase_F1(p) / p.m) * (h + s(j - 1)) / std::pow(h, p.d_Ggamma / 2) *
           std::log((p.C - 1) * std::pow(6 * p.gamma / h, 5));
}

double chained_rademacher_bound(const BoundParams& p, const ChainSchedule& s) {
    check_params(p);
    double total = s(s.depth());
    for (std::size_t j = 1; j <= s.depth(); ++j) total += chained_term(p, s, j);
    return finite_or_throw(total, "chained bound");
}

double rademacher_phase_bound(const BoundParams& p) {
    check_params(p);
    require(p.m >= 4, "m", "m must be at least 4");
    const double d = p.d_Ggamma;
    const double F1 = phase_F1(p);
    const double lm = std::log2(p.m);
    const double c1 = p.C - 1;
    double v = 0;
    if (d < 2) {
        v = 10 * (1 + std::exp2(2 / (2 - d))) * std::sqrt(F1 / p.m) * phase_F2(p) * std::pow(p.gamma, 1 - d / 2);
    } else if (d == 2) {
        const double r = std::sqrt(p.m) / lm;
        v = p.gamma * lm / std::sqrt(p.m) +
            15 * std::sqrt(F1 / p.m) * std::ceil(std::log2(r)) * std::log(c1 * std::pow(6 * r, 5));
    } else {
        const double r = std::pow(p.m / lm, 1 / d);
        v = p.gamma * std::pow(lm / p.m, 1 / d) *
            (1 + 10 * (1 + std::exp2(2 / (d - 2))) * std::pow(1 / p.gamma, d / 2) * std::sqrt(F1 / lm) *
                     std::log(c1 * std::pow(6 * r, 5)));
    }
    return finite_or_throw(v, "Rademacher phase bound");
}

double guaranteed_risk_l2(const BoundParams& p) {
    return finite_or_throw(2 / p.gamma * rademacher_phase_bound(p) + std::sqrt(std::log(1 / p.delta) / (2 * p.m)),
                           "L_2 guaranteed risk");
}

double kp_constant(unsigned p) {
    require(p >= 2, "p", "p must be an integer >= 2");
    const double r = std::exp2(p) / (std::exp2(p - 1.0) - 1);
    return r * r;
}

double lp_packing_bound(double eps, double M_F, unsigned p, double d) {
    require(p >= 2, "p", "p must be an integer >= 2");
    require(std::isfinite(eps) && eps > 0, "eps", "eps must be positive");
    require(std::isfinite(M_F) && M_F > 0, "M_F", "M_F must be positive");
    check_dim(d, "d");
    return from_log2(10.0 * p * d * std::log2(12 * M_F * std::pow(p, 1.0 / 7) / eps), "L_p packing bound");
}

}  // namespace capdim
