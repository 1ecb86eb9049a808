#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace capdim {

/// Parameter record for the closed-form evaluators. K_rho = K1 * K2.
struct BoundParams {
    double m = 1;
    int C = 3;
    double gamma = 1;
    double delta = 0.05;
    double M_G = 1;
    double K1 = 1;
    double K2 = 1;
    double d_GC = 1;      // in (0, 2]
    double d_Ggamma = 1;  // > 0
    double Lambda = 1;
    double Lambda_X = 1;

    [[nodiscard]] double K_rho() const noexcept { return K1 * K2; }
};

enum class Pathway { old_bound, new_bound };

/// Positive nonincreasing radii h(0) >= ... >= h(N).
class ChainSchedule {
public:
    explicit ChainSchedule(std::vector<double> h);
    /// h(j) = gamma * 2^(-2j / (2 - d)) for j = 0..N; requires d in (0, 2).
    static ChainSchedule geometric(double gamma, double d, std::size_t N);

    [[nodiscard]] std::size_t depth() const noexcept { return h_.size() - 1; }
    [[nodiscard]] double operator()(std::size_t j) const { return h_.at(j); }
    [[nodiscard]] const std::vector<double>& radii() const noexcept { return h_; }

private:
    std::vector<double> h_;
};

// Packing bounds. Each has a log2 companion for magnitudes beyond double range;
// the plain form throws PreconditionError("overflow") when not finite.

/// 2 (4 gamma^2 n / eps^2)^ceil(d log2(2 gamma e n / (d eps))); d = 0 gives 2.
[[nodiscard]] double packing_bound_linfty_G_old(double eps, double gamma, double n, double dG);
[[nodiscard]] double packing_bound_linfty_G_old_log2(double eps, double gamma, double n, double dG);
/// (6 gamma n / eps)^(d log2(2 gamma e n / (d eps))); d = 0 gives 1.
[[nodiscard]] double packing_bound_linfty_G(double eps, double gamma, double n, double dG);
[[nodiscard]] double packing_bound_linfty_G_log2(double eps, double gamma, double n, double dG);
/// (5 gamma / eps)^(20 d).
[[nodiscard]] double packing_bound_l2_G(double eps, double gamma, double dG);
[[nodiscard]] double packing_bound_l2_G_log2(double eps, double gamma, double dG);
/// (6 gamma sqrt(C-1) n / eps)^(d log2(2 gamma (C-1) e n / (d eps))).
[[nodiscard]] double packing_bound_linfty_N(double eps, double gamma, double n, int C, double dN);
[[nodiscard]] double packing_bound_linfty_N_log2(double eps, double gamma, double n, int C, double dN);
/// ((C-1)(6 gamma/eps)^5)^(4 log2((6 gamma/eps)^3 sqrt(C-1)) d).
[[nodiscard]] double packing_bound_l2_N(double eps, double gamma, int C, double dN);
[[nodiscard]] double packing_bound_l2_N_log2(double eps, double gamma, int C, double dN);

/// min{4 (C/(C-2))^2, 16}.
[[nodiscard]] double decomposition_constant(int C);
/// (10 K_C log2(2C) / ln 2) ln(48 M_G log2(2C)^(1/7) / eps) sum_k fat_dims[k].
[[nodiscard]] double fat_decomposition_bound(double eps, int C, double M_G, const std::vector<double>& fat_dims);

[[nodiscard]] double graph_to_natarajan_alpha(int C);
[[nodiscard]] double graph_to_natarajan_beta(int C);
/// 42 (ln(C-1) + 1)^alpha(C) dN^beta(C).
[[nodiscard]] double graph_to_natarajan_bound(int C, double dN);

/// Sum of the pairwise hull fat dimensions, C(C-1)/2 entries.
[[nodiscard]] double natarajan_structural_bound(int C, const std::vector<double>& pair_fat_dims);

/// C (Lambda Lambda_X / (2 gamma))^2.
[[nodiscard]] double svm_natarajan_bound(int C, double Lambda, double Lambda_X, double gamma);

/// K_rho C^d_GC eps^-d_Ggamma.
[[nodiscard]] double hypothesis_nat_dim(double eps, const BoundParams& params);

/// log2 of the L_inf covering number at radius gamma/2 on 2m points.
[[nodiscard]] double metric_entropy_linfty(const BoundParams& params, Pathway variant);
/// Natural log of the L_2 covering number at radius eps.
[[nodiscard]] double metric_entropy_l2(double eps, const BoundParams& params, Pathway variant);

/// Product of per-category proper covering numbers.
[[nodiscard]] double covering_decomposition_bound(const std::vector<std::uint64_t>& per_category);

/// sqrt((2/m)(entropy_log2 ln 2 + ln(2/delta))) + 1/m.
[[nodiscard]] double guaranteed_risk_linfty(const BoundParams& params, double entropy_log2);

/// entropy(r) is ln N(r) >= 0.
using EntropyFn = std::function<double(double)>;
/// h(N) + 2 sum_{j=1..N} (h(j) + h(j-1)) sqrt(entropy(h(j)) / n).
[[nodiscard]] double chaining_bound(const EntropyFn& entropy, const ChainSchedule& schedule, double n);
/// Single j-th summand of the chaining sum.
[[nodiscard]] double chaining_term(const EntropyFn& entropy, const ChainSchedule& schedule, std::size_t j, double n);

/// 12^d K_rho C^d_GC.
[[nodiscard]] double phase_F1(const BoundParams& params);
/// ln sqrt(C-1) + 5 (ln sqrt 6 + (1 + ln 2) / (2 - d)); requires d < 2.
[[nodiscard]] double phase_F2(const BoundParams& params);
/// j-th summand of the chained bound with the new L_2 entropy; 0 when h(j) > gamma.
[[nodiscard]] double chained_term(const BoundParams& params, const ChainSchedule& schedule, std::size_t j);
/// h(N) + 5 sqrt(F1/m) sum_{j in J} (h(j)+h(j-1)) h(j)^(-d/2) ln((C-1)(6 gamma/h(j))^5).
[[nodiscard]] double chained_rademacher_bound(const BoundParams& params, const ChainSchedule& schedule);

/// Three-regime bound on R_m(rho_{G,gamma}); m >= 4.
[[nodiscard]] double rademacher_phase_bound(const BoundParams& params);
/// (2/gamma) rademacher_phase_bound + sqrt(ln(1/delta) / (2m)).
[[nodiscard]] double guaranteed_risk_l2(const BoundParams& params);

/// (2^p / (2^(p-1) - 1))^2, p >= 2.
[[nodiscard]] double kp_constant(unsigned p);
/// (12 M_F p^(1/7) / eps)^(10 p d).
[[nodiscard]] double lp_packing_bound(double eps, double M_F, unsigned p, double d);

}  // namespace capdim
