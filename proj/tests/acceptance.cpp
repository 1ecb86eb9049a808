// Acceptance run: one PASS/FAIL line per criterion, followed by detail lines.
// Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "capdim/bounds.hpp"
#include "capdim/dims.hpp"
#include "capdim/harness.hpp"
#include "capdim/io.hpp"
#include "support/bound_twins.hpp"

using namespace capdim;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr double kTwinTol = 1e-9;
constexpr double kRatioTol = 1e-6;

struct Verdict {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, std::string text) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + std::move(text));
    }
    void note(std::string text) { details.push_back("     " + std::move(text)); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

HarnessConfig config(std::size_t instances) {
    HarnessConfig cfg;
    cfg.seed = kSeed;
    cfg.instances = instances;
    return cfg;
}

void suite(Verdict& v, std::string_view id, std::size_t instances) {
    const VerificationReport r = verify(id, config(instances));
    v.require(r.passed() && r.checks > 0,
              fmt("%s: %zu instances, %zu checks, %zu failures, %zu skipped", r.lemma_id.c_str(), r.instances,
                  r.checks, r.failures, r.skipped));
    for (const auto& n : r.notes) {
        if (n.rfind("instance ", 0) == 0) v.note("  " + n);
    }
}

Verdict criterion1() {
    Verdict v;
    const FiniteFunctionClass G = load_class(CAPDIM_DATA_DIR "/example1.json");
    const ScoreClass rho = margin_class(G);
    const Rational q(1, 4);
    const std::size_t fat = dimension(rho, q, ShatterKind::fat).dimension;
    const std::size_t gd = dimension(rho, q, ShatterKind::graph).dimension;
    const std::size_t nd = dimension(rho, q, ShatterKind::natarajan).dimension;
    v.require(fat == 1 && gd == 0 && nd == 0, fmt("dims at gamma=1/4: fat=%zu graph=%zu natarajan=%zu", fat, gd, nd));
    const std::vector<Rational> r1{Rational(1, 4), Rational(-1, 4), Rational(-3, 8)};
    const std::vector<Rational> r2{Rational(-1, 4), Rational(0), Rational(0)};
    bool rows = true;
    for (Eigen::Index k = 0; k < 3; ++k) {
        rows = rows && rho.values()(0, k) == r1[static_cast<std::size_t>(k)] &&
               rho.values()(1, k) == r2[static_cast<std::size_t>(k)];
    }
    v.require(rows, "margin rows (1/4, -1/4, -3/8) and (-1/4, 0, 0), exact");
    return v;
}

Verdict criterion2() {
    Verdict v;
    suite(v, "ordering", 200);
    return v;
}

Verdict criterion3() {
    Verdict v;
    for (const char* id : {"lemma4", "lemma5", "lemma6", "lemma7", "lemma8"}) suite(v, id, 200);
    std::size_t points = 0, violations = 0;
    std::string first;
    for (const double gamma : {0.125, 0.25, 0.5, 1.0}) {
        for (const double ratio : {1.0, 0.5, 0.25}) {
            for (int d = 0; d <= 6; ++d) {
                for (int n = std::max(1, d); n <= 64; ++n) {
                    const double eps = gamma * ratio;
                    ++points;
                    const double l5 = packing_bound_linfty_G_log2(eps, gamma, n, d);
                    const double l4 = packing_bound_linfty_G_old_log2(eps, gamma, n, d);
                    if (l5 > l4 + 1e-12) {
                        if (violations++ == 0) {
                            first = fmt("first at eps=%g gamma=%g n=%d d=%d: log2 %.4f > %.4f", eps, gamma, n, d, l5, l4);
                        }
                    }
                }
            }
        }
    }
    v.require(violations == 0,
              fmt("new L_inf graph packing bound <= old one pointwise: %zu of %zu grid points violate", violations, points));
    if (violations > 0) v.note(first);
    return v;
}

Verdict criterion4() {
    Verdict v;
    for (const char* id : {"sandwich", "discretization", "strong_vs_margin"}) suite(v, id, 200);
    return v;
}

Verdict criterion5() {
    Verdict v;
    suite(v, "separation", 200);
    return v;
}

Verdict criterion6() {
    Verdict v;
    suite(v, "corollary1", 200);
    return v;
}

Verdict criterion7() {
    Verdict v;
    suite(v, "lemma10", 100);
    return v;
}

Verdict criterion8() {
    Verdict v;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    std::string worst_name = "none";
    const auto cmp = [&](const char* name, double got, long double want) {
        const long double err = std::fabs(static_cast<long double>(got) - want) / std::max(1.0L, std::fabs(want));
        if (static_cast<double>(err) > worst) {
            worst = static_cast<double>(err);
            worst_name = name;
        }
    };
    for (int i = 0; i < 1000; ++i) {
        const double gamma = 0.05 + 0.95 * u(rng);
        const double eps = gamma * (0.02 + 0.98 * u(rng));
        const double d = (rng() % 2 == 0) ? static_cast<double>(rng() % 9) : 8 * u(rng);
        const double n = std::max(1.0, std::ceil(d)) + static_cast<double>(rng() % 200);
        const int C = 3 + static_cast<int>(rng() % 30);
        cmp("lemma4", packing_bound_linfty_G_old_log2(eps, gamma, n, d), twin::lemma4_log2(eps, gamma, n, d));
        cmp("lemma5", packing_bound_linfty_G_log2(eps, gamma, n, d), twin::lemma5_log2(eps, gamma, n, d));
        cmp("lemma6", packing_bound_l2_G_log2(eps, gamma, d), twin::lemma6_log2(eps, gamma, d));
        cmp("lemma7", packing_bound_linfty_N_log2(eps, gamma, n, C, d), twin::lemma7_log2(eps, gamma, n, C, d));
        cmp("lemma8", packing_bound_l2_N_log2(eps, gamma, C, d), twin::lemma8_log2(eps, gamma, C, d));
        cmp("lemma2", graph_to_natarajan_bound(C, d), twin::lemma2(C, d));
        cmp("K_C", decomposition_constant(C), twin::k_C(C));
        const std::vector<double> dims(static_cast<std::size_t>(C), d);
        cmp("lemma3", fat_decomposition_bound(eps, C, 1 + gamma, dims),
            twin::lemma3(eps, C, 1 + gamma, std::vector<long double>(dims.begin(), dims.end())));
        cmp("lemma10", svm_natarajan_bound(C, 1 + gamma, 1 + eps, gamma), twin::lemma10(C, 1 + gamma, 1 + eps, gamma));
        const unsigned p = 2 + static_cast<unsigned>(i % 5);
        cmp("lp_packing", std::log2(lp_packing_bound(eps, 1, p, d / 8)), twin::lp_packing_log2(eps, 1, p, d / 8));
        cmp("kp", kp_constant(p), twin::kp(p));

        BoundParams bp;
        bp.C = C;
        bp.gamma = gamma;
        bp.delta = 0.001 + 0.5 * u(rng);
        bp.M_G = 1 + 4 * u(rng);
        bp.K1 = 0.1 + 3 * u(rng);
        bp.K2 = 0.1 + 3 * u(rng);
        bp.d_GC = 0.05 + 1.95 * u(rng);
        const int regime = static_cast<int>(rng() % 3);
        bp.d_Ggamma = regime == 0 ? 0.05 + 1.9 * u(rng) : regime == 1 ? 2.0 : 2.1 + 4 * u(rng);
        bp.m = 4 + std::floor(std::exp(20 * u(rng)));
        const double e = 0.3 * gamma;
        cmp("hypothesis", hypothesis_nat_dim(e, bp), twin::hyp(e, bp.K1, bp.K2, C, bp.d_GC, bp.d_Ggamma));
        cmp("entropy_l2_old", metric_entropy_l2(e, bp, Pathway::old_bound),
            twin::entropy_l2_old(e, C, bp.M_G, bp.K2, bp.d_Ggamma));
        cmp("entropy_l2_new", metric_entropy_l2(e, bp, Pathway::new_bound),
            twin::entropy_l2_new(e, C, gamma, bp.K1, bp.K2, bp.d_GC, bp.d_Ggamma));
        const double power = std::pow(8 / gamma, bp.d_Ggamma);
        if (bp.m >= 0.5 * bp.K_rho() * std::pow(C, bp.d_GC) * power && bp.m >= 0.5 * bp.K2 * power) {
            cmp("entropy_linf_old", metric_entropy_linfty(bp, Pathway::old_bound),
                twin::entropy_linf_old(bp.m, C, gamma, bp.M_G, bp.K2, bp.d_Ggamma));
            const double ent = metric_entropy_linfty(bp, Pathway::new_bound);
            cmp("entropy_linf_new", ent, twin::entropy_linf_new(bp.m, C, gamma, bp.K1, bp.K2, bp.d_GC, bp.d_Ggamma));
            cmp("risk_linf", guaranteed_risk_linfty(bp, ent), twin::risk_linf(bp.m, bp.delta, ent));
        }
        cmp("F1", phase_F1(bp), twin::F1(bp.d_Ggamma, bp.K1, bp.K2, C, bp.d_GC));
        if (bp.d_Ggamma < 2) cmp("F2", phase_F2(bp), twin::F2(C, bp.d_Ggamma));
        cmp("phase", rademacher_phase_bound(bp), twin::phase(bp.m, C, gamma, bp.K1, bp.K2, bp.d_GC, bp.d_Ggamma));
        cmp("risk_l2", guaranteed_risk_l2(bp),
            twin::risk_l2(bp.m, C, gamma, bp.delta, bp.K1, bp.K2, bp.d_GC, bp.d_Ggamma));
    }
    v.require(worst <= kTwinTol, fmt("twins on 1000 tuples: worst relative error %.3g (%s), tolerance %.0e", worst,
                                     worst_name.c_str(), kTwinTol));

    struct Spot {
        const char* name;
        double got, want, tol;
    };
    BoundParams e100;
    e100.m = 100;
    e100.C = 3;
    BoundParams f1 = e100;
    f1.C = 4;
    BoundParams ph;
    ph.m = 10000;
    BoundParams hyp;
    hyp.C = 4;
    hyp.d_GC = 2;
    const double e = std::numbers::e;
    const std::vector<Spot> spots{
        {"old L_inf graph packing at (1, 1, 4, 2)", packing_bound_linfty_G_old(1, 1, 4, 2), 2 * std::pow(16.0, 7), 1e-9},
        {"L_inf graph packing at (1, 1, 4, 2)", packing_bound_linfty_G(1, 1, 4, 2), std::pow(24.0, 2 * std::log2(4 * e)), 1e-9},
        {"L_2 graph packing at (1, 1, 1)", packing_bound_l2_G(1, 1, 1), std::pow(5.0, 20), 1e-9},
        {"L_inf Natarajan packing at (1, 1, 4, 3, 2)", packing_bound_linfty_N(1, 1, 4, 3, 2),
         std::pow(24 * std::sqrt(2.0), 2 * std::log2(8 * e)), 1e-9},
        {"L_2 Natarajan packing log2 at (1, 1, 3, 1)", packing_bound_l2_N_log2(1, 1, 3, 1), 4 * 8.2549 * std::log2(15552.0), 1e-4},
        {"K_3", decomposition_constant(3), 16, 0},
        {"K_10", decomposition_constant(10), 6.25, 1e-12},
        {"fat decomposition at (1/4, 3, 1, {1,1,1})", fat_decomposition_bound(0.25, 3, 1, {1, 1, 1}),
         480 * std::log2(6.0) / std::log(2.0) * std::log(192 * std::pow(std::log2(6.0), 1.0 / 7)), 1e-9},
        {"graph-to-Natarajan at (3, 1)", graph_to_natarajan_bound(3, 1), 187.2, 1e-3},
        {"SVM Natarajan at (3, 2, 1, 1/2)", svm_natarajan_bound(3, 2, 1, 0.5), 12, 1e-12},
        {"SVM Natarajan at gamma = Lambda Lambda_X", svm_natarajan_bound(3, 1, 1, 1), 0.75, 1e-12},
        {"hypothesis dimension", hypothesis_nat_dim(1, hyp), 16, 1e-12},
        {"new L_inf entropy", metric_entropy_linfty(e100, Pathway::new_bound), 3 * std::pow(std::log2(4800.0), 2) * 8,
         1e-9},
        {"old L_inf entropy", metric_entropy_linfty(e100, Pathway::old_bound),
         3 * (1 + std::pow(std::log2(12800.0), 2) * 8), 1e-9},
        {"F1", phase_F1(f1), 48, 1e-12},
        {"F2", phase_F2(e100), 13.29, 1e-3},
        {"phase bound at m = 10^4", rademacher_phase_bound(ph), 39.9, 2e-3},
        {"K_2", kp_constant(2), 16, 0},
        {"K_30", kp_constant(30), 4, 1e-6},
        {"L_p packing at d = 0", lp_packing_bound(0.5, 1, 3, 0), 1, 0},
    };
    std::size_t bad = 0;
    for (const auto& s : spots) {
        const bool ok = std::fabs(s.got - s.want) <= s.tol * std::max(1.0, std::fabs(s.want));
        if (!ok) {
            ++bad;
            v.note(fmt("spot %s: got %.10g, want %.10g", s.name, s.got, s.want));
        }
    }
    v.require(bad == 0, fmt("%zu spot values, %zu outside tolerance", spots.size(), bad));
    return v;
}

// Confidence interval minus its gamma- and C-free tail.
double ci_lead(const BoundParams& p) { return guaranteed_risk_l2(p) - std::sqrt(std::log(1 / p.delta) / (2 * p.m)); }

Verdict criterion9() {
    Verdict v;
    double worst_gamma = 0, worst_c = 0, worst_new = 0, worst_old = 0;
    bool old_larger = true;
    for (const double d : {0.25, 0.5, 1.0, 1.5, 1.9}) {
        for (const double m : {1e4, 1e6, 1e9}) {
            BoundParams p;
            p.m = m;
            p.d_Ggamma = d;
            p.d_GC = 1;
            for (const double g : {1.0, 0.5, 0.25}) {
                p.gamma = g;
                const double a = ci_lead(p);
                BoundParams h = p;
                h.gamma = g / 2;
                worst_gamma = std::max(worst_gamma, std::fabs(ci_lead(h) / a / std::exp2(d / 2) - 1));
            }
            p.gamma = 1;
            for (const int C : {3, 5, 10}) {
                for (const int C2 : {4, 20, 100}) {
                    if (C2 <= C) continue;
                    for (const double dgc : {0.5, 1.0, 2.0}) {
                        BoundParams a = p, b = p;
                        a.C = C;
                        b.C = C2;
                        a.d_GC = b.d_GC = dgc;
                        const double want =
                            std::pow(static_cast<double>(C2) / C, dgc / 2) * phase_F2(b) / phase_F2(a);
                        worst_c = std::max(worst_c, std::fabs(ci_lead(b) / ci_lead(a) / want - 1));
                    }
                }
            }
        }
    }
    for (const double d : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        for (const double g : {1.0, 0.5}) {
            BoundParams p;
            p.m = 1e12;
            p.d_Ggamma = d;
            p.gamma = g;
            const double n1 = metric_entropy_linfty(p, Pathway::new_bound);
            const double o1 = metric_entropy_linfty(p, Pathway::old_bound);
            BoundParams h = p;
            h.gamma = g / 2;
            const double n2 = metric_entropy_linfty(h, Pathway::new_bound);
            const double o2 = metric_entropy_linfty(h, Pathway::old_bound);
            worst_new = std::max(worst_new, std::fabs(n2 / n1 / std::exp2(d) - 1));
            const auto lsq = [&](double gg) {
                const double l = std::log2(128 * p.M_G * p.M_G * p.m / (gg * gg));
                return l * l;
            };
            const double pw = [&](double gg) { return std::pow(8 / gg, d); }(g);
            const double want = (1 + p.K2 * lsq(g / 2) * pw * std::exp2(d)) / (1 + p.K2 * lsq(g) * pw);
            worst_old = std::max(worst_old, std::fabs(o2 / o1 / want - 1));
            old_larger = old_larger && o2 / o1 > n2 / n1;
        }
    }
    v.require(worst_gamma <= kRatioTol,
              fmt("new confidence interval, gamma halved: ratio 2^(d/2), worst relative deviation %.2g", worst_gamma));
    v.require(worst_c <= kRatioTol,
              fmt("new confidence interval, C grown: ratio (C'/C)^(d_GC/2) F2(C')/F2(C), worst deviation %.2g", worst_c));
    {
        BoundParams a, b;
        a.m = b.m = 1e6;
        a.C = 10;
        b.C = 100;
        v.note(fmt("C 10 -> 100 at d_GC = 1: exact ratio %.4f, asymptotic (C'/C)^(1/2) ln C'/ln C = %.4f",
                   ci_lead(b) / ci_lead(a), std::sqrt(10.0) * std::log(100.0) / std::log(10.0)));
    }
    v.require(worst_new <= kRatioTol, fmt("new L_inf entropy, gamma halved: ratio 2^d, worst deviation %.2g", worst_new));
    v.require(worst_old <= kRatioTol && old_larger,
              fmt("old L_inf entropy keeps the log2^2 gamma factor: worst deviation %.2g, exceeds new ratio: %s",
                  worst_old, old_larger ? "yes" : "no"));
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"Two-function example reproduction", criterion1},
        {"Dimension ordering suite", criterion2},
        {"Packing-bound suites", criterion3},
        {"Sandwich and discretization", criterion4},
        {"Separation certificates", criterion5},
        {"Rademacher chain", criterion6},
        {"Linear SVM Natarajan bound", criterion7},
        {"Evaluator integrity", criterion8},
        {"Scaling laws", criterion9},
    };
    const double limits[] = {1, 120, 0, 0, 0, 0, 0, 0, 0};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v = criteria[i].second();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (limits[i] > 0) v.require(secs < limits[i], fmt("runtime %.3f s < %.0f s", secs, limits[i]));
        failed += v.pass ? 0 : 1;
        std::printf("criterion %zu %s  %s (%.2f s)\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, secs);
        for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
