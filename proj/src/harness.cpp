#include "capdim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "capdim/bounds.hpp"
#include "capdim/errors.hpp"
#include "capdim/metrics.hpp"
#include "capdim/rademacher.hpp"
#include "capdim/rng.hpp"

namespace capdim {

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = lemma_id;
    j["seed"] = seed;
    j["instances"] = instances;
    j["checks"] = checks;
    j["failures"] = failures;
    j["skipped"] = skipped;
    j["worst_slack"] = std::isfinite(worst_slack) ? nlohmann::json(worst_slack) : nlohmann::json(nullptr);
    j["notes"] = notes;
    return j;
}

std::size_t worker_count() {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CAPDIM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

std::vector<Rational> value_grid(const Rational& step, const Rational& M) {
    require(step > Rational(0), "grid_step", "grid step must be positive");
    require(M > Rational(0), "bound", "grid bound must be positive");
    std::vector<Rational> out;
    const std::int64_t k = (M / step).floor();
    for (std::int64_t i = -k; i <= k; ++i) out.push_back(step * Rational(i));
    return out;
}

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

std::string str(const Rational& r) { return r.str(); }

}  // namespace

FiniteFunctionClass gen_class(std::uint64_t seed, std::size_t num_points, std::size_t num_categories,
                              std::size_t num_functions, const std::vector<Rational>& grid, const Rational& bound) {
    require(!grid.empty(), "value_grid", "value grid must not be empty");
    std::mt19937_64 rng(seed);
    std::vector<NamedTable> fns;
    const auto names = numbered("g", num_functions);
    for (std::size_t f = 0; f < num_functions; ++f) {
        RationalMatrix t(static_cast<Eigen::Index>(num_points), static_cast<Eigen::Index>(num_categories));
        for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = grid[bounded(rng, grid.size())];
        fns.push_back({names[f], std::move(t)});
    }
    return FiniteFunctionClass(num_categories, bound, numbered("x", num_points), std::move(fns));
}

namespace {

// Largest factor s = a/1024 (a <= 1024) with s^2 * sq <= limit^2, exact.
Rational shrink_factor(const Rational& sq, const Rational& limit) {
    if (sq <= limit * limit) return Rational(1);
    const double guess = limit.to_double() / std::sqrt(sq.to_double());
    std::int64_t a = std::min<std::int64_t>(1024, static_cast<std::int64_t>(std::floor(guess * 1024)));
    while (a > 0 && Rational(a, 1024) * Rational(a, 1024) * sq > limit * limit) --a;
    return Rational(a, 1024);
}

}  // namespace

FiniteFunctionClass gen_svm_class(const SvmSampleSpec& spec) {
    require(spec.Lambda > Rational(0), "Lambda", "Lambda must be positive");
    require(spec.Lambda_X > Rational(0), "Lambda_X", "Lambda_X must be positive");
    require(spec.feature_dim >= 1, "feature_dim", "feature dimension must be at least 1");
    require(spec.num_functions >= 1 && spec.num_points >= 1, "spec", "need functions and points");
    require(spec.num_categories >= 3, "num_categories", "C must be at least 3");
    std::mt19937_64 rng(spec.seed);
    const auto d = static_cast<Eigen::Index>(spec.feature_dim);
    const auto C = static_cast<Eigen::Index>(spec.num_categories);
    const auto draw = [&] { return Rational(static_cast<std::int64_t>(bounded(rng, 9)) - 4, 4); };

    RationalMatrix X(static_cast<Eigen::Index>(spec.num_points), d);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = draw();
        const Rational s = shrink_factor(X.row(i).squaredNorm(), spec.Lambda_X);
        X.row(i) *= s;
    }
    const Rational M = max(Rational(1), spec.Lambda * spec.Lambda_X);
    std::vector<NamedTable> fns;
    const auto names = numbered("h", spec.num_functions);
    for (std::size_t f = 0; f < spec.num_functions; ++f) {
        RationalMatrix W(C, d);
        for (Eigen::Index i = 0; i < W.size(); ++i) W(i) = draw();
        // Sum-zero constraint: subtract the mean weight vector.
        const RationalRow mean = W.colwise().sum() / Rational(C);
        W.rowwise() -= mean;
        W *= shrink_factor(W.squaredNorm(), spec.Lambda);
        fns.push_back({names[f], X * W.transpose()});
    }
    return FiniteFunctionClass(spec.num_categories, M, numbered("x", spec.num_points), std::move(fns));
}

FiniteFunctionClass example1_class() {
    RationalMatrix g1(1, 3);
    g1 << Rational(3, 4), Rational(1, 4), Rational(0);
    RationalMatrix g2(1, 3);
    g2 << Rational(0), Rational(1, 2), Rational(1, 2);
    return FiniteFunctionClass(3, Rational(1), {"x"}, {{"g1", g1}, {"g2", g2}});
}

std::vector<SeparatedPair> separated_pairs(const FiniteFunctionClass& G, const Rational& gamma, const Rational& eta) {
    require(gamma > Rational(0) && gamma <= Rational(1), "gamma", "gamma must lie in (0, 1]");
    require(eta > Rational(0) && eta <= gamma / Rational(2), "eta", "eta must lie in (0, gamma/2]");
    const ScoreClass rho = margin_class(G);
    const ScoreClass sq = discretize(squash(rho, gamma), eta);
    const ScoreClass disc = discretize(rho, eta);
    std::vector<SeparatedPair> out;
    for (std::size_t pos = 0; pos < rho.domain_size(); ++pos) {
        const LabeledPoint z = rho.domain()[pos];
        for (std::size_t g = 0; g < G.num_functions(); ++g) {
            for (std::size_t h = 0; h < G.num_functions(); ++h) {
                if (sq.at(g, pos) - sq.at(h, pos) < Rational(2)) continue;
                SeparatedPair p{g, h, z, sq.at(g, pos).num() - 1, 0};
                std::optional<Rational> best;
                for (std::size_t k = 0; k < G.num_categories(); ++k) {
                    if (k == z.y) continue;
                    const Rational& v = disc.at(h, LabeledPoint{z.x, k});
                    if (!best || v > *best) {
                        best = v;
                        p.c = k;
                    }
                }
                out.push_back(p);
            }
        }
    }
    return out;
}

SeparationReplay replay_separation(const FiniteFunctionClass& G, const Rational& gamma, const Rational& eta,
                                   const SeparatedPair& pair) {
    const ScoreClass rho = margin_class(G);
    const std::vector<std::size_t> two{pair.g, pair.g_prime};
    const ScoreClass sq = discretize(squash(rho, gamma), eta).select_functions(two);
    const ScoreClass disc = discretize(rho, eta).select_functions(two);
    const Witness w{{Rational(pair.b)}, {}};
    const Witness wc{{Rational(pair.b)}, {pair.c}};
    SeparationReplay r;
    r.strong_fat = is_shattered(sq, {pair.z}, Rational(1), ShatterKind::strong_fat, w);
    r.strong_g = is_shattered(disc, {pair.z}, Rational(1), ShatterKind::strong_g, w);
    r.strong_n = is_shattered(disc, {pair.z}, Rational(1), ShatterKind::strong_n, wc);
    return r;
}

namespace {

constexpr double kTol = 1e-12;
constexpr std::size_t kMaxNotes = 12;
constexpr std::uint64_t kPackingBudget = 1'000'000;

struct Outcome {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;
    double slack = std::numeric_limits<double>::infinity();
    std::vector<std::string> notes;

    void note(std::string s) {
        if (notes.size() < kMaxNotes) notes.push_back(std::move(s));
    }
    void expect(bool ok, const std::string& what, double slack_value = std::numeric_limits<double>::infinity()) {
        ++checks;
        slack = std::min(slack, slack_value);
        if (!ok) {
            ++failures;
            note("FAIL " + what);
        }
    }
    void expect_le(double lhs, double rhs, const std::string& what) {
        std::ostringstream os;
        os << what << ": " << lhs << " <= " << rhs;
        expect(lhs <= rhs, os.str(), rhs - lhs);
    }
    // lhs <= 2^rhs_log2, with slack measured in the linear domain where it fits.
    void expect_le_log2(double lhs, double rhs_log2, const std::string& what) {
        std::ostringstream os;
        os << what << ": " << lhs << " <= 2^" << rhs_log2;
        const double rhs = std::exp2(std::min(rhs_log2, 1000.0));
        expect(std::log2(lhs) <= rhs_log2 + kTol, os.str(), rhs - lhs);
    }
};

struct Instance {
    std::mt19937_64 rng;
    FiniteFunctionClass G;
};

std::uint64_t instance_seed(const HarnessConfig& cfg, std::size_t index) {
    return splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(index) + 0x51ED2701ULL));
}

Instance random_instance(const HarnessConfig& cfg, std::size_t index) {
    std::mt19937_64 rng(instance_seed(cfg, index));
    const std::size_t points = 1 + bounded(rng, cfg.max_points);
    const std::size_t fns = 2 + bounded(rng, std::max<std::size_t>(cfg.max_functions, 2) - 1);
    FiniteFunctionClass G =
        gen_class(rng(), points, cfg.num_categories, fns, value_grid(cfg.grid_step, cfg.bound), cfg.bound);
    return {std::move(rng), std::move(G)};
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[bounded(rng, v.size())];
}

Sample random_sample(std::mt19937_64& rng, const FiniteFunctionClass& G, std::size_t n) {
    std::vector<LabeledPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back({bounded(rng, G.num_points()), bounded(rng, G.num_categories())});
    }
    return Sample(std::move(pts));
}

std::string at(const Rational& gamma) { return " at gamma=" + str(gamma); }

const std::vector<PNorm>& norms() {
    static const std::vector<PNorm> ps{PNorm::finite(1), PNorm::finite(2), PNorm::infinity()};
    return ps;
}

// ---------------------------------------------------------------------------

Outcome run_example1(const HarnessConfig&, std::size_t) {
    Outcome o;
    const FiniteFunctionClass G = example1_class();
    const ScoreClass rho = margin_class(G);
    const RationalMatrix expected =
        (RationalMatrix(2, 3) << Rational(1, 4), Rational(-1, 4), Rational(-3, 8), Rational(-1, 4), Rational(0),
         Rational(0))
            .finished();
    o.expect(rho.values() == expected, "rho rows equal (1/4, -1/4, -3/8) and (-1/4, 0, 0)", 0);
    const Rational gamma(1, 4);
    const auto fat = dimension(rho, gamma, ShatterKind::fat);
    const auto graph = dimension(rho, gamma, ShatterKind::graph);
    const auto nat = dimension(rho, gamma, ShatterKind::natarajan);
    o.expect(fat.dimension == 1, "fat dimension 1, got " + std::to_string(fat.dimension), 0);
    o.expect(graph.dimension == 0, "graph dimension 0, got " + std::to_string(graph.dimension), 0);
    o.expect(nat.dimension == 0, "natarajan dimension 0, got " + std::to_string(nat.dimension), 0);
    o.expect(is_shattered(rho, {{0, 0}}, gamma, ShatterKind::fat, Witness{{Rational(0)}, {}}),
             "{(x,1)} is fat-shattered with b = 0");
    if (fat.certificate) o.expect(replay(rho, *fat.certificate), "fat certificate replays");
    o.expect(classify(G, "g1", 0) == std::optional<std::size_t>(0), "g1 classifies x as category 1");
    o.expect(!classify(G, "g2", 0).has_value(), "g2 rejects x on a tie");
    return o;
}

Outcome run_ordering(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    const Instance inst = random_instance(cfg, index);
    const ScoreClass rho = margin_class(inst.G);
    std::vector<Rational> gammas = cfg.gammas;
    std::sort(gammas.begin(), gammas.end());
    std::array<std::size_t, 3> prev{};
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const Rational& gamma = gammas[gi];
        std::array<DimensionResult, 3> r{dimension(rho, gamma, ShatterKind::natarajan, cfg.caps),
                                         dimension(rho, gamma, ShatterKind::graph, cfg.caps),
                                         dimension(rho, gamma, ShatterKind::fat, cfg.caps)};
        const auto n = static_cast<double>(r[0].dimension);
        const auto g = static_cast<double>(r[1].dimension);
        const auto f = static_cast<double>(r[2].dimension);
        o.expect_le(n, g, "N-dim <= G-dim" + at(gamma));
        o.expect_le(g, f, "G-dim <= fat-dim" + at(gamma));
        for (std::size_t k = 0; k < 3; ++k) {
            if (r[k].certificate) o.expect(replay(rho, *r[k].certificate), "certificate replay" + at(gamma));
            if (gi > 0) {
                o.expect(r[k].dimension <= prev[k], "dimension antitone in gamma" + at(gamma));
            }
            prev[k] = r[k].dimension;
        }
        if (r[0].dimension >= 1) o.note("(instance, gamma) with N-dim >= 1");
        if (r[2].dimension >= 2) o.note("(instance, gamma) with fat-dim >= 2");
    }
    return o;
}

Outcome run_lemma1(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const FiniteFunctionClass& G = inst.G;
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const Rational eps = pick(inst.rng, cfg.gammas);
    const Sample zs = random_sample(inst.rng, G, 1 + bounded(inst.rng, cfg.max_sample));
    const ScoreClass rho = margin_class(G);
    const ScoreClass rho_g = squash(rho, gamma);
    const Rational C(static_cast<std::int64_t>(G.num_categories()));
    for (const PNorm& p : norms()) {
        const Radius r = Radius::of(eps, p);
        const auto n_sq = static_cast<double>(proper_covering_number(rho_g, zs, r).value);
        const auto n_rho = static_cast<double>(proper_covering_number(rho, zs, r).value);
        std::vector<std::uint64_t> per;
        for (std::size_t k = 0; k < G.num_categories(); ++k) {
            std::vector<LabeledPoint> xs;
            for (const auto& z : zs.entries()) xs.push_back({z.x, k});
            per.push_back(proper_covering_number(component_class(G, k), Sample(xs), Radius::scaled(eps, C, p)).value);
        }
        const double prod = covering_decomposition_bound(per);
        const std::string tag = " (p=" + p.str() + ", eps=" + str(eps) + at(gamma) + ")";
        o.expect_le(n_sq, n_rho, "N(rho_G,gamma) <= N(rho_G)" + tag);
        o.expect_le(n_rho, prod, "N(rho_G) <= prod_k N(G_k)" + tag);
    }
    return o;
}

Outcome run_lemma2(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const ScoreClass rho = margin_class(inst.G);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const auto dG = static_cast<double>(dimension(rho, gamma, ShatterKind::graph, cfg.caps).dimension);
    const auto dN = static_cast<double>(dimension(rho, gamma, ShatterKind::natarajan, cfg.caps).dimension);
    const double rhs = graph_to_natarajan_bound(static_cast<int>(inst.G.num_categories()), dN);
    if (dG >= 2) {
        o.note("G-dim >= 2, inequality checked");
        o.expect_le(dG, rhs, "G-dim <= 42 (ln(C-1)+1)^alpha N-dim^beta" + at(gamma));
    } else {
        // A G-shattered singleton is N-shattered with c = argmax of the negative function.
        o.expect(dG == 0 || dN >= 1, "G-dim 1 implies N-dim >= 1" + at(gamma), rhs - dG);
    }
    return o;
}

// A rational not below eps / (144 log2(2C)), so the component dimensions are
// never overstated.
Rational lemma3_scale(const Rational& eps, std::size_t C) {
    const double v = eps.to_double() / (144 * std::log2(2.0 * static_cast<double>(C)));
    constexpr std::int64_t kDen = std::int64_t{1} << 24;
    return Rational(static_cast<std::int64_t>(std::ceil(v * kDen)) + 1, kDen);
}

Outcome run_lemma3(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const FiniteFunctionClass& G = inst.G;
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const ScoreClass rho = margin_class(G);
    for (const Rational& eps : {gamma / Rational(2), gamma / Rational(4)}) {
        const auto sq = static_cast<double>(dimension(squash(rho, gamma), eps, ShatterKind::fat, cfg.caps).dimension);
        const auto full = static_cast<double>(dimension(rho, eps, ShatterKind::fat, cfg.caps).dimension);
        o.expect_le(sq, full, "eps-dim(rho_G,gamma) <= eps-dim(rho_G) at eps=" + str(eps));
        const Rational scale = lemma3_scale(eps, G.num_categories());
        std::vector<double> comp;
        for (std::size_t k = 0; k < G.num_categories(); ++k) {
            comp.push_back(static_cast<double>(dimension(component_class(G, k), scale, ShatterKind::fat, cfg.caps).dimension));
        }
        const double rhs = fat_decomposition_bound(eps.to_double(), static_cast<int>(G.num_categories()),
                                                   G.bound().to_double(), comp);
        o.expect_le(full, rhs, "eps-dim(rho_G) <= decomposition bound at eps=" + str(eps));
    }
    return o;
}

struct PackingCase {
    Rational gamma;
    Rational eps;
    std::size_t n = 1;
    ScoreClass rho;
};

Outcome run_linf_packing(const HarnessConfig& cfg, std::size_t index, int which) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const FiniteFunctionClass& G = inst.G;
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const Rational eps = bounded(inst.rng, 2) == 0 ? gamma : gamma / Rational(2);
    const ScoreClass rho = margin_class(G);
    const ShatterKind kind = which == 7 ? ShatterKind::natarajan : ShatterKind::graph;
    const std::size_t d = dimension(rho, eps / Rational(4), kind, cfg.caps).dimension;
    const std::size_t lo = std::max<std::size_t>(1, d);
    const std::size_t n = lo + bounded(inst.rng, std::max(cfg.max_sample, lo) - lo + 1);
    const PackingResult M =
        uniform_packing(squash(rho, gamma), n, eps, PNorm::infinity(), kPackingBudget, inst.rng());
    if (!M.exact) {
        ++o.skipped;
        o.note("packing not exhaustive, skipped");
        return o;
    }
    const double e = eps.to_double();
    const double g = gamma.to_double();
    const auto nd = static_cast<double>(n);
    const auto dd = static_cast<double>(d);
    const auto m = static_cast<double>(M.value);
    const std::string tag = " (eps=" + str(eps) + at(gamma) + ", n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")";
    if (which == 4) o.expect_le_log2(m, packing_bound_linfty_G_old_log2(e, g, nd, dd), "M_inf <= old L_inf graph bound" + tag);
    if (which == 5) o.expect_le_log2(m, packing_bound_linfty_G_log2(e, g, nd, dd), "M_inf <= L_inf graph bound" + tag);
    if (which == 7) {
        o.expect_le_log2(m, packing_bound_linfty_N_log2(e, g, nd, static_cast<int>(G.num_categories()), dd),
                         "M_inf <= L_inf Natarajan bound" + tag);
    }
    return o;
}

Outcome run_l2_packing(const HarnessConfig& cfg, std::size_t index, int which) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const FiniteFunctionClass& G = inst.G;
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const Rational eps = bounded(inst.rng, 2) == 0 ? gamma : gamma / Rational(2);
    const ScoreClass rho = margin_class(G);
    const std::size_t n = 1 + bounded(inst.rng, cfg.max_sample);
    const PackingResult M = uniform_packing(squash(rho, gamma), n, eps, PNorm::finite(2), kPackingBudget, inst.rng());
    if (!M.exact) {
        ++o.skipped;
        o.note("packing not exhaustive, skipped");
        return o;
    }
    const double e = eps.to_double();
    const double g = gamma.to_double();
    const auto m = static_cast<double>(M.value);
    const std::string tag = " (eps=" + str(eps) + at(gamma) + ", n=" + std::to_string(n);
    if (which == 6) {
        const std::size_t d = dimension(rho, eps / Rational(24), ShatterKind::graph, cfg.caps).dimension;
        o.expect_le_log2(m, packing_bound_l2_G_log2(e, g, static_cast<double>(d)),
                         "M_2 <= L_2 graph bound" + tag + ", d=" + std::to_string(d) + ")");
    } else {
        const std::size_t d = dimension(rho, eps / Rational(12), ShatterKind::natarajan, cfg.caps).dimension;
        o.expect_le_log2(m, packing_bound_l2_N_log2(e, g, static_cast<int>(G.num_categories()), static_cast<double>(d)),
                         "M_2 <= L_2 Natarajan bound" + tag + ", d=" + std::to_string(d) + ")");
    }
    return o;
}

Outcome lemma9_outcome(const FiniteFunctionClass& G, const Rational& gamma, std::size_t hull_grid_resolution);

Outcome run_lemma9(const HarnessConfig& cfg, std::size_t index) {
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    return lemma9_outcome(inst.G, gamma, cfg.hull_grid_resolution);
}

Outcome run_lemma10(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    std::mt19937_64 rng(instance_seed(cfg, index));
    static const std::vector<Rational> radii{Rational(1, 2), Rational(1), Rational(2)};
    SvmSampleSpec spec;
    spec.feature_dim = 1 + bounded(rng, 3);
    spec.num_points = 1 + bounded(rng, 3);
    spec.num_functions = 2 + bounded(rng, std::min<std::size_t>(cfg.caps.max_functions, 12) - 1);
    spec.Lambda = pick(rng, radii);
    spec.Lambda_X = pick(rng, radii);
    spec.num_categories = 3;
    spec.seed = rng();
    const FiniteFunctionClass G = gen_svm_class(spec);
    const Rational scale = spec.Lambda * spec.Lambda_X;
    const Rational gamma = scale * pick(rng, std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                                                   Rational(1)});
    const ScoreClass rho = margin_class(G);
    const auto dN = static_cast<double>(dimension(rho, gamma, ShatterKind::natarajan, cfg.caps).dimension);
    const double rhs =
        svm_natarajan_bound(3, spec.Lambda.to_double(), spec.Lambda_X.to_double(), gamma.to_double());
    o.expect_le(dN, rhs, "gamma-N-dim <= C (Lambda Lambda_X / 2 gamma)^2" + at(gamma));
    return o;
}

Outcome run_sandwich(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const ScoreClass rho = margin_class(inst.G);
    const ScoreClass F = bounded(inst.rng, 2) == 0 ? rho : squash(rho, gamma);
    const Sample zs = random_sample(inst.rng, inst.G, 1 + bounded(inst.rng, cfg.max_sample));
    const Rational eps = pick(inst.rng, cfg.gammas);
    for (const PNorm& p : norms()) {
        const Radius r = Radius::of(eps, p);
        const auto m2 = static_cast<double>(packing_number(F, zs, r.doubled()).value);
        const auto nc = static_cast<double>(proper_covering_number(F, zs, r).value);
        const auto m1 = static_cast<double>(packing_number(F, zs, r).value);
        const auto greedy = static_cast<double>(packing_number(F, zs, r, PackingMode::greedy).value);
        const std::string tag = " (p=" + p.str() + ", eps=" + str(eps) + ")";
        o.expect_le(m2, nc, "M(2 eps) <= N(eps)" + tag);
        o.expect_le(nc, m1, "N(eps) <= M(eps)" + tag);
        o.expect_le(greedy, m1, "greedy packing <= exact packing" + tag);
    }
    return o;
}

Outcome run_discretization(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const ScoreClass F = squash(margin_class(inst.G), gamma);  // values in [0, gamma]
    const Sample zs = random_sample(inst.rng, inst.G, 1 + bounded(inst.rng, cfg.max_sample));
    const Rational eps = bounded(inst.rng, 2) == 0 ? gamma : gamma / Rational(2);
    const RationalMatrix R = restrict_to(F, zs);
    for (std::int64_t N = 1; N <= 3; ++N) {
        const Rational eta = eps / Rational(N + 1);
        const ScoreClass Fd = discretize(F, eta);
        const RationalMatrix Rd = restrict_to(Fd, zs);
        const std::string tag = " (eps=" + str(eps) + ", N=" + std::to_string(N) + ")";
        for (std::size_t f = 0; f < F.num_functions(); ++f) {
            for (std::size_t g = f + 1; g < F.num_functions(); ++g) {
                if (row_distance(R, f, g, PNorm::finite(2)).power < eps * eps) continue;
                const Rational dd = row_distance(Rd, f, g, PNorm::finite(2)).power;
                o.expect(dd >= Rational(N * N), "d_2 >= eps implies discretized d_2 >= N" + tag,
                         (dd - Rational(N * N)).to_double());
            }
        }
        const auto m = static_cast<double>(packing_number(F, zs, eps, PNorm::finite(2)).value);
        const auto md = static_cast<double>(packing_number(Fd, zs, Rational(N), PNorm::finite(2)).value);
        o.expect_le(m, md, "M_2(eps, F) <= M_2(N, F^eta)" + tag);
    }
    for (const Rational& eta : {eps / Rational(2), eps / Rational(3)}) {
        const auto m = static_cast<double>(packing_number(F, zs, eps, PNorm::infinity()).value);
        const auto md =
            static_cast<double>(packing_number(discretize(F, eta), zs, Rational(2), PNorm::infinity()).value);
        o.expect_le(m, md, "M_inf(eps, F) <= M_inf(2, F^eta) at eta=" + str(eta));
    }
    return o;
}

// b' = eta (b + 1/2) for b >= 0, eta (b - 1/2) otherwise.
Witness lift_witness(const Witness& w, const Rational& eta) {
    Witness out{{}, w.c};
    for (const auto& b : w.b) {
        out.b.push_back(eta * (b >= Rational(0) ? b + Rational(1, 2) : b - Rational(1, 2)));
    }
    return out;
}

Outcome run_strong_vs_margin(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const ScoreClass rho = margin_class(inst.G);
    for (const Rational& eta : {gamma / Rational(2), gamma / Rational(4)}) {
        const Rational eps = eta / Rational(2);
        const ScoreClass Fd = discretize(rho, eta);
        const std::string tag = " (eta=" + str(eta) + ", eps=" + str(eps) + ")";
        for (auto [strong, margin] : {std::pair{ShatterKind::strong_g, ShatterKind::graph},
                                      std::pair{ShatterKind::strong_n, ShatterKind::natarajan}}) {
            const DimensionResult s = strong_dimension(Fd, strong, cfg.caps);
            const DimensionResult m = dimension(rho, eps, margin, cfg.caps);
            o.expect_le(static_cast<double>(s.dimension), static_cast<double>(m.dimension),
                        to_string(strong) + " <= " + to_string(margin) + tag);
            if (s.certificate) {
                o.expect(replay(Fd, *s.certificate), to_string(strong) + " certificate replays" + tag);
                o.expect(is_shattered(rho, s.certificate->points, eps, margin, lift_witness(s.certificate->witness, eta)),
                         "lifted witness " + to_string(margin) + "-shatters at eps" + tag);
            }
        }
    }
    return o;
}

Outcome run_separation(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const Rational eta = bounded(inst.rng, 2) == 0 ? gamma / Rational(2) : gamma / Rational(4);
    const auto pairs = separated_pairs(inst.G, gamma, eta);
    if (pairs.empty()) o.note("no separated pair");
    for (const auto& p : pairs) {
        const SeparationReplay r = replay_separation(inst.G, gamma, eta, p);
        const std::string tag = " for (" + inst.G.function(p.g).name + ", " + inst.G.function(p.g_prime).name + ")" +
                                at(gamma) + ", eta=" + str(eta);
        o.expect(r.strong_fat, "squashed pair strongly shatters ({z}, b)" + tag, 0);
        o.expect(r.strong_g, "pair strongly G-shatters ({z}, b)" + tag, 0);
        o.expect(r.strong_n, "pair strongly N-shatters ({z}, b, c)" + tag, 0);
    }
    return o;
}

Outcome run_kp(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const ScoreClass rho = margin_class(inst.G);
    const std::size_t d = dimension(rho, gamma, ShatterKind::fat, cfg.caps).dimension;
    if (d == 0) o.note("fat dimension 0");
    for (unsigned p : {2U, 3U}) {
        for (std::size_t n = 1; n <= std::min(d, cfg.max_sample); ++n) {
            const PackingResult M = uniform_packing(rho, n, gamma, PNorm::finite(p), kPackingBudget, inst.rng());
            if (!M.exact) {
                ++o.skipped;
                continue;
            }
            const double rhs = kp_constant(p) * std::log2(static_cast<double>(M.value));
            o.expect_le(static_cast<double>(n), rhs,
                        "n <= K_p log2 M_p (p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")" + at(gamma));
        }
    }
    return o;
}

Outcome run_corollary1(const HarnessConfig& cfg, std::size_t index) {
    Outcome o;
    Instance inst = random_instance(cfg, index);
    const FiniteFunctionClass& G = inst.G;
    const Rational gamma = pick(inst.rng, cfg.gammas);
    const std::size_t max_n = std::min(cfg.max_sample, kExactSignCap / G.num_categories());
    const Sample zs = random_sample(inst.rng, G, 1 + bounded(inst.rng, max_n));
    const ScoreClass rho = margin_class(G);
    const ScoreClass rho_g = squash(rho, gamma);
    const auto r_sq = empirical_rademacher(rho_g, zs, RademacherMode::exact);
    const auto r_rho = empirical_rademacher(rho, zs, RademacherMode::exact);
    const auto rhs = maurer_rhs(G, zs, RademacherMode::exact);
    const std::string tag = " (n=" + std::to_string(zs.size()) + at(gamma) + ")";
    o.expect_le(r_sq.value, r_rho.value + kTol, "R(rho_G,gamma) <= R(rho_G)" + tag);
    o.expect_le(r_rho.value, rhs.value + kTol, "R(rho_G) <= 1/(sqrt2 n) E sup sum sigma_ik g_k" + tag);
    if (index < cfg.mc_instances) {
        const std::uint64_t seed = inst.rng();
        const std::array<std::pair<RademacherEstimate, RademacherEstimate>, 3> pairs{
            std::pair{r_sq, empirical_rademacher(rho_g, zs, RademacherMode::monte_carlo, cfg.mc_draws, seed)},
            std::pair{r_rho, empirical_rademacher(rho, zs, RademacherMode::monte_carlo, cfg.mc_draws, seed + 1)},
            std::pair{rhs, maurer_rhs(G, zs, RademacherMode::monte_carlo, cfg.mc_draws, seed + 2)}};
        for (const auto& [exact, mc] : pairs) {
            const double se = mc.std_error.value_or(0);
            const double gap = std::abs(mc.value - exact.value);
            o.expect_le(gap, 4 * se + kTol, "Monte Carlo within 4 standard errors" + tag);
        }
    }
    return o;
}

using Runner = Outcome (*)(const HarnessConfig&, std::size_t);

struct Suite {
    Runner run;
    bool single;  // one fixed instance regardless of config
};

const std::map<std::string, Suite, std::less<>>& suites() {
    static const std::map<std::string, Suite, std::less<>> table{
        {"example1", {run_example1, true}},
        {"ordering", {run_ordering, false}},
        {"lemma1", {run_lemma1, false}},
        {"lemma2", {run_lemma2, false}},
        {"lemma3", {run_lemma3, false}},
        {"lemma4", {[](const HarnessConfig& c, std::size_t i) { return run_linf_packing(c, i, 4); }, false}},
        {"lemma5", {[](const HarnessConfig& c, std::size_t i) { return run_linf_packing(c, i, 5); }, false}},
        {"lemma6", {[](const HarnessConfig& c, std::size_t i) { return run_l2_packing(c, i, 6); }, false}},
        {"lemma7", {[](const HarnessConfig& c, std::size_t i) { return run_linf_packing(c, i, 7); }, false}},
        {"lemma8", {[](const HarnessConfig& c, std::size_t i) { return run_l2_packing(c, i, 8); }, false}},
        {"lemma9", {run_lemma9, false}},
        {"lemma10", {run_lemma10, false}},
        {"sandwich", {run_sandwich, false}},
        {"discretization", {run_discretization, false}},
        {"strong_vs_margin", {run_strong_vs_margin, false}},
        {"separation", {run_separation, false}},
        {"kp", {run_kp, false}},
        {"corollary1", {run_corollary1, false}},
    };
    return table;
}

VerificationReport merge(std::string_view id, std::uint64_t seed, const std::vector<Outcome>& outcomes) {
    VerificationReport r;
    r.lemma_id = std::string(id);
    r.seed = seed;
    r.instances = outcomes.size();
    std::size_t vacuous = 0;
    std::map<std::string, std::size_t> info;  // ordered, so reports are reproducible
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        r.checks += o.checks;
        r.failures += o.failures;
        r.skipped += o.skipped;
        r.worst_slack = std::min(r.worst_slack, o.slack);
        if (o.checks == 0 && o.skipped == 0) ++vacuous;
        for (const auto& n : o.notes) {
            if (!n.starts_with("FAIL")) {
                ++info[n];
            } else if (r.notes.size() < 2 * kMaxNotes) {
                r.notes.push_back("instance " + std::to_string(i) + ": " + n);
            }
        }
    }
    for (const auto& [n, count] : info) r.notes.push_back(std::to_string(count) + " x " + n);
    if (vacuous > 0) r.notes.push_back(std::to_string(vacuous) + " instances had nothing to check");
    r.notes.emplace_back("conventions: packing uses d >= eps, covering uses open balls d < eps");
    return r;
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [k, s] : suites()) v.push_back(k);
        return v;
    }();
    return ids;
}

VerificationReport verify(std::string_view lemma_id, const HarnessConfig& config) {
    const auto it = suites().find(lemma_id);
    require(it != suites().end(), "lemma_id", "unknown lemma id '" + std::string(lemma_id) + "'");
    const Suite& suite = it->second;
    const std::size_t count = suite.single ? 1 : config.instances;
    const auto outcomes =
        parallel_map<Outcome>(count, [&](std::size_t i) { return suite.run(config, i); });
    return merge(lemma_id, config.seed, outcomes);
}

namespace {

Outcome lemma9_outcome(const FiniteFunctionClass& G, const Rational& gamma, std::size_t hull_grid_resolution) {
    Outcome o;
    const ScoreClass rho = margin_class(G);
    const SearchCaps caps{12, 64};
    const std::size_t lhs = dimension(rho, gamma, ShatterKind::natarajan, caps).dimension;
    const std::size_t C = G.num_categories();
    const auto X = static_cast<Eigen::Index>(G.num_points());
    const auto m = static_cast<Eigen::Index>(G.num_functions());
    double rhs = 0;
    bool skipped = false;
    for (std::size_t k = 0; k < C && !skipped; ++k) {
        for (std::size_t l = k + 1; l < C && !skipped; ++l) {
            RationalMatrix V(2 * m, X);
            for (Eigen::Index f = 0; f < m; ++f) {
                V.row(f) = G.function(static_cast<std::size_t>(f)).values.col(static_cast<Eigen::Index>(k)).transpose();
                V.row(m + f) = G.function(static_cast<std::size_t>(f)).values.col(static_cast<Eigen::Index>(l)).transpose();
            }
            std::size_t hull = 0;
            try {
                hull = absconv_fat_dimension(V, gamma).dimension;
            } catch (const RationalOverflow&) {
                skipped = true;
                break;
            }
            rhs += static_cast<double>(hull);
            if (hull_grid_resolution == 0) continue;
            // Grid subclass: sum_j a_j v_j / r with integer a, sum |a_j| <= r.
            const auto r = static_cast<std::int64_t>(hull_grid_resolution);
            std::set<std::vector<Rational>> members;
            std::vector<std::int64_t> a(static_cast<std::size_t>(V.rows()), 0);
            const std::function<void(std::size_t, std::int64_t)> walk = [&](std::size_t j, std::int64_t left) {
                if (j == a.size()) {
                    std::vector<Rational> h(static_cast<std::size_t>(X), Rational(0));
                    for (std::size_t t = 0; t < a.size(); ++t) {
                        if (a[t] == 0) continue;
                        for (Eigen::Index x = 0; x < X; ++x) {
                            h[static_cast<std::size_t>(x)] += Rational(a[t], r) * V(static_cast<Eigen::Index>(t), x);
                        }
                    }
                    members.insert(std::move(h));
                    return;
                }
                for (std::int64_t v = -left; v <= left; ++v) {
                    a[j] = v;
                    walk(j + 1, left - std::abs(v));
                }
                a[j] = 0;
            };
            walk(0, r);
            // Keep the members with the largest spread; any subclass is a lower bound.
            std::vector<std::vector<Rational>> sorted(members.begin(), members.end());
            std::stable_sort(sorted.begin(), sorted.end(), [](const auto& p, const auto& q) {
                Rational sp(0);
                Rational sq(0);
                for (const auto& v : p) sp = max(sp, abs(v));
                for (const auto& v : q) sq = max(sq, abs(v));
                return sp > sq;
            });
            sorted.resize(std::min<std::size_t>(sorted.size(), 64));
            std::vector<LabeledPoint> domain;
            for (Eigen::Index x = 0; x < X; ++x) domain.push_back({static_cast<std::size_t>(x), 0});
            RationalMatrix vals(static_cast<Eigen::Index>(sorted.size()), X);
            for (std::size_t s = 0; s < sorted.size(); ++s) {
                for (Eigen::Index x = 0; x < X; ++x) vals(static_cast<Eigen::Index>(s), x) = sorted[s][static_cast<std::size_t>(x)];
            }
            const ScoreClass grid(domain, numbered("h", sorted.size()), vals, ValueKind::real, -G.bound(), G.bound(), C,
                                  false);
            const std::size_t lower = dimension(grid, gamma, ShatterKind::fat, caps).dimension;
            o.expect_le(static_cast<double>(lower), static_cast<double>(hull),
                        "grid subclass dimension <= exact hull dimension for pair (" + std::to_string(k + 1) + ", " +
                            std::to_string(l + 1) + ")" + at(gamma));
        }
    }
    if (skipped) {
        ++o.skipped;
        o.note("hull LP left the 64-bit rational range, skipped");
    } else {
        o.expect_le(static_cast<double>(lhs), natarajan_structural_bound(static_cast<int>(C), std::vector<double>(C * (C - 1) / 2, 0)) + rhs,
                    "gamma-N-dim(rho_G) <= sum of hull fat dimensions" + at(gamma));
    }
    if (lhs > 0) o.note("N-dim > 0, nontrivial left side");
    return o;
}

}  // namespace

VerificationReport verify_lemma9_hull(const FiniteFunctionClass& G, const Rational& gamma,
                                      std::size_t hull_grid_resolution) {
    return merge("lemma9", 0, {lemma9_outcome(G, gamma, hull_grid_resolution)});
}

}  // namespace capdim
