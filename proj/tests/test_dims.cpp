#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "capdim/errors.hpp"
#include "capdim/harness.hpp"
#include "capdim/rng.hpp"
#include "lp.hpp"
#include "support/oracles.hpp"

using namespace capdim;

namespace {

const ShatterKind kKinds[] = {ShatterKind::fat, ShatterKind::graph, ShatterKind::natarajan};

ShatterKind plain(ShatterKind k) {
    switch (k) {
        case ShatterKind::strong_fat: return ShatterKind::fat;
        case ShatterKind::strong_g: return ShatterKind::graph;
        case ShatterKind::strong_n: return ShatterKind::natarajan;
        default: return k;
    }
}

// Strong dimension by the unpruned oracle: threshold 1, integer witnesses.
std::size_t strong_oracle(const ScoreClass& F, ShatterKind kind, std::size_t max_size) {
    const std::int64_t M = F.integer_bound();
    std::vector<Rational> ints;
    for (std::int64_t b = -M + 1; b <= M - 1; ++b) ints.emplace_back(b);
    const oracle::GridFn grid = [&](const LabeledPoint&, std::size_t) { return ints; };
    std::size_t best = 0;
    for (std::size_t size = 1; size <= std::min(max_size, F.domain_size()); ++size) {
        bool any = false;
        oracle::for_each_subset(F.domain_size(), size, [&](const std::vector<std::size_t>& idx) {
            std::vector<LabeledPoint> pts;
            for (auto i : idx) pts.push_back(F.domain()[i]);
            any = oracle::shatterable(F, pts, Rational(1), plain(kind), grid);
            return any;
        });
        if (any) best = size;
    }
    return best;
}

std::size_t log2_floor(std::size_t m) { return static_cast<std::size_t>(std::bit_width(m)) - 1; }

// max over conv(+-v_j) of min_i s_i u_i, for 2-dimensional generators. The
// objective is concave and piecewise linear, so the maximum sits at a vertex
// pair's segment endpoint or where the two coordinates tie on that segment.
Rational best_margin_2d(const std::vector<std::pair<Rational, Rational>>& v, int s0, int s1) {
    std::vector<std::pair<Rational, Rational>> verts;
    for (const auto& [a, b] : v) {
        verts.emplace_back(a, b);
        verts.emplace_back(-a, -b);
    }
    auto score = [&](const Rational& a, const Rational& b) { return min(Rational(s0) * a, Rational(s1) * b); };
    std::optional<Rational> best;
    auto offer = [&](const Rational& v0) { if (!best || v0 > *best) best = v0; };
    for (const auto& p : verts) offer(score(p.first, p.second));
    for (const auto& p : verts) {
        for (const auto& q : verts) {
            // s0 (p0 + t (q0 - p0)) = s1 (p1 + t (q1 - p1))
            const Rational lhs = Rational(s0) * (q.first - p.first) - Rational(s1) * (q.second - p.second);
            if (lhs == Rational(0)) continue;
            const Rational t = (Rational(s1) * p.second - Rational(s0) * p.first) / lhs;
            if (t < Rational(0) || t > Rational(1)) continue;
            offer(score(p.first + t * (q.first - p.first), p.second + t * (q.second - p.second)));
        }
    }
    return *best;
}

std::size_t hull_oracle_2d(const RationalMatrix& G, const Rational& gamma) {
    std::vector<std::pair<Rational, Rational>> v;
    for (Eigen::Index r = 0; r < G.rows(); ++r) v.emplace_back(G(r, 0), G(r, 1));
    bool both = true;
    for (int s0 : {-1, 1}) {
        for (int s1 : {-1, 1}) both = both && best_margin_2d(v, s0, s1) >= gamma;
    }
    if (both) return 2;
    Rational a0(0), a1(0);
    for (const auto& [x, y] : v) {
        a0 = max(a0, abs(x));
        a1 = max(a1, abs(y));
    }
    return (a0 >= gamma || a1 >= gamma) ? 1 : 0;
}

}  // namespace

TEST_SUITE("dims") {
TEST_CASE("shattering on the two-function example") {
    const ScoreClass rho = margin_class(example1_class());
    CHECK(is_shattered(rho, {{0, 0}}, Rational(1, 4), ShatterKind::fat, {{Rational(0)}, {}}));
    for (std::size_t k = 0; k < 3; ++k) {
        for (const auto& b : oracle::dense_grid(Rational(-2), Rational(2), Rational(1, 32))) {
            CHECK_FALSE(is_shattered(rho, {{0, k}}, Rational(1, 4), ShatterKind::graph, {{b}, {}}));
        }
    }
    CHECK(is_shattered(rho, {}, Rational(1, 4), ShatterKind::fat, {}));
    CHECK_THROWS_AS((void)is_shattered(rho, {{0, 0}}, Rational(1, 4), ShatterKind::natarajan, {{Rational(0)}, {0}}),
                    PreconditionError);
    CHECK_THROWS_AS((void)is_shattered(rho, {{0, 0}}, Rational(1, 4), ShatterKind::fat, {}), PreconditionError);
}

TEST_CASE("dimensions of the two-function example") {
    const ScoreClass rho = margin_class(example1_class());
    const auto fat = dimension(rho, Rational(1, 4), ShatterKind::fat);
    CHECK(fat.dimension == 1);
    REQUIRE(fat.certificate.has_value());
    CHECK(replay(rho, *fat.certificate));
    CHECK(dimension(rho, Rational(1, 4), ShatterKind::graph).dimension == 0);
    CHECK(dimension(rho, Rational(1, 4), ShatterKind::natarajan).dimension == 0);
    CHECK_FALSE(dimension(rho, Rational(1, 4), ShatterKind::graph).certificate.has_value());
}

TEST_CASE("strong dimensions of the discretized example") {
    const ScoreClass d = discretize(margin_class(example1_class()), Rational(1, 8));
    const auto sg = strong_dimension(d, ShatterKind::strong_g);
    CHECK(sg.dimension == 1);
    CHECK(sg.dimension == strong_oracle(d, ShatterKind::strong_g, 3));
    REQUIRE(sg.certificate.has_value());
    CHECK(replay(d, *sg.certificate));
    CHECK(is_shattered(d, {{0, 0}}, Rational(1), ShatterKind::strong_g, {{Rational(1)}, {}}));
    CHECK(strong_dimension(d, ShatterKind::strong_n).dimension == strong_oracle(d, ShatterKind::strong_n, 3));
    CHECK(strong_dimension(d.select_functions({0}), ShatterKind::strong_g).dimension == 0);
}

TEST_CASE("singleton and constant classes have dimension zero") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ScoreClass one = margin_class(gen_class(seed, 2, 3, 1, grid));
        for (auto kind : kKinds) {
            for (const Rational g : {Rational(1, 8), Rational(1, 2), Rational(1)}) {
                CHECK(dimension(one, g, kind).dimension == 0);
            }
        }
        CHECK(strong_dimension(discretize(one, Rational(1, 8)), ShatterKind::strong_g).dimension == 0);
        CHECK(strong_dimension(discretize(one, Rational(1, 8)), ShatterKind::strong_n).dimension == 0);
    }
    const FiniteFunctionClass K(3, Rational(1), {"x", "y"},
                                {{"a", RationalMatrix::Constant(2, 3, Rational(1, 3))},
                                 {"b", RationalMatrix::Constant(2, 3, Rational(-1, 2))}});
    const auto curve = dimension_curve(margin_class(K), ShatterKind::fat, {Rational(1, 16), Rational(1, 2)});
    for (const auto& [eps, d] : curve.samples) CHECK(d == 0);
}

TEST_CASE("dimension curve") {
    const ScoreClass rho = margin_class(example1_class());
    const auto curve = dimension_curve(rho, ShatterKind::fat, {Rational(1, 8), Rational(1, 4)});
    REQUIRE(curve.samples.size() == 2);
    CHECK(curve.samples[0].first == Rational(1, 4));
    CHECK(curve.samples[0].second == 1);
    CHECK(curve.samples[1].second == 1);
    CHECK(dimension_curve(rho, ShatterKind::fat, {Rational(1)}).samples[0].second == 0);
    CHECK_THROWS_AS((void)dimension_curve(rho, ShatterKind::fat, {Rational(3)}), PreconditionError);
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ScoreClass F = margin_class(gen_class(seed, 2, 3, 8, grid));
        for (auto kind : kKinds) {
            const auto c = dimension_curve(F, kind, {Rational(1, 2), Rational(1, 16), Rational(1, 8), Rational(1, 4)});
            for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
                CHECK(c.samples[i].first > c.samples[i + 1].first);
                CHECK(c.samples[i].second <= c.samples[i + 1].second);
            }
        }
    }
}

TEST_CASE("search agrees with the unpruned oracle on random classes") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const ScoreClass F = margin_class(gen_class(1000 + seed, 2, 3, 8, grid));
        for (const Rational g : {Rational(1, 8), Rational(1, 4)}) {
            const auto r = dimension(F, g, ShatterKind::fat);
            CHECK(r.dimension == oracle::dimension(F, g, ShatterKind::fat, log2_floor(8)));
        }
    }
    const auto coarse = value_grid(Rational(1, 4), Rational(1));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t m = 2 + seed % 4;
        const ScoreClass F = margin_class(gen_class(2000 + seed, 1 + seed % 2, 3, m, coarse));
        for (auto kind : kKinds) {
            for (const Rational g : {Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
                const auto r = dimension(F, g, kind);
                CHECK(r.dimension == oracle::dimension(F, g, kind, log2_floor(m)));
                if (r.certificate) {
                    CHECK(r.certificate->points.size() == r.dimension);
                    CHECK(replay(F, *r.certificate));
                }
            }
        }
    }
}

TEST_CASE("strong search agrees with the unpruned oracle") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t m = 2 + seed % 4;
        const ScoreClass rho = margin_class(gen_class(3000 + seed, 1 + seed % 2, 3, m, grid));
        const ScoreClass D = discretize(rho, Rational(1, 4));
        for (auto kind : {ShatterKind::strong_g, ShatterKind::strong_n}) {
            const auto r = strong_dimension(D, kind);
            CHECK(r.dimension == strong_oracle(D, kind, log2_floor(m)));
            if (r.certificate) CHECK(replay(D, *r.certificate));
        }
        const ScoreClass S = discretize(squash(rho, Rational(1, 2)), Rational(1, 8));
        const auto r = strong_dimension(S, ShatterKind::strong_fat);
        CHECK(r.dimension == strong_oracle(S, ShatterKind::strong_fat, log2_floor(m)));
    }
}

TEST_CASE("critical values with midpoints are a complete witness grid") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    const auto dense = oracle::dense_grid(Rational(-2), Rational(2), Rational(1, 32));
    const oracle::GridFn dense_fn = [&](const LabeledPoint&, std::size_t) { return dense; };
    std::mt19937_64 rng(17);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const ScoreClass F = margin_class(gen_class(4000 + seed, 2, 3, 6, grid));
        for (auto kind : kKinds) {
            for (std::size_t size = 1; size <= 2; ++size) {
                std::vector<LabeledPoint> pts;
                while (pts.size() < size) {
                    const auto z = F.domain()[bounded(rng, F.domain_size())];
                    if (std::find(pts.begin(), pts.end(), z) == pts.end()) pts.push_back(z);
                }
                const Rational g(1, 8);
                CHECK(find_certificate(F, pts, g, kind).has_value() ==
                      oracle::shatterable(F, pts, g, kind, dense_fn));
            }
        }
    }
}

TEST_CASE("ordering, antitonicity and the squashing direction") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const ScoreClass F = margin_class(gen_class(5000 + seed, 2, 3, 8, grid));
        std::size_t prev[3] = {SIZE_MAX, SIZE_MAX, SIZE_MAX};
        for (const Rational g : {Rational(1, 16), Rational(1, 8), Rational(1, 4), Rational(1, 2)}) {
            const std::size_t n = dimension(F, g, ShatterKind::natarajan).dimension;
            const std::size_t gd = dimension(F, g, ShatterKind::graph).dimension;
            const std::size_t fd = dimension(F, g, ShatterKind::fat).dimension;
            CHECK(n <= gd);
            CHECK(gd <= fd);
            CHECK(n <= prev[0]);
            CHECK(gd <= prev[1]);
            CHECK(fd <= prev[2]);
            prev[0] = n;
            prev[1] = gd;
            prev[2] = fd;
        }
        for (const Rational gamma : {Rational(1, 4), Rational(1, 2)}) {
            const Rational eps = gamma / Rational(2);
            CHECK(dimension(squash(F, gamma), eps, ShatterKind::fat).dimension <=
                  dimension(F, eps, ShatterKind::fat).dimension);
        }
    }
}

TEST_CASE("discretization never increases the strong dimension past the margin one") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const ScoreClass F = margin_class(gen_class(6000 + seed, 2, 3, 6, grid));
        for (const Rational gamma : {Rational(1, 2), Rational(1)}) {
            const Rational eta = gamma / Rational(2);
            const Rational eps = eta / Rational(2);
            const ScoreClass D = discretize(F, eta);
            CHECK(strong_dimension(D, ShatterKind::strong_g).dimension <=
                  dimension(F, eps, ShatterKind::graph).dimension);
            CHECK(strong_dimension(D, ShatterKind::strong_n).dimension <=
                  dimension(F, eps, ShatterKind::natarajan).dimension);
        }
    }
}

TEST_CASE("separated pairs are strongly shattered") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    std::size_t seen = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const FiniteFunctionClass G = gen_class(7000 + seed, 2, 3, 6, grid);
        const Rational gamma(1, 2), eta(1, 8);
        for (const auto& pair : separated_pairs(G, gamma, eta)) {
            ++seen;
            const auto r = replay_separation(G, gamma, eta, pair);
            CHECK(r.strong_fat);
            CHECK(r.strong_g);
            CHECK(r.strong_n);
            const ScoreClass D = discretize(margin_class(G), eta).select_functions({pair.g, pair.g_prime});
            CHECK(strong_dimension(D, ShatterKind::strong_g).dimension >= 1);
            CHECK(strong_dimension(D, ShatterKind::strong_n).dimension >= 1);
        }
    }
    CHECK(seen > 0);
}

TEST_CASE("refusals") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    const ScoreClass big = margin_class(gen_class(1, 5, 3, 4, grid));
    CHECK_THROWS_AS((void)dimension(big, Rational(1, 4), ShatterKind::fat), CapExceeded);
    const ScoreClass many = margin_class(gen_class(2, 1, 3, 40, grid));
    CHECK_THROWS_AS((void)dimension(many, Rational(1, 4), ShatterKind::fat), CapExceeded);
    const ScoreClass sq = squash(margin_class(example1_class()), Rational(1, 2));
    CHECK_THROWS_AS((void)dimension(sq, Rational(1, 4), ShatterKind::graph), PreconditionError);
    CHECK_NOTHROW((void)dimension(sq, Rational(1, 4), ShatterKind::fat));
    CHECK_THROWS_AS((void)strong_dimension(margin_class(example1_class()), ShatterKind::strong_g),
                    PreconditionError);
    CHECK_THROWS_AS((void)parse_shatter_kind("psi"), PreconditionError);
    CHECK(parse_shatter_kind("strong_n") == ShatterKind::strong_n);
}

TEST_CASE("absconv dimension on one point is max |g| >= gamma") {
    RationalMatrix G(2, 1);
    G << Rational(1, 4), Rational(-1, 2);
    CHECK(absconv_fat_dimension(G, Rational(1, 2)).dimension == 1);
    CHECK(absconv_fat_dimension(G, Rational(3, 4)).dimension == 0);
}

TEST_CASE("absconv dimension matches the planar hull oracle") {
    std::mt19937_64 rng(23);
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (int trial = 0; trial < 150; ++trial) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(bounded(rng, 4));
        RationalMatrix G(m, 2);
        for (Eigen::Index i = 0; i < G.size(); ++i) G(i) = grid[bounded(rng, grid.size())];
        for (const Rational g : {Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2)}) {
            const auto h = absconv_fat_dimension(G, g);
            CHECK(h.dimension == hull_oracle_2d(G, g));
            CHECK(h.points.size() == h.dimension);
        }
    }
}

TEST_CASE("absconv dimension dominates the generators' own fat dimension") {
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FiniteFunctionClass G = gen_class(8000 + seed, 3, 3, 6, grid);
        const ScoreClass comp = component_class(G, 0);
        for (const Rational g : {Rational(1, 8), Rational(1, 4)}) {
            CHECK(absconv_fat_dimension(comp.values(), g).dimension >=
                  dimension(comp, g, ShatterKind::fat).dimension);
        }
    }
}

TEST_CASE("exact LP feasibility") {
    using detail::LinearConstraint;
    using detail::Relation;
    CHECK(detail::lp_feasible({{{Rational(1), Rational(1)}, Relation::le, Rational(1)},
                               {{Rational(1), Rational(-1)}, Relation::ge, Rational(0)}},
                              2));
    CHECK_FALSE(detail::lp_feasible({{{Rational(1), Rational(1)}, Relation::le, Rational(1)},
                                     {{Rational(1), Rational(0)}, Relation::ge, Rational(2)}},
                                    2));
    CHECK(detail::lp_feasible({{{Rational(1), Rational(1)}, Relation::eq, Rational(1, 3)}}, 2));
    CHECK_FALSE(detail::lp_feasible({{{Rational(1), Rational(1)}, Relation::eq, Rational(-1)}}, 2));
    CHECK(detail::lp_feasible({{{Rational(-1), Rational(0)}, Relation::le, Rational(-1)}}, 2));
    CHECK(detail::lp_feasible({}, 3));
}
}
