#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "capdim/errors.hpp"
#include "capdim/harness.hpp"

using namespace capdim;

namespace {

HarnessConfig small(std::uint64_t seed, std::size_t instances) {
    HarnessConfig cfg;
    cfg.seed = seed;
    cfg.instances = instances;
    cfg.mc_draws = 2000;
    cfg.mc_instances = 3;
    return cfg;
}

std::string run_with_threads(const char* threads, std::string_view id, const HarnessConfig& cfg) {
    ::setenv("CAPDIM_THREADS", threads, 1);
    const std::string out = verify(id, cfg).to_json().dump();
    ::unsetenv("CAPDIM_THREADS");
    return out;
}

}  // namespace

TEST_SUITE("harness") {
TEST_CASE("every suite runs and reports") {
    const auto& ids = lemma_ids();
    CHECK(ids.size() >= 15);
    CHECK(std::is_sorted(ids.begin(), ids.end()));
    for (const auto& id : ids) {
        CAPTURE(id);
        const VerificationReport r = verify(id, small(3, 8));
        CHECK(r.lemma_id == id);
        CHECK(r.seed == 3);
        CHECK(r.checks + r.skipped > 0);
        if (id != "corollary1") CHECK(r.passed());
        const auto j = r.to_json();
        for (const char* key : {"lemma_id", "seed", "instances", "checks", "failures", "skipped", "worst_slack", "notes"}) {
            CHECK(j.contains(key));
        }
    }
    CHECK_THROWS_AS((void)verify("lemma99", small(1, 1)), PreconditionError);
}

TEST_CASE("reports are bit-identical across thread counts") {
    for (const char* id : {"ordering", "lemma4", "corollary1", "strong_vs_margin"}) {
        CAPTURE(id);
        const HarnessConfig cfg = small(11, 12);
        const std::string one = run_with_threads("1", id, cfg);
        CHECK(one == run_with_threads("4", id, cfg));
        CHECK(one == run_with_threads("1", id, cfg));
    }
}

TEST_CASE("worker count honours the cap") {
    ::setenv("CAPDIM_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    ::unsetenv("CAPDIM_THREADS");
    CHECK(worker_count() >= 1);
    const auto squares = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == static_cast<int>(i * i));
}

TEST_CASE("different seeds draw different instances") {
    const auto a = verify("lemma1", small(1, 10)).to_json();
    const auto b = verify("lemma1", small(2, 10)).to_json();
    CHECK(a["seed"] != b["seed"]);
    const auto grid = value_grid(Rational(1, 8), Rational(1));
    CHECK(gen_class(1, 2, 3, 4, grid).function(0).values != gen_class(2, 2, 3, 4, grid).function(0).values);
}

TEST_CASE("value grid") {
    const auto g = value_grid(Rational(1, 4), Rational(1));
    REQUIRE(g.size() == 9);
    CHECK(g.front() == Rational(-1));
    CHECK(g.back() == Rational(1));
    CHECK(g[4] == Rational(0));
}

TEST_CASE("linear SVM classes are sum-zero and norm-bounded") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SvmSampleSpec spec;
        spec.seed = seed;
        spec.feature_dim = 1 + seed % 3;
        spec.num_points = 1 + seed % 3;
        spec.Lambda = Rational(1 + static_cast<std::int64_t>(seed % 3), 2);
        spec.Lambda_X = Rational(1 + static_cast<std::int64_t>(seed % 4), 2);
        spec.num_categories = 3 + seed % 2;
        const FiniteFunctionClass G = gen_svm_class(spec);
        const Rational cap = spec.Lambda * spec.Lambda_X;
        CHECK(G.bound() == max(Rational(1), cap));
        for (const auto& f : G.functions()) {
            for (Eigen::Index x = 0; x < f.values.rows(); ++x) {
                CHECK(f.values.row(x).sum() == Rational(0));
                Rational sq(0);
                for (Eigen::Index k = 0; k < f.values.cols(); ++k) {
                    CHECK(abs(f.values(x, k)) <= cap);
                    sq += f.values(x, k) * f.values(x, k);
                }
                CHECK(sq <= cap * cap);
            }
        }
    }
    SvmSampleSpec bad;
    bad.Lambda = Rational(0);
    CHECK_THROWS_AS((void)gen_svm_class(bad), PreconditionError);
}

TEST_CASE("hull check on the two-function example") {
    const VerificationReport r = verify_lemma9_hull(example1_class(), Rational(1, 4), 2);
    CHECK(r.passed());
    CHECK(r.checks > 0);
}
}
