#include "capdim/dims.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "capdim/errors.hpp"
#include "lp.hpp"

namespace capdim {

std::string to_string(ShatterKind kind) {
    switch (kind) {
        case ShatterKind::fat: return "fat";
        case ShatterKind::graph: return "graph";
        case ShatterKind::natarajan: return "natarajan";
        case ShatterKind::strong_fat: return "strong_fat";
        case ShatterKind::strong_g: return "strong_g";
        case ShatterKind::strong_n: return "strong_n";
    }
    return "unknown";
}

ShatterKind parse_shatter_kind(std::string_view text) {
    for (auto k : {ShatterKind::fat, ShatterKind::graph, ShatterKind::natarajan, ShatterKind::strong_fat,
                   ShatterKind::strong_g, ShatterKind::strong_n}) {
        if (text == to_string(k)) return k;
    }
    throw PreconditionError("kind", "unknown shattering kind '" + std::string(text) + "'");
}

namespace {

constexpr std::size_t kMaskBits = 64;

Rational threshold(const Rational& gamma, ShatterKind kind) { return is_strong(kind) ? Rational(1) : gamma; }

// Value entering the positive-side constraint v - b >= t.
const Rational& positive_value(const ScoreClass& F, std::size_t f, const LabeledPoint& z) { return F.at(f, z); }

// Value entering the negative-side constraint v + b >= t.
Rational negative_value(const ScoreClass& F, std::size_t f, const LabeledPoint& z, ShatterKind kind,
                        std::size_t c) {
    switch (kind) {
        case ShatterKind::fat:
        case ShatterKind::strong_fat: return -F.at(f, z);
        case ShatterKind::graph:
        case ShatterKind::strong_g: {
            std::optional<Rational> best;
            for (std::size_t k = 0; k < F.num_categories(); ++k) {
                if (k == z.y) continue;
                const Rational& v = F.at(f, LabeledPoint{z.x, k});
                if (!best || v > *best) best = v;
            }
            return *best;
        }
        case ShatterKind::natarajan:
        case ShatterKind::strong_n: return F.at(f, LabeledPoint{z.x, c});
    }
    throw std::logic_error("unreachable shatter kind");
}

void check_points(const ScoreClass& F, const std::vector<LabeledPoint>& points, ShatterKind kind) {
    std::set<LabeledPoint> seen;
    for (const auto& z : points) {
        (void)F.require_position(z);
        require(seen.insert(z).second, "points", "shattered sets hold distinct points");
        if (uses_categories(kind)) {
            require(F.has_full_row(z.x), "full_row",
                    to_string(kind) + " shattering needs f(x, k) for every category k");
        }
    }
    if (is_strong(kind)) {
        require(F.kind() == ValueKind::integer, "value_kind", "strong dimensions need an integer-valued class");
    }
}

std::pair<std::int64_t, std::int64_t> strong_range(const ScoreClass& F) {
    const std::int64_t m = F.integer_bound();
    return {-m + 1, m - 1};
}

}  // namespace

bool is_shattered(const ScoreClass& F, const std::vector<LabeledPoint>& points, const Rational& gamma,
                  ShatterKind kind, const Witness& witness) {
    const std::size_t n = points.size();
    check_points(F, points, kind);
    require(witness.b.size() == n, "witness", "b must have one entry per point");
    require(n < kMaskBits, "points", "too many points for dichotomy enumeration");
    if (!is_strong(kind)) require(gamma > Rational(0), "gamma", "margin must be positive");
    if (uses_alternative(kind)) {
        require(witness.c.size() == n, "witness", "c must have one entry per point");
        for (std::size_t i = 0; i < n; ++i) {
            require(witness.c[i] < F.num_categories() && witness.c[i] != points[i].y, "witness",
                    "c_i must be a category different from y_i");
        }
    }
    if (is_strong(kind)) {
        const auto [lo, hi] = strong_range(F);
        for (const auto& b : witness.b) {
            require(b.is_integer() && b >= Rational(lo) && b <= Rational(hi), "witness",
                    "strong witnesses are integers in [-M_F + 1, M_F - 1]");
        }
    }
    const Rational t = threshold(gamma, kind);
    for (Dichotomy s = 0; s < (Dichotomy{1} << n); ++s) {
        bool realized = false;
        for (std::size_t f = 0; f < F.num_functions() && !realized; ++f) {
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                const std::size_t c = uses_alternative(kind) ? witness.c[i] : 0;
                if ((s >> i) & 1U) {
                    ok = positive_value(F, f, points[i]) - witness.b[i] >= t;
                } else {
                    ok = negative_value(F, f, points[i], kind, c) + witness.b[i] >= t;
                }
            }
            realized = ok;
        }
        if (!realized) return false;
    }
    return true;
}

bool replay(const ScoreClass& F, const ShatterCertificate& cert) {
    const std::size_t n = cert.points.size();
    const Rational gamma = cert.gamma.value_or(Rational(1));
    if (!is_shattered(F, cert.points, gamma, cert.kind, cert.witness)) return false;
    const Rational t = threshold(gamma, cert.kind);
    std::set<Dichotomy> covered;
    for (const auto& [s, name] : cert.assignments) {
        const auto& names = F.names();
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end() || s >= (Dichotomy{1} << n)) return false;
        const auto f = static_cast<std::size_t>(it - names.begin());
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = uses_alternative(cert.kind) ? cert.witness.c[i] : 0;
            const bool ok = ((s >> i) & 1U)
                                ? positive_value(F, f, cert.points[i]) - cert.witness.b[i] >= t
                                : negative_value(F, f, cert.points[i], cert.kind, c) + cert.witness.b[i] >= t;
            if (!ok) return false;
        }
        covered.insert(s);
    }
    return covered.size() == (std::size_t{1} << n);
}

namespace {

// One admissible choice for a coordinate: the functions meeting the positive
// and the negative constraint at that point.
struct Option {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    Rational b;
    std::size_t c = 0;
};

class Searcher {
public:
    Searcher(const ScoreClass& F, const Rational& gamma, ShatterKind kind) : F_(F), gamma_(gamma), kind_(kind) {
        // Functions with identical values realize the same dichotomies.
        for (std::size_t f = 0; f < F.num_functions(); ++f) {
            const bool dup = std::any_of(reps_.begin(), reps_.end(), [&](std::size_t g) {
                return F.values().row(static_cast<Eigen::Index>(f)) == F.values().row(static_cast<Eigen::Index>(g));
            });
            if (!dup) reps_.push_back(f);
        }
    }

    [[nodiscard]] std::size_t distinct_functions() const { return reps_.size(); }

    // Largest n with 2^n <= number of distinct functions.
    [[nodiscard]] std::size_t size_ceiling() const { return std::bit_width(reps_.size()) - 1; }

    std::vector<Option> options(const LabeledPoint& z) const {
        const Rational t = threshold(gamma_, kind_);
        std::vector<std::size_t> alternatives{0};
        if (uses_alternative(kind_)) {
            alternatives.clear();
            for (std::size_t k = 0; k < F_.num_categories(); ++k) {
                if (k != z.y) alternatives.push_back(k);
            }
        }
        std::vector<Option> raw;
        for (std::size_t c : alternatives) {
            // pos: b <= P_f; neg: b >= N_f.
            std::vector<Rational> P;
            std::vector<Rational> N;
            for (std::size_t f : reps_) {
                P.push_back(positive_value(F_, f, z) - t);
                N.push_back(t - negative_value(F_, f, z, kind_, c));
            }
            std::vector<Rational> candidates;
            if (is_strong(kind_)) {
                const auto [lo, hi] = strong_range(F_);
                if (lo > hi) continue;
                candidates = {Rational(lo), Rational(hi)};
                for (const auto* set : {&P, &N}) {
                    for (const auto& v : *set) {
                        if (v >= Rational(lo) && v <= Rational(hi)) candidates.push_back(v);
                    }
                }
                std::sort(candidates.begin(), candidates.end());
                candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
            } else {
                std::vector<Rational> crit(P);
                crit.insert(crit.end(), N.begin(), N.end());
                std::sort(crit.begin(), crit.end());
                crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
                for (std::size_t i = 0; i < crit.size(); ++i) {
                    candidates.push_back(crit[i]);
                    if (i + 1 < crit.size()) candidates.push_back((crit[i] + crit[i + 1]) / Rational(2));
                }
            }
            for (const auto& b : candidates) {
                Option o{0, 0, b, c};
                for (std::size_t r = 0; r < reps_.size(); ++r) {
                    if (P[r] >= b) o.pos |= std::uint64_t{1} << r;
                    if (N[r] <= b) o.neg |= std::uint64_t{1} << r;
                }
                if (o.pos != 0 && o.neg != 0) raw.push_back(o);
            }
        }
        // Keep one option per signature and drop dominated signatures.
        std::vector<Option> out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            bool dropped = false;
            for (std::size_t j = 0; j < raw.size() && !dropped; ++j) {
                if (i == j) continue;
                const bool sub = (raw[i].pos & ~raw[j].pos) == 0 && (raw[i].neg & ~raw[j].neg) == 0;
                const bool same = raw[i].pos == raw[j].pos && raw[i].neg == raw[j].neg;
                dropped = sub && (!same || j < i);
            }
            if (!dropped) out.push_back(raw[i]);
        }
        return out;
    }

    std::optional<ShatterCertificate> certify(const std::vector<LabeledPoint>& points) const {
        std::vector<std::vector<Option>> opts;
        for (const auto& z : points) {
            opts.push_back(options(z));
            if (opts.back().empty()) return std::nullopt;
        }
        std::vector<const Option*> chosen(points.size(), nullptr);
        std::vector<std::uint64_t> masks{~std::uint64_t{0}};
        if (!dfs(opts, 0, masks, chosen)) return std::nullopt;
        ShatterCertificate cert;
        cert.points = points;
        cert.kind = kind_;
        if (!is_strong(kind_)) cert.gamma = gamma_;
        for (const Option* o : chosen) {
            cert.witness.b.push_back(o->b);
            if (uses_alternative(kind_)) cert.witness.c.push_back(o->c);
        }
        for (Dichotomy s = 0; s < masks_.size(); ++s) {
            const auto r = static_cast<std::size_t>(std::countr_zero(masks_[s]));
            cert.assignments.emplace_back(s, F_.names()[reps_[r]]);
        }
        return cert;
    }

private:
    // masks[d] = functions realizing partial dichotomy d on the first j points.
    bool dfs(const std::vector<std::vector<Option>>& opts, std::size_t j, const std::vector<std::uint64_t>& masks,
             std::vector<const Option*>& chosen) const {
        if (j == opts.size()) {
            masks_ = masks;
            return true;
        }
        std::vector<std::uint64_t> next(masks.size() * 2);
        for (const Option& o : opts[j]) {
            bool alive = true;
            for (std::size_t d = 0; d < masks.size() && alive; ++d) {
                next[d] = masks[d] & o.neg;
                next[d + masks.size()] = masks[d] & o.pos;
                alive = next[d] != 0 && next[d + masks.size()] != 0;
            }
            if (!alive) continue;
            chosen[j] = &o;
            if (dfs(opts, j + 1, next, chosen)) return true;
        }
        return false;
    }

    const ScoreClass& F_;
    Rational gamma_;
    ShatterKind kind_;
    std::vector<std::size_t> reps_;
    mutable std::vector<std::uint64_t> masks_;
};

// Calls visit(subset) for each k-subset of positions in lexicographic order
// until visit returns true.
template <typename Visit>
bool for_each_subset(std::size_t d, std::size_t k, Visit&& visit) {
    if (k > d) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (visit(idx)) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == d - k + i - 1) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

DimensionResult search(const ScoreClass& F, const Rational& gamma, ShatterKind kind, const SearchCaps& caps) {
    if (uses_categories(kind)) {
        require(F.margin_structured(), "margin_structured",
                to_string(kind) + " dimensions need a class flagged margin-structured");
    }
    if (is_strong(kind)) {
        require(F.kind() == ValueKind::integer, "value_kind", "strong dimensions need an integer-valued class");
    }
    if (F.domain_size() > caps.max_domain) {
        throw CapExceeded("dimension search refuses a domain of " + std::to_string(F.domain_size()) +
                          " points (cap " + std::to_string(caps.max_domain) + ")");
    }
    const Searcher searcher(F, gamma, kind);
    if (searcher.distinct_functions() > std::min(caps.max_functions, kMaskBits)) {
        throw CapExceeded("dimension search refuses " + std::to_string(searcher.distinct_functions()) +
                          " distinct functions (cap " + std::to_string(caps.max_functions) + ")");
    }
    std::vector<LabeledPoint> eligible;
    for (const auto& z : F.domain()) {
        if (!uses_categories(kind) || F.has_full_row(z.x)) eligible.push_back(z);
    }
    DimensionResult result;
    for (std::size_t n = 1; n <= std::min(searcher.size_ceiling(), eligible.size()); ++n) {
        std::optional<ShatterCertificate> found;
        for_each_subset(eligible.size(), n, [&](const std::vector<std::size_t>& idx) {
            std::vector<LabeledPoint> pts;
            for (std::size_t i : idx) pts.push_back(eligible[i]);
            found = searcher.certify(pts);
            return found.has_value();
        });
        if (!found) break;  // every superset of a non-shattered size fails too
        result.dimension = n;
        result.certificate = std::move(found);
    }
    return result;
}

}  // namespace

std::optional<ShatterCertificate> find_certificate(const ScoreClass& F, const std::vector<LabeledPoint>& points,
                                                   const Rational& gamma, ShatterKind kind) {
    check_points(F, points, kind);
    if (!is_strong(kind)) require(gamma > Rational(0), "gamma", "margin must be positive");
    const Searcher searcher(F, gamma, kind);
    require(searcher.distinct_functions() <= kMaskBits, "functions", "at most 64 distinct functions");
    if (points.empty()) return ShatterCertificate{{}, {}, kind, is_strong(kind) ? std::nullopt : std::optional(gamma),
                                                  {{0, F.names().front()}}};
    return searcher.certify(points);
}

DimensionResult dimension(const ScoreClass& F, const Rational& gamma, ShatterKind kind, const SearchCaps& caps) {
    require(!is_strong(kind), "kind", "use strong_dimension for strong kinds");
    require(gamma > Rational(0), "gamma", "margin must be positive");
    return search(F, gamma, kind, caps);
}

DimensionResult strong_dimension(const ScoreClass& F, ShatterKind kind, const SearchCaps& caps) {
    require(is_strong(kind), "kind", "strong_dimension takes strong_fat, strong_g or strong_n");
    return search(F, Rational(1), kind, caps);
}

DimensionCurve dimension_curve(const ScoreClass& F, ShatterKind kind, std::vector<Rational> eps_grid,
                               const SearchCaps& caps) {
    const Rational bound = max(abs(F.range_lo()), abs(F.range_hi()));
    for (const auto& e : eps_grid) {
        require(e > Rational(0) && e <= bound, "eps_grid", "grid values must lie in (0, M_F]");
    }
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    eps_grid.erase(std::unique(eps_grid.begin(), eps_grid.end()), eps_grid.end());
    DimensionCurve curve;
    for (const auto& e : eps_grid) {
        const std::size_t d = dimension(F, e, kind, caps).dimension;
        if (!curve.samples.empty() && d < curve.samples.back().second) {
            throw std::logic_error("dimension curve is not monotone in eps");
        }
        curve.samples.emplace_back(e, d);
    }
    return curve;
}

HullDimension absconv_fat_dimension(const RationalMatrix& generators, const Rational& gamma) {
    require(gamma > Rational(0), "gamma", "margin must be positive");
    const auto m = static_cast<std::size_t>(generators.rows());
    const auto d = static_cast<std::size_t>(generators.cols());
    require(d < kMaskBits, "points", "too many points");
    // Dichotomy s is realizable iff some lambda+, lambda- >= 0 with
    // sum(lambda+ + lambda-) <= 1 has s_i (V (lambda+ - lambda-))_i >= gamma.
    const auto realizable = [&](const std::vector<std::size_t>& pts, Dichotomy s) {
        std::vector<detail::LinearConstraint> rows;
        detail::LinearConstraint norm{std::vector<Rational>(2 * m, Rational(1)), detail::Relation::le, Rational(1)};
        rows.push_back(norm);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            detail::LinearConstraint r{std::vector<Rational>(2 * m), detail::Relation::ge, gamma};
            const Rational sign = ((s >> i) & 1U) ? Rational(1) : Rational(-1);
            for (std::size_t j = 0; j < m; ++j) {
                const Rational v = sign * generators(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(pts[i]));
                r.coeffs[j] = v;
                r.coeffs[m + j] = -v;
            }
            rows.push_back(std::move(r));
        }
        return detail::lp_feasible(rows, 2 * m);
    };
    HullDimension out;
    for (std::size_t n = 1; n <= d; ++n) {
        bool found = false;
        for_each_subset(d, n, [&](const std::vector<std::size_t>& pts) {
            // s and its complement are equivalent under negation.
            for (Dichotomy s = 0; s < (Dichotomy{1} << (n - 1)); ++s) {
                if (!realizable(pts, s)) return false;
            }
            out.points = pts;
            found = true;
            return true;
        });
        if (!found) break;
        out.dimension = n;
    }
    return out;
}

}  // namespace capdim
