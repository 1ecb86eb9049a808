#include "capdim/core_model.hpp"

#include <set>

#include "capdim/errors.hpp"

namespace capdim {

std::vector<LabeledPoint> full_domain(std::size_t num_points, std::size_t num_categories) {
    std::vector<LabeledPoint> out;
    out.reserve(num_points * num_categories);
    for (std::size_t x = 0; x < num_points; ++x) {
        for (std::size_t k = 0; k < num_categories; ++k) out.push_back({x, k});
    }
    return out;
}

FiniteFunctionClass::FiniteFunctionClass(std::size_t num_categories, Rational bound,
                                         std::vector<std::string> point_names,
                                         std::vector<NamedTable> functions)
    : num_categories_(num_categories),
      bound_(bound),
      point_names_(std::move(point_names)),
      functions_(std::move(functions)) {
    require(num_categories_ >= 3, "num_categories", "C must be at least 3");
    require(bound_ >= Rational(1), "bound", "M_G must be at least 1");
    require(!point_names_.empty(), "num_points", "at least one description point is required");
    require(!functions_.empty(), "functions", "at least one function is required");
    std::set<std::string> seen;
    for (const auto& fn : functions_) {
        require(seen.insert(fn.name).second, "unique_names", "duplicate function name '" + fn.name + "'");
        require(static_cast<std::size_t>(fn.values.rows()) == point_names_.size() &&
                    static_cast<std::size_t>(fn.values.cols()) == num_categories_,
                "table_shape", "function '" + fn.name + "' has the wrong table shape");
        for (Eigen::Index i = 0; i < fn.values.size(); ++i) {
            require(abs(fn.values(i)) <= bound_, "value_bound",
                    "function '" + fn.name + "' has a value outside [-M, M]");
        }
    }
}

std::vector<std::string> FiniteFunctionClass::names() const {
    std::vector<std::string> out;
    out.reserve(functions_.size());
    for (const auto& fn : functions_) out.push_back(fn.name);
    return out;
}

std::optional<std::size_t> FiniteFunctionClass::find(std::string_view name) const {
    for (std::size_t f = 0; f < functions_.size(); ++f) {
        if (functions_[f].name == name) return f;
    }
    return std::nullopt;
}

std::size_t FiniteFunctionClass::index_of(std::string_view name) const {
    if (auto f = find(name)) return *f;
    throw PreconditionError("function_name", "unknown function '" + std::string(name) + "'");
}

std::size_t FiniteFunctionClass::point_index(std::string_view name) const {
    for (std::size_t x = 0; x < point_names_.size(); ++x) {
        if (point_names_[x] == name) return x;
    }
    throw PreconditionError("point_name", "unknown description point '" + std::string(name) + "'");
}

ScoreClass::ScoreClass(std::vector<LabeledPoint> domain, std::vector<std::string> names,
                       RationalMatrix values, ValueKind kind, Rational range_lo, Rational range_hi,
                       std::size_t num_categories, bool margin_structured)
    : domain_(std::move(domain)),
      names_(std::move(names)),
      values_(std::move(values)),
      kind_(kind),
      range_lo_(range_lo),
      range_hi_(range_hi),
      num_categories_(num_categories),
      margin_structured_(margin_structured) {
    require(!names_.empty(), "functions", "a score class needs at least one function");
    require(static_cast<std::size_t>(values_.rows()) == names_.size() &&
                static_cast<std::size_t>(values_.cols()) == domain_.size(),
            "table_shape", "values must be functions x domain");
    require(range_lo_ <= range_hi_, "range", "range_lo exceeds range_hi");
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        require(domain_[i].y < num_categories_, "category", "domain label out of range");
        require(index_.emplace(domain_[i], i).second, "domain", "duplicate domain element");
    }
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        const Rational& v = values_(i);
        require(v >= range_lo_ && v <= range_hi_, "value_range", "value " + v.str() + " outside range");
        if (kind_ == ValueKind::integer) {
            require(v.is_integer(), "value_kind", "integer class holds a non-integer value");
        }
    }
    if (margin_structured_) {
        require(is_margin_structured(*this), "margin_structured",
                "class flagged margin-structured violates max_{k<l} f(x,k)+f(x,l) = 0");
    }
}

std::int64_t ScoreClass::integer_bound() const { return max(abs(range_lo_), abs(range_hi_)).ceil(); }

std::optional<std::size_t> ScoreClass::position(const LabeledPoint& z) const {
    const auto it = index_.find(z);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t ScoreClass::require_position(const LabeledPoint& z) const {
    if (auto p = position(z)) return *p;
    throw PreconditionError("domain", "point (" + std::to_string(z.x) + ", " + std::to_string(z.y + 1) +
                                          ") is outside the class domain");
}

bool ScoreClass::has_full_row(std::size_t x) const {
    for (std::size_t k = 0; k < num_categories_; ++k) {
        if (!index_.contains({x, k})) return false;
    }
    return true;
}

ScoreClass ScoreClass::select_functions(const std::vector<std::size_t>& which) const {
    RationalMatrix v(static_cast<Eigen::Index>(which.size()), values_.cols());
    std::vector<std::string> names;
    for (std::size_t r = 0; r < which.size(); ++r) {
        v.row(static_cast<Eigen::Index>(r)) = values_.row(static_cast<Eigen::Index>(which[r]));
        names.push_back(names_.at(which[r]));
    }
    return ScoreClass(domain_, std::move(names), std::move(v), kind_, range_lo_, range_hi_, num_categories_,
                      margin_structured_);
}

Sample::Sample(std::vector<LabeledPoint> entries) : entries_(std::move(entries)) {
    require(!entries_.empty(), "sample", "a sample must contain at least one point");
}

bool is_margin_structured(const ScoreClass& F) {
    std::set<std::size_t> xs;
    for (const auto& z : F.domain()) xs.insert(z.x);
    const std::size_t C = F.num_categories();
    for (std::size_t x : xs) {
        if (!F.has_full_row(x)) return false;
        std::vector<std::size_t> pos(C);
        for (std::size_t k = 0; k < C; ++k) pos[k] = *F.position({x, k});
        for (std::size_t f = 0; f < F.num_functions(); ++f) {
            std::optional<Rational> best;
            for (std::size_t k = 0; k < C; ++k) {
                for (std::size_t l = k + 1; l < C; ++l) {
                    const Rational s = F.at(f, pos[k]) + F.at(f, pos[l]);
                    if (!best || s > *best) best = s;
                }
            }
            if (*best != Rational(0)) return false;
        }
    }
    return true;
}

ScoreClass margin_class(const FiniteFunctionClass& G) {
    const std::size_t C = G.num_categories();
    auto domain = full_domain(G.num_points(), C);
    RationalMatrix values(static_cast<Eigen::Index>(G.num_functions()), static_cast<Eigen::Index>(domain.size()));
    for (std::size_t f = 0; f < G.num_functions(); ++f) {
        const RationalMatrix& t = G.function(f).values;
        for (std::size_t x = 0; x < G.num_points(); ++x) {
            const auto row = t.row(static_cast<Eigen::Index>(x));
            for (std::size_t k = 0; k < C; ++k) {
                std::optional<Rational> rival;
                for (std::size_t l = 0; l < C; ++l) {
                    if (l != k && (!rival || row(static_cast<Eigen::Index>(l)) > *rival)) {
                        rival = row(static_cast<Eigen::Index>(l));
                    }
                }
                values(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(x * C + k)) =
                    (row(static_cast<Eigen::Index>(k)) - *rival) / Rational(2);
            }
        }
    }
    return ScoreClass(std::move(domain), G.names(), std::move(values), ValueKind::real, -G.bound(), G.bound(), C,
                      true);
}

Rational squash(const Rational& t, const Rational& gamma) {
    if (t <= Rational(0)) return Rational(0);
    return t <= gamma ? t : gamma;
}

ScoreClass squash(const ScoreClass& F, const Rational& gamma) {
    require(gamma > Rational(0) && gamma <= Rational(1), "gamma", "gamma must lie in (0, 1]");
    require(F.kind() == ValueKind::real, "value_kind", "squashing applies to real-valued classes");
    RationalMatrix v = F.values().unaryExpr([&](const Rational& t) { return squash(t, gamma); });
    return ScoreClass(F.domain(), F.names(), std::move(v), ValueKind::real, Rational(0), gamma,
                      F.num_categories(), false);
}

std::int64_t discretize(const Rational& t, const Rational& eta) {
    const std::int64_t q = (abs(t) / eta).floor();
    return t.sign() < 0 ? -q : q;
}

ScoreClass discretize(const ScoreClass& F, const Rational& eta) {
    require(eta > Rational(0), "eta", "eta must be positive");
    require(F.kind() == ValueKind::real, "value_kind", "discretization applies to real-valued classes");
    RationalMatrix v = F.values().unaryExpr([&](const Rational& t) { return Rational(discretize(t, eta)); });
    return ScoreClass(F.domain(), F.names(), std::move(v), ValueKind::integer,
                      Rational(discretize(F.range_lo(), eta)), Rational(discretize(F.range_hi(), eta)),
                      F.num_categories(), F.margin_structured());
}

ScoreClass component_class(const FiniteFunctionClass& G, std::size_t k) {
    require(k < G.num_categories(), "category", "component index out of range");
    std::vector<LabeledPoint> domain;
    for (std::size_t x = 0; x < G.num_points(); ++x) domain.push_back({x, k});
    RationalMatrix v(static_cast<Eigen::Index>(G.num_functions()), static_cast<Eigen::Index>(G.num_points()));
    for (std::size_t f = 0; f < G.num_functions(); ++f) {
        v.row(static_cast<Eigen::Index>(f)) = G.function(f).values.col(static_cast<Eigen::Index>(k)).transpose();
    }
    return ScoreClass(std::move(domain), G.names(), std::move(v), ValueKind::real, -G.bound(), G.bound(),
                      G.num_categories(), false);
}

std::optional<std::size_t> classify(const FiniteFunctionClass& G, std::string_view g_name, std::size_t x) {
    const std::size_t f = G.index_of(g_name);
    require(x < G.num_points(), "point", "description index out of range");
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t k = 1; k < G.num_categories(); ++k) {
        const Rational& v = G.value(f, x, k);
        const Rational& b = G.value(f, x, best);
        if (v > b) {
            best = k;
            tie = false;
        } else if (v == b) {
            tie = true;
        }
    }
    if (tie) return std::nullopt;
    return best;
}

Rational margin_loss(const Rational& t, const Rational& gamma, LossKind kind) {
    require(gamma > Rational(0) && gamma <= Rational(1), "gamma", "gamma must lie in (0, 1]");
    if (kind == LossKind::hard) return t < gamma ? Rational(1) : Rational(0);
    if (t <= Rational(0)) return Rational(1);
    if (t <= gamma) return Rational(1) - t / gamma;
    return Rational(0);
}

Rational empirical_margin_risk(const FiniteFunctionClass& G, std::string_view g_name, const Sample& sample,
                               const Rational& gamma, LossKind kind) {
    const std::size_t f = G.index_of(g_name);
    const std::size_t C = G.num_categories();
    Rational total(0);
    for (const auto& z : sample.entries()) {
        require(z.x < G.num_points() && z.y < C, "sample", "sample point out of range");
        std::optional<Rational> rival;
        for (std::size_t l = 0; l < C; ++l) {
            if (l != z.y && (!rival || G.value(f, z.x, l) > *rival)) rival = G.value(f, z.x, l);
        }
        const Rational rho = (G.value(f, z.x, z.y) - *rival) / Rational(2);
        total += margin_loss(rho, gamma, kind);
    }
    return total / Rational(static_cast<std::int64_t>(sample.size()));
}

}  // namespace capdim
