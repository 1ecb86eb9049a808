#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capdim/rational.hpp"

namespace capdim {

/// A labeled pair z = (x, y). Both indices are 0-based; user-facing output
/// prints categories 1-based.
struct LabeledPoint {
    std::size_t x = 0;
    std::size_t y = 0;

    friend auto operator<=>(const LabeledPoint&, const LabeledPoint&) = default;
};

/// All (x, k) pairs, x-major.
[[nodiscard]] std::vector<LabeledPoint> full_domain(std::size_t num_points, std::size_t num_categories);

struct NamedTable {
    std::string name;
    RationalMatrix values;  // num_points x num_categories
};

/// Tabular class of vector-valued functions g = (g_1, ..., g_C) on a finite
/// description space, with values in [-M, M]^C.
class FiniteFunctionClass {
public:
    FiniteFunctionClass(std::size_t num_categories, Rational bound,
                        std::vector<std::string> point_names, std::vector<NamedTable> functions);

    [[nodiscard]] std::size_t num_points() const noexcept { return point_names_.size(); }
    [[nodiscard]] std::size_t num_categories() const noexcept { return num_categories_; }
    [[nodiscard]] std::size_t num_functions() const noexcept { return functions_.size(); }
    [[nodiscard]] const Rational& bound() const noexcept { return bound_; }
    [[nodiscard]] const std::vector<std::string>& point_names() const noexcept { return point_names_; }
    [[nodiscard]] const std::vector<NamedTable>& functions() const noexcept { return functions_; }
    [[nodiscard]] const NamedTable& function(std::size_t f) const { return functions_.at(f); }
    [[nodiscard]] std::vector<std::string> names() const;

    /// Index of the named function; throws PreconditionError when unknown.
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    /// Index of the named description point; throws when unknown.
    [[nodiscard]] std::size_t point_index(std::string_view name) const;

    [[nodiscard]] const Rational& value(std::size_t f, std::size_t x, std::size_t k) const {
        return functions_[f].values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k));
    }

private:
    std::size_t num_categories_;
    Rational bound_;
    std::vector<std::string> point_names_;
    std::vector<NamedTable> functions_;
};

enum class ValueKind { real, integer };

/// Real- or integer-valued function class on an explicit domain of labeled
/// pairs. Values are stored functions x domain.
class ScoreClass {
public:
    ScoreClass(std::vector<LabeledPoint> domain, std::vector<std::string> names, RationalMatrix values,
               ValueKind kind, Rational range_lo, Rational range_hi, std::size_t num_categories,
               bool margin_structured);

    [[nodiscard]] const std::vector<LabeledPoint>& domain() const noexcept { return domain_; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const RationalMatrix& values() const noexcept { return values_; }
    [[nodiscard]] ValueKind kind() const noexcept { return kind_; }
    [[nodiscard]] const Rational& range_lo() const noexcept { return range_lo_; }
    [[nodiscard]] const Rational& range_hi() const noexcept { return range_hi_; }
    [[nodiscard]] std::size_t num_categories() const noexcept { return num_categories_; }
    [[nodiscard]] bool margin_structured() const noexcept { return margin_structured_; }
    [[nodiscard]] std::size_t num_functions() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t domain_size() const noexcept { return domain_.size(); }

    /// max(|range_lo|, |range_hi|) rounded up; the M_F of integer classes.
    [[nodiscard]] std::int64_t integer_bound() const;

    [[nodiscard]] std::optional<std::size_t> position(const LabeledPoint& z) const;
    /// Position of z in the domain; throws PreconditionError when absent.
    [[nodiscard]] std::size_t require_position(const LabeledPoint& z) const;
    /// True when (x, k) is in the domain for every category k.
    [[nodiscard]] bool has_full_row(std::size_t x) const;

    [[nodiscard]] const Rational& at(std::size_t f, std::size_t pos) const {
        return values_(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(pos));
    }
    [[nodiscard]] const Rational& at(std::size_t f, const LabeledPoint& z) const {
        return at(f, require_position(z));
    }

    /// The class restricted to the listed functions (same domain).
    [[nodiscard]] ScoreClass select_functions(const std::vector<std::size_t>& which) const;

private:
    std::vector<LabeledPoint> domain_;
    std::vector<std::string> names_;
    RationalMatrix values_;
    ValueKind kind_;
    Rational range_lo_;
    Rational range_hi_;
    std::size_t num_categories_;
    bool margin_structured_;
    std::map<LabeledPoint, std::size_t> index_;
};

/// An ordered sample of labeled points; repetition allowed, never empty.
class Sample {
public:
    explicit Sample(std::vector<LabeledPoint> entries);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const std::vector<LabeledPoint>& entries() const noexcept { return entries_; }
    [[nodiscard]] const LabeledPoint& operator[](std::size_t i) const { return entries_[i]; }

private:
    std::vector<LabeledPoint> entries_;
};

/// Exact check of max_{k<l} (f(x,k) + f(x,l)) = 0 for every function and
/// every x whose full row is in the domain. False if some x lacks a full row.
[[nodiscard]] bool is_margin_structured(const ScoreClass& F);

/// rho_g(x, k) = (g_k(x) - max_{l != k} g_l(x)) / 2 on all of Z.
[[nodiscard]] ScoreClass margin_class(const FiniteFunctionClass& G);

[[nodiscard]] Rational squash(const Rational& t, const Rational& gamma);
/// Clips every value into [0, gamma]; gamma must lie in (0, 1].
[[nodiscard]] ScoreClass squash(const ScoreClass& F, const Rational& gamma);

[[nodiscard]] std::int64_t discretize(const Rational& t, const Rational& eta);
/// sign(t) * floor(|t| / eta) on every value; the result is integer-valued.
[[nodiscard]] ScoreClass discretize(const ScoreClass& F, const Rational& eta);

/// The real-valued class G_k = {g_k : g in G} on X, as a ScoreClass whose
/// domain entries are (x, k).
[[nodiscard]] ScoreClass component_class(const FiniteFunctionClass& G, std::size_t k);

/// argmax_k g_k(x), or nullopt (the dummy category) on ties.
[[nodiscard]] std::optional<std::size_t> classify(const FiniteFunctionClass& G, std::string_view g_name,
                                                  std::size_t x);

enum class LossKind { hard, ramp };

/// hard: 1{t < gamma}; ramp: 1{t <= 0} + (1 - t/gamma) 1{t in (0, gamma]}.
[[nodiscard]] Rational margin_loss(const Rational& t, const Rational& gamma, LossKind kind);

/// Mean margin loss of rho_g over the sample.
[[nodiscard]] Rational empirical_margin_risk(const FiniteFunctionClass& G, std::string_view g_name,
                                             const Sample& sample, const Rational& gamma, LossKind kind);

}  // namespace capdim
