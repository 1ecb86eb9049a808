#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capdim/core_model.hpp"

namespace capdim {

/// Shattering predicate family. The strong kinds use threshold 1 and integer
/// witnesses in [-M_F + 1, M_F - 1].
enum class ShatterKind { fat, graph, natarajan, strong_fat, strong_g, strong_n };

[[nodiscard]] std::string to_string(ShatterKind kind);
[[nodiscard]] ShatterKind parse_shatter_kind(std::string_view text);
[[nodiscard]] constexpr bool is_strong(ShatterKind k) noexcept {
    return k == ShatterKind::strong_fat || k == ShatterKind::strong_g || k == ShatterKind::strong_n;
}
[[nodiscard]] constexpr bool uses_categories(ShatterKind k) noexcept {
    return k != ShatterKind::fat && k != ShatterKind::strong_fat;
}
[[nodiscard]] constexpr bool uses_alternative(ShatterKind k) noexcept {
    return k == ShatterKind::natarajan || k == ShatterKind::strong_n;
}

struct Witness {
    std::vector<Rational> b;
    std::vector<std::size_t> c;  // alternative categories; empty unless Natarajan-type
};

/// Dichotomy s_n as a bitmask: bit i set means s_i = +1.
using Dichotomy = std::uint64_t;

struct ShatterCertificate {
    std::vector<LabeledPoint> points;
    Witness witness;
    ShatterKind kind = ShatterKind::fat;
    std::optional<Rational> gamma;  // absent for strong kinds
    std::vector<std::pair<Dichotomy, std::string>> assignments;
};

struct SearchCaps {
    std::size_t max_domain = 12;
    std::size_t max_functions = 16;
};

struct DimensionResult {
    std::size_t dimension = 0;
    std::optional<ShatterCertificate> certificate;  // absent when dimension = 0
};

/// Checks every dichotomy against the given witness with closed inequalities.
/// For strong kinds gamma is ignored.
[[nodiscard]] bool is_shattered(const ScoreClass& F, const std::vector<LabeledPoint>& points, const Rational& gamma,
                                ShatterKind kind, const Witness& witness);

/// Replays a certificate: its assignments must realize every dichotomy.
[[nodiscard]] bool replay(const ScoreClass& F, const ShatterCertificate& cert);

/// A certificate for this exact point set, if some witness exists.
[[nodiscard]] std::optional<ShatterCertificate> find_certificate(const ScoreClass& F,
                                                                 const std::vector<LabeledPoint>& points,
                                                                 const Rational& gamma, ShatterKind kind);

/// gamma-Psi-dimension (fat, graph, natarajan) by exhaustive search.
[[nodiscard]] DimensionResult dimension(const ScoreClass& F, const Rational& gamma, ShatterKind kind,
                                        const SearchCaps& caps = {});

/// Strong dimension of an integer-valued class.
[[nodiscard]] DimensionResult strong_dimension(const ScoreClass& F, ShatterKind kind, const SearchCaps& caps = {});

struct DimensionCurve {
    std::vector<std::pair<Rational, std::size_t>> samples;  // eps descending
};

[[nodiscard]] DimensionCurve dimension_curve(const ScoreClass& F, ShatterKind kind, std::vector<Rational> eps_grid,
                                             const SearchCaps& caps = {});

struct HullDimension {
    std::size_t dimension = 0;
    std::vector<std::size_t> points;  // columns of a largest shattered set
};

/// gamma-dimension of the symmetric convex hull of the rows of `generators`
/// (functions x points). Witness b = 0 is complete for a symmetric convex
/// class, so each dichotomy is an exact rational LP feasibility problem.
/// Throws RationalOverflow when the pivoting leaves 64-bit range.
[[nodiscard]] HullDimension absconv_fat_dimension(const RationalMatrix& generators, const Rational& gamma);

}  // namespace capdim
