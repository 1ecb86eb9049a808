#include "capdim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "capdim/errors.hpp"
#include "capdim/rng.hpp"

namespace capdim {

PNorm PNorm::finite(unsigned p) {
    require(p >= 1, "p", "the L_p exponent must be a positive integer or infinity");
    return PNorm(p);
}

PNorm PNorm::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "linf") return infinity();
    unsigned p = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    require(ec == std::errc{} && ptr == text.data() + text.size() && p >= 1, "p",
            "expected a positive integer or 'inf', got '" + std::string(text) + "'");
    return PNorm(p);
}

std::string PNorm::str() const { return is_infinite() ? "inf" : std::to_string(order_); }

double Distance::value() const {
    return p.is_infinite() ? power.to_double() : std::pow(power.to_double(), 1.0 / p.order());
}

Radius Radius::of(const Rational& eps, PNorm p) {
    require(eps > Rational(0), "eps", "radius must be positive");
    return {p.is_infinite() ? eps : pow(eps, p.order()), p};
}

Radius Radius::scaled(const Rational& eps, const Rational& divisor, PNorm p) {
    require(divisor > Rational(0), "divisor", "scaling divisor must be positive");
    Radius r = of(eps, p);
    if (!p.is_infinite()) r.power /= divisor;
    return r;
}

double Radius::value() const {
    return p.is_infinite() ? power.to_double() : std::pow(power.to_double(), 1.0 / p.order());
}

Radius Radius::doubled() const {
    return {p.is_infinite() ? power * Rational(2) : power * pow(Rational(2), p.order()), p};
}

RationalMatrix restrict_to(const ScoreClass& F, const Sample& sample) {
    RationalMatrix out(static_cast<Eigen::Index>(F.num_functions()), static_cast<Eigen::Index>(sample.size()));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) =
            F.values().col(static_cast<Eigen::Index>(F.require_position(sample[i])));
    }
    return out;
}

Distance row_distance(const RationalMatrix& restricted, std::size_t f, std::size_t g, PNorm p) {
    const auto a = restricted.row(static_cast<Eigen::Index>(f));
    const auto b = restricted.row(static_cast<Eigen::Index>(g));
    Rational acc(0);
    for (Eigen::Index i = 0; i < restricted.cols(); ++i) {
        const Rational d = abs(a(i) - b(i));
        if (p.is_infinite()) {
            acc = max(acc, d);
        } else {
            acc += pow(d, p.order());
        }
    }
    if (!p.is_infinite()) acc /= Rational(static_cast<std::int64_t>(restricted.cols()));
    return {acc, p};
}

Distance dist(const ScoreClass& F, std::string_view f, std::string_view g, const Sample& sample, PNorm p) {
    const auto index = [&](std::string_view name) {
        const auto& names = F.names();
        const auto it = std::find(names.begin(), names.end(), name);
        require(it != names.end(), "function_name", "unknown function '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    const RationalMatrix r = restrict_to(F, sample);
    return row_distance(r, index(f), index(g), p);
}

namespace {

// Distinct restrictions (first occurrence kept) and the pairwise distance
// powers between them.
struct Collapsed {
    std::vector<std::size_t> reps;
    std::vector<std::vector<Rational>> dist;
};

Collapsed collapse(const ScoreClass& F, const Sample& sample, PNorm p) {
    const RationalMatrix r = restrict_to(F, sample);
    Collapsed c;
    for (std::size_t f = 0; f < F.num_functions(); ++f) {
        const bool dup = std::any_of(c.reps.begin(), c.reps.end(), [&](std::size_t g) {
            return r.row(static_cast<Eigen::Index>(f)) == r.row(static_cast<Eigen::Index>(g));
        });
        if (!dup) c.reps.push_back(f);
    }
    const std::size_t m = c.reps.size();
    c.dist.assign(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            c.dist[i][j] = c.dist[j][i] = row_distance(r, c.reps[i], c.reps[j], p).power;
        }
    }
    return c;
}

class MaxClique {
public:
    explicit MaxClique(std::vector<std::vector<char>> adj) : adj_(std::move(adj)) {}

    std::vector<int> run() {
        std::vector<int> P(adj_.size());
        for (std::size_t i = 0; i < P.size(); ++i) P[i] = static_cast<int>(i);
        std::vector<int> R;
        expand(R, P, {});
        return best_;
    }

private:
    void expand(std::vector<int>& R, std::vector<int> P, std::vector<int> X) {
        if (P.empty()) {
            if (R.size() > best_.size()) best_ = R;
            return;
        }
        if (R.size() + P.size() <= best_.size()) return;
        int pivot = P.front();
        std::size_t pivot_deg = 0;
        for (const auto* set : {&P, &X}) {
            for (int u : *set) {
                const auto deg = static_cast<std::size_t>(
                    std::count_if(P.begin(), P.end(), [&](int v) { return adj_[u][v] != 0; }));
                if (deg >= pivot_deg) {
                    pivot = u;
                    pivot_deg = deg;
                }
            }
        }
        std::vector<int> candidates;
        for (int v : P) {
            if (adj_[pivot][v] == 0) candidates.push_back(v);
        }
        for (int v : candidates) {
            std::vector<int> P2;
            std::vector<int> X2;
            for (int u : P) {
                if (adj_[v][u] != 0) P2.push_back(u);
            }
            for (int u : X) {
                if (adj_[v][u] != 0) X2.push_back(u);
            }
            R.push_back(v);
            expand(R, std::move(P2), std::move(X2));
            R.pop_back();
            P.erase(std::find(P.begin(), P.end(), v));
            X.push_back(v);
            if (R.size() + P.size() <= best_.size()) return;
        }
    }

    std::vector<std::vector<char>> adj_;
    std::vector<int> best_;
};

class SetCover {
public:
    // covers[c] = elements covered by choosing center c.
    explicit SetCover(std::vector<std::vector<char>> covers) : covers_(std::move(covers)) {}

    std::vector<int> run() {
        const std::size_t m = covers_.size();
        // Greedy cover as the initial incumbent.
        std::vector<char> covered(m, 0);
        std::size_t left = m;
        while (left > 0) {
            int best = -1;
            std::size_t gain = 0;
            for (std::size_t c = 0; c < m; ++c) {
                std::size_t g = 0;
                for (std::size_t e = 0; e < m; ++e) g += (covers_[c][e] != 0 && covered[e] == 0) ? 1 : 0;
                if (g > gain) {
                    gain = g;
                    best = static_cast<int>(c);
                }
            }
            best_.push_back(best);
            for (std::size_t e = 0; e < m; ++e) {
                if (covers_[best][e] != 0 && covered[e] == 0) {
                    covered[e] = 1;
                    --left;
                }
            }
        }
        max_set_ = 0;
        for (const auto& s : covers_) {
            max_set_ = std::max<std::size_t>(max_set_, static_cast<std::size_t>(std::count(s.begin(), s.end(), 1)));
        }
        std::vector<int> chosen;
        search(std::vector<char>(m, 0), m, chosen);
        return best_;
    }

private:
    void search(const std::vector<char>& covered, std::size_t left, std::vector<int>& chosen) {
        if (left == 0) {
            if (chosen.size() < best_.size()) best_ = chosen;
            return;
        }
        const std::size_t lower = (left + max_set_ - 1) / max_set_;
        if (chosen.size() + lower >= best_.size()) return;
        // Branch on the uncovered element with the fewest covering centers.
        std::size_t pick = 0;
        std::size_t fewest = SIZE_MAX;
        for (std::size_t e = 0; e < covered.size(); ++e) {
            if (covered[e] != 0) continue;
            std::size_t n = 0;
            for (const auto& s : covers_) n += s[e] != 0 ? 1 : 0;
            if (n < fewest) {
                fewest = n;
                pick = e;
            }
        }
        for (std::size_t c = 0; c < covers_.size(); ++c) {
            if (covers_[c][pick] == 0) continue;
            std::vector<char> next = covered;
            std::size_t left2 = left;
            for (std::size_t e = 0; e < next.size(); ++e) {
                if (covers_[c][e] != 0 && next[e] == 0) {
                    next[e] = 1;
                    --left2;
                }
            }
            chosen.push_back(static_cast<int>(c));
            search(next, left2, chosen);
            chosen.pop_back();
        }
    }

    std::vector<std::vector<char>> covers_;
    std::vector<int> best_;
    std::size_t max_set_ = 1;
};

void check_cap(std::size_t distinct, std::size_t cap) {
    if (distinct > cap) {
        throw CapExceeded("exact search refuses " + std::to_string(distinct) + " distinct functions (cap " +
                          std::to_string(cap) + ")");
    }
}

}  // namespace

PackingResult packing_number(const ScoreClass& F, const Sample& sample, const Radius& eps, PackingMode mode,
                             std::size_t cap) {
    require(eps.power > Rational(0), "eps", "packing radius must be positive");
    const Collapsed c = collapse(F, sample, eps.p);
    const std::size_t m = c.reps.size();
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) adj[i][j] = (i != j && c.dist[i][j] >= eps.power) ? 1 : 0;
    }
    std::vector<int> chosen;
    PackingResult out;
    if (mode == PackingMode::greedy) {
        for (std::size_t i = 0; i < m; ++i) {
            if (std::all_of(chosen.begin(), chosen.end(), [&](int j) { return adj[i][j] != 0; })) {
                chosen.push_back(static_cast<int>(i));
            }
        }
        out.exact = false;
    } else {
        check_cap(m, cap);
        chosen = MaxClique(std::move(adj)).run();
        out.exact = true;
    }
    out.value = chosen.size();
    for (int i : chosen) out.witness.push_back(F.names()[c.reps[static_cast<std::size_t>(i)]]);
    return out;
}

PackingResult packing_number(const ScoreClass& F, const Sample& sample, const Rational& eps, PNorm p,
                             PackingMode mode, std::size_t cap) {
    return packing_number(F, sample, Radius::of(eps, p), mode, cap);
}

CoveringResult proper_covering_number(const ScoreClass& F, const Sample& sample, const Radius& eps,
                                      std::size_t cap) {
    require(eps.power > Rational(0), "eps", "covering radius must be positive");
    const Collapsed c = collapse(F, sample, eps.p);
    const std::size_t m = c.reps.size();
    check_cap(m, cap);
    std::vector<std::vector<char>> covers(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) covers[i][j] = c.dist[i][j] < eps.power ? 1 : 0;
    }
    const std::vector<int> centers = SetCover(std::move(covers)).run();
    CoveringResult out;
    out.value = centers.size();
    for (int i : centers) out.centers.push_back(F.names()[c.reps[static_cast<std::size_t>(i)]]);
    return out;
}

CoveringResult proper_covering_number(const ScoreClass& F, const Sample& sample, const Rational& eps, PNorm p,
                                      std::size_t cap) {
    return proper_covering_number(F, sample, Radius::of(eps, p), cap);
}

std::uint64_t multiset_count(std::size_t d, std::size_t n) {
    // C(d + n - 1, n), computed incrementally with saturation.
    if (d == 0) return n == 0 ? 1 : 0;
    unsigned __int128 acc = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        acc = acc * (d - 1 + i) / i;
        if (acc > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(acc);
}

PackingResult uniform_packing(const ScoreClass& F, std::size_t n, const Radius& eps, std::uint64_t budget,
                              std::uint64_t seed, std::size_t cap) {
    require(n >= 1, "n", "sample size must be at least 1");
    require(eps.power > Rational(0), "eps", "packing radius must be positive");
    PackingResult best;
    best.value = 0;
    const auto consider = [&](const Sample& s) {
        PackingResult r = packing_number(F, s, eps, PackingMode::exact, cap);
        if (r.value > best.value) {
            best = std::move(r);
            best.sample = s;
        }
    };
    if (multiset_count(F.domain_size(), n) <= budget) {
        for_each_multiset(F, n, consider);
        best.exact = true;
    } else {
        std::mt19937_64 rng(seed);
        for (std::uint64_t draw = 0; draw < budget; ++draw) {
            std::vector<LabeledPoint> pts;
            for (std::size_t i = 0; i < n; ++i) pts.push_back(F.domain()[bounded(rng, F.domain_size())]);
            consider(Sample(std::move(pts)));
        }
        best.exact = false;
    }
    return best;
}

PackingResult uniform_packing(const ScoreClass& F, std::size_t n, const Rational& eps, PNorm p,
                              std::uint64_t budget, std::uint64_t seed, std::size_t cap) {
    return uniform_packing(F, n, Radius::of(eps, p), budget, seed, cap);
}

}  // namespace capdim
