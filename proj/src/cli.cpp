#include "capdim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "capdim/bounds.hpp"
#include "capdim/dims.hpp"
#include "capdim/errors.hpp"
#include "capdim/harness.hpp"
#include "capdim/io.hpp"
#include "capdim/metrics.hpp"
#include "capdim/rademacher.hpp"

namespace capdim {

namespace {

using nlohmann::json;

const std::vector<std::string> kCommands{"dims", "pack", "bound", "sweep", "risk", "verify", "rademacher"};

json conventions() {
    return {
        {"packing", "pairwise distance >= eps"},
        {"covering", "proper cover by class members, open balls d < eps"},
        {"zero_dimension", "packing bounds at d = 0 equal 2 for the old L_inf graph bound and 1 otherwise"},
        {"categories", "1-based in output"},
        {"dichotomy", "'+' marks s_i = +1"},
        {"rationals", "exact, printed as num/den"},
    };
}

std::string usage() {
    return "usage: capdim <command> [options]\n"
           "commands (each accepts --out FILE):\n"
           "  dims <class.json> --kind fat|graph|natarajan --gamma G\n"
           "  dims <class.json> --kind strong_fat|strong_g|strong_n --eta E [--gamma G (strong_fat only)]\n"
           "  pack <class.json> --eps E --p P (--n N | --sample x:k,...) [--gamma G]\n"
           "  bound <name> [--param value ...]\n"
           "  sweep <entropy_linfty|entropy_l2|risk> --var m|C|gamma --from A --to B --steps S [--param value ...]\n"
           "  risk --norm linf|l2 [--variant old|new] [--param value ...]\n"
           "  verify <lemma_id> [--seed S] [--instances N]\n"
           "  rademacher <class.json> [--mode exact|mc] [--target rho|squashed|maurer] [--gamma G] [--sample x:k,...]\n";
}

Rational parse_rational(const std::string& text, const char* name) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw PreconditionError(name, "cannot parse '" + text + "' as an exact rational");
    }
}

double parse_real(const std::string& text, const char* name) { return parse_rational(text, name).to_double(); }

Sample parse_sample(const FiniteFunctionClass& G, const std::string& text) {
    std::vector<LabeledPoint> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.rfind(':');
        require(colon != std::string::npos, "sample", "entries look like point:category, got '" + item + "'");
        const std::size_t x = G.point_index(item.substr(0, colon));
        const auto k = static_cast<std::size_t>(parse_rational(item.substr(colon + 1), "sample").floor());
        require(k >= 1 && k <= G.num_categories(), "sample", "category out of range in '" + item + "'");
        pts.push_back({x, k - 1});
    }
    require(!pts.empty(), "sample", "sample must not be empty");
    return Sample(std::move(pts));
}

json sample_json(const FiniteFunctionClass& G, const Sample& s) {
    json out = json::array();
    for (const auto& z : s.entries()) out.push_back(G.point_names()[z.x] + ":" + std::to_string(z.y + 1));
    return out;
}

// Named numeric parameters shared by bound, sweep and risk.
struct Params {
    std::map<std::string, std::string> raw;

    [[nodiscard]] bool has(const std::string& k) const { return raw.contains(k); }
    [[nodiscard]] double get(const std::string& k) const {
        const auto it = raw.find(k);
        require(it != raw.end(), "params", "missing --" + k);
        return parse_real(it->second, "params");
    }
    [[nodiscard]] double get(const std::string& k, double fallback) const { return has(k) ? get(k) : fallback; }
    [[nodiscard]] int get_int(const std::string& k) const {
        const double v = get(k);
        require(v == std::floor(v), "params", "--" + k + " must be an integer");
        return static_cast<int>(v);
    }
    [[nodiscard]] std::vector<double> list(const std::string& k) const {
        const auto it = raw.find(k);
        require(it != raw.end(), "params", "missing --" + k);
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_real(item, "params"));
        return out;
    }
    [[nodiscard]] BoundParams bound_params() const {
        BoundParams p;
        p.m = get("m", p.m);
        p.C = has("C") ? get_int("C") : p.C;
        p.gamma = get("gamma", p.gamma);
        p.delta = get("delta", p.delta);
        p.M_G = get("M_G", p.M_G);
        p.K1 = get("K1", p.K1);
        p.K2 = get("K2", p.K2);
        p.d_GC = get("d_GC", p.d_GC);
        p.d_Ggamma = get("d_Ggamma", p.d_Ggamma);
        p.Lambda = get("Lambda", p.Lambda);
        p.Lambda_X = get("LambdaX", p.Lambda_X);
        return p;
    }
    [[nodiscard]] Pathway variant() const {
        const auto it = raw.find("variant");
        if (it == raw.end() || it->second == "new") return Pathway::new_bound;
        require(it->second == "old", "variant", "variant must be old or new");
        return Pathway::old_bound;
    }
};

const std::vector<std::string> kParamNames{"eps",  "gamma",    "n",       "d",      "dG",     "dN",
                                           "C",    "M_G",      "M_F",     "Lambda", "LambdaX", "m",
                                           "delta", "K1",      "K2",      "d_GC",   "d_Ggamma", "p",
                                           "dims", "variant",  "entropy_log2"};

void add_params(CLI::App& app, Params& params) {
    for (const auto& name : kParamNames) {
        app.add_option_function<std::string>(
            "--" + name, [&params, name](const std::string& v) { params.raw[name] = v; }, "bound parameter");
    }
}

struct BoundValue {
    double value;
    std::optional<double> log2;
};

BoundValue with_log2(const std::function<double()>& plain, double log2) {
    try {
        return {plain(), log2};
    } catch (const PreconditionError& e) {
        if (e.name() != "overflow") throw;
        return {std::numeric_limits<double>::infinity(), log2};
    }
}

using BoundFn = std::function<BoundValue(const Params&)>;

const std::map<std::string, BoundFn>& bound_table() {
    static const std::map<std::string, BoundFn> table{
        {"packing_linfty_G_old",
         [](const Params& a) {
             const double e = a.get("eps"), g = a.get("gamma"), n = a.get("n"), d = a.get("dG");
             return with_log2([&] { return packing_bound_linfty_G_old(e, g, n, d); },
                              packing_bound_linfty_G_old_log2(e, g, n, d));
         }},
        {"packing_linfty_G",
         [](const Params& a) {
             const double e = a.get("eps"), g = a.get("gamma"), n = a.get("n"), d = a.get("dG");
             return with_log2([&] { return packing_bound_linfty_G(e, g, n, d); },
                              packing_bound_linfty_G_log2(e, g, n, d));
         }},
        {"packing_l2_G",
         [](const Params& a) {
             const double e = a.get("eps"), g = a.get("gamma"), d = a.get("dG");
             return with_log2([&] { return packing_bound_l2_G(e, g, d); }, packing_bound_l2_G_log2(e, g, d));
         }},
        {"packing_linfty_N",
         [](const Params& a) {
             const double e = a.get("eps"), g = a.get("gamma"), n = a.get("n"), d = a.get("dN");
             const int C = a.get_int("C");
             return with_log2([&] { return packing_bound_linfty_N(e, g, n, C, d); },
                              packing_bound_linfty_N_log2(e, g, n, C, d));
         }},
        {"packing_l2_N",
         [](const Params& a) {
             const double e = a.get("eps"), g = a.get("gamma"), d = a.get("dN");
             const int C = a.get_int("C");
             return with_log2([&] { return packing_bound_l2_N(e, g, C, d); }, packing_bound_l2_N_log2(e, g, C, d));
         }},
        {"decomposition_constant",
         [](const Params& a) { return BoundValue{decomposition_constant(a.get_int("C")), {}}; }},
        {"fat_decomposition",
         [](const Params& a) {
             return BoundValue{fat_decomposition_bound(a.get("eps"), a.get_int("C"), a.get("M_G", 1), a.list("dims")),
                               {}};
         }},
        {"graph_to_natarajan",
         [](const Params& a) { return BoundValue{graph_to_natarajan_bound(a.get_int("C"), a.get("dN")), {}}; }},
        {"natarajan_structural",
         [](const Params& a) { return BoundValue{natarajan_structural_bound(a.get_int("C"), a.list("dims")), {}}; }},
        {"svm_natarajan",
         [](const Params& a) {
             return BoundValue{
                 svm_natarajan_bound(a.get_int("C"), a.get("Lambda"), a.get("LambdaX"), a.get("gamma")), {}};
         }},
        {"hypothesis_nat_dim",
         [](const Params& a) { return BoundValue{hypothesis_nat_dim(a.get("eps"), a.bound_params()), {}}; }},
        {"metric_entropy_linfty",
         [](const Params& a) { return BoundValue{metric_entropy_linfty(a.bound_params(), a.variant()), {}}; }},
        {"metric_entropy_l2",
         [](const Params& a) {
             return BoundValue{metric_entropy_l2(a.get("eps"), a.bound_params(), a.variant()), {}};
         }},
        {"guaranteed_risk_linfty",
         [](const Params& a) {
             const BoundParams p = a.bound_params();
             const double h = a.has("entropy_log2") ? a.get("entropy_log2") : metric_entropy_linfty(p, a.variant());
             return BoundValue{guaranteed_risk_linfty(p, h), {}};
         }},
        {"guaranteed_risk_l2", [](const Params& a) { return BoundValue{guaranteed_risk_l2(a.bound_params()), {}}; }},
        {"rademacher_phase", [](const Params& a) { return BoundValue{rademacher_phase_bound(a.bound_params()), {}}; }},
        {"phase_F1", [](const Params& a) { return BoundValue{phase_F1(a.bound_params()), {}}; }},
        {"phase_F2", [](const Params& a) { return BoundValue{phase_F2(a.bound_params()), {}}; }},
        {"kp_constant",
         [](const Params& a) { return BoundValue{kp_constant(static_cast<unsigned>(a.get_int("p"))), {}}; }},
        {"lp_packing",
         [](const Params& a) {
             return BoundValue{
                 lp_packing_bound(a.get("eps"), a.get("M_F"), static_cast<unsigned>(a.get_int("p")), a.get("d")), {}};
         }},
    };
    return table;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Old and new pathway values of a swept quantity.
std::pair<double, double> sweep_pair(const std::string& bound, const Params& params, const BoundParams& p) {
    if (bound == "entropy_linfty") {
        return {metric_entropy_linfty(p, Pathway::old_bound), metric_entropy_linfty(p, Pathway::new_bound)};
    }
    if (bound == "entropy_l2") {
        const double eps = params.get("eps");
        return {metric_entropy_l2(eps, p, Pathway::old_bound), metric_entropy_l2(eps, p, Pathway::new_bound)};
    }
    if (bound == "risk") {
        return {guaranteed_risk_linfty(p, metric_entropy_linfty(p, Pathway::old_bound)), guaranteed_risk_l2(p)};
    }
    throw PreconditionError("bound", "sweep supports entropy_linfty, entropy_l2 and risk, got '" + bound + "'");
}

class Emitter {
public:
    Emitter(std::ostream& out, std::string path) : out_(out), path_(std::move(path)) {}

    void emit(const std::string& text) const {
        if (path_.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(path_);
        require(f.good(), "out", "cannot write '" + path_ + "'");
        f << text;
    }
    void emit(json doc) const {
        doc["conventions"] = conventions();
        emit(doc.dump(2) + "\n");
    }

private:
    std::ostream& out_;
    std::string path_;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    if (args.size() < 2 || std::find(kCommands.begin(), kCommands.end(), args[1]) == kCommands.end()) {
        if (args.size() >= 2 && (args[1] == "--help" || args[1] == "-h")) {
            out << usage();
            return kExitOk;
        }
        err << (args.size() < 2 ? "missing command\n" : "unknown command '" + args[1] + "'\n") << usage();
        return kExitUsage;
    }

    CLI::App app{"capacity measures for margin multi-category classifiers", "capdim"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "write output to this file");

    std::string class_path;
    std::string gamma_text;
    std::string eps_text;
    std::string eta_text;
    std::string kind_text = "fat";
    std::string p_text = "inf";
    std::string sample_text;
    std::string mode_text = "exact";
    std::string target_text = "rho";
    std::size_t n = 1;
    std::uint64_t budget = 1'000'000;
    std::uint64_t draws = 100000;
    std::uint64_t seed = 0;

    auto* dims_cmd = app.add_subcommand("dims", "dimension of the margin class at a scale");
    dims_cmd->add_option("class", class_path, "class JSON file")->required();
    dims_cmd->add_option("--gamma", gamma_text, "scale");
    dims_cmd->add_option("--kind", kind_text, "fat, graph, natarajan, strong_fat, strong_g or strong_n");
    dims_cmd->add_option("--eta", eta_text, "discretization step for strong kinds");

    auto* pack_cmd = app.add_subcommand("pack", "packing and covering numbers");
    pack_cmd->add_option("class", class_path, "class JSON file")->required();
    pack_cmd->add_option("--eps", eps_text, "separation radius")->required();
    pack_cmd->add_option("--p", p_text, "norm order or inf");
    pack_cmd->add_option("--n", n, "sample size for the uniform packing");
    pack_cmd->add_option("--sample", sample_text, "fixed sample as point:category list");
    pack_cmd->add_option("--gamma", gamma_text, "squash the margin class at gamma");
    pack_cmd->add_option("--budget", budget, "maximum samples enumerated");
    pack_cmd->add_option("--seed", seed, "seed for sampled search");

    Params params;
    std::string bound_name;
    auto* bound_cmd = app.add_subcommand("bound", "closed-form bound evaluator");
    bound_cmd->add_option("name", bound_name, "bound name")->required();
    add_params(*bound_cmd, params);

    std::string sweep_var;
    double from = 0;
    double to = 0;
    std::size_t steps = 2;
    auto* sweep_cmd = app.add_subcommand("sweep", "old vs new pathway over one variable, CSV");
    sweep_cmd->add_option("bound", bound_name, "entropy_linfty, entropy_l2 or risk")->required();
    sweep_cmd->add_option("--var", sweep_var, "m, C or gamma")->required();
    sweep_cmd->add_option("--from", from, "first value")->required();
    sweep_cmd->add_option("--to", to, "last value")->required();
    sweep_cmd->add_option("--steps", steps, "number of values");
    add_params(*sweep_cmd, params);

    std::string norm_text;
    auto* risk_cmd = app.add_subcommand("risk", "confidence interval of the guaranteed risk");
    risk_cmd->add_option("--norm", norm_text, "linf or l2")->required();
    add_params(*risk_cmd, params);

    std::string lemma_id;
    HarnessConfig config;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("lemma_id", lemma_id, "suite id")->required();
    verify_cmd->add_option("--seed", config.seed, "base seed");
    verify_cmd->add_option("--instances", config.instances, "number of instances");
    verify_cmd->add_option("--mc-draws", config.mc_draws, "Monte Carlo draws");
    verify_cmd->add_option("--mc-instances", config.mc_instances, "instances that also run Monte Carlo");

    auto* rad_cmd = app.add_subcommand("rademacher", "empirical Rademacher complexity");
    rad_cmd->add_option("class", class_path, "class JSON file")->required();
    rad_cmd->add_option("--mode", mode_text, "exact or mc");
    rad_cmd->add_option("--target", target_text, "rho, squashed or maurer");
    rad_cmd->add_option("--gamma", gamma_text, "squashing scale");
    rad_cmd->add_option("--sample", sample_text, "point:category list");
    rad_cmd->add_option("--draws", draws, "Monte Carlo draws");
    rad_cmd->add_option("--seed", seed, "Monte Carlo seed");

    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << usage();
        return kExitPrecondition;
    }

    const Emitter emitter(out, out_path);
    try {
        if (dims_cmd->parsed()) {
            const FiniteFunctionClass G = load_class(class_path);
            const ShatterKind kind = parse_shatter_kind(kind_text);
            const ScoreClass rho = margin_class(G);
            json doc{{"command", "dims"}, {"kind", to_string(kind)}};
            DimensionResult r;
            if (is_strong(kind)) {
                require(!eta_text.empty(), "eta", "strong kinds need --eta");
                const Rational eta = parse_rational(eta_text, "eta");
                require(gamma_text.empty() || kind == ShatterKind::strong_fat, "gamma",
                        "--gamma squashes the class and applies to strong_fat only");
                ScoreClass base = gamma_text.empty() ? rho : squash(rho, parse_rational(gamma_text, "gamma"));
                r = strong_dimension(discretize(base, eta), kind);
                doc["eta"] = eta.str();
                if (!gamma_text.empty()) doc["gamma"] = parse_rational(gamma_text, "gamma").str();
            } else {
                require(!gamma_text.empty(), "gamma", "--gamma is required");
                const Rational gamma = parse_rational(gamma_text, "gamma");
                r = dimension(rho, gamma, kind);
                doc["gamma"] = gamma.str();
            }
            doc["dimension"] = r.dimension;
            doc["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
            emitter.emit(doc);
        } else if (pack_cmd->parsed()) {
            const FiniteFunctionClass G = load_class(class_path);
            const PNorm p = PNorm::parse(p_text);
            const Rational eps = parse_rational(eps_text, "eps");
            ScoreClass F = margin_class(G);
            json doc{{"command", "pack"}, {"eps", eps.str()}, {"p", p.str()}};
            if (!gamma_text.empty()) {
                const Rational gamma = parse_rational(gamma_text, "gamma");
                F = squash(F, gamma);
                doc["gamma"] = gamma.str();
            }
            if (!sample_text.empty()) {
                const Sample s = parse_sample(G, sample_text);
                const PackingResult M = packing_number(F, s, eps, p);
                const CoveringResult N = proper_covering_number(F, s, eps, p);
                doc["sample"] = sample_json(G, s);
                doc["packing"] = {{"value", M.value}, {"witness", M.witness}, {"exact", M.exact}};
                doc["covering"] = {{"value", N.value}, {"centers", N.centers}};
            } else {
                const PackingResult M = uniform_packing(F, n, eps, p, budget, seed);
                doc["n"] = n;
                doc["packing"] = {{"value", M.value}, {"witness", M.witness}, {"exact", M.exact}};
                if (M.sample) doc["sample"] = sample_json(G, *M.sample);
            }
            emitter.emit(doc);
        } else if (bound_cmd->parsed()) {
            const auto it = bound_table().find(bound_name);
            if (it == bound_table().end()) {
                std::string names;
                for (const auto& [k, v] : bound_table()) names += " " + k;
                throw PreconditionError("bound", "unknown bound '" + bound_name + "'; known:" + names);
            }
            const BoundValue v = it->second(params);
            json doc{{"command", "bound"}, {"bound", bound_name}, {"value", number(v.value)}, {"params", params.raw}};
            if (v.log2) doc["log2"] = number(*v.log2);
            emitter.emit(doc);
        } else if (sweep_cmd->parsed()) {
            require(sweep_var == "m" || sweep_var == "C" || sweep_var == "gamma", "var", "var must be m, C or gamma");
            require(steps >= 1, "steps", "steps must be at least 1");
            std::ostringstream csv;
            csv << std::setprecision(17) << sweep_var << ",old,new,ratio\n";
            for (std::size_t i = 0; i < steps; ++i) {
                const double t = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
                double v = from + t * (to - from);
                BoundParams p = params.bound_params();
                if (sweep_var == "m") {
                    v = std::round(v);
                    p.m = v;
                } else if (sweep_var == "C") {
                    v = std::round(v);
                    p.C = static_cast<int>(v);
                } else {
                    p.gamma = v;
                }
                const auto [old_v, new_v] = sweep_pair(bound_name, params, p);
                csv << v << "," << old_v << "," << new_v << "," << new_v / old_v << "\n";
            }
            emitter.emit(csv.str());
        } else if (risk_cmd->parsed()) {
            const BoundParams p = params.bound_params();
            json doc{{"command", "risk"}, {"norm", norm_text}, {"params", params.raw}};
            if (norm_text == "linf") {
                const Pathway v = params.variant();
                const double h = metric_entropy_linfty(p, v);
                doc["variant"] = v == Pathway::old_bound ? "old" : "new";
                doc["entropy_log2"] = number(h);
                doc["confidence_interval"] = number(guaranteed_risk_linfty(p, h));
            } else if (norm_text == "l2") {
                doc["rademacher_bound"] = number(rademacher_phase_bound(p));
                doc["confidence_interval"] = number(guaranteed_risk_l2(p));
            } else {
                throw PreconditionError("norm", "norm must be linf or l2");
            }
            emitter.emit(doc);
        } else if (verify_cmd->parsed()) {
            const VerificationReport r = verify(lemma_id, config);
            json doc = r.to_json();
            doc["command"] = "verify";
            emitter.emit(doc);
            return r.passed() ? kExitOk : kExitVerification;
        } else if (rad_cmd->parsed()) {
            const FiniteFunctionClass G = load_class(class_path);
            RademacherMode mode = RademacherMode::exact;
            if (mode_text == "mc" || mode_text == "monte_carlo") {
                mode = RademacherMode::monte_carlo;
            } else {
                require(mode_text == "exact", "mode", "mode must be exact or mc");
            }
            Sample s = sample_text.empty() ? Sample([&] {
                std::vector<LabeledPoint> pts;
                for (std::size_t x = 0; x < G.num_points(); ++x) pts.push_back({x, 0});
                return pts;
            }())
                                           : parse_sample(G, sample_text);
            json doc{{"command", "rademacher"}, {"target", target_text}, {"sample", sample_json(G, s)}};
            RademacherEstimate r;
            if (target_text == "maurer") {
                r = maurer_rhs(G, s, mode, draws, seed);
            } else if (target_text == "rho") {
                r = empirical_rademacher(margin_class(G), s, mode, draws, seed);
            } else if (target_text == "squashed") {
                require(!gamma_text.empty(), "gamma", "squashed target needs --gamma");
                const Rational gamma = parse_rational(gamma_text, "gamma");
                r = empirical_rademacher(squash(margin_class(G), gamma), s, mode, draws, seed);
                doc["gamma"] = gamma.str();
            } else {
                throw PreconditionError("target", "target must be rho, squashed or maurer");
            }
            doc["mode"] = r.mode == RademacherMode::exact ? "exact" : "monte_carlo";
            doc["value"] = number(r.value);
            if (r.draws) doc["draws"] = *r.draws;
            if (r.std_error) doc["std_error"] = number(*r.std_error);
            if (mode == RademacherMode::monte_carlo) doc["seed"] = seed;
            emitter.emit(doc);
        }
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const CapExceeded& e) {
        err << "search cap exceeded: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const RationalOverflow& e) {
        err << "exact arithmetic overflow: " << e.what() << "\n";
        return kExitPrecondition;
    }
    return kExitOk;
}

}  // namespace capdim
