#include "capdim/io.hpp"

#include <fstream>

#include "capdim/errors.hpp"

namespace capdim {

Rational rational_from_json(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) {
        try {
            return Rational::parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw PreconditionError("rational", e.what());
        }
    }
    throw PreconditionError("rational", "expected an integer or a rational string, got " + v.dump());
}

FiniteFunctionClass class_from_json(const nlohmann::json& doc) {
    require(doc.is_object(), "class_file", "top level must be an object");
    for (const char* key : {"C", "M", "points", "functions"}) {
        require(doc.contains(key), "class_file", std::string("missing field '") + key + "'");
    }
    require(doc["C"].is_number_integer() && doc["C"].get<std::int64_t>() > 0, "C", "C must be a positive integer");
    const auto C = doc["C"].get<std::size_t>();
    std::vector<std::string> points;
    for (const auto& p : doc["points"]) points.push_back(p.get<std::string>());
    std::vector<NamedTable> fns;
    for (const auto& f : doc["functions"]) {
        require(f.contains("name") && f.contains("values"), "class_file", "functions need name and values");
        const auto& rows = f["values"];
        require(rows.is_array(), "table_shape", "values must be an array of rows");
        RationalMatrix t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(C));
        for (std::size_t x = 0; x < rows.size(); ++x) {
            require(rows[x].is_array() && rows[x].size() == C, "table_shape", "each row needs C values");
            for (std::size_t k = 0; k < C; ++k) {
                t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)) = rational_from_json(rows[x][k]);
            }
        }
        fns.push_back({f["name"].get<std::string>(), std::move(t)});
    }
    return FiniteFunctionClass(C, rational_from_json(doc["M"]), std::move(points), std::move(fns));
}

nlohmann::json class_to_json(const FiniteFunctionClass& G) {
    nlohmann::json doc;
    doc["C"] = G.num_categories();
    doc["M"] = G.bound().str();
    doc["points"] = G.point_names();
    doc["functions"] = nlohmann::json::array();
    for (const auto& f : G.functions()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index x = 0; x < f.values.rows(); ++x) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < f.values.cols(); ++k) row.push_back(f.values(x, k).str());
            rows.push_back(std::move(row));
        }
        doc["functions"].push_back({{"name", f.name}, {"values", std::move(rows)}});
    }
    return doc;
}

FiniteFunctionClass load_class(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "input", "cannot open class file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError("input", "malformed JSON in '" + path + "': " + e.what());
    }
    return class_from_json(doc);
}

std::string dichotomy_string(Dichotomy s, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(((s >> i) & 1U) ? '+' : '-');
    return out;
}

nlohmann::json certificate_to_json(const ShatterCertificate& cert) {
    nlohmann::json j;
    j["kind"] = to_string(cert.kind);
    if (cert.gamma) j["gamma"] = cert.gamma->str();
    j["points"] = nlohmann::json::array();
    for (const auto& z : cert.points) j["points"].push_back({{"x", z.x}, {"y", z.y + 1}});
    j["b"] = nlohmann::json::array();
    for (const auto& b : cert.witness.b) j["b"].push_back(b.str());
    if (!cert.witness.c.empty()) {
        j["c"] = nlohmann::json::array();
        for (auto c : cert.witness.c) j["c"].push_back(c + 1);
    }
    j["assignments"] = nlohmann::json::object();
    for (const auto& [s, name] : cert.assignments) j["assignments"][dichotomy_string(s, cert.points.size())] = name;
    return j;
}

}  // namespace capdim
