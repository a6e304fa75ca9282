#include "chemchaos/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chemchaos/catalog.hpp"

namespace chemchaos {

using nlohmann::json;

namespace {

json poly_to_json(const Poly& p) {
    json arr = json::array();
    for (const auto& m : p) {
        json jm;
        jm["coeff"] = m.coeff.to_string();
        jm["exps"] = m.exps;
        arr.push_back(std::move(jm));
    }
    return arr;
}

Poly poly_from_json(const json& arr, int dim) {
    Poly p;
    for (const auto& jm : arr) {
        Monomial m;
        m.coeff = Rational::from_string(jm.at("coeff").get<std::string>());
        m.exps = jm.at("exps").get<std::vector<int>>();
        if (static_cast<int>(m.exps.size()) != dim)
            throw std::invalid_argument("system document: exps length does not match dim");
        p.push_back(std::move(m));
    }
    return p;
}

}  // namespace

std::string system_to_json(const PolySystem& s) {
    json j;
    j["dim"] = s.dim;
    j["vars"] = s.var_names;
    json eqs = json::array();
    for (const auto& eq : s.eqs) eqs.push_back(poly_to_json(eq));
    j["eqs"] = std::move(eqs);
    return j.dump(2) + "\n";
}

PolySystem system_from_json(const std::string& text) {
    json j = json::parse(text);
    const int dim = j.at("dim").get<int>();
    auto vars = j.at("vars").get<std::vector<std::string>>();
    const json& eqs = j.at("eqs");
    if (static_cast<int>(eqs.size()) != dim)
        throw std::invalid_argument("system document: equation count does not match dim");
    std::vector<Poly> polys;
    for (const auto& eq : eqs) polys.push_back(poly_from_json(eq, dim));
    return PolySystem(dim, std::move(vars), std::move(polys));
}

std::string plan_to_json(const QcmPlan& plan, const std::string& base_id) {
    json j;
    if (!base_id.empty())
        j["base"] = json{{"id", base_id}};
    else
        j["base"] = json{{"system", json::parse(system_to_json(plan.base))}};
    j["epsilon"] = plan.epsilon.to_string();
    j["mu"] = plan.mu.to_string();
    json a = json::array();
    for (const auto& v : plan.a) a.push_back(v.to_string());
    j["a"] = std::move(a);
    if (plan.post_scale) {
        json ps = json::array();
        for (const auto& v : *plan.post_scale) ps.push_back(v.to_string());
        j["post_scale"] = std::move(ps);
    }
    json pieces = json::array();
    for (const auto& p : plan.pieces) {
        json jp;
        jp["equation"] = p.equation + 1;
        jp["kind"] = piece_kind_name(p.kind);
        jp["monomials"] = p.monomials;
        if (!p.fill.empty()) jp["fill"] = poly_to_json(p.fill);
        pieces.push_back(std::move(jp));
    }
    j["pieces"] = std::move(pieces);
    return j.dump(2) + "\n";
}

QcmPlan plan_from_json(const std::string& text) {
    json j = json::parse(text);
    QcmPlan plan;
    const json& base = j.at("base");
    if (base.contains("id")) {
        plan.base = catalog_instantiate(base.at("id").get<std::string>());
    } else {
        plan.base = system_from_json(base.at("system").dump());
    }
    plan.epsilon = Rational::from_string(j.at("epsilon").get<std::string>());
    plan.mu = Rational::from_string(j.at("mu").get<std::string>());
    for (const auto& v : j.at("a")) plan.a.push_back(Rational::from_string(v.get<std::string>()));
    if (j.contains("post_scale")) {
        std::vector<Rational> ps;
        for (const auto& v : j.at("post_scale")) ps.push_back(Rational::from_string(v.get<std::string>()));
        plan.post_scale = std::move(ps);
    }
    for (const auto& jp : j.at("pieces")) {
        PlanPiece p;
        p.equation = jp.at("equation").get<int>() - 1;
        p.kind = piece_kind_from_name(jp.at("kind").get<std::string>());
        p.monomials = jp.at("monomials").get<std::vector<std::vector<int>>>();
        if (jp.contains("fill")) p.fill = poly_from_json(jp.at("fill"), plan.base.dim);
        plan.pieces.push_back(std::move(p));
    }
    return plan;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string series_csv(const std::vector<double>& times,
                       const std::vector<Eigen::VectorXd>& rows, const std::string& value_prefix) {
    std::string out = "t";
    const int n = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    for (int i = 1; i <= n; ++i) out += "," + value_prefix + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        out += format_double(times[k]);
        for (int i = 0; i < n; ++i) out += "," + format_double(rows[k][i]);
        out += "\n";
    }
    return out;
}

}  // namespace chemchaos
