#include "chemchaos/crn.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace chemchaos {

int Reaction::degree() const { return std::accumulate(reactants.begin(), reactants.end(), 0); }

std::string species_name_for_var(const std::string& var) {
    bool lower = !var.empty();
    for (char ch : var)
        if (!(std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch))))
            lower = false;
    if (!lower) return var;
    std::string out = var;
    for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

std::string var_name_for_species(const std::string& species) {
    bool upper = !species.empty();
    for (char ch : species)
        if (!(std::isupper(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch))))
            upper = false;
    if (!upper) return species;
    std::string out = species;
    for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

Crn canonical_crn(const PolySystem& s) {
    auto chem = is_chemical(s);
    if (!chem.chemical) {
        const auto& v = chem.violations.front();
        std::ostringstream msg;
        msg << "canonical_crn: system is not chemical; equation " << (v.equation + 1)
            << " contains the non-chemical monomial with coefficient " << v.monomial.coeff.to_string();
        throw std::invalid_argument(msg.str());
    }
    Crn c;
    c.dim = s.dim;
    for (const auto& v : s.var_names) c.species.push_back(species_name_for_var(v));
    for (int i = 0; i < s.dim; ++i) {
        for (const auto& m : s.eqs[i]) {
            Reaction r;
            r.reactants = m.exps;
            r.products = m.exps;
            r.products[i] += m.coeff.sign();
            r.rate = m.coeff.abs();
            c.reactions.push_back(std::move(r));
        }
    }
    return c;
}

namespace {

// Index of the single species a canonical reaction changes, with direction.
struct CanonicalChange {
    int species;
    int delta;  // +1 or -1
};

CanonicalChange canonical_change(const Reaction& r, int dim) {
    int idx = -1, delta = 0, touched = 0;
    for (int k = 0; k < dim; ++k) {
        int d = r.products[k] - r.reactants[k];
        if (d != 0) {
            ++touched;
            idx = k;
            delta = d;
        }
    }
    if (touched != 1 || (delta != 1 && delta != -1))
        throw std::invalid_argument("fuse: input is not a canonical reaction network");
    return {idx, delta};
}

}  // namespace

Crn fuse(const Crn& c) {
    std::vector<CanonicalChange> changes;
    changes.reserve(c.reactions.size());
    for (const auto& r : c.reactions) changes.push_back(canonical_change(r, c.dim));

    using Key = std::pair<std::vector<int>, Rational>;
    std::map<Key, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < c.reactions.size(); ++i)
        groups[{c.reactions[i].reactants, c.reactions[i].rate}].push_back(i);

    // Emit order: position of each group's first member; unfused members keep
    // their own position.
    std::vector<std::pair<std::size_t, Reaction>> out;
    for (auto& [key, members] : groups) {
        std::vector<int> species_count(c.dim, 0);
        for (std::size_t i : members) ++species_count[changes[i].species];
        std::vector<std::size_t> fusable;
        for (std::size_t i : members) {
            if (species_count[changes[i].species] > 1) {
                out.emplace_back(i, c.reactions[i]);  // conflicting changes pass through
            } else {
                fusable.push_back(i);
            }
        }
        if (fusable.size() == 1) {
            out.emplace_back(fusable[0], c.reactions[fusable[0]]);
        } else if (fusable.size() > 1) {
            Reaction merged;
            merged.reactants = key.first;
            merged.products = key.first;
            merged.rate = key.second;
            for (std::size_t i : fusable) merged.products[changes[i].species] += changes[i].delta;
            out.emplace_back(fusable.front(), std::move(merged));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Crn fused;
    fused.dim = c.dim;
    fused.species = c.species;
    for (auto& [pos, r] : out) fused.reactions.push_back(std::move(r));
    return fused;
}

PolySystem crn_to_cds(const Crn& c) {
    std::vector<Poly> eqs(c.dim);
    for (const auto& r : c.reactions) {
        for (int i = 0; i < c.dim; ++i) {
            const int delta = r.products[i] - r.reactants[i];
            if (delta == 0) continue;
            eqs[i].push_back(make_monomial(r.rate * Rational(delta), r.reactants));
        }
    }
    std::vector<std::string> names;
    for (const auto& sp : c.species) names.push_back(var_name_for_species(sp));
    return PolySystem(c.dim, std::move(names), std::move(eqs));
}

Complexity crn_complexity(const Crn& c) {
    Complexity out;
    int maxdeg = 0;
    for (const auto& r : c.reactions) maxdeg = std::max(maxdeg, r.degree());
    out.by_degree.assign(maxdeg + 1, 0);
    for (const auto& r : c.reactions) {
        ++out.by_degree[r.degree()];
        ++out.total;
    }
    return out;
}

namespace {

std::string render_complex(const std::vector<int>& stoich, const std::vector<std::string>& species) {
    std::string out;
    for (std::size_t k = 0; k < stoich.size(); ++k) {
        if (stoich[k] == 0) continue;
        if (!out.empty()) out += " + ";
        if (stoich[k] != 1) out += std::to_string(stoich[k]) + " ";
        out += species[k];
    }
    return out.empty() ? "0" : out;
}

std::vector<int> parse_complex(const std::string& text, const std::vector<std::string>& species) {
    std::vector<int> stoich(species.size(), 0);
    std::string trimmed;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) || !trimmed.empty()) trimmed += ch;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.pop_back();
    if (trimmed == "0") return stoich;
    std::size_t pos = 0;
    while (pos < trimmed.size()) {
        std::size_t next = trimmed.find('+', pos);
        std::string term = trimmed.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        pos = next == std::string::npos ? trimmed.size() : next + 1;
        std::istringstream ts(term);
        std::string tok1, tok2;
        ts >> tok1 >> tok2;
        int count = 1;
        std::string name;
        if (tok2.empty()) {
            name = tok1;
        } else {
            count = std::stoi(tok1);
            name = tok2;
        }
        if (name == "0") throw std::invalid_argument("parse_crn: species name '0' is reserved");
        auto it = std::find(species.begin(), species.end(), name);
        if (it == species.end()) throw std::invalid_argument("parse_crn: unknown species '" + name + "'");
        if (count <= 0) throw std::invalid_argument("parse_crn: non-positive stoichiometry");
        stoich[static_cast<std::size_t>(it - species.begin())] += count;
    }
    return stoich;
}

}  // namespace

std::string render(const Crn& c) {
    std::string out;
    for (const auto& r : c.reactions) {
        out += render_complex(r.reactants, c.species);
        out += " --" + r.rate.to_string() + "--> ";
        out += render_complex(r.products, c.species);
        out += "\n";
    }
    return out;
}

Crn parse_crn(const std::string& text) {
    // First pass collects species names in order of first appearance.
    std::vector<std::string> species;
    std::vector<std::array<std::string, 3>> rows;  // lhs, rate, rhs
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped;
        for (char ch : line)
            if (ch != '\r') stripped += ch;
        bool blank = true;
        for (char ch : stripped)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (blank || stripped[stripped.find_first_not_of(" \t")] == '#') continue;
        std::size_t arrow_open = stripped.find("--");
        std::size_t arrow_close = stripped.find("-->", arrow_open == std::string::npos ? 0 : arrow_open + 2);
        if (arrow_open == std::string::npos || arrow_close == std::string::npos)
            throw std::invalid_argument("parse_crn: line " + std::to_string(lineno) +
                                        ": expected 'complex --rate--> complex'");
        rows.push_back({stripped.substr(0, arrow_open),
                        stripped.substr(arrow_open + 2, arrow_close - arrow_open - 2),
                        stripped.substr(arrow_close + 3)});
        for (const std::string& side : {rows.back()[0], rows.back()[2]}) {
            std::istringstream ss(side);
            std::string tok;
            while (ss >> tok) {
                if (tok == "+" || tok == "0") continue;
                bool numeric = true;
                for (char ch : tok)
                    if (!std::isdigit(static_cast<unsigned char>(ch))) numeric = false;
                if (numeric) continue;
                if (std::find(species.begin(), species.end(), tok) == species.end())
                    species.push_back(tok);
            }
        }
    }
    Crn c;
    c.dim = static_cast<int>(species.size());
    c.species = species;
    for (const auto& row : rows) {
        Reaction r;
        r.reactants = parse_complex(row[0], species);
        r.rate = Rational::from_string(row[1]);
        r.products = parse_complex(row[2], species);
        if (r.rate.sign() <= 0) throw std::invalid_argument("parse_crn: rates must be positive");
        if (r.reactants == r.products) throw std::invalid_argument("parse_crn: no-op reaction");
        c.reactions.push_back(std::move(r));
    }
    return c;
}

}  // namespace chemchaos
