#include "chemchaos/polysys.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chemchaos {

int Monomial::degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

Monomial make_monomial(const Rational& c, std::vector<int> exps) {
    for (int e : exps)
        if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
    return Monomial{c, std::move(exps)};
}

bool monomial_order(const std::vector<int>& a, const std::vector<int>& b) {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a > b;  // reverse lexicographic within a degree
}

Poly canonicalize(Poly p) {
    std::sort(p.begin(), p.end(),
              [](const Monomial& a, const Monomial& b) { return monomial_order(a.exps, b.exps); });
    Poly out;
    for (auto& m : p) {
        if (!out.empty() && out.back().exps == m.exps) {
            out.back().coeff += m.coeff;
        } else {
            out.push_back(std::move(m));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Monomial& m) { return m.coeff.is_zero(); }),
              out.end());
    return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    r.insert(r.end(), b.begin(), b.end());
    return canonicalize(std::move(r));
}

Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& m : r) m.coeff = -m.coeff;
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    r.reserve(a.size() * b.size());
    for (const auto& ma : a) {
        for (const auto& mb : b) {
            Monomial m;
            m.coeff = ma.coeff * mb.coeff;
            m.exps.resize(ma.exps.size());
            for (std::size_t k = 0; k < ma.exps.size(); ++k) m.exps[k] = ma.exps[k] + mb.exps[k];
            r.push_back(std::move(m));
        }
    }
    return canonicalize(std::move(r));
}

Poly poly_scale(const Poly& a, const Rational& c) {
    if (c.is_zero()) return {};
    Poly r = a;
    for (auto& m : r) m.coeff *= c;
    return r;
}

Poly poly_shift_scale(const Poly& a, const std::vector<Rational>& factor,
                      const std::vector<Rational>& offset) {
    if (a.empty()) return {};
    const std::size_t n = a.front().exps.size();
    // Per variable, powers of the linear form factor_k * (x_k - offset_k)
    // are expanded once up to the highest exponent that occurs.
    std::vector<int> maxexp(n, 0);
    for (const auto& m : a)
        for (std::size_t k = 0; k < n; ++k) maxexp[k] = std::max(maxexp[k], m.exps[k]);
    std::vector<std::vector<Poly>> powers(n);
    for (std::size_t k = 0; k < n; ++k) {
        powers[k].resize(maxexp[k] + 1);
        powers[k][0] = {make_monomial(Rational(1), std::vector<int>(n, 0))};
        Poly lin;
        std::vector<int> e(n, 0);
        e[k] = 1;
        lin.push_back(make_monomial(factor[k], e));
        if (!offset[k].is_zero())
            lin.push_back(make_monomial(-factor[k] * offset[k], std::vector<int>(n, 0)));
        lin = canonicalize(std::move(lin));
        for (int p = 1; p <= maxexp[k]; ++p) powers[k][p] = poly_mul(powers[k][p - 1], lin);
    }
    Poly out;
    for (const auto& m : a) {
        Poly term = {make_monomial(m.coeff, std::vector<int>(n, 0))};
        for (std::size_t k = 0; k < n; ++k)
            if (m.exps[k] > 0) term = poly_mul(term, powers[k][m.exps[k]]);
        out.insert(out.end(), term.begin(), term.end());
    }
    return canonicalize(std::move(out));
}

Poly poly_derivative(const Poly& a, int var) {
    Poly r;
    for (const auto& m : a) {
        if (m.exps[var] == 0) continue;
        Monomial d = m;
        d.coeff = m.coeff * Rational(m.exps[var]);
        d.exps[var] -= 1;
        r.push_back(std::move(d));
    }
    return canonicalize(std::move(r));
}

int poly_degree(const Poly& a) {
    int d = 0;
    for (const auto& m : a) d = std::max(d, m.degree());
    return d;
}

std::vector<std::string> PolySystem::default_names(int n) {
    if (n == 3) return {"x", "y", "z"};
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

PolySystem::PolySystem(int n, std::vector<std::string> names, std::vector<Poly> equations)
    : dim(n), var_names(std::move(names)), eqs(std::move(equations)) {
    if (dim <= 0) throw std::invalid_argument("PolySystem: dimension must be positive");
    if (static_cast<int>(var_names.size()) != dim)
        throw std::invalid_argument("PolySystem: variable name count mismatch");
    if (static_cast<int>(eqs.size()) != dim)
        throw std::invalid_argument("PolySystem: equation count mismatch");
    for (auto& eq : eqs) {
        for (const auto& m : eq)
            if (static_cast<int>(m.exps.size()) != dim)
                throw std::invalid_argument("PolySystem: monomial exponent length mismatch");
        eq = canonicalize(std::move(eq));
    }
}

int PolySystem::degree() const {
    int d = 0;
    for (const auto& eq : eqs) d = std::max(d, poly_degree(eq));
    return d;
}

AffineMap AffineMap::identity(int n) {
    AffineMap a;
    a.perm.resize(n);
    std::iota(a.perm.begin(), a.perm.end(), 0);
    a.signs.assign(n, 1);
    a.scales.assign(n, Rational(1));
    a.shift.assign(n, Rational(0));
    return a;
}

AffineMap AffineMap::translation(std::vector<Rational> t) {
    AffineMap a = identity(static_cast<int>(t.size()));
    a.shift = std::move(t);
    return a;
}

AffineMap AffineMap::scaling(std::vector<Rational> s) {
    AffineMap a = identity(static_cast<int>(s.size()));
    a.scales = std::move(s);
    a.validate(static_cast<int>(a.scales.size()));
    return a;
}

void AffineMap::validate(int n) const {
    if (static_cast<int>(perm.size()) != n || static_cast<int>(signs.size()) != n ||
        static_cast<int>(scales.size()) != n || static_cast<int>(shift.size()) != n)
        throw std::invalid_argument("AffineMap: dimension mismatch");
    std::vector<bool> seen(n, false);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("AffineMap: invalid permutation");
        seen[p] = true;
    }
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("AffineMap: signs must be +1 or -1");
    for (const auto& s : scales)
        if (s.sign() <= 0) throw std::invalid_argument("AffineMap: scales must be positive");
}

bool AffineMap::is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != static_cast<int>(i)) return false;
    for (int s : signs)
        if (s != 1) return false;
    for (const auto& s : scales)
        if (!(s == Rational(1))) return false;
    for (const auto& t : shift)
        if (!t.is_zero()) return false;
    return true;
}

AffineMap AffineMap::inverse() const {
    const int n = static_cast<int>(perm.size());
    AffineMap inv = identity(n);
    // xbar_i = signs[i] x_{perm[i]} / scales[i] + shift[i]
    // =>  x_j = signs[q] scales[q] (xbar_q - shift[q])  with q = perm^{-1}(j)
    std::vector<int> pinv(n);
    for (int i = 0; i < n; ++i) pinv[perm[i]] = i;
    for (int j = 0; j < n; ++j) {
        const int q = pinv[j];
        inv.perm[j] = q;
        inv.signs[j] = signs[q];
        inv.scales[j] = scales[q].inverse();
        inv.shift[j] = -Rational(signs[q]) * scales[q] * shift[q];
    }
    return inv;
}

std::vector<Rational> AffineMap::map_point(const std::vector<Rational>& x) const {
    const int n = static_cast<int>(perm.size());
    std::vector<Rational> out(n);
    for (int i = 0; i < n; ++i) out[i] = Rational(signs[i]) * x[perm[i]] / scales[i] + shift[i];
    return out;
}

Eigen::VectorXd AffineMap::map_point(const Eigen::VectorXd& x) const {
    const int n = static_cast<int>(perm.size());
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i)
        out[i] = signs[i] * x[perm[i]] / scales[i].to_double() + shift[i].to_double();
    return out;
}

bool is_chemical_monomial(const Monomial& m, int equation, int dim) {
    if (static_cast<int>(m.exps.size()) != dim || equation < 0 || equation >= dim)
        throw std::invalid_argument("is_chemical_monomial: dimension mismatch");
    return m.coeff.sign() > 0 || m.exps[equation] >= 1;
}

ChemicalReport is_chemical(const PolySystem& s) {
    ChemicalReport rep;
    for (int i = 0; i < s.dim; ++i)
        for (const auto& m : s.eqs[i])
            if (!is_chemical_monomial(m, i, s.dim)) rep.violations.push_back({i, m});
    rep.chemical = rep.violations.empty();
    return rep;
}

Complexity complexity(const PolySystem& s) {
    Complexity c;
    c.by_degree.assign(s.degree() + 1, 0);
    for (const auto& eq : s.eqs)
        for (const auto& m : eq) {
            ++c.by_degree[m.degree()];
            ++c.total;
        }
    return c;
}

std::string Complexity::label() const {
    std::string out = "(" + std::to_string(total);
    for (int d = 2; d < static_cast<int>(by_degree.size()); ++d)
        out += "," + std::to_string(by_degree[d]);
    return out + ")";
}

PolySystem apply_affine(const PolySystem& s, const AffineMap& a) {
    a.validate(s.dim);
    const int n = s.dim;
    // x_k = signs[q] scales[q] (xbar_q - shift[q]) with q = perm^{-1}(k);
    // expressed per new variable as factor[q] * (xbar_q - shift[q]).
    std::vector<Rational> factor(n), offset(n);
    std::vector<int> pinv(n);
    for (int i = 0; i < n; ++i) pinv[a.perm[i]] = i;
    // Build substitution arrays indexed by the *old* variable position after
    // relabeling monomial exponents to new positions: exponent of old k moves
    // to slot pinv[k], then old x_k = signs*scales*(xbar - shift) at that slot.
    for (int q = 0; q < n; ++q) {
        factor[q] = Rational(a.signs[q]) * a.scales[q];
        offset[q] = a.shift[q];
    }
    std::vector<Poly> out(n);
    for (int i = 0; i < n; ++i) {
        Poly relabeled;
        relabeled.reserve(s.eqs[a.perm[i]].size());
        for (const auto& m : s.eqs[a.perm[i]]) {
            Monomial t;
            t.coeff = m.coeff;
            t.exps.assign(n, 0);
            for (int k = 0; k < n; ++k) t.exps[pinv[k]] = m.exps[k];
            relabeled.push_back(std::move(t));
        }
        Poly sub = poly_shift_scale(relabeled, factor, offset);
        out[i] = poly_scale(sub, Rational(a.signs[i]) / a.scales[i]);
    }
    return PolySystem(n, s.var_names, std::move(out));
}

Eigen::VectorXd evaluate(const PolySystem& s, const Eigen::VectorXd& x) {
    if (x.size() != s.dim) throw std::invalid_argument("evaluate: dimension mismatch");
    Eigen::VectorXd out(s.dim);
    for (int i = 0; i < s.dim; ++i) {
        double acc = 0.0;
        for (const auto& m : s.eqs[i]) {
            double t = m.coeff.to_double();
            for (int k = 0; k < s.dim; ++k)
                for (int e = 0; e < m.exps[k]; ++e) t *= x[k];
            acc += t;
        }
        out[i] = acc;
    }
    return out;
}

std::vector<std::vector<Poly>> jacobian(const PolySystem& s) {
    std::vector<std::vector<Poly>> j(s.dim, std::vector<Poly>(s.dim));
    for (int i = 0; i < s.dim; ++i)
        for (int k = 0; k < s.dim; ++k) j[i][k] = poly_derivative(s.eqs[i], k);
    return j;
}

Eigen::MatrixXd evaluate_jacobian(const PolySystem& s, const Eigen::VectorXd& x) {
    if (x.size() != s.dim) throw std::invalid_argument("evaluate_jacobian: dimension mismatch");
    Eigen::MatrixXd out(s.dim, s.dim);
    auto j = jacobian(s);
    for (int i = 0; i < s.dim; ++i)
        for (int k = 0; k < s.dim; ++k) {
            double acc = 0.0;
            for (const auto& m : j[i][k]) {
                double t = m.coeff.to_double();
                for (int v = 0; v < s.dim; ++v)
                    for (int e = 0; e < m.exps[v]; ++e) t *= x[v];
                acc += t;
            }
            out(i, k) = acc;
        }
    return out;
}

std::vector<Rational> rational_vector(std::initializer_list<Rational> vals) {
    return std::vector<Rational>(vals);
}

Eigen::VectorXd to_double_vector(const std::vector<Rational>& v) {
    Eigen::VectorXd out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i].to_double();
    return out;
}

}  // namespace chemchaos
