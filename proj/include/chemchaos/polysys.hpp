#ifndef CHEMCHAOS_POLYSYS_HPP
#define CHEMCHAOS_POLYSYS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "chemchaos/rational.hpp"

namespace chemchaos {

/// One term coeff * x1^e1 * ... * xN^eN with exact rational coefficient.
/// Zero coefficients are never stored inside a PolySystem.
struct Monomial {
    Rational coeff;
    std::vector<int> exps;

    int degree() const;
    bool operator==(const Monomial& o) const { return coeff == o.coeff && exps == o.exps; }
};

/// A polynomial as a list of monomials. Canonical form is sorted by
/// ascending total degree, then reverse-lexicographic exponent order
/// (so x^2 prints before x*y), with like terms merged and zeros dropped.
using Poly = std::vector<Monomial>;

Poly canonicalize(Poly p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Rational& c);
/// Substitute every variable k by factor[k] * (x_k - offset[k]) and expand.
Poly poly_shift_scale(const Poly& a, const std::vector<Rational>& factor,
                      const std::vector<Rational>& offset);
Poly poly_derivative(const Poly& a, int var);
int poly_degree(const Poly& a);
Monomial make_monomial(const Rational& c, std::vector<int> exps);
/// Graded order used for the canonical form.
bool monomial_order(const std::vector<int>& a, const std::vector<int>& b);

/// Dimension-N polynomial ODE system dx_i/dt = eqs[i](x) with exact
/// rational coefficients. Immutable after construction in practice;
/// every transform returns a new system.
struct PolySystem {
    int dim = 0;
    std::vector<std::string> var_names;
    std::vector<Poly> eqs;

    PolySystem() = default;
    PolySystem(int n, std::vector<std::string> names, std::vector<Poly> equations);

    int degree() const;
    bool operator==(const PolySystem& o) const {
        return dim == o.dim && var_names == o.var_names && eqs == o.eqs;
    }
    bool operator!=(const PolySystem& o) const { return !(*this == o); }

    static std::vector<std::string> default_names(int n);
};

/// Invertible change of variables applied in the order: permutation,
/// reflections, positive rescalings, translation. The new variables are
///   xbar_i = signs[i] * x_{perm[i]} / scales[i] + shift[i],
/// matching the conventions "x_i -> s_i x_i introduces xbar_i = x_i/s_i"
/// and "translation by T introduces xbar = x + T".
struct AffineMap {
    std::vector<int> perm;        // new index -> old index
    std::vector<int> signs;       // entries +1 / -1
    std::vector<Rational> scales; // strictly positive
    std::vector<Rational> shift;

    static AffineMap identity(int n);
    static AffineMap translation(std::vector<Rational> t);
    static AffineMap scaling(std::vector<Rational> s);
    AffineMap inverse() const;
    bool is_identity() const;
    void validate(int n) const;

    std::vector<Rational> map_point(const std::vector<Rational>& x) const;
    Eigen::VectorXd map_point(const Eigen::VectorXd& x) const;
};

/// Monomial counts per degree; label() renders the structural-complexity
/// tuple, e.g. "(7,1)" for 7 monomials of which 1 quadratic.
struct Complexity {
    int total = 0;
    std::vector<int> by_degree;  // index = degree

    int count(int degree) const {
        return degree < static_cast<int>(by_degree.size()) ? by_degree[degree] : 0;
    }
    std::string label() const;
};

struct ChemicalViolation {
    int equation;  // 0-based
    Monomial monomial;
};

struct ChemicalReport {
    bool chemical = true;
    std::vector<ChemicalViolation> violations;
};

/// A monomial of equation i is chemical when it cannot push x_i negative
/// on the non-negative orthant: positive coefficient, or x_i as a factor.
bool is_chemical_monomial(const Monomial& m, int equation, int dim);
ChemicalReport is_chemical(const PolySystem& s);
Complexity complexity(const PolySystem& s);

/// Change of variables by substitution, fully expanded and collected.
PolySystem apply_affine(const PolySystem& s, const AffineMap& a);

Eigen::VectorXd evaluate(const PolySystem& s, const Eigen::VectorXd& x);
std::vector<std::vector<Poly>> jacobian(const PolySystem& s);
Eigen::MatrixXd evaluate_jacobian(const PolySystem& s, const Eigen::VectorXd& x);

std::vector<Rational> rational_vector(std::initializer_list<Rational> vals);
Eigen::VectorXd to_double_vector(const std::vector<Rational>& v);

}  // namespace chemchaos

#endif
