#ifndef CHEMCHAOS_QCM_HPP
#define CHEMCHAOS_QCM_HPP

#include <optional>
#include <string>
#include <vector>

#include "chemchaos/polysys.hpp"

namespace chemchaos {

/// How a piece of an equation's splitting is perturbed before the common
/// translation is applied.
enum class PieceKind {
    /// Add (mu/a_i) x_i r(x) where r is the piece; works for any piece.
    UniversalRemainder,
    /// Add epsilon x_i^2; piece must be affine with positive cross terms.
    LinearQuadPerturb,
    /// Add -A epsilon x_i (A = 1 when the diagonal term is absent, 0 when
    /// negative); piece must be affine with positive cross terms and a
    /// non-positive diagonal coefficient. Feasibility depends on the
    /// translation numerators a via a linear inequality that the report
    /// records with its margin.
    LinearDampPerturb,
    /// Add epsilon * fill(x); piece's quadratic part must have the sign
    /// pattern (own-square >= 0, mixed terms with x_i <= 0, foreign
    /// squares and products >= 0). Two inequalities on a are recorded.
    QuadraticChem,
};

std::string piece_kind_name(PieceKind k);
PieceKind piece_kind_from_name(const std::string& name);

/// One piece of a per-equation splitting, identified by the exponent
/// vectors of the monomials it owns.
struct PlanPiece {
    int equation = 0;  // 0-based
    PieceKind kind = PieceKind::UniversalRemainder;
    std::vector<std::vector<int>> monomials;
    Poly fill;  // QuadraticChem only; the added perturbation is epsilon * fill
};

/// Executable description of one construction: splitting + perturbation
/// parameters + translation numerators + optional post-translation rescale.
/// The translation applied is always xbar = x + a/mu.
struct QcmPlan {
    PolySystem base;
    std::vector<PlanPiece> pieces;
    Rational epsilon;
    Rational mu;
    std::vector<Rational> a;
    std::optional<std::vector<Rational>> post_scale;
    std::vector<std::string> notes;
};

/// One feasibility inequality instance (lhs > rhs or lhs >= rhs).
struct ConstraintCheck {
    int equation = 0;
    std::string name;
    Rational lhs;
    Rational rhs;
    bool strict = false;
    bool satisfied = false;
    Rational margin() const { return lhs - rhs; }
};

struct QcmReport {
    PolySystem perturbed;
    PolySystem translated;
    PolySystem rescaled;
    bool chemical = false;
    std::vector<ChemicalViolation> violations;
    std::vector<ConstraintCheck> constraints;
    std::vector<std::string> notes;
};

/// The one-size-fits-all construction: every equation i gains
/// (mu/a_i) x_i f_i(x), then xbar = x + a/mu. Raises the degree by one and
/// turns each top-degree monomial into exactly one of the next degree.
QcmReport universal_qcm(const PolySystem& s, const std::vector<Rational>& a, const Rational& mu);

/// Runs a plan: per-piece perturbations, common translation, optional
/// rescale, exact chemicality verdict, and the feasibility margins of
/// every piece that carries constraints. Constraint violations are
/// reported, not fatal; a malformed splitting throws.
QcmReport execute_plan(const QcmPlan& plan);

/// Permutes and reflects the variables so that the first equation carries
/// a designated quadratic monomial in one of the four tractable forms
/// +x1^2, -x1*x2, +x2^2, +x2*x3 (preferred in that order). Returns the
/// transformed system and the map used.
std::pair<PolySystem, AffineMap> normalize_leading(const PolySystem& s);

/// Builds the standard splitting for a normalized quadratic system: the
/// designated monomial with its case fill, everything else handled by
/// universal remainders. Raises a[0] to the case bound when needed.
QcmPlan quadratic_case_plan(const PolySystem& s, const Rational& epsilon, const Rational& mu,
                            std::vector<Rational> a);

/// Translates by T and checks chemicality of the result.
ChemicalReport verify_chemical_under_translation(const PolySystem& s, const std::vector<Rational>& T);

/// The perturbation polynomial a plan adds to each equation (before any
/// translation); useful for measuring perturbation size.
std::vector<Poly> plan_perturbation(const QcmPlan& plan);

}  // namespace chemchaos

#endif
