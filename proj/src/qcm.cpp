#include "chemchaos/qcm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chemchaos {

std::string piece_kind_name(PieceKind k) {
    switch (k) {
        case PieceKind::UniversalRemainder: return "universal_remainder";
        case PieceKind::LinearQuadPerturb: return "linear_quad_perturb";
        case PieceKind::LinearDampPerturb: return "linear_damp_perturb";
        case PieceKind::QuadraticChem: return "quadratic_chem";
    }
    throw std::logic_error("piece_kind_name: bad enum");
}

PieceKind piece_kind_from_name(const std::string& name) {
    if (name == "universal_remainder") return PieceKind::UniversalRemainder;
    if (name == "linear_quad_perturb") return PieceKind::LinearQuadPerturb;
    if (name == "linear_damp_perturb") return PieceKind::LinearDampPerturb;
    if (name == "quadratic_chem") return PieceKind::QuadraticChem;
    throw std::invalid_argument("unknown piece kind '" + name + "'");
}

namespace {

Poly piece_polynomial(const QcmPlan& plan, const PlanPiece& piece) {
    std::map<std::vector<int>, Rational> lookup;
    for (const auto& m : plan.base.eqs[piece.equation]) lookup[m.exps] = m.coeff;
    Poly p;
    for (const auto& e : piece.monomials) {
        auto it = lookup.find(e);
        if (it == lookup.end()) {
            throw std::invalid_argument("plan piece references a monomial absent from equation " +
                                        std::to_string(piece.equation + 1));
        }
        p.push_back(make_monomial(it->second, e));
    }
    return canonicalize(std::move(p));
}

void validate_partition(const QcmPlan& plan) {
    const int n = plan.base.dim;
    std::vector<std::set<std::vector<int>>> covered(n);
    for (const auto& piece : plan.pieces) {
        if (piece.equation < 0 || piece.equation >= n)
            throw std::invalid_argument("plan piece has an out-of-range equation index");
        for (const auto& e : piece.monomials) {
            if (static_cast<int>(e.size()) != n)
                throw std::invalid_argument("plan piece exponent vector has wrong length");
            if (!covered[piece.equation].insert(e).second)
                throw std::invalid_argument("plan pieces overlap in equation " +
                                            std::to_string(piece.equation + 1));
        }
    }
    for (int i = 0; i < n; ++i) {
        std::set<std::vector<int>> expected;
        for (const auto& m : plan.base.eqs[i]) expected.insert(m.exps);
        if (covered[i] != expected)
            throw std::invalid_argument("plan pieces do not partition equation " + std::to_string(i + 1));
    }
}

struct QuadraticShape {
    Rational own_square;                  // coefficient of x_i^2
    std::map<int, Rational> cross;        // x_i * x_j, j != i
    std::map<int, Rational> foreign_sq;   // x_j^2, j != i
    std::map<std::pair<int, int>, Rational> foreign_cross;  // x_k * x_l, k < l, both != i
    std::set<int> indices;                // all j != i that occur quadratically
};

QuadraticShape quadratic_shape(const Poly& p, int eq, int dim) {
    QuadraticShape q;
    for (const auto& m : p) {
        if (m.degree() != 2) continue;
        std::vector<int> support;
        for (int k = 0; k < dim; ++k)
            if (m.exps[k] > 0) support.push_back(k);
        if (support.size() == 1) {
            if (support[0] == eq)
                q.own_square += m.coeff;
            else {
                q.foreign_sq[support[0]] += m.coeff;
                q.indices.insert(support[0]);
            }
        } else {
            if (support[0] == eq || support[1] == eq) {
                const int j = support[0] == eq ? support[1] : support[0];
                q.cross[j] += m.coeff;
                q.indices.insert(j);
            } else {
                q.foreign_cross[{support[0], support[1]}] += m.coeff;
                q.indices.insert(support[0]);
                q.indices.insert(support[1]);
            }
        }
    }
    return q;
}

void check_affine_piece(const Poly& p, int eq, int dim, bool damp, const std::string& what) {
    for (const auto& m : p) {
        if (m.degree() > 1)
            throw std::invalid_argument(what + ": piece in equation " + std::to_string(eq + 1) +
                                        " must be affine");
        if (m.degree() == 1) {
            int var = 0;
            for (int k = 0; k < dim; ++k)
                if (m.exps[k] == 1) var = k;
            if (var == eq) {
                if (damp && m.coeff.sign() > 0)
                    throw std::invalid_argument(what + ": damped piece in equation " +
                                                std::to_string(eq + 1) +
                                                " needs a non-positive diagonal coefficient");
            } else if (m.coeff.sign() < 0) {
                throw std::invalid_argument(what + ": piece in equation " + std::to_string(eq + 1) +
                                            " has a negative cross term; route it through a universal remainder");
            }
        }
    }
}

Poly monomial_x(int var, int power, int dim, const Rational& coeff) {
    std::vector<int> e(dim, 0);
    e[var] = power;
    return {make_monomial(coeff, std::move(e))};
}

}  // namespace

std::vector<Poly> plan_perturbation(const QcmPlan& plan) {
    const int n = plan.base.dim;
    std::vector<Poly> pert(n);
    for (const auto& piece : plan.pieces) {
        const int i = piece.equation;
        const Poly body = piece_polynomial(plan, piece);
        switch (piece.kind) {
            case PieceKind::UniversalRemainder: {
                Poly xi = monomial_x(i, 1, n, plan.mu / plan.a[i]);
                pert[i] = poly_add(pert[i], poly_mul(xi, body));
                break;
            }
            case PieceKind::LinearQuadPerturb: {
                check_affine_piece(body, i, n, false, "linear_quad_perturb");
                pert[i] = poly_add(pert[i], monomial_x(i, 2, n, plan.epsilon));
                break;
            }
            case PieceKind::LinearDampPerturb: {
                check_affine_piece(body, i, n, true, "linear_damp_perturb");
                bool has_diag = false;
                for (const auto& m : body)
                    if (m.degree() == 1 && m.exps[i] == 1) has_diag = true;
                if (!has_diag) pert[i] = poly_add(pert[i], monomial_x(i, 1, n, -plan.epsilon));
                break;
            }
            case PieceKind::QuadraticChem: {
                for (const auto& m : body)
                    if (m.degree() > 2)
                        throw std::invalid_argument("quadratic_chem: piece in equation " +
                                                    std::to_string(i + 1) + " must have degree <= 2");
                for (const auto& m : piece.fill)
                    if (m.degree() != 2)
                        throw std::invalid_argument("quadratic_chem: fill must consist of quadratics");
                Poly combined = poly_add(body, poly_scale(piece.fill, plan.epsilon));
                QuadraticShape q = quadratic_shape(combined, i, n);
                if (q.own_square.sign() < 0)
                    throw std::invalid_argument("quadratic_chem: negative own-square term in equation " +
                                                std::to_string(i + 1));
                for (const auto& [j, c] : q.cross)
                    if (c.sign() > 0)
                        throw std::invalid_argument("quadratic_chem: positive mixed term in equation " +
                                                    std::to_string(i + 1));
                for (const auto& [j, c] : q.foreign_sq)
                    if (c.sign() < 0)
                        throw std::invalid_argument("quadratic_chem: negative foreign square in equation " +
                                                    std::to_string(i + 1));
                for (const auto& [kl, c] : q.foreign_cross)
                    if (c.sign() < 0)
                        throw std::invalid_argument("quadratic_chem: negative foreign product in equation " +
                                                    std::to_string(i + 1));
                pert[i] = poly_add(pert[i], poly_scale(piece.fill, plan.epsilon));
                break;
            }
        }
    }
    return pert;
}

namespace {

void collect_constraints(const QcmPlan& plan, std::vector<ConstraintCheck>& out) {
    const int n = plan.base.dim;
    for (const auto& piece : plan.pieces) {
        const int i = piece.equation;
        const Poly body = piece_polynomial(plan, piece);
        if (piece.kind == PieceKind::LinearDampPerturb) {
            Rational diag(0);
            std::map<int, Rational> cross;
            for (const auto& m : body) {
                if (m.degree() != 1) continue;
                for (int k = 0; k < n; ++k)
                    if (m.exps[k] == 1) {
                        if (k == i)
                            diag = m.coeff;
                        else
                            cross[k] = m.coeff;
                    }
            }
            const Rational A = diag.is_zero() ? Rational(1) : Rational(0);
            ConstraintCheck c;
            c.equation = i;
            c.name = "eq" + std::to_string(i + 1) + " damp feasibility";
            c.lhs = (-diag + A * plan.epsilon) * plan.a[i];
            c.rhs = Rational(0);
            for (const auto& [j, coeff] : cross) c.rhs += coeff * plan.a[j];
            c.strict = true;
            c.satisfied = c.lhs > c.rhs;
            out.push_back(std::move(c));
        } else if (piece.kind == PieceKind::QuadraticChem) {
            Poly combined = poly_add(body, poly_scale(piece.fill, plan.epsilon));
            QuadraticShape q = quadratic_shape(combined, i, n);
            ConstraintCheck first;
            first.equation = i;
            first.name = "eq" + std::to_string(i + 1) + " quad own-square";
            first.lhs = q.own_square * plan.a[i];
            first.rhs = Rational(0);
            for (const auto& [j, c] : q.cross) first.rhs += (-c) * plan.a[j];
            first.strict = false;
            first.satisfied = first.lhs >= first.rhs;
            out.push_back(std::move(first));
            for (int j : q.indices) {
                ConstraintCheck ck;
                ck.equation = i;
                ck.name = "eq" + std::to_string(i + 1) + " quad cross x" + std::to_string(j + 1);
                Rational gamma(0);
                auto itc = q.cross.find(j);
                if (itc != q.cross.end()) gamma = itc->second;
                ck.lhs = (-gamma) * plan.a[i];
                ck.rhs = Rational(0);
                auto itb = q.foreign_sq.find(j);
                if (itb != q.foreign_sq.end()) ck.rhs += Rational(2) * itb->second * plan.a[j];
                for (const auto& [kl, c] : q.foreign_cross) {
                    if (kl.first == j) ck.rhs += c * plan.a[kl.second];
                    if (kl.second == j) ck.rhs += c * plan.a[kl.first];
                }
                ck.strict = false;
                ck.satisfied = ck.lhs >= ck.rhs;
                out.push_back(std::move(ck));
            }
        }
    }
}

}  // namespace

QcmReport execute_plan(const QcmPlan& plan) {
    const int n = plan.base.dim;
    if (plan.epsilon.sign() <= 0 || plan.mu.sign() <= 0)
        throw std::invalid_argument("plan parameters epsilon and mu must be positive");
    if (static_cast<int>(plan.a.size()) != n)
        throw std::invalid_argument("plan translation numerators have wrong dimension");
    for (const auto& ai : plan.a)
        if (ai.sign() <= 0) throw std::invalid_argument("plan translation numerators must be positive");
    if (plan.post_scale) {
        if (static_cast<int>(plan.post_scale->size()) != n)
            throw std::invalid_argument("plan post_scale has wrong dimension");
        for (const auto& s : *plan.post_scale)
            if (s.sign() <= 0) throw std::invalid_argument("plan post_scale must be positive");
    }
    validate_partition(plan);

    QcmReport rep;
    rep.notes = plan.notes;
    std::vector<Poly> pert = plan_perturbation(plan);
    std::vector<Poly> eqs = plan.base.eqs;
    for (int i = 0; i < n; ++i) eqs[i] = poly_add(eqs[i], pert[i]);
    rep.perturbed = PolySystem(n, plan.base.var_names, std::move(eqs));

    std::vector<Rational> T(n);
    for (int i = 0; i < n; ++i) T[i] = plan.a[i] / plan.mu;
    rep.translated = apply_affine(rep.perturbed, AffineMap::translation(T));
    rep.rescaled = plan.post_scale
                       ? apply_affine(rep.translated, AffineMap::scaling(*plan.post_scale))
                       : rep.translated;

    auto chem = is_chemical(rep.rescaled);
    rep.chemical = chem.chemical;
    rep.violations = std::move(chem.violations);
    collect_constraints(plan, rep.constraints);
    return rep;
}

QcmReport universal_qcm(const PolySystem& s, const std::vector<Rational>& a, const Rational& mu) {
    QcmPlan plan;
    plan.base = s;
    plan.epsilon = Rational(1);  // no epsilon-scaled pieces
    plan.mu = mu;
    plan.a = a;
    for (int i = 0; i < s.dim; ++i) {
        if (s.eqs[i].empty()) continue;
        PlanPiece piece;
        piece.equation = i;
        piece.kind = PieceKind::UniversalRemainder;
        for (const auto& m : s.eqs[i]) piece.monomials.push_back(m.exps);
        plan.pieces.push_back(std::move(piece));
    }
    return execute_plan(plan);
}

ChemicalReport verify_chemical_under_translation(const PolySystem& s, const std::vector<Rational>& T) {
    return is_chemical(apply_affine(s, AffineMap::translation(T)));
}

namespace {

// The four designated-monomial shapes, cheapest fill first.
enum class QuadCase { OwnSquare = 0, MixedWithOwn = 1, ForeignSquare = 2, ForeignProduct = 3 };

struct Candidate {
    QuadCase kind;
    int equation;
    std::vector<int> support;  // variable indices, the squared/product variables
    Rational coeff;
    std::vector<int> exps;
};

std::vector<Candidate> quadratic_candidates(const PolySystem& s) {
    std::vector<Candidate> cands;
    for (int i = 0; i < s.dim; ++i) {
        for (const auto& m : s.eqs[i]) {
            if (m.degree() != 2) continue;
            std::vector<int> support;
            for (int k = 0; k < s.dim; ++k)
                if (m.exps[k] > 0) support.push_back(k);
            Candidate c;
            c.equation = i;
            c.support = support;
            c.coeff = m.coeff;
            c.exps = m.exps;
            if (support.size() == 1) {
                c.kind = support[0] == i ? QuadCase::OwnSquare : QuadCase::ForeignSquare;
            } else {
                c.kind = (support[0] == i || support[1] == i) ? QuadCase::MixedWithOwn
                                                              : QuadCase::ForeignProduct;
            }
            cands.push_back(std::move(c));
        }
    }
    return cands;
}

}  // namespace

std::pair<PolySystem, AffineMap> normalize_leading(const PolySystem& s) {
    if (s.degree() != 2)
        throw std::invalid_argument("normalize_leading: system must be quadratic");
    auto cands = quadratic_candidates(s);
    if (cands.empty())
        throw std::invalid_argument("normalize_leading: no quadratic monomial present");
    auto best = std::min_element(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (a.equation != b.equation) return a.equation < b.equation;
        return monomial_order(a.exps, b.exps);
    });

    const int n = s.dim;
    AffineMap map = AffineMap::identity(n);
    std::vector<int> head;
    switch (best->kind) {
        case QuadCase::OwnSquare:
            head = {best->equation};
            break;
        case QuadCase::MixedWithOwn: {
            const int other = best->support[0] == best->equation ? best->support[1] : best->support[0];
            head = {best->equation, other};
            break;
        }
        case QuadCase::ForeignSquare:
            head = {best->equation, best->support[0]};
            break;
        case QuadCase::ForeignProduct:
            head = {best->equation, best->support[0], best->support[1]};
            break;
    }
    std::vector<bool> used(n, false);
    std::vector<int> perm;
    for (int h : head) {
        perm.push_back(h);
        used[h] = true;
    }
    for (int k = 0; k < n; ++k)
        if (!used[k]) perm.push_back(k);
    map.perm = perm;

    const int csign = best->coeff.sign();
    switch (best->kind) {
        case QuadCase::OwnSquare:
        case QuadCase::ForeignSquare:
            if (csign < 0) map.signs[0] = -1;
            break;
        case QuadCase::MixedWithOwn:
            if (csign > 0) map.signs[1] = -1;
            break;
        case QuadCase::ForeignProduct:
            if (csign < 0) map.signs[1] = -1;
            break;
    }
    return {apply_affine(s, map), map};
}

QcmPlan quadratic_case_plan(const PolySystem& s, const Rational& epsilon, const Rational& mu,
                            std::vector<Rational> a) {
    if (s.degree() != 2)
        throw std::invalid_argument("quadratic_case_plan: system must be quadratic");
    if (epsilon.sign() <= 0) throw std::invalid_argument("quadratic_case_plan: epsilon must be positive");
    const int n = s.dim;
    if (static_cast<int>(a.size()) != n)
        throw std::invalid_argument("quadratic_case_plan: wrong dimension for a");

    // Designated monomial in the first equation, cheapest admissible form first:
    // +x1^2, -x1 x2, +x2^2, +x2 x3.
    const Monomial* designated = nullptr;
    QuadCase kind{};
    auto scan = [&](auto pred, QuadCase k) {
        if (designated) return;
        for (const auto& m : s.eqs[0]) {
            if (m.degree() == 2 && pred(m)) {
                designated = &m;
                kind = k;
                return;
            }
        }
    };
    scan([&](const Monomial& m) { return m.exps[0] == 2 && m.coeff.sign() > 0; }, QuadCase::OwnSquare);
    scan([&](const Monomial& m) { return n >= 2 && m.exps[0] == 1 && m.exps[1] == 1 && m.coeff.sign() < 0; },
         QuadCase::MixedWithOwn);
    scan([&](const Monomial& m) { return n >= 2 && m.exps[1] == 2 && m.coeff.sign() > 0; },
         QuadCase::ForeignSquare);
    scan([&](const Monomial& m) { return n >= 3 && m.exps[1] == 1 && m.exps[2] == 1 && m.coeff.sign() > 0; },
         QuadCase::ForeignProduct);
    if (!designated)
        throw std::invalid_argument(
            "quadratic_case_plan: first equation carries no designated-form monomial; "
            "run normalize_leading first");

    QcmPlan plan;
    plan.base = s;
    plan.epsilon = epsilon;
    plan.mu = mu;
    plan.a = std::move(a);

    const Rational mag = designated->coeff.abs();
    Rational bound(0);
    Poly fill;
    auto quad = [&](int v1, int v2, const Rational& c) {
        std::vector<int> e(n, 0);
        e[v1] += 1;
        e[v2] += 1;
        fill.push_back(make_monomial(c, std::move(e)));
    };
    switch (kind) {
        case QuadCase::OwnSquare:
            break;
        case QuadCase::MixedWithOwn:
            quad(0, 0, Rational(1));
            bound = mag * plan.a[1] / epsilon;
            break;
        case QuadCase::ForeignSquare:
            quad(0, 0, Rational(1));
            quad(0, 1, Rational(-1));
            bound = Rational(2) * mag * plan.a[1] / epsilon;
            break;
        case QuadCase::ForeignProduct:
            quad(0, 0, Rational(1));
            quad(0, 1, Rational(-1));
            quad(0, 2, Rational(-1));
            bound = mag * std::max(plan.a[1], plan.a[2]) / epsilon;
            break;
    }
    if (plan.a[0] < bound) {
        plan.a[0] = bound;
        plan.notes.push_back("a1 raised to the case bound " + bound.to_string());
    }

    PlanPiece main;
    main.equation = 0;
    main.kind = PieceKind::QuadraticChem;
    main.monomials.push_back(designated->exps);
    main.fill = canonicalize(std::move(fill));
    plan.pieces.push_back(std::move(main));

    PlanPiece rest;
    rest.equation = 0;
    rest.kind = PieceKind::UniversalRemainder;
    for (const auto& m : s.eqs[0])
        if (!(m.exps == designated->exps)) rest.monomials.push_back(m.exps);
    if (!rest.monomials.empty()) plan.pieces.push_back(std::move(rest));

    for (int i = 1; i < n; ++i) {
        if (s.eqs[i].empty()) continue;
        PlanPiece piece;
        piece.equation = i;
        piece.kind = PieceKind::UniversalRemainder;
        for (const auto& m : s.eqs[i]) piece.monomials.push_back(m.exps);
        plan.pieces.push_back(std::move(piece));
    }
    return plan;
}

}  // namespace chemchaos
