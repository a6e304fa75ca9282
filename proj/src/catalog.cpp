#include "chemchaos/catalog.hpp"

#include <map>
#include <stdexcept>

namespace chemchaos {

namespace {

Monomial mono(const Rational& c, int e1, int e2, int e3) {
    return make_monomial(c, {e1, e2, e3});
}

PolySystem sys3(Poly e1, Poly e2, Poly e3) {
    return PolySystem(3, {"x", "y", "z"}, {std::move(e1), std::move(e2), std::move(e3)});
}

const Rational kOne(1);

// Rossler system brought to the working variable order.
PolySystem make_rossler() {
    return sys3({mono(rat(1, 5), 0, 0, 0), mono(rat(-57, 10), 1, 0, 0), mono(kOne, 1, 1, 0)},
                {mono(rat(-1), 1, 0, 0), mono(rat(-1), 0, 0, 1)},
                {mono(kOne, 0, 1, 0), mono(rat(1, 5), 0, 0, 1)});
}

// Its linear part, with the quadratic monomial dropped and y reflected.
PolySystem make_rossler_linearpart() {
    return sys3({mono(rat(1, 5), 0, 0, 0), mono(rat(-57, 10), 1, 0, 0)},
                {mono(kOne, 1, 0, 0), mono(kOne, 0, 0, 1)},
                {mono(rat(-1), 0, 1, 0), mono(rat(1, 5), 0, 0, 1)});
}

// Rossler with y reflected, the normalized starting point for the
// quadratic-case construction.
PolySystem make_rossler_reflected() {
    return sys3({mono(rat(1, 5), 0, 0, 0), mono(rat(-57, 10), 1, 0, 0), mono(rat(-1), 1, 1, 0)},
                {mono(kOne, 1, 0, 0), mono(kOne, 0, 0, 1)},
                {mono(rat(-1), 0, 1, 0), mono(rat(1, 5), 0, 0, 1)});
}

// Minimal Willamowski-Rossler system (permuted variable order).
PolySystem make_wr() {
    return sys3({mono(rat(30), 1, 0, 0), mono(rat(-1, 2), 2, 0, 0), mono(rat(-1), 1, 1, 0),
                 mono(rat(-1), 1, 0, 1)},
                {mono(rat(33, 2), 0, 1, 0), mono(rat(-1, 2), 0, 2, 0), mono(rat(-1), 1, 1, 0)},
                {mono(rat(-10), 0, 0, 1), mono(kOne, 1, 0, 1)});
}

// Sprott system P with x and y swapped.
PolySystem make_sprott_p_perm() {
    return sys3({mono(rat(-1), 0, 1, 0), mono(kOne, 2, 0, 0)},
                {mono(rat(27, 10), 1, 0, 0), mono(kOne, 0, 0, 1)},
                {mono(kOne, 1, 0, 0), mono(kOne, 0, 1, 0)});
}

// Sprott system C after the normalizing permutation and reflection.
PolySystem make_sprott_c_variant() {
    return sys3({mono(rat(-1), 0, 0, 0), mono(kOne, 0, 2, 0)},
                {mono(rat(-1), 1, 0, 1)},
                {mono(kOne, 0, 1, 0), mono(rat(-1), 0, 0, 1)});
}

// A hidden-attractor system with a unique stable equilibrium (a permuted
// and reflected member of the SE family), the base for the hidden-chaos
// construction.
PolySystem make_se17_variant() {
    return sys3({mono(rat(57, 100), 0, 0, 0), mono(rat(-31, 10), 0, 0, 1), mono(rat(-1, 5), 1, 1, 0),
                 mono(rat(-3, 10), 1, 0, 1)},
                {mono(rat(-1), 0, 1, 0), mono(rat(-1), 0, 0, 1)},
                {mono(kOne, 1, 0, 0)});
}

void require_params(const Rational& eps, const Rational& mu, const std::string& id) {
    if (eps.sign() <= 0 || mu.sign() <= 0)
        throw std::invalid_argument("catalog entry '" + id + "' needs positive epsilon and mu");
}

// Chemical Rossler CDS: quadratic (11,5) with a (9,4) network.
PolySystem make_chemical_rossler(const Rational& eps, const Rational& mu) {
    const Rational a1 = rat(57, 10) / eps + eps * mu / rat(5);
    const Rational a2 = kOne / (eps * mu) + rat(57, 10);
    const Rational a3 = kOne / eps;
    const Rational a4 = kOne / mu;
    const Rational a5 = kOne;
    const Rational a6 = kOne / eps + eps;
    const Rational a7 = kOne / eps - rat(1, 5);
    const Rational a8 = mu / (rat(5) * eps) - mu / rat(25);
    const Rational a9 = mu;
    return sys3({mono(a1, 0, 0, 0), mono(-a2, 1, 0, 0), mono(a3, 0, 1, 0), mono(a4, 2, 0, 0),
                 mono(-a5, 1, 1, 0)},
                {mono(-a6, 0, 1, 0), mono(a7, 0, 0, 1), mono(a5, 1, 1, 0)},
                {mono(a7, 0, 0, 1), mono(a8, 0, 0, 2), mono(-a9, 0, 1, 1)});
}

Rational one_wing_alpha2(const Rational& eps, const Rational& mu) {
    return kOne / (eps * eps) + rat(27, 10) / eps - rat(2) / mu;
}

// One-wing CDS: quadratic (10,3) with an (8,3) network.
PolySystem make_cds_one_wing(const Rational& eps, const Rational& mu) {
    const Rational a2 = one_wing_alpha2(eps, mu);
    if (a2.is_zero())
        throw std::invalid_argument("cds-one-wing: degenerate parameters (alpha2 = 0)");
    const Rational a2abs = a2.abs();
    const Rational a1 = kOne / (mu * mu * a2abs);
    const Rational a3 = a2abs;
    const Rational a4 = rat(27, 10) * mu;
    const Rational a5 = eps;
    const Rational a6 = rat(10, 27);
    const Rational a7 = kOne / eps + rat(27, 10) + eps;
    const Rational a8 = rat(27, 10) * eps * mu;
    return sys3({mono(a1, 0, 0, 0), mono(a2, 1, 0, 0), mono(a3, 2, 0, 0), mono(-a4, 1, 1, 0)},
                {mono(a2abs, 1, 0, 0), mono(-a5, 0, 1, 0), mono(a6, 0, 0, 1)},
                {mono(a2abs, 1, 0, 0), mono(-a7, 0, 0, 1), mono(a8, 0, 1, 1)});
}

// Two-wing CDS: cubic (11,5,1) with a (9,4,1) network.
PolySystem make_cds_two_wing(const Rational& eps, const Rational& mu) {
    const Rational a1 = rat(4) / (eps * mu * mu) - kOne / (mu * mu) - kOne;
    const Rational a2 = rat(4) / mu - eps / mu;
    const Rational a3 = eps;
    const Rational a4 = kOne / (eps * eps);
    const Rational a5 = kOne;
    const Rational a6 = rat(2) / (eps * mu);
    const Rational a7 = mu / eps;
    const Rational a8 = mu * mu / rat(2);
    const Rational a9 = kOne;
    return sys3({mono(a1, 0, 0, 0), mono(-a2, 1, 0, 0), mono(a3, 2, 0, 0), mono(a4, 0, 2, 0),
                 mono(-a5, 1, 1, 0)},
                {mono(-a6, 0, 1, 0), mono(a5, 1, 1, 0), mono(a7, 0, 1, 1), mono(-a8, 1, 1, 1)},
                {mono(a6, 0, 1, 0), mono(-a9, 0, 0, 1)});
}

// Hidden-chaos CDS: quadratic (11,5) with a (9,4) network and a unique
// stable equilibrium.
PolySystem make_cds_hidden(const Rational& eps, const Rational& mu) {
    const Rational s = rat(620) + rat(57) * mu;
    const Rational a1 = rat(2) / mu;
    const Rational a2 = kOne / mu;
    const Rational a3 = rat(40) / (eps * mu * s);
    const Rational a4 = (rat(3) - rat(31) * eps * mu) / (rat(6) * eps);
    const Rational a5 = eps * s / rat(200);
    const Rational a6 = rat(1, 5);
    const Rational a7 = mu * s / rat(400);
    const Rational a8 = mu * mu * s / rat(240);
    const Rational a9 = kOne / (rat(2) * eps);
    return sys3({mono(a1, 0, 0, 0), mono(-a2, 1, 0, 0), mono(a3, 0, 1, 0), mono(a4, 0, 0, 1),
                 mono(a5, 2, 0, 0), mono(-a6, 1, 1, 0), mono(-a7, 1, 0, 1)},
                {mono(a1, 0, 0, 0), mono(-a8, 0, 1, 1)},
                {mono(-a9, 0, 0, 1), mono(a7, 1, 0, 1)});
}

PlanPiece piece(int eq, PieceKind kind, std::vector<std::vector<int>> monos, Poly fill = {}) {
    PlanPiece p;
    p.equation = eq;
    p.kind = kind;
    p.monomials = std::move(monos);
    p.fill = canonicalize(std::move(fill));
    return p;
}

QcmPlan make_chemical_rossler_plan(const Rational& eps, const Rational& mu) {
    QcmPlan plan;
    plan.base = make_rossler_reflected();
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {kOne / (eps * eps), kOne / eps, kOne};
    plan.pieces = {
        piece(0, PieceKind::QuadraticChem, {{1, 1, 0}}, {mono(kOne, 2, 0, 0)}),
        piece(0, PieceKind::LinearDampPerturb, {{0, 0, 0}, {1, 0, 0}}),
        piece(1, PieceKind::LinearDampPerturb, {{0, 0, 1}}),
        piece(1, PieceKind::UniversalRemainder, {{1, 0, 0}}),
        piece(2, PieceKind::UniversalRemainder, {{0, 1, 0}, {0, 0, 1}}),
    };
    plan.post_scale = {{kOne / (eps * mu), kOne, kOne / eps - rat(1, 5)}};
    return plan;
}

QcmPlan make_one_wing_plan(const Rational& eps, const Rational& mu) {
    QcmPlan plan;
    plan.base = make_sprott_p_perm();
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {kOne, kOne / (eps * eps) + rat(27, 10) / eps, kOne / eps};
    plan.pieces = {
        piece(0, PieceKind::QuadraticChem, {{2, 0, 0}}),
        piece(0, PieceKind::UniversalRemainder, {{0, 1, 0}}),
        piece(1, PieceKind::LinearDampPerturb, {{1, 0, 0}, {0, 0, 1}}),
        piece(2, PieceKind::LinearDampPerturb, {{1, 0, 0}}),
        piece(2, PieceKind::UniversalRemainder, {{0, 1, 0}}),
    };
    plan.post_scale = {{one_wing_alpha2(eps, mu).abs(), rat(27, 10), kOne}};
    return plan;
}

QcmPlan make_two_wing_plan(const Rational& eps, const Rational& mu) {
    QcmPlan plan;
    plan.base = make_sprott_c_variant();
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {rat(2) / eps, kOne, kOne};
    plan.pieces = {
        piece(0, PieceKind::QuadraticChem, {{0, 0, 0}, {0, 2, 0}},
              {mono(kOne, 2, 0, 0), mono(rat(-1), 1, 1, 0)}),
        piece(1, PieceKind::UniversalRemainder, {{1, 0, 1}}),
        piece(2, PieceKind::LinearDampPerturb, {{0, 1, 0}, {0, 0, 1}}),
    };
    plan.post_scale = {{kOne, kOne / eps, mu / rat(2)}};
    return plan;
}

QcmPlan make_hidden_plan(const Rational& eps, const Rational& mu) {
    QcmPlan plan;
    plan.base = make_se17_variant();
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {kOne / eps, rat(2), rat(2)};
    plan.pieces = {
        piece(0, PieceKind::QuadraticChem, {{0, 0, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}},
              {mono(kOne, 2, 0, 0)}),
        piece(1, PieceKind::LinearDampPerturb, {{0, 1, 0}}),
        piece(1, PieceKind::UniversalRemainder, {{0, 0, 1}}),
        piece(2, PieceKind::UniversalRemainder, {{1, 0, 0}}),
    };
    const Rational sx = rat(31, 10) + rat(57, 200) * mu;
    plan.post_scale = {{sx, kOne, rat(5, 3) * mu * sx}};
    if (plan.a[1] == plan.a[2])
        plan.notes.push_back(
            "equal translation numerators in equations 2 and 3 keep the equilibrium unique");
    return plan;
}

std::vector<CatalogEntry> build_entries() {
    using K = CatalogEntry::Kind;
    std::vector<CatalogEntry> e;
    auto add = [&](CatalogEntry entry) { e.push_back(std::move(entry)); };

    add({"rossler", "Rossler system (working variable order)", K::FixedSystem, {}, {}, "(7,1)", false,
         "", "", true, ""});
    add({"rossler-linearpart", "linear part of the reflected Rossler system", K::FixedSystem, {}, {},
         "(6)", false, "", "", false, ""});
    add({"rossler-reflected", "Rossler system with y reflected", K::FixedSystem, {}, {}, "(7,1)",
         false, "", "", true, ""});
    add({"wr", "minimal Willamowski-Rossler system", K::FixedSystem, {}, {}, "(9,6)", true, "(9,6)",
         "(7,4)", false, ""});
    add({"sprott-p-perm", "Sprott system P with x and y swapped", K::FixedSystem, {}, {}, "(6,1)",
         false, "", "", true, ""});
    add({"sprott-c-variant", "Sprott system C, permuted and reflected", K::FixedSystem, {}, {},
         "(5,2)", false, "", "", true, ""});
    add({"se17-variant", "hidden-attractor system with unique stable equilibrium", K::FixedSystem,
         {}, {}, "(7,2)", false, "", "", true, ""});

    add({"chemical-rossler", "chemical Rossler CDS", K::ParametricCds, rat(1, 1000), rat(1, 100),
         "(11,5)", true, "(11,5)", "(9,4)", true, ""});
    add({"cds-one-wing", "one-wing chaotic CDS", K::ParametricCds, rat(1, 100), rat(1, 100),
         "(10,3)", true, "(10,3)", "(8,3)", true, ""});
    add({"cds-two-wing", "two-wing chaotic CDS", K::ParametricCds, rat(1, 1000), rat(1, 100),
         "(11,5,1)", true, "(11,5,1)", "(9,4,1)", true, ""});
    add({"cds-hidden", "hidden-chaos CDS with unique stable equilibrium", K::ParametricCds,
         rat(1, 100000), rat(1, 100000), "(11,5)", true, "(11,5)", "(9,4)", true, ""});

    add({"chemical-rossler-plan", "construction plan for chemical-rossler", K::Plan, rat(1, 1000),
         rat(1, 100), "", {}, "", "", false, "chemical-rossler"});
    add({"cds-one-wing-plan", "construction plan for cds-one-wing", K::Plan, rat(1, 100),
         rat(1, 100), "", {}, "", "", false, "cds-one-wing"});
    add({"cds-two-wing-plan", "construction plan for cds-two-wing", K::Plan, rat(1, 1000),
         rat(1, 100), "", {}, "", "", false, "cds-two-wing"});
    add({"cds-hidden-plan", "construction plan for cds-hidden", K::Plan, rat(1, 100000),
         rat(1, 100000), "", {}, "", "", false, "cds-hidden"});
    return e;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

bool catalog_has(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return true;
    return false;
}

const CatalogEntry& catalog_get(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return e;
    throw std::invalid_argument("unknown catalog id '" + id + "'");
}

PolySystem catalog_instantiate(const std::string& id, const Rational& eps, const Rational& mu) {
    const CatalogEntry& entry = catalog_get(id);
    if (entry.kind == CatalogEntry::Kind::Plan)
        throw std::invalid_argument("catalog id '" + id + "' is a plan; use catalog_plan");
    if (entry.kind == CatalogEntry::Kind::FixedSystem) {
        if (id == "rossler") return make_rossler();
        if (id == "rossler-linearpart") return make_rossler_linearpart();
        if (id == "rossler-reflected") return make_rossler_reflected();
        if (id == "wr") return make_wr();
        if (id == "sprott-p-perm") return make_sprott_p_perm();
        if (id == "sprott-c-variant") return make_sprott_c_variant();
        if (id == "se17-variant") return make_se17_variant();
    }
    require_params(eps, mu, id);
    if (id == "chemical-rossler") return make_chemical_rossler(eps, mu);
    if (id == "cds-one-wing") return make_cds_one_wing(eps, mu);
    if (id == "cds-two-wing") return make_cds_two_wing(eps, mu);
    if (id == "cds-hidden") return make_cds_hidden(eps, mu);
    throw std::logic_error("catalog_instantiate: unhandled id '" + id + "'");
}

QcmPlan catalog_plan(const std::string& id, const Rational& eps, const Rational& mu) {
    const CatalogEntry& entry = catalog_get(id);
    if (entry.kind != CatalogEntry::Kind::Plan)
        throw std::invalid_argument("catalog id '" + id + "' is not a plan");
    require_params(eps, mu, id);
    if (id == "chemical-rossler-plan") return make_chemical_rossler_plan(eps, mu);
    if (id == "cds-one-wing-plan") return make_one_wing_plan(eps, mu);
    if (id == "cds-two-wing-plan") return make_two_wing_plan(eps, mu);
    if (id == "cds-hidden-plan") return make_hidden_plan(eps, mu);
    throw std::logic_error("catalog_plan: unhandled id '" + id + "'");
}

std::vector<Rational> catalog_reference_ic(const std::string& id, const Rational& eps, const Rational& mu) {
    const CatalogEntry& entry = catalog_get(id);
    if (!entry.has_reference_ic)
        throw std::invalid_argument("catalog id '" + id + "' has no reference initial condition");
    if (id == "rossler" || id == "rossler-reflected") return {rat(5), rat(-5), rat(5)};
    if (id == "sprott-p-perm") return {rat(1, 2), rat(0), rat(0)};
    if (id == "sprott-c-variant") return {rat(0), rat(0), rat(-1)};
    if (id == "se17-variant") return {rat(-5), rat(0), rat(15, 2)};
    require_params(eps, mu, id);
    if (id == "chemical-rossler") {
        return {eps * mu * (rat(5) + kOne / (eps * eps * mu)), rat(-5) + kOne / (eps * mu),
                rat(5) * eps * (rat(5) + kOne / mu) / (rat(5) - eps)};
    }
    if (id == "cds-one-wing") {
        return {(rat(1, 2) + kOne / mu) / one_wing_alpha2(eps, mu).abs(),
                rat(10, 27) * (kOne / (eps * eps * mu) + rat(27, 10) / (eps * mu)), kOne / (eps * mu)};
    }
    if (id == "cds-two-wing") {
        return {rat(2) / (eps * mu), eps / mu, (rat(2) / mu) * (rat(-1) + kOne / mu)};
    }
    if (id == "cds-hidden") {
        const Rational sx = rat(31, 10) + rat(57, 200) * mu;
        return {(rat(-5) + kOne / (eps * mu)) / sx, rat(2) / mu,
                (rat(15, 2) + rat(2) / mu) / (rat(5, 3) * mu * sx)};
    }
    throw std::logic_error("catalog_reference_ic: unhandled id '" + id + "'");
}

}  // namespace chemchaos
