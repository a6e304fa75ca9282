#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chemchaos/catalog.hpp"
#include "chemchaos/crn.hpp"
#include "chemchaos/io.hpp"
#include "chemchaos/qcm.hpp"

using namespace chemchaos;

namespace {

Monomial mono3(const Rational& c, int e1, int e2, int e3) { return make_monomial(c, {e1, e2, e3}); }

PolySystem sys3(Poly e1, Poly e2, Poly e3) {
    return PolySystem(3, {"x", "y", "z"}, {std::move(e1), std::move(e2), std::move(e3)});
}

// The quadratic CDS the universal construction produces from the linear
// system "rossler-linearpart", written out coefficient by coefficient.
PolySystem expected_universal_on_linearpart(const Rational& a, const Rational& b, const Rational& c,
                                            const Rational& mu) {
    const Rational k57_10 = rat(57, 10);
    return sys3({mono3(k57_10 + mu / (rat(5) * a), 1, 0, 0), mono3(-k57_10 * mu / a, 2, 0, 0)},
                {mono3(-(a + c) / b, 0, 1, 0), mono3(mu / b, 1, 1, 0), mono3(mu / b, 0, 1, 1)},
                {mono3((b - c / rat(5)) / c, 0, 0, 1), mono3(mu / (rat(5) * c), 0, 0, 2),
                 mono3(-mu / c, 0, 1, 1)});
}

// The refined (9,2) construction on the same linear system.
PolySystem expected_refined_on_linearpart(const Rational& eps, const Rational& a, const Rational& b,
                                          const Rational& c, const Rational& mu) {
    return sys3({mono3(rat(57, 10) * a / mu + rat(1, 5), 0, 0, 0), mono3(rat(-57, 10), 1, 0, 0)},
                {mono3((eps * b - a - c) / mu, 0, 0, 0), mono3(rat(1), 1, 0, 0),
                 mono3(-eps, 0, 1, 0), mono3(rat(1), 0, 0, 1)},
                {mono3((b - c / rat(5)) / c, 0, 0, 1), mono3(mu / (rat(5) * c), 0, 0, 2),
                 mono3(-mu / c, 0, 1, 1)});
}

// The perturbed reflected Rossler system of the quadratic-case example.
PolySystem expected_perturbed_reflected_rossler(const Rational& eps, const Rational& mu,
                                                const Rational& b, const Rational& c) {
    return sys3({mono3(rat(1, 5), 0, 0, 0), mono3(rat(-57, 10), 1, 0, 0), mono3(rat(-1), 1, 1, 0),
                 mono3(eps, 2, 0, 0)},
                {mono3(rat(1), 1, 0, 0), mono3(rat(1), 0, 0, 1), mono3(-eps, 0, 1, 0),
                 mono3(mu / b, 1, 1, 0)},
                {mono3(rat(-1), 0, 1, 0), mono3(rat(1, 5), 0, 0, 1), mono3(-mu / c, 0, 1, 1),
                 mono3(mu / (rat(5) * c), 0, 0, 2)});
}

// Its translated image, the (12,5) CDS of the same example.
PolySystem expected_translated_reflected_rossler(const Rational& eps, const Rational& mu,
                                                 const Rational& a, const Rational& b,
                                                 const Rational& c) {
    return sys3(
        {mono3(a * (eps * a - b) / (mu * mu) + rat(57, 10) * a / mu + rat(1, 5), 0, 0, 0),
         mono3((b - rat(2) * eps * a) / mu - rat(57, 10), 1, 0, 0), mono3(a / mu, 0, 1, 0),
         mono3(eps, 2, 0, 0), mono3(rat(-1), 1, 1, 0)},
        {mono3((eps * b - c) / mu, 0, 0, 0), mono3(-(a / b + eps), 0, 1, 0), mono3(rat(1), 0, 0, 1),
         mono3(mu / b, 1, 1, 0)},
        {mono3(b / c - rat(1, 5), 0, 0, 1), mono3(mu / (rat(5) * c), 0, 0, 2),
         mono3(-mu / c, 0, 1, 1)});
}

// Translated stage of the two-wing construction, before rescaling.
PolySystem expected_translated_two_wing(const Rational& eps, const Rational& mu, const Rational& a,
                                        const Rational& b, const Rational& c) {
    return sys3(
        {mono3((b * b + eps * a * a - eps * a * b) / (mu * mu) - rat(1), 0, 0, 0),
         mono3(eps * (b - rat(2) * a) / mu, 1, 0, 0), mono3((rat(-2) * b + eps * a) / mu, 0, 1, 0),
         mono3(eps, 2, 0, 0), mono3(rat(1), 0, 2, 0), mono3(-eps, 1, 1, 0)},
        {mono3(-(a * c / b) / mu, 0, 1, 0), mono3(c / b, 1, 1, 0), mono3(a / b, 0, 1, 1),
         mono3(-mu / b, 1, 1, 1)},
        {mono3((c - b) / mu, 0, 0, 0), mono3(rat(1), 0, 1, 0), mono3(rat(-1), 0, 0, 1)});
}

// Translated stage of the hidden-chaos construction (c = b throughout).
PolySystem expected_translated_hidden(const Rational& eps, const Rational& mu, const Rational& a,
                                      const Rational& b) {
    return sys3(
        {mono3(a / (mu * mu) * (eps * a - b / rat(2)) + rat(31, 10) * b / mu + rat(57, 100), 0, 0,
               0),
         mono3((rat(5) * b - rat(20) * eps * a) / (rat(10) * mu), 1, 0, 0),
         mono3(a / (rat(5) * mu), 0, 1, 0),
         mono3(rat(-31, 10) + rat(3) * a / (rat(10) * mu), 0, 0, 1), mono3(eps, 2, 0, 0),
         mono3(rat(-1, 5), 1, 1, 0), mono3(rat(-3, 10), 1, 0, 1)},
        {mono3(b / mu, 0, 0, 0), mono3(-mu / b, 0, 1, 1)},
        {mono3(-(a / b), 0, 0, 1), mono3(mu / b, 1, 0, 1)});
}

QcmPlan example_linear_refined_plan(const Rational& eps, const Rational& mu, const Rational& a,
                                    const Rational& b, const Rational& c) {
    QcmPlan plan;
    plan.base = catalog_instantiate("rossler-linearpart");
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {a, b, c};
    PlanPiece p1{0, PieceKind::LinearDampPerturb, {{0, 0, 0}, {1, 0, 0}}, {}};
    PlanPiece p2{1, PieceKind::LinearDampPerturb, {{1, 0, 0}, {0, 0, 1}}, {}};
    PlanPiece p3{2, PieceKind::UniversalRemainder, {{0, 1, 0}, {0, 0, 1}}, {}};
    plan.pieces = {p1, p2, p3};
    return plan;
}

PolySystem random_quadratic(std::mt19937& rng, int dim) {
    std::uniform_int_distribution<int> coeff(-128, 128);
    std::uniform_int_distribution<int> nterms(1, 4);
    std::uniform_int_distribution<int> degree(0, 2);
    std::uniform_int_distribution<int> pick(0, dim - 1);
    std::vector<Poly> eqs(dim);
    for (int i = 0; i < dim; ++i) {
        const int m = nterms(rng);
        for (int t = 0; t < m; ++t) {
            int c = coeff(rng);
            if (c == 0) c = 1;
            std::vector<int> e(dim, 0);
            int budget = degree(rng);
            while (budget-- > 0) e[pick(rng)] += 1;
            eqs[i].push_back(make_monomial(rat(c, 64), e));
        }
    }
    // Guarantee at least one quadratic monomial somewhere.
    std::vector<int> e(dim, 0);
    e[pick(rng)] += 1;
    e[pick(rng)] += 1;
    int c = coeff(rng);
    if (c == 0) c = 1;
    eqs[pick(rng)].push_back(make_monomial(rat(c, 64), e));
    return PolySystem(dim, PolySystem::default_names(dim), eqs);
}

const ConstraintCheck* find_constraint(const QcmReport& rep, const std::string& needle) {
    for (const auto& c : rep.constraints)
        if (c.name.find(needle) != std::string::npos) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("universal construction on the linear example system") {
    const Rational a = rat(2), b = rat(3), c = rat(5), mu = rat(1, 100);
    QcmReport rep = universal_qcm(catalog_instantiate("rossler-linearpart"), {a, b, c}, mu);
    CHECK(rep.rescaled == expected_universal_on_linearpart(a, b, c, mu));
    CHECK(complexity(rep.rescaled).label() == "(8,5)");
    CHECK(rep.chemical);
}

TEST_CASE("universal construction on the zero system") {
    PolySystem zero(3, PolySystem::default_names(3), {Poly{}, Poly{}, Poly{}});
    QcmReport rep = universal_qcm(zero, {rat(1), rat(1), rat(1)}, rat(1, 10));
    CHECK(rep.rescaled == zero);
    CHECK(rep.chemical);
}

TEST_CASE("universal construction lifts the Rossler system to a chemical cubic") {
    QcmReport rep =
        universal_qcm(catalog_instantiate("rossler"), {rat(1), rat(1), rat(1)}, rat(1, 1000));
    CHECK(rep.chemical);
    CHECK(rep.rescaled.degree() == 3);
    CHECK(complexity(rep.rescaled).count(3) == 1);
}

TEST_CASE("universal construction: degree + 1 and top-degree count carry over") {
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> dims(2, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = dims(rng);
        PolySystem s = random_quadratic(rng, dim);
        const int n = s.degree();
        const int mtop = complexity(s).count(n);
        std::vector<Rational> a(dim, rat(trial + 1, 2));
        QcmReport rep = universal_qcm(s, a, rat(1, 50));
        CHECK(rep.rescaled.degree() == n + 1);
        CHECK(complexity(rep.rescaled).count(n + 1) == mtop);
        CHECK(rep.chemical);
    }
}

TEST_CASE("refined linear construction reproduces the reference (9,2) system") {
    const Rational eps = rat(1, 10), mu = rat(1, 100);
    const Rational a = rat(1), b = rat(21), c = rat(1);
    QcmReport rep = execute_plan(example_linear_refined_plan(eps, mu, a, b, c));
    CHECK(rep.rescaled == expected_refined_on_linearpart(eps, a, b, c, mu));
    CHECK(complexity(rep.rescaled).label() == "(9,2)");
    CHECK(rep.chemical);
    const auto* damp = find_constraint(rep, "eq2 damp");
    REQUIRE(damp != nullptr);
    CHECK(damp->satisfied);
    CHECK(damp->margin() == eps * b - a - c);
}

TEST_CASE("violated damp constraint surfaces as a non-chemical constant") {
    const Rational eps = rat(1, 10), mu = rat(1, 100);
    const Rational a = rat(1), c = rat(1);
    const Rational b = rat(1, 10) * (a + c) / eps;  // well below the feasible region
    QcmReport rep = execute_plan(example_linear_refined_plan(eps, mu, a, b, c));
    CHECK_FALSE(rep.chemical);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].equation == 1);
    CHECK(rep.violations[0].monomial.exps == std::vector<int>{0, 0, 0});
    CHECK(rep.violations[0].monomial.coeff.sign() < 0);
    const auto* damp = find_constraint(rep, "eq2 damp");
    REQUIRE(damp != nullptr);
    CHECK_FALSE(damp->satisfied);
}

TEST_CASE("all-damp splitting leaves only the negative linear terms as quadratics") {
    // Every diagonal is negative, so no equation needs the square perturbation.
    PolySystem s(3, PolySystem::default_names(3),
                 {{mono3(rat(1), 0, 0, 0), mono3(rat(-1), 1, 0, 0), mono3(rat(-1), 0, 1, 0)},
                  {mono3(rat(-2), 0, 1, 0), mono3(rat(1), 1, 0, 0)},
                  {mono3(rat(-1), 0, 0, 1), mono3(rat(-1), 1, 0, 0), mono3(rat(-1), 0, 1, 0)}});
    QcmPlan plan;
    plan.base = s;
    plan.epsilon = rat(1, 10);
    plan.mu = rat(1, 100);
    plan.a = {rat(1), rat(1), rat(1)};
    PlanPiece d1{0, PieceKind::LinearDampPerturb, {{0, 0, 0}, {1, 0, 0}}, {}};
    PlanPiece u1{0, PieceKind::UniversalRemainder, {{0, 1, 0}}, {}};
    PlanPiece d2{1, PieceKind::LinearDampPerturb, {{0, 1, 0}, {1, 0, 0}}, {}};
    PlanPiece d3{2, PieceKind::LinearDampPerturb, {{0, 0, 1}}, {}};
    PlanPiece u3{2, PieceKind::UniversalRemainder, {{1, 0, 0}, {0, 1, 0}}, {}};
    plan.pieces = {d1, u1, d2, d3, u3};
    QcmReport rep = execute_plan(plan);
    // M1^- = 3 negative off-diagonal terms, and exactly those become quadratics.
    CHECK(complexity(rep.rescaled).count(2) == 3);
    CHECK(rep.chemical);
}

TEST_CASE("quadratic-case example on the reflected Rossler system") {
    const Rational eps = rat(1, 10), mu = rat(1, 100);
    const Rational a = rat(300), b = rat(20), c = rat(1);
    QcmPlan plan;
    plan.base = catalog_instantiate("rossler-reflected");
    plan.epsilon = eps;
    plan.mu = mu;
    plan.a = {a, b, c};
    plan.pieces = {
        PlanPiece{0, PieceKind::QuadraticChem, {{1, 1, 0}}, {mono3(rat(1), 2, 0, 0)}},
        PlanPiece{0, PieceKind::LinearDampPerturb, {{0, 0, 0}, {1, 0, 0}}, {}},
        PlanPiece{1, PieceKind::LinearDampPerturb, {{0, 0, 1}}, {}},
        PlanPiece{1, PieceKind::UniversalRemainder, {{1, 0, 0}}, {}},
        PlanPiece{2, PieceKind::UniversalRemainder, {{0, 1, 0}, {0, 0, 1}}, {}},
    };
    QcmReport rep = execute_plan(plan);
    CHECK(rep.perturbed == expected_perturbed_reflected_rossler(eps, mu, b, c));
    CHECK(rep.translated == expected_translated_reflected_rossler(eps, mu, a, b, c));
    CHECK(complexity(rep.translated).label() == "(12,5)");
    CHECK(rep.chemical);
    CHECK(rep.translated ==
          apply_affine(rep.perturbed, AffineMap::translation({a / mu, b / mu, c / mu})));
}

TEST_CASE("normalize_leading handles the four designated forms") {
    SUBCASE("negative own square reflects the first variable") {
        PolySystem s(2, {"x", "y"},
                     {{make_monomial(rat(-1), {2, 0}), make_monomial(rat(1), {0, 1})},
                      {make_monomial(rat(1), {1, 0})}});
        auto [t, map] = normalize_leading(s);
        CHECK(map.signs[0] == -1);
        CHECK(map.perm == std::vector<int>{0, 1});
        bool found = false;
        for (const auto& m : t.eqs[0])
            if (m.exps == std::vector<int>{2, 0} && m.coeff.sign() > 0) found = true;
        CHECK(found);
    }
    SUBCASE("positive mixed term reflects the partner variable") {
        // +xy in the first equation becomes -xy after x2 -> -x2.
        PolySystem s = sys3({mono3(rat(2), 1, 1, 0), mono3(rat(1), 0, 0, 1)},
                            {mono3(rat(1), 1, 0, 0)}, {mono3(rat(-1), 0, 0, 1)});
        auto [t, map] = normalize_leading(s);
        CHECK(map.perm == std::vector<int>{0, 1, 2});
        CHECK(map.signs == std::vector<int>{1, -1, 1});
        bool found = false;
        for (const auto& m : t.eqs[0])
            if (m.exps == std::vector<int>{1, 1, 0} && m.coeff == rat(-2)) found = true;
        CHECK(found);
    }
    SUBCASE("already-normalized foreign product keeps the identity map") {
        PolySystem s = sys3({mono3(rat(2), 0, 1, 1), mono3(rat(1), 1, 0, 0)},
                            {mono3(rat(1), 0, 0, 1)}, {mono3(rat(-1), 0, 0, 1)});
        auto [t, map] = normalize_leading(s);
        CHECK(map.is_identity());
        CHECK(t == s);
    }
    SUBCASE("Sprott system C lands on its catalog variant") {
        PolySystem sprott_c = sys3({mono3(rat(1), 0, 1, 1)},
                                   {mono3(rat(1), 1, 0, 0), mono3(rat(-1), 0, 1, 0)},
                                   {mono3(rat(1), 0, 0, 0), mono3(rat(-1), 2, 0, 0)});
        auto [t, map] = normalize_leading(sprott_c);
        CHECK(t == catalog_instantiate("sprott-c-variant"));
        CHECK(map.perm == std::vector<int>{2, 0, 1});
        CHECK(map.signs == std::vector<int>{-1, 1, 1});
    }
    SUBCASE("Sprott system P lands on its catalog variant") {
        PolySystem sprott_p = sys3({mono3(rat(27, 10), 0, 1, 0), mono3(rat(1), 0, 0, 1)},
                                   {mono3(rat(-1), 1, 0, 0), mono3(rat(1), 0, 2, 0)},
                                   {mono3(rat(1), 1, 0, 0), mono3(rat(1), 0, 1, 0)});
        auto [t, map] = normalize_leading(sprott_p);
        CHECK(t == catalog_instantiate("sprott-p-perm"));
        CHECK(map.perm == std::vector<int>{1, 0, 2});
        CHECK(map.signs == std::vector<int>{1, 1, 1});
    }
    SUBCASE("rejects systems without quadratics") {
        CHECK_THROWS(normalize_leading(catalog_instantiate("rossler-linearpart")));
    }
}

TEST_CASE("quadratic_case_plan picks the case fill and bound") {
    SUBCASE("mixed-term case on the reflected Rossler system") {
        const Rational eps = rat(1, 10), mu = rat(1, 100);
        QcmPlan plan = quadratic_case_plan(catalog_instantiate("rossler-reflected"), eps, mu,
                                           {rat(1), rat(2), rat(1)});
        REQUIRE(!plan.pieces.empty());
        CHECK(plan.pieces[0].kind == PieceKind::QuadraticChem);
        CHECK(plan.pieces[0].monomials == std::vector<std::vector<int>>{{1, 1, 0}});
        REQUIRE(plan.pieces[0].fill.size() == 1);
        CHECK(plan.pieces[0].fill[0].exps == std::vector<int>{2, 0, 0});
        CHECK(plan.a[0] == rat(20));  // raised to |gamma| a2 / eps
        CHECK(plan.notes.size() == 1);
        QcmReport rep = execute_plan(plan);
        CHECK(rep.rescaled.degree() == 2);
        CHECK(rep.chemical);
    }
    SUBCASE("own-square case needs no fill and stays quadratic") {
        QcmPlan plan = quadratic_case_plan(catalog_instantiate("sprott-p-perm"), rat(1, 10),
                                           rat(1, 100), {rat(1), rat(1), rat(1)});
        CHECK(plan.pieces[0].fill.empty());
        CHECK(plan.notes.empty());
        QcmReport rep = execute_plan(plan);
        CHECK(rep.rescaled.degree() == 2);
        CHECK(rep.chemical);
    }
    SUBCASE("foreign-product case fills three quadratics and bounds a1") {
        // The only quadratic is +yz in the first equation.
        PolySystem s = sys3({mono3(rat(1), 1, 0, 0), mono3(rat(3), 0, 1, 1)},
                            {mono3(rat(-1), 0, 1, 0)}, {mono3(rat(1), 1, 0, 0)});
        const Rational eps = rat(1, 10);
        QcmPlan plan = quadratic_case_plan(s, eps, rat(1, 100), {rat(1), rat(2), rat(5)});
        REQUIRE(plan.pieces[0].kind == PieceKind::QuadraticChem);
        CHECK(plan.pieces[0].monomials == std::vector<std::vector<int>>{{0, 1, 1}});
        REQUIRE(plan.pieces[0].fill.size() == 3);
        CHECK(plan.a[0] == rat(3) * rat(5) / eps);  // max(|delta| a2, |delta| a3)/eps
        QcmReport rep = execute_plan(plan);
        CHECK(rep.chemical);
        CHECK(complexity(rep.rescaled).count(3) == complexity(s).count(2) - 1);
    }
    SUBCASE("cubic count drops by one on random quadratic systems") {
        std::mt19937 rng(777);
        std::uniform_int_distribution<int> dims(3, 5);
        for (int trial = 0; trial < 8; ++trial) {
            PolySystem s = random_quadratic(rng, dims(rng));
            auto [norm, map] = normalize_leading(s);
            const int m2 = complexity(norm).count(2);
            std::vector<Rational> a(norm.dim, rat(1));
            QcmPlan plan = quadratic_case_plan(norm, rat(1, 10), rat(1, 1000), a);
            QcmReport rep = execute_plan(plan);
            CHECK(complexity(rep.rescaled).count(3) == m2 - 1);
        }
    }
}

TEST_CASE("verify_chemical_under_translation") {
    CHECK(verify_chemical_under_translation(catalog_instantiate("wr"), {rat(0), rat(0), rat(0)})
              .chemical);
    const Rational eps = rat(1, 10), mu = rat(1, 100);
    const Rational a = rat(1), c = rat(1);
    const Rational b = (a + c) / eps;  // boundary value: constant lands exactly on zero
    PolySystem pert(3, PolySystem::default_names(3),
                    {{mono3(rat(1, 5), 0, 0, 0), mono3(rat(-57, 10), 1, 0, 0)},
                     {mono3(rat(1), 1, 0, 0), mono3(rat(1), 0, 0, 1), mono3(-eps, 0, 1, 0)},
                     {mono3(rat(-1), 0, 1, 0), mono3(rat(1, 5), 0, 0, 1),
                      mono3(-mu / c, 0, 1, 1), mono3(mu / (rat(5) * c), 0, 0, 2)}});
    CHECK(verify_chemical_under_translation(pert, {a / mu, b / mu, c / mu}).chemical);
    const Rational b_bad = rat(9, 10) * (a + c) / eps;
    auto rep = verify_chemical_under_translation(pert, {a / mu, b_bad / mu, c / mu});
    CHECK_FALSE(rep.chemical);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].equation == 1);
    CHECK(rep.violations[0].monomial.exps == std::vector<int>{0, 0, 0});
}

TEST_CASE("plan perturbations scale linearly in mu") {
    auto sup_on_grid = [](const std::vector<Poly>& polys, int dim) {
        double sup = 0.0;
        PolySystem wrapper(dim, PolySystem::default_names(dim), polys);
        const int npts = 9;
        Eigen::VectorXd x(dim);
        std::vector<int> idx(dim, 0);
        for (;;) {
            for (int k = 0; k < dim; ++k) x[k] = 5.0 * idx[k] / (npts - 1);
            sup = std::max(sup, evaluate(wrapper, x).cwiseAbs().maxCoeff());
            int k = 0;
            while (k < dim && ++idx[k] == npts) idx[k++] = 0;
            if (k == dim) break;
        }
        return sup;
    };
    auto mu_part_sup = [&](const std::string& plan_id, const Rational& eps, const Rational& mu) {
        QcmPlan hi = catalog_plan(plan_id, eps, mu);
        QcmPlan lo = catalog_plan(plan_id, eps, mu / rat(2));
        auto ph = plan_perturbation(hi);
        auto pl = plan_perturbation(lo);
        std::vector<Poly> diff(ph.size());
        for (std::size_t i = 0; i < ph.size(); ++i) diff[i] = poly_add(ph[i], poly_neg(pl[i]));
        return sup_on_grid(diff, hi.base.dim);
    };
    for (const std::string id :
         {"chemical-rossler-plan", "cds-one-wing-plan", "cds-two-wing-plan", "cds-hidden-plan"}) {
        const Rational eps = rat(1, 10);
        const double s1 = mu_part_sup(id, eps, rat(1, 50));
        const double s2 = mu_part_sup(id, eps, rat(1, 100));
        CHECK(s1 / s2 == doctest::Approx(2.0).epsilon(0.10));
    }
    // The universal construction's whole perturbation is linear in mu.
    PolySystem rossler = catalog_instantiate("rossler");
    auto pert_for = [&](const Rational& mu) {
        QcmPlan plan;
        plan.base = rossler;
        plan.epsilon = rat(1);
        plan.mu = mu;
        plan.a = {rat(1), rat(1), rat(1)};
        for (int i = 0; i < 3; ++i) {
            PlanPiece p;
            p.equation = i;
            p.kind = PieceKind::UniversalRemainder;
            for (const auto& m : rossler.eqs[i]) p.monomials.push_back(m.exps);
            plan.pieces.push_back(p);
        }
        return sup_on_grid(plan_perturbation(plan), 3);
    };
    CHECK(pert_for(rat(1, 50)) / pert_for(rat(1, 100)) == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("malformed plans are rejected") {
    QcmPlan plan;
    plan.base = catalog_instantiate("rossler-linearpart");
    plan.epsilon = rat(1, 10);
    plan.mu = rat(1, 100);
    plan.a = {rat(1), rat(1), rat(1)};
    SUBCASE("incomplete partition") {
        plan.pieces = {PlanPiece{0, PieceKind::UniversalRemainder, {{0, 0, 0}}, {}}};
        CHECK_THROWS(execute_plan(plan));
    }
    SUBCASE("negative cross term in a damp piece") {
        plan.pieces = {
            PlanPiece{0, PieceKind::UniversalRemainder, {{0, 0, 0}, {1, 0, 0}}, {}},
            PlanPiece{1, PieceKind::UniversalRemainder, {{1, 0, 0}, {0, 0, 1}}, {}},
            PlanPiece{2, PieceKind::LinearDampPerturb, {{0, 1, 0}, {0, 0, 1}}, {}},
        };
        CHECK_THROWS(execute_plan(plan));
    }
    SUBCASE("positive diagonal in a damp piece") {
        plan.pieces = {
            PlanPiece{0, PieceKind::UniversalRemainder, {{0, 0, 0}, {1, 0, 0}}, {}},
            PlanPiece{1, PieceKind::UniversalRemainder, {{1, 0, 0}, {0, 0, 1}}, {}},
            PlanPiece{2, PieceKind::UniversalRemainder, {{0, 1, 0}}, {}},
            PlanPiece{2, PieceKind::LinearDampPerturb, {{0, 0, 1}}, {}},
        };
        CHECK_THROWS(execute_plan(plan));
    }
    SUBCASE("non-positive parameters") {
        plan.pieces.clear();
        for (int i = 0; i < 3; ++i) {
            PlanPiece p;
            p.equation = i;
            p.kind = PieceKind::UniversalRemainder;
            for (const auto& m : plan.base.eqs[i]) p.monomials.push_back(m.exps);
            plan.pieces.push_back(p);
        }
        plan.mu = rat(-1, 10);
        CHECK_THROWS(execute_plan(plan));
        plan.mu = rat(1, 10);
        plan.a = {rat(0), rat(1), rat(1)};
        CHECK_THROWS(execute_plan(plan));
    }
}

TEST_CASE("catalog: chemical Rossler instantiation is digit-exact") {
    PolySystem s = catalog_instantiate("chemical-rossler", rat(1, 1000), rat(1, 100));
    REQUIRE(s.eqs[0].size() == 5);
    CHECK(s.eqs[0][0].coeff == Rational::from_string("5700.000002"));
    CHECK(s.eqs[0][1].coeff == Rational::from_string("-100005.7"));
    CHECK(s.eqs[0][2].coeff == rat(1000));
    CHECK(s.eqs[0][3].coeff == rat(100));
    CHECK(s.eqs[0][4].coeff == rat(-1));
    REQUIRE(s.eqs[1].size() == 3);
    CHECK(s.eqs[1][0].coeff == Rational::from_string("-1000.001"));
    CHECK(s.eqs[1][1].coeff == Rational::from_string("999.8"));
    CHECK(s.eqs[1][2].coeff == rat(1));
    REQUIRE(s.eqs[2].size() == 3);
    CHECK(s.eqs[2][0].coeff == Rational::from_string("999.8"));
    CHECK(s.eqs[2][1].coeff == Rational::from_string("-0.01"));  // y*z sorts before z^2
    CHECK(s.eqs[2][2].coeff == Rational::from_string("1.9996"));
}

TEST_CASE("catalog: stored plans rebuild the parametric CDS entries") {
    struct Pair {
        Rational eps, mu;
    };
    const std::vector<Pair> pairs = {
        {rat(1, 1000), rat(1, 100)}, {rat(1, 100), rat(1, 100)}, {rat(1, 20), rat(1, 50)}};
    const std::vector<std::pair<std::string, std::string>> ids = {
        {"chemical-rossler-plan", "chemical-rossler"},
        {"cds-one-wing-plan", "cds-one-wing"},
        {"cds-two-wing-plan", "cds-two-wing"},
        {"cds-hidden-plan", "cds-hidden"},
    };
    for (const auto& [plan_id, cds_id] : ids) {
        for (const auto& p : pairs) {
            QcmPlan plan = catalog_plan(plan_id, p.eps, p.mu);
            QcmReport rep = execute_plan(plan);
            CHECK(rep.rescaled == catalog_instantiate(cds_id, p.eps, p.mu));
            CHECK(rep.chemical);
            // The translation stage is the exact affine image of the perturbed one.
            std::vector<Rational> shift(plan.a.size());
            for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = plan.a[i] / plan.mu;
            CHECK(rep.translated == apply_affine(rep.perturbed, AffineMap::translation(shift)));
        }
    }
}

TEST_CASE("universal construction rejects bad parameters") {
    PolySystem s = catalog_instantiate("rossler");
    CHECK_THROWS(universal_qcm(s, {rat(1), rat(1), rat(1)}, rat(0)));
    CHECK_THROWS(universal_qcm(s, {rat(1), rat(-1), rat(1)}, rat(1, 10)));
    CHECK_THROWS(universal_qcm(s, {rat(1), rat(1)}, rat(1, 10)));  // wrong dimension
}

TEST_CASE("catalog: translated stages match the hand-expanded intermediate stages") {
    const Rational eps = rat(1, 1000), mu = rat(1, 100);
    SUBCASE("two-wing") {
        QcmReport rep = execute_plan(catalog_plan("cds-two-wing-plan", eps, mu));
        CHECK(rep.translated == expected_translated_two_wing(eps, mu, rat(2) / eps, rat(1), rat(1)));
    }
    SUBCASE("hidden") {
        const Rational heps = rat(1, 100000), hmu = rat(1, 100000);
        QcmReport rep = execute_plan(catalog_plan("cds-hidden-plan", heps, hmu));
        CHECK(rep.translated == expected_translated_hidden(heps, hmu, rat(1) / heps, rat(2)));
    }
    SUBCASE("chemical rossler") {
        QcmReport rep = execute_plan(catalog_plan("chemical-rossler-plan", eps, mu));
        CHECK(rep.translated == expected_translated_reflected_rossler(
                                    eps, mu, rat(1) / (eps * eps), rat(1) / eps, rat(1)));
    }
}

TEST_CASE("catalog: zero-margin damp constraints coexist with chemical output") {
    QcmReport rep = execute_plan(catalog_plan("cds-one-wing-plan", rat(1, 100), rat(1, 100)));
    CHECK(rep.chemical);
    const auto* eq2 = find_constraint(rep, "eq2 damp");
    const auto* eq3 = find_constraint(rep, "eq3 damp");
    REQUIRE(eq2 != nullptr);
    REQUIRE(eq3 != nullptr);
    CHECK(eq2->margin() == rat(0));
    CHECK(eq3->margin() == rat(0));
    CHECK_FALSE(eq2->satisfied);  // strict inequality misses at the boundary
    const auto* own = find_constraint(rep, "quad own-square");
    REQUIRE(own != nullptr);
    CHECK(own->satisfied);
}

TEST_CASE("catalog: expected labels, chemicality, and reference points") {
    for (const auto& entry : catalog_entries()) {
        if (entry.kind == CatalogEntry::Kind::Plan) continue;
        PolySystem s = entry.kind == CatalogEntry::Kind::FixedSystem
                           ? catalog_instantiate(entry.id)
                           : catalog_instantiate(entry.id, *entry.default_eps, *entry.default_mu);
        CHECK(complexity(s).label() == entry.expected_complexity);
        CHECK(is_chemical(s).chemical == *entry.expected_chemical);
        if (!entry.expected_canonical_label.empty()) {
            Crn canonical = canonical_crn(s);
            CHECK(crn_complexity(canonical).label() == entry.expected_canonical_label);
            CHECK(crn_complexity(fuse(canonical)).label() == entry.expected_fused_label);
        }
        if (entry.has_reference_ic && entry.kind == CatalogEntry::Kind::ParametricCds) {
            auto ic = catalog_reference_ic(entry.id, *entry.default_eps, *entry.default_mu);
            for (const auto& v : ic) CHECK(v.sign() > 0);
        }
    }
    CHECK_THROWS(catalog_get("no-such-id"));
    CHECK_THROWS(catalog_instantiate("chemical-rossler"));  // parameters required
}

TEST_CASE("crn: canonical network of the Willamowski-Rossler system") {
    Crn c = canonical_crn(catalog_instantiate("wr"));
    CHECK(crn_complexity(c).label() == "(9,6)");
    // Canonical reactions in (equation, graded-lex monomial) order.
    CHECK(render(c) ==
          "X --30--> 2 X\n"
          "2 X --1/2--> X\n"
          "X + Y --1--> Y\n"
          "X + Z --1--> Z\n"
          "Y --33/2--> 2 Y\n"
          "X + Y --1--> X\n"
          "2 Y --1/2--> Y\n"
          "Z --10--> 0\n"
          "X + Z --1--> X + 2 Z\n");
    Crn f = fuse(c);
    CHECK(crn_complexity(f).label() == "(7,4)");
    CHECK(render(f) ==
          "X --30--> 2 X\n"
          "2 X --1/2--> X\n"
          "X + Y --1--> 0\n"
          "X + Z --1--> 2 Z\n"
          "Y --33/2--> 2 Y\n"
          "2 Y --1/2--> Y\n"
          "Z --10--> 0\n");
    CHECK(crn_to_cds(c) == catalog_instantiate("wr"));
    CHECK(crn_to_cds(f) == catalog_instantiate("wr"));
}

TEST_CASE("crn: production-degradation and single-monomial compilations") {
    PolySystem pd(1, {"x"}, {{make_monomial(rat(1), {0}), make_monomial(rat(-1), {1})}});
    Crn c = canonical_crn(pd);
    REQUIRE(c.reactions.size() == 2);
    CHECK(render(c) == "0 --1--> X\nX --1--> 0\n");

    PolySystem one(2, {"x1", "x2"}, {{make_monomial(rat(1), {1, 1})}, {}});
    Crn c2 = canonical_crn(one);
    REQUIRE(c2.reactions.size() == 1);
    CHECK(c2.reactions[0].reactants == std::vector<int>{1, 1});
    CHECK(c2.reactions[0].products == std::vector<int>{2, 1});

    PolySystem production(1, {"x"}, {{make_monomial(rat(3, 2), {0})}});
    CHECK(crn_to_cds(canonical_crn(production)) == production);
}

TEST_CASE("crn: fusion fuses three one-wing reactions into one") {
    PolySystem s = catalog_instantiate("cds-one-wing", rat(1, 100), rat(1, 100));
    Crn fused = fuse(canonical_crn(s));
    CHECK(crn_complexity(fused).label() == "(8,3)");
    bool found = false;
    for (const auto& r : fused.reactions)
        if (r.reactants == std::vector<int>{1, 0, 0} && r.products == std::vector<int>{2, 1, 1})
            found = true;
    CHECK(found);
}

TEST_CASE("crn: sign-dependent fusion when the shared linear coefficient is negative") {
    PolySystem s = catalog_instantiate("cds-one-wing", rat(1, 2), rat(1, 100));
    REQUIRE(s.eqs[0][1].coeff.sign() < 0);
    Crn fused = fuse(canonical_crn(s));
    bool found = false;
    for (const auto& r : fused.reactions)
        if (r.reactants == std::vector<int>{1, 0, 0} && r.products == std::vector<int>{0, 1, 1})
            found = true;
    CHECK(found);
}

TEST_CASE("crn: fusion leaves distinct complexes and conflicting pairs alone") {
    Crn plain;
    plain.dim = 2;
    plain.species = {"X", "Y"};
    plain.reactions = {
        {{1, 0}, {2, 0}, rat(2)},
        {{0, 1}, {0, 0}, rat(2)},
    };
    CHECK(fuse(plain) == plain);

    Crn conflict;
    conflict.dim = 2;
    conflict.species = {"X", "Y"};
    conflict.reactions = {
        {{1, 0}, {2, 0}, rat(1)},  // +X
        {{1, 0}, {0, 0}, rat(1)},  // -X: cancels the first, must not fuse with it
        {{1, 0}, {1, 1}, rat(1)},  // +Y
    };
    Crn fused = fuse(conflict);
    CHECK(fused == conflict);

    Crn notcanon;
    notcanon.dim = 2;
    notcanon.species = {"X", "Y"};
    notcanon.reactions = {{{1, 0}, {0, 1}, rat(1)}};
    CHECK_THROWS(fuse(notcanon));
}

TEST_CASE("crn: degree counts never exceed monomial counts") {
    for (const std::string id :
         {"wr", "chemical-rossler", "cds-one-wing", "cds-two-wing", "cds-hidden"}) {
        const auto& entry = catalog_get(id);
        PolySystem s = entry.kind == CatalogEntry::Kind::FixedSystem
                           ? catalog_instantiate(id)
                           : catalog_instantiate(id, *entry.default_eps, *entry.default_mu);
        Complexity m = complexity(s);
        Crn canonical = canonical_crn(s);
        Complexity rc = crn_complexity(canonical);
        Complexity rf = crn_complexity(fuse(canonical));
        for (int d = 0; d < static_cast<int>(m.by_degree.size()); ++d) {
            CHECK(rc.count(d) == m.count(d));
            CHECK(rf.count(d) <= m.count(d));
        }
        // Mass-action consistency: a reaction whose affected species is absent
        // from the reactant complex can only create it.
        for (const auto& r : canonical.reactions)
            for (int i = 0; i < canonical.dim; ++i) {
                const int delta = r.products[i] - r.reactants[i];
                if (delta != 0 && r.reactants[i] == 0) CHECK(delta == 1);
            }
    }
}

TEST_CASE("crn: round-trip through the text format") {
    Crn c = canonical_crn(catalog_instantiate("wr"));
    CHECK(parse_crn(render(c)) == c);
    Crn f = fuse(c);
    CHECK(parse_crn(render(f)) == f);
    CHECK_THROWS(parse_crn("0 --1--> 2 0\n"));
    CHECK_THROWS(parse_crn("X + Y -> Z\n"));
}

TEST_CASE("crn: rejects non-chemical systems by name") {
    try {
        canonical_crn(catalog_instantiate("rossler"));
        FAIL("expected a rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("equation 2") != std::string::npos);
    }
}

TEST_CASE("crn: round-trip holds for random chemical systems") {
    std::mt19937 rng(4242);
    int built = 0;
    while (built < 10) {
        PolySystem s = random_quadratic(rng, 3);
        if (!is_chemical(s).chemical) continue;
        ++built;
        CHECK(crn_to_cds(canonical_crn(s)) == s);
        CHECK(crn_to_cds(fuse(canonical_crn(s))) == s);
    }
}

TEST_CASE("plan documents round-trip and execute identically") {
    QcmPlan plan = catalog_plan("cds-two-wing-plan", rat(1, 1000), rat(1, 100));
    const std::string doc = plan_to_json(plan);
    QcmPlan parsed = plan_from_json(doc);
    CHECK(execute_plan(parsed).rescaled == execute_plan(plan).rescaled);

    const std::string by_id = plan_to_json(plan, "sprott-c-variant");
    QcmPlan parsed2 = plan_from_json(by_id);
    CHECK(parsed2.base == catalog_instantiate("sprott-c-variant"));
    CHECK(execute_plan(parsed2).rescaled == execute_plan(plan).rescaled);
}
