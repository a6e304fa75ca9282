#ifndef CHEMCHAOS_CATALOG_HPP
#define CHEMCHAOS_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "chemchaos/polysys.hpp"
#include "chemchaos/qcm.hpp"

namespace chemchaos {

/// Built-in library of systems and constructions, keyed by frozen string
/// ids. Fixed systems need no parameters; parametric CDS entries and the
/// construction plans take (epsilon, mu).
struct CatalogEntry {
    enum class Kind { FixedSystem, ParametricCds, Plan };

    std::string id;
    std::string title;
    Kind kind = Kind::FixedSystem;
    std::optional<Rational> default_eps;
    std::optional<Rational> default_mu;
    std::string expected_complexity;       // at the default parameters
    std::optional<bool> expected_chemical;
    std::string expected_canonical_label;  // CDS entries only
    std::string expected_fused_label;
    bool has_reference_ic = false;
    std::string cds_id;                    // plans: id of the CDS they reproduce
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_get(const std::string& id);
bool catalog_has(const std::string& id);

/// Fixed systems ignore the parameters; parametric entries require them.
PolySystem catalog_instantiate(const std::string& id, const Rational& eps = Rational(0),
                               const Rational& mu = Rational(0));

QcmPlan catalog_plan(const std::string& id, const Rational& eps, const Rational& mu);

/// Initial condition used in the reference trajectory for this entry,
/// exact in the parameters where parametric.
std::vector<Rational> catalog_reference_ic(const std::string& id, const Rational& eps = Rational(0),
                                        const Rational& mu = Rational(0));

}  // namespace chemchaos

#endif
