#ifndef CHEMCHAOS_CRN_HPP
#define CHEMCHAOS_CRN_HPP

#include <string>
#include <vector>

#include "chemchaos/polysys.hpp"

namespace chemchaos {

/// One mass-action reaction: reactant complex -> product complex at a
/// positive rate. Stoichiometries are non-negative; a reaction never has
/// identical sides.
struct Reaction {
    std::vector<int> reactants;
    std::vector<int> products;
    Rational rate;

    int degree() const;  // sum of reactant stoichiometries
    bool operator==(const Reaction& o) const {
        return reactants == o.reactants && products == o.products && rate == o.rate;
    }
};

struct Crn {
    int dim = 0;
    std::vector<std::string> species;
    std::vector<Reaction> reactions;

    bool operator==(const Crn& o) const {
        return dim == o.dim && species == o.species && reactions == o.reactions;
    }
};

/// Per-monomial compilation: alpha * x^nu in equation i becomes the
/// reaction nu -> nu' at rate |alpha|, where nu' changes only species i
/// by sign(alpha). Rejects non-chemical systems naming the offending
/// monomial. Reaction order follows (equation, monomial) order.
Crn canonical_crn(const PolySystem& s);

/// Merges canonical reactions sharing both reactant complex and rate,
/// provided they touch pairwise-distinct species; conflicting reactions
/// pass through unfused. Input must be in canonical form (each reaction
/// changes exactly one species by one unit).
Crn fuse(const Crn& c);

/// Mass-action ODEs of a network: dx_i/dt = sum_r rate_r (nu'_i - nu_i) x^nu_r.
PolySystem crn_to_cds(const Crn& c);

/// Reaction counts by degree, same labelling scheme as monomial complexity.
Complexity crn_complexity(const Crn& c);

/// One reaction per line, "complex --rate--> complex", empty complex "0",
/// unit stoichiometries implicit: "X + Y --1/2--> 2 Y".
std::string render(const Crn& c);
Crn parse_crn(const std::string& text);

/// Species naming used when compiling systems: lowercase variable names
/// are uppercased (x -> X) and mapped back on the return trip.
std::string species_name_for_var(const std::string& var);
std::string var_name_for_species(const std::string& species);

}  // namespace chemchaos

#endif
