#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "crn/errors.hpp"
#include "crn/massaction.hpp"
#include "crn/network.hpp"
#include "crn/poly.hpp"

namespace crn {

/// A steady-state parametrization: the eliminated species expressed as
/// rational functions of the free species and the rate constants. Verified on
/// construction: substituting the expressions into the steady-state
/// polynomials of the eliminated species' ODEs yields zero identically.
struct Parametrization {
    std::vector<Var> free_vars;                  // state variables left free
    std::vector<Var> elim_vars;                  // eliminated state variables
    std::map<Var, PolyFraction> exprs;           // eliminated var -> expression
    std::vector<std::size_t> elim_indices;       // species indices eliminated
};

/// True iff p vanishes identically under the parametrization (numerator of
/// the substituted fraction is the zero polynomial; cross-multiplied, so the
/// check is scale-free).
inline bool verify_invariant(const Parametrization& par, const SparsePoly& p) {
    return p.substitute(par.exprs).num().is_zero();
}

/// Linear elimination at steady state: uses exactly the ODEs of the chosen
/// variables, requires the system to be jointly linear in them, and solves by
/// Cramer's rule over the polynomial ring.
inline Parametrization eliminate_linear(const Network& net,
                                        const std::vector<std::string>& elim_species) {
    Parametrization par;
    std::vector<std::size_t> elim_idx;
    for (const auto& name : elim_species) elim_idx.push_back(net.species_index(name));
    {
        auto sorted = elim_idx;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw UsageError("duplicate species in elimination set");
    }
    par.elim_indices = elim_idx;
    for (std::size_t i : elim_idx) par.elim_vars.push_back(species_var(net, i));
    for (std::size_t i = 0; i < net.n(); ++i)
        if (std::find(elim_idx.begin(), elim_idx.end(), i) == elim_idx.end())
            par.free_vars.push_back(species_var(net, i));
    if (elim_idx.empty()) return par;  // identity parametrization

    const auto f = mass_action_polynomials(net);
    const std::size_t k = elim_idx.size();
    PolyMatrix a(k, std::vector<SparsePoly>(k));
    std::vector<SparsePoly> b(k);

    for (std::size_t eq = 0; eq < k; ++eq) {
        const SparsePoly& poly = f[elim_idx[eq]];
        for (const auto& [e, c] : poly.terms()) {
            // split the term into its eliminated-variable part and the rest
            int total_elim = 0;
            std::size_t which = 0;
            SparsePoly rest = SparsePoly::constant(c);
            for (std::size_t vi = 0; vi < poly.vars().size(); ++vi) {
                if (e[vi] == 0) continue;
                const Var& v = poly.vars()[vi];
                auto it = std::find(par.elim_vars.begin(), par.elim_vars.end(), v);
                if (it != par.elim_vars.end()) {
                    total_elim += e[vi];
                    which = static_cast<std::size_t>(it - par.elim_vars.begin());
                    if (total_elim > 1)
                        throw NotLinearInChosenVariables(
                            "steady-state equation for '" + net.species[elim_idx[eq]] +
                            "' is not linear in the chosen variables");
                } else {
                    rest = rest * SparsePoly::variable(v, e[vi]);
                }
            }
            if (total_elim == 0)
                b[eq] = b[eq] - rest;  // constant side: A x = b with b = -(free part)
            else
                a[eq][which] = a[eq][which] + rest;
        }
    }

    const auto sol = solve_linear_symbolic(a, b);
    for (std::size_t i = 0; i < k; ++i) par.exprs[par.elim_vars[i]] = sol[i];

    // back-substitution closure: each used equation must vanish identically
    for (std::size_t eq = 0; eq < k; ++eq)
        if (!verify_invariant(par, f[elim_idx[eq]]))
            throw EliminationFailed("back-substitution check failed for '" +
                                    net.species[elim_idx[eq]] + "'");
    return par;
}

} // namespace crn
