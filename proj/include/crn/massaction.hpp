#pragma once

#include <map>
#include <string>
#include <vector>

#include "crn/network.hpp"
#include "crn/poly.hpp"
#include "crn/rational.hpp"

namespace crn {

inline Var species_var(const Network& net, std::size_t i) { return state_var(net.species[i]); }
inline Var rate_var(const Network& net, std::size_t j) { return param_var(net.reactions[j].label); }

/// x^y as a symbolic monomial for complex y.
inline SparsePoly complex_monomial(const Network& net, std::size_t complex_idx) {
    SparsePoly m = SparsePoly::constant(1);
    const auto& y = net.complexes[complex_idx];
    for (std::size_t i = 0; i < net.n(); ++i)
        if (y[i] > 0) m = m * SparsePoly::variable(species_var(net, i), static_cast<int>(y[i]));
    return m;
}

/// Mass-action flux vector v(x): v_j = kappa_j * x^{source(j)}, symbolic in
/// both the rate constants and the species.
inline std::vector<SparsePoly> flux_vector(const Network& net) {
    std::vector<SparsePoly> v;
    v.reserve(net.r());
    for (std::size_t j = 0; j < net.r(); ++j)
        v.push_back(SparsePoly::variable(rate_var(net, j)) *
                    complex_monomial(net, net.reactions[j].source));
    return v;
}

/// The n polynomials N v(x) forming the right-hand sides of the mass-action
/// ODEs, symbolic in rates and species.
inline std::vector<SparsePoly> mass_action_polynomials(const Network& net) {
    const IntMatrix nmat = stoichiometric_matrix(net);
    const auto v = flux_vector(net);
    std::vector<SparsePoly> f(net.n());
    for (std::size_t i = 0; i < net.n(); ++i)
        for (std::size_t j = 0; j < net.r(); ++j)
            if (nmat[i][j] != 0) f[i] = f[i] + Rat(nmat[i][j]) * v[j];
    return f;
}

inline std::map<Var, Rat> rate_values(const Network& net, const RatVec& rates) {
    std::map<Var, Rat> m;
    for (std::size_t j = 0; j < net.r(); ++j) m[rate_var(net, j)] = rates[j];
    return m;
}

inline std::map<Var, Rat> state_values(const Network& net, const RatVec& x) {
    std::map<Var, Rat> m;
    for (std::size_t i = 0; i < net.n(); ++i) m[species_var(net, i)] = x[i];
    return m;
}

} // namespace crn
