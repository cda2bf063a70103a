#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "crn/errors.hpp"
#include "crn/matrix.hpp"
#include "crn/network.hpp"
#include "crn/simplex.hpp"

namespace crn {

/// W is a siphon when every reaction whose product complex meets W has a
/// reactant complex meeting W. Reactions producing only the empty complex
/// impose no constraint; inflow reactions (empty reactant) exclude any siphon
/// meeting their product.
inline bool is_siphon(const Network& net, const std::vector<std::size_t>& w) {
    if (w.empty()) return false;
    std::vector<bool> in(net.n(), false);
    for (std::size_t i : w) {
        if (i >= net.n()) throw DimensionMismatch("species index out of range");
        in[i] = true;
    }
    for (const auto& rx : net.reactions) {
        const auto& prod = net.complexes[rx.target];
        const auto& react = net.complexes[rx.source];
        bool prod_meets = false, react_meets = false;
        for (std::size_t i = 0; i < net.n(); ++i) {
            if (prod[i] > 0 && in[i]) prod_meets = true;
            if (react[i] > 0 && in[i]) react_meets = true;
        }
        if (prod_meets && !react_meets) return false;
    }
    return true;
}

/// All inclusion-minimal siphons, by branch-and-bound: grow a candidate from
/// each singleton, branching on which reactant species repairs the first
/// violated reaction; branches that already contain a discovered siphon are
/// pruned. Output is duplicate-free, inclusion-minimal, lexicographically
/// sorted.
inline std::vector<std::vector<std::size_t>> minimal_siphons(const Network& net) {
    std::vector<std::set<std::size_t>> found;
    std::set<std::vector<std::size_t>> visited;

    std::function<void(std::set<std::size_t>&)> grow = [&](std::set<std::size_t>& w) {
        const std::vector<std::size_t> key(w.begin(), w.end());
        if (!visited.insert(key).second) return;
        for (const auto& s : found)
            if (std::includes(w.begin(), w.end(), s.begin(), s.end())) return;

        // first violated reaction in file order
        for (const auto& rx : net.reactions) {
            const auto& prod = net.complexes[rx.target];
            const auto& react = net.complexes[rx.source];
            bool prod_meets = false, react_meets = false;
            for (std::size_t i = 0; i < net.n(); ++i) {
                if (prod[i] > 0 && w.count(i)) prod_meets = true;
                if (react[i] > 0 && w.count(i)) react_meets = true;
            }
            if (!prod_meets || react_meets) continue;
            // branch on each reactant species; an empty reactant kills the branch
            for (std::size_t i = 0; i < net.n(); ++i) {
                if (react[i] <= 0) continue;
                auto [it, inserted] = w.insert(i);
                grow(w);
                if (inserted) w.erase(it);
            }
            return;
        }
        found.emplace_back(w.begin(), w.end());
    };

    for (std::size_t i = 0; i < net.n(); ++i) {
        std::set<std::size_t> seed{i};
        grow(seed);
    }

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t a = 0; a < found.size(); ++a) {
        bool minimal = true;
        for (std::size_t b = 0; b < found.size() && minimal; ++b)
            if (a != b && std::includes(found[a].begin(), found[a].end(), found[b].begin(),
                                        found[b].end()) &&
                found[a] != found[b])
                minimal = false;
        if (minimal) out.emplace_back(found[a].begin(), found[a].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Every siphon of the network, inclusion order not guaranteed; guarded by a
/// hard cap because the lattice can be exponential.
inline std::vector<std::vector<std::size_t>> all_siphons(const Network& net,
                                                         std::size_t cap = 100000) {
    if (net.n() > 25) throw TermCapExceeded("full siphon lattice only supported for n <= 25");
    std::vector<std::vector<std::size_t>> out;
    const std::size_t limit = std::size_t(1) << net.n();
    for (std::size_t mask = 1; mask < limit; ++mask) {
        std::vector<std::size_t> w;
        for (std::size_t i = 0; i < net.n(); ++i)
            if (mask & (std::size_t(1) << i)) w.push_back(i);
        if (is_siphon(net, w)) {
            out.push_back(std::move(w));
            if (out.size() > cap) throw TermCapExceeded("siphon lattice exceeds cap");
        }
    }
    return out;
}

struct SiphonRelevance {
    std::vector<std::size_t> siphon;
    bool covered = false;   // a non-negative, non-zero conservation law has support in W
    RatVec witness;         // the law, when covered
};

struct SiphonReport {
    std::vector<std::vector<std::size_t>> minimal_siphons;
    std::vector<SiphonRelevance> relevance;
    bool no_boundary_steady_states = false;
};

/// For each minimal siphon W, decides by exact LP whether some non-negative,
/// non-zero conservation law has support inside W:
///   { v >= 0, sum_{i in W} v_i = 1, v^T N = 0, v_i = 0 outside W }.
/// When every minimal siphon is covered, no boundary steady states exist in
/// any compatibility class. A law covering a minimal siphon covers every
/// siphon containing it, so checking minimal siphons decides all siphons.
inline SiphonReport siphon_report(const Network& net) {
    SiphonReport rep;
    rep.minimal_siphons = minimal_siphons(net);
    const IntMatrix nmat = stoichiometric_matrix(net);
    bool all_covered = true;
    for (const auto& w : rep.minimal_siphons) {
        SiphonRelevance rel;
        rel.siphon = w;
        // variables: v_i for i in W only (v = 0 outside W)
        RatMatrix a(net.r(), w.size());
        for (std::size_t jr = 0; jr < net.r(); ++jr)
            for (std::size_t k = 0; k < w.size(); ++k) a(jr, k) = Rat(nmat[w[k]][jr]);
        RatVec b(net.r(), Rat(0));
        std::vector<std::size_t> nonneg(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) nonneg[k] = k;
        const LpResult lp = lp_feasible(a, b, nonneg, nonneg);
        rel.covered = lp.feasible;
        if (lp.feasible) {
            rel.witness.assign(net.n(), Rat(0));
            for (std::size_t k = 0; k < w.size(); ++k) rel.witness[w[k]] = lp.witness[k];
        } else {
            all_covered = false;
        }
        rep.relevance.push_back(std::move(rel));
    }
    // vacuously true with no siphons: any boundary steady state's zero set
    // would be a siphon
    rep.no_boundary_steady_states = all_covered;
    return rep;
}

} // namespace crn
