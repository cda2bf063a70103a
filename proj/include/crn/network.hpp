#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "crn/errors.hpp"
#include "crn/matrix.hpp"
#include "crn/rational.hpp"
#include "crn/simplex.hpp"

namespace crn {

struct Reaction {
    std::size_t source = 0;  // complex index
    std::size_t target = 0;  // complex index
    std::string label;       // rate constant name
};

/// A reaction network: ordered species, deduplicated complexes (non-negative
/// integer vectors over the species), and labeled directed reactions.
struct Network {
    std::vector<std::string> species;
    std::vector<std::vector<long long>> complexes;
    std::vector<Reaction> reactions;

    std::size_t n() const { return species.size(); }
    std::size_t m() const { return complexes.size(); }
    std::size_t r() const { return reactions.size(); }

    std::size_t species_index(const std::string& name) const {
        auto it = std::find(species.begin(), species.end(), name);
        if (it == species.end()) throw UnknownLabel("unknown species '" + name + "'");
        return static_cast<std::size_t>(it - species.begin());
    }

    std::size_t reaction_index(const std::string& label) const {
        for (std::size_t i = 0; i < reactions.size(); ++i)
            if (reactions[i].label == label) return i;
        throw UnknownLabel("unknown rate label '" + label + "'");
    }

    void validate(bool allow_parallel = false) const {
        for (const auto& c : complexes) {
            if (c.size() != n()) throw InvalidNetwork("complex length differs from species count");
            for (long long v : c)
                if (v < 0) throw NegativeStoichiometry("negative stoichiometric coefficient");
        }
        for (std::size_t i = 0; i < m(); ++i)
            for (std::size_t j = i + 1; j < m(); ++j)
                if (complexes[i] == complexes[j]) throw InvalidNetwork("duplicate complexes");
        std::map<std::pair<std::size_t, std::size_t>, int> seen;
        std::map<std::string, int> labels;
        for (const auto& rx : reactions) {
            if (rx.source >= m() || rx.target >= m())
                throw InvalidNetwork("reaction references missing complex");
            if (rx.source == rx.target) throw InvalidNetwork("self-loop reaction");
            if (++seen[{rx.source, rx.target}] > 1 && !allow_parallel)
                throw InvalidNetwork("duplicate reaction between the same complexes");
            if (++labels[rx.label] > 1)
                throw DuplicateRateLabel("duplicate rate label '" + rx.label + "'");
        }
    }
};

/// Stoichiometric matrix N (n x r): column j = target - source of reaction j.
inline IntMatrix stoichiometric_matrix(const Network& net) {
    IntMatrix n(net.n(), std::vector<Int>(net.r()));
    for (std::size_t j = 0; j < net.r(); ++j) {
        const auto& s = net.complexes[net.reactions[j].source];
        const auto& t = net.complexes[net.reactions[j].target];
        for (std::size_t i = 0; i < net.n(); ++i) n[i][j] = Int(t[i]) - Int(s[i]);
    }
    return n;
}

/// Complex matrix Y (n x m): columns are the complexes.
inline IntMatrix complex_matrix(const Network& net) {
    IntMatrix y(net.n(), std::vector<Int>(net.m()));
    for (std::size_t j = 0; j < net.m(); ++j)
        for (std::size_t i = 0; i < net.n(); ++i) y[i][j] = net.complexes[j][i];
    return y;
}

/// Incidence matrix C_G (m x r): column j has -1 at the source and +1 at the
/// target of reaction j.
inline IntMatrix incidence_matrix(const Network& net) {
    IntMatrix c(net.m(), std::vector<Int>(net.r()));
    for (std::size_t j = 0; j < net.r(); ++j) {
        c[net.reactions[j].source][j] -= 1;
        c[net.reactions[j].target][j] += 1;
    }
    return c;
}

/// Connected components of the complex digraph (undirected connectivity),
/// discovered by BFS from the lowest-index complex; members ascending.
inline std::vector<std::vector<std::size_t>> linkage_classes(const Network& net) {
    std::vector<std::vector<std::size_t>> adj(net.m());
    for (const auto& rx : net.reactions) {
        adj[rx.source].push_back(rx.target);
        adj[rx.target].push_back(rx.source);
    }
    std::vector<int> comp(net.m(), -1);
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t start = 0; start < net.m(); ++start) {
        if (comp[start] >= 0) continue;
        const int id = static_cast<int>(classes.size());
        classes.emplace_back();
        std::vector<std::size_t> queue{start};
        comp[start] = id;
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.erase(queue.begin());
            classes.back().push_back(u);
            for (std::size_t v : adj[u])
                if (comp[v] < 0) {
                    comp[v] = id;
                    queue.push_back(v);
                }
        }
        std::sort(classes.back().begin(), classes.back().end());
    }
    return classes;
}

/// Every connected component is a single strongly connected component.
inline bool weakly_reversible(const Network& net) {
    std::vector<std::vector<std::size_t>> fwd(net.m()), bwd(net.m());
    for (const auto& rx : net.reactions) {
        fwd[rx.source].push_back(rx.target);
        bwd[rx.target].push_back(rx.source);
    }
    auto reach = [&](std::size_t from, const std::vector<std::vector<std::size_t>>& adj) {
        std::vector<bool> seen(net.m(), false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        return seen;
    };
    for (const auto& cls : linkage_classes(net)) {
        const auto f = reach(cls.front(), fwd);
        const auto b = reach(cls.front(), bwd);
        for (std::size_t v : cls)
            if (!f[v] || !b[v]) return false;
    }
    return true;
}

struct StructureReport {
    std::size_t n = 0, m = 0, r = 0;
    std::size_t linkage_class_count = 0;  // l
    std::size_t stoich_rank = 0;          // s = rank N
    long long deficiency = 0;             // m - l - s
    bool weakly_reversible = false;
    RatMatrix conservation_basis;  // rows span the left kernel of N, in rref
};

inline StructureReport structure(const Network& net) {
    StructureReport rep;
    rep.n = net.n();
    rep.m = net.m();
    rep.r = net.r();
    rep.linkage_class_count = linkage_classes(net).size();
    const RatMatrix nn = to_rat(stoichiometric_matrix(net));
    rep.stoich_rank = rank(nn);
    rep.deficiency = static_cast<long long>(rep.m) - static_cast<long long>(rep.linkage_class_count) -
                     static_cast<long long>(rep.stoich_rank);
    rep.weakly_reversible = weakly_reversible(net);
    rep.conservation_basis = left_kernel(nn);
    return rep;
}

/// A stoichiometric compatibility class {x >= 0 : Z x = c}.
struct CompatibilityClass {
    RatMatrix z;  // d x n, rows = conservation basis (linearly independent)
    RatVec c;     // total amounts
};

inline CompatibilityClass compatibility_class(const Network& net, const RatVec& z0) {
    if (z0.size() != net.n()) throw DimensionMismatch("point length differs from species count");
    for (const auto& v : z0)
        if (v < 0) throw DomainError("compatibility class through a negative point");
    CompatibilityClass cls;
    cls.z = structure(net).conservation_basis;
    cls.c = cls.z * z0;
    return cls;
}

struct VertexEnumeration {
    std::vector<RatVec> vertices;  // deduplicated, lexicographically sorted
    std::vector<RatVec> rays;      // extreme rays of the recession cone, primitive
    bool unbounded = false;
};

/// Exact vertex/ray enumeration of {x >= 0 : Z x = c} by basis enumeration.
/// Throws EmptyClass when the polyhedron is empty.
inline VertexEnumeration polyhedron_vertices(const RatMatrix& z, const RatVec& c) {
    const std::size_t n = z.cols();
    // reduce to a full-row-rank consistent system
    RatMatrix aug(z.rows(), n + 1);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = z(i, j);
        aug(i, n) = c[i];
    }
    const Echelon e = rref(std::move(aug));
    for (std::size_t i = 0; i < e.rank; ++i)
        if (e.pivots[i] == n) throw EmptyClass("inconsistent class constraints");
    const std::size_t d = e.rank;
    RatMatrix zr(d, n);
    RatVec cr(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) zr(i, j) = e.mat(i, j);
        cr[i] = e.mat(i, n);
    }

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (!lp_feasible(zr, cr, all).feasible) throw EmptyClass("empty compatibility class");

    VertexEnumeration out;
    if (d == 0) {
        out.vertices.push_back(RatVec(n, Rat(0)));
        for (std::size_t i = 0; i < n; ++i) {
            RatVec ray(n, Rat(0));
            ray[i] = 1;
            out.rays.push_back(std::move(ray));
        }
        out.unbounded = n > 0;
        return out;
    }

    // vertices: basic feasible solutions over column subsets of size d
    std::vector<std::size_t> idx(d);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t from) {
        if (pos == d) {
            RatMatrix sub(d, d);
            RatVec rhs = cr;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k) sub(i, k) = zr(i, idx[k]);
            if (det(sub) == 0) return;
            auto sol = solve(sub, rhs);
            if (!sol) return;
            for (const Rat& v : *sol)
                if (v < 0) return;
            RatVec x(n, Rat(0));
            for (std::size_t k = 0; k < d; ++k) x[idx[k]] = (*sol)[k];
            out.vertices.push_back(std::move(x));
            return;
        }
        for (std::size_t j = from; j + (d - pos) <= n; ++j) {
            idx[pos] = j;
            choose(pos + 1, j + 1);
        }
    };
    choose(0, 0);
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());

    // extreme rays: supports S with rank(Z_S) = |S| - 1 and a sign-definite
    // one-dimensional kernel
    std::vector<std::size_t> ridx;
    std::function<void(std::size_t, std::size_t)> rays = [&](std::size_t pos, std::size_t from) {
        if (pos > 0) {
            RatMatrix sub(d, pos);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < pos; ++k) sub(i, k) = zr(i, ridx[k]);
            const RatMatrix ker = right_kernel(sub);
            if (ker.rows() == 1) {
                RatVec gen = ker.row(0);
                bool pos_ok = true, neg_ok = true, support_full = true;
                for (const Rat& v : gen) {
                    if (v < 0) pos_ok = false;
                    if (v > 0) neg_ok = false;
                    if (v == 0) support_full = false;
                }
                if (support_full && (pos_ok || neg_ok)) {
                    RatVec ray(n, Rat(0));
                    for (std::size_t k = 0; k < pos; ++k)
                        ray[ridx[k]] = neg_ok ? Rat(-gen[k]) : gen[k];
                    const auto prim = primitive_integer(ray);
                    RatVec canon(n);
                    for (std::size_t k = 0; k < n; ++k) canon[k] = Rat(prim[k]);
                    out.rays.push_back(std::move(canon));
                }
                return;  // larger supersets would have a larger kernel
            }
            if (ker.rows() > 1) return;
        }
        if (pos == d + 1) return;
        for (std::size_t j = from; j < n; ++j) {
            ridx.push_back(j);
            rays(pos + 1, j + 1);
            ridx.pop_back();
        }
    };
    rays(0, 0);
    std::sort(out.rays.begin(), out.rays.end());
    out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
    out.unbounded = !out.rays.empty();
    return out;
}

inline VertexEnumeration class_vertices(const CompatibilityClass& cls) {
    return polyhedron_vertices(cls.z, cls.c);
}

struct Face {
    std::vector<std::size_t> zero_set;  // W
    bool nonempty = false;
    int dim = -1;  // -1 for the empty face
};

/// The face F_W = {x in the class : x_i = 0 for i in W}. Dimension is the
/// affine rank of the face's vertex/ray description.
inline Face face_of_class(const CompatibilityClass& cls, const std::vector<std::size_t>& w) {
    const std::size_t n = cls.z.cols();
    for (std::size_t i : w)
        if (i >= n) throw DimensionMismatch("face index out of range");
    std::vector<bool> zeroed(n, false);
    for (std::size_t i : w) zeroed[i] = true;

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (!zeroed[i]) keep.push_back(i);

    RatMatrix zsub(cls.z.rows(), keep.size());
    for (std::size_t i = 0; i < cls.z.rows(); ++i)
        for (std::size_t k = 0; k < keep.size(); ++k) zsub(i, k) = cls.z(i, keep[k]);

    Face f;
    f.zero_set = w;
    std::sort(f.zero_set.begin(), f.zero_set.end());
    VertexEnumeration ve;
    try {
        ve = polyhedron_vertices(zsub, cls.c);
    } catch (const EmptyClass&) {
        return f;
    }
    f.nonempty = true;
    if (ve.vertices.empty()) return f;  // cannot happen: pointed polyhedra have vertices
    RatMatrix dirs(ve.vertices.size() - 1 + ve.rays.size(), keep.size());
    for (std::size_t i = 1; i < ve.vertices.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            dirs(i - 1, j) = ve.vertices[i][j] - ve.vertices[0][j];
    for (std::size_t i = 0; i < ve.rays.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            dirs(ve.vertices.size() - 1 + i, j) = ve.rays[i][j];
    f.dim = static_cast<int>(rank(dirs));
    return f;
}

/// Lexicographically first full-rank row subset of size rank(N); the rows kept
/// for the reduced stoichiometric matrix N'.
inline std::vector<std::size_t> full_rank_rows(const RatMatrix& m) {
    const std::size_t target = rank(m);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < m.rows() && rows.size() < target; ++i) {
        RatMatrix trial(rows.size() + 1, m.cols());
        for (std::size_t k = 0; k < rows.size(); ++k)
            for (std::size_t j = 0; j < m.cols(); ++j) trial(k, j) = m(rows[k], j);
        for (std::size_t j = 0; j < m.cols(); ++j) trial(rows.size(), j) = m(i, j);
        if (rank(trial) == rows.size() + 1) rows.push_back(i);
    }
    return rows;
}

} // namespace crn
