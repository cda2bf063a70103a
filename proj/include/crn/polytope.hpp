#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crn/elimination.hpp"
#include "crn/errors.hpp"
#include "crn/massaction.hpp"
#include "crn/matrix.hpp"
#include "crn/network.hpp"
#include "crn/poly.hpp"
#include "crn/rational.hpp"
#include "crn/simplex.hpp"

namespace crn {

/// Exact polytope as an irredundant, lexicographically sorted vertex list.
struct Polytope {
    std::size_t dim = 0;
    std::vector<RatVec> vertices;
};

namespace pt {

constexpr std::size_t kMaxHullDimension = 7;  // exact beneath-beyond degrades fast beyond this

inline std::vector<RatVec> dedupe_sorted(std::vector<RatVec> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// 2D convex hull by monotone chain; strict turns only, so collinear interior
/// points drop out.
inline std::vector<RatVec> hull2d(std::vector<RatVec> pts) {
    pts = dedupe_sorted(std::move(pts));
    if (pts.size() <= 2) return pts;
    auto cross = [](const RatVec& o, const RatVec& a, const RatVec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<RatVec> h;
    for (const auto& p : pts) {
        while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) <= 0) h.pop_back();
        h.push_back(p);
    }
    const std::size_t lower = h.size() + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (h.size() >= lower && cross(h[h.size() - 2], h.back(), *it) <= 0) h.pop_back();
        h.push_back(*it);
    }
    h.pop_back();
    return dedupe_sorted(std::move(h));
}

} // namespace pt

/// Irredundant vertex set of the convex hull of the given points.
inline Polytope hull(std::vector<RatVec> points, std::size_t dim) {
    for (const auto& p : points)
        if (p.size() != dim) throw DimensionMismatch("hull point dimension");
    if (points.empty()) throw DomainError("hull of an empty point set");
    if (dim > pt::kMaxHullDimension)
        throw DimensionMismatch("hull dimension capped at " +
                                std::to_string(pt::kMaxHullDimension));
    Polytope p;
    p.dim = dim;
    points = pt::dedupe_sorted(std::move(points));
    if (dim == 0 || points.size() == 1) {
        p.vertices = {points.front()};
        return p;
    }
    if (dim == 1) {
        p.vertices = {points.front()};
        if (points.back() != points.front()) p.vertices.push_back(points.back());
        return p;
    }
    if (dim == 2) {
        p.vertices = pt::hull2d(std::move(points));
        return p;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<RatVec> others;
        others.reserve(points.size() - 1);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) others.push_back(points[j]);
        if (!in_convex_hull(points[i], others)) p.vertices.push_back(points[i]);
    }
    return p;
}

struct VolumeResult {
    Rat ambient;   // Lebesgue volume in the ambient space (0 when degenerate)
    Rat relative;  // volume w.r.t. the affine hull's lattice when degenerate
    int aff_dim = -1;
};

namespace pt {

/// Volume of a full-dimensional point set in R^k by an incremental placing
/// triangulation: points are inserted in lexicographic order and each new
/// point is coned over the strictly visible boundary facets.
inline Rat volume_full_dim(std::vector<RatVec> pts, std::size_t k) {
    pts = dedupe_sorted(std::move(pts));
    const std::size_t npts = pts.size();

    auto orient = [&](const std::vector<std::size_t>& facet, std::size_t x) {
        RatMatrix m(k, k);
        for (std::size_t i = 1; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m(i - 1, j) = pts[facet[i]][j] - pts[facet[0]][j];
        for (std::size_t j = 0; j < k; ++j) m(k - 1, j) = pts[x][j] - pts[facet[0]][j];
        return sign(det(m));
    };

    // greedy initial simplex (affinely independent points in lex order)
    std::vector<std::size_t> simplex0;
    std::vector<bool> used(npts, false);
    {
        RatMatrix acc(0, k);
        for (std::size_t i = 0; i < npts && simplex0.size() < k + 1; ++i) {
            if (simplex0.empty()) {
                simplex0.push_back(i);
                used[i] = true;
                continue;
            }
            RatMatrix trial(simplex0.size(), k);
            for (std::size_t a = 1; a < simplex0.size(); ++a)
                for (std::size_t j = 0; j < k; ++j)
                    trial(a - 1, j) = pts[simplex0[a]][j] - pts[simplex0[0]][j];
            for (std::size_t j = 0; j < k; ++j)
                trial(simplex0.size() - 1, j) = pts[i][j] - pts[simplex0[0]][j];
            if (rank(trial) == simplex0.size()) {
                simplex0.push_back(i);
                used[i] = true;
            }
        }
    }
    if (simplex0.size() != k + 1)
        throw DimensionMismatch("volume_full_dim: points are not full-dimensional");

    Rat total = 0;
    auto simplex_volume = [&](const std::vector<std::size_t>& s) {
        RatMatrix m(k, k);
        for (std::size_t i = 1; i <= k; ++i)
            for (std::size_t j = 0; j < k; ++j) m(i - 1, j) = pts[s[i]][j] - pts[s[0]][j];
        Rat d = det(m);
        if (d < 0) d = -d;
        Int f = 1;
        for (std::size_t i = 2; i <= k; ++i) f *= Int(i);
        return d / Rat(f);
    };

    // boundary bookkeeping: facet (sorted vertex tuple) -> opposite vertices
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> facets;
    auto add_simplex = [&](const std::vector<std::size_t>& s) {
        total += simplex_volume(s);
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::vector<std::size_t> f;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) f.push_back(s[i]);
            std::sort(f.begin(), f.end());
            facets[f].push_back(s[drop]);
        }
    };
    add_simplex(simplex0);

    for (std::size_t i = 0; i < npts; ++i) {
        if (used[i]) continue;
        std::vector<std::pair<std::vector<std::size_t>, std::size_t>> visible;
        for (const auto& [f, owners] : facets) {
            if (owners.size() != 1) continue;  // interior facet
            const int side_p = orient(f, i);
            if (side_p == 0) continue;
            const int side_opp = orient(f, owners[0]);
            if (side_p == -side_opp) visible.push_back({f, owners[0]});
        }
        for (const auto& [f, opp] : visible) {
            std::vector<std::size_t> s = f;
            s.push_back(i);
            add_simplex(s);
        }
    }
    return total;
}

/// Coordinates of the points w.r.t. the saturated lattice of their affine
/// hull's direction space; input points must be integral.
inline std::vector<RatVec> lattice_coordinates(const std::vector<RatVec>& pts, std::size_t dim,
                                               std::size_t aff_dim) {
    // direction space V = span(p_i - p_0); V = ker(K) for K = kernel rows
    RatMatrix diffs(pts.size() - 1, dim);
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) diffs(i - 1, j) = pts[i][j] - pts[0][j];
    const RatMatrix kernel = right_kernel(diffs);  // rows orthogonal to V? no: x with diffs*x=0
    // rows of `kernel` span {x : diffs x = 0}; V = row space of diffs = its
    // orthogonal complement, i.e. V = {y : kernel y = 0}
    IntMatrix kint;
    for (std::size_t i = 0; i < kernel.rows(); ++i) kint.push_back(primitive_integer(kernel.row(i)));
    const IntMatrix lat = integer_kernel(kint);  // saturated basis of V cap Z^dim
    if (lat.size() != aff_dim) throw Error("internal: lattice basis dimension mismatch");

    RatMatrix lt(dim, aff_dim);  // columns are lattice basis vectors
    for (std::size_t i = 0; i < aff_dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) lt(j, i) = Rat(lat[i][j]);
    std::vector<RatVec> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        RatVec delta(dim);
        for (std::size_t j = 0; j < dim; ++j) delta[j] = p[j] - pts[0][j];
        auto gamma = solve(lt, delta);
        if (!gamma) throw Error("internal: point outside its own affine hull");
        out.push_back(*gamma);
    }
    return out;
}

} // namespace pt

/// Exact volume: ambient Lebesgue measure, plus the lattice-normalized volume
/// within the affine hull when the polytope is lower-dimensional.
inline VolumeResult volume(const std::vector<RatVec>& points, std::size_t dim) {
    if (points.empty()) throw DomainError("volume of an empty point set");
    for (const auto& p : points)
        if (p.size() != dim) throw DimensionMismatch("volume point dimension");
    auto pts = pt::dedupe_sorted(points);

    VolumeResult res;
    if (dim == 0) {
        res.aff_dim = 0;
        res.ambient = res.relative = 1;
        return res;
    }
    RatMatrix diffs(pts.size() > 1 ? pts.size() - 1 : 0, dim);
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) diffs(i - 1, j) = pts[i][j] - pts[0][j];
    const std::size_t aff = pts.size() > 1 ? rank(diffs) : 0;
    res.aff_dim = static_cast<int>(aff);
    if (aff == 0) {
        res.ambient = 0;
        res.relative = 1;  // a point is one cell of the trivial lattice
        return res;
    }
    if (aff == dim) {
        res.ambient = pt::volume_full_dim(pts, dim);
        res.relative = res.ambient;
        return res;
    }
    res.ambient = 0;
    // scale to integral points, measure against the affine hull's lattice
    Int scale = 1;
    for (const auto& p : pts)
        for (const auto& v : p) scale = lcm(scale, denominator(v));
    std::vector<RatVec> scaled = pts;
    if (scale != 1)
        for (auto& p : scaled)
            for (auto& v : p) v *= Rat(scale);
    const auto coords = pt::lattice_coordinates(scaled, dim, aff);
    Rat vol = pt::volume_full_dim(coords, aff);
    for (std::size_t i = 0; i < aff; ++i) vol /= Rat(scale);
    res.relative = vol;
    return res;
}

inline VolumeResult volume(const Polytope& p) { return volume(p.vertices, p.dim); }

inline Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
    if (a.dim != b.dim) throw DimensionMismatch("Minkowski sum of different dimensions");
    std::vector<RatVec> sums;
    sums.reserve(a.vertices.size() * b.vertices.size());
    for (const auto& u : a.vertices)
        for (const auto& v : b.vertices) {
            RatVec w(a.dim);
            for (std::size_t j = 0; j < a.dim; ++j) w[j] = u[j] + v[j];
            sums.push_back(std::move(w));
        }
    return hull(std::move(sums), a.dim);
}

/// Mixed volume with the Bernshtein (root-count) normalization:
///   MV = sum over nonempty S of (-1)^{n-|S|} vol(sum_{i in S} P_i),
/// so MV(simplex,...,simplex) = 1 and MV(P,...,P) = n! vol(P).
inline Rat mixed_volume(const std::vector<Polytope>& ps) {
    const std::size_t n = ps.size();
    if (n == 0) throw DimensionMismatch("mixed volume needs at least one polytope");
    for (const auto& p : ps) {
        if (p.dim != n)
            throw DimensionMismatch("mixed volume needs n polytopes in dimension n");
        if (p.vertices.empty()) throw DomainError("mixed volume of an empty polytope");
    }
    std::vector<Polytope> sums(std::size_t(1) << n);
    std::vector<Rat> vols(std::size_t(1) << n);
    Rat total = 0;
    for (std::size_t mask = 1; mask < sums.size(); ++mask) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
        const std::size_t rest = mask & (mask - 1);
        sums[mask] = rest == 0 ? ps[low] : minkowski_sum(sums[rest], ps[low]);
        vols[mask] = volume(sums[mask]).ambient;
        const std::size_t bits = static_cast<std::size_t>(std::popcount(mask));
        total += ((n - bits) % 2 == 0) ? vols[mask] : -vols[mask];
    }
    return total;
}

/// Newton polytope of p over the chosen variables (exponents of the others
/// are projected away, i.e. treated as coefficients).
inline Polytope newton_polytope(const SparsePoly& p, const std::vector<Var>& over) {
    if (p.is_zero()) throw ZeroPolynomial("Newton polytope of the zero polynomial");
    return hull(p.support(over), over.size());
}

/// Terms of p whose exponents maximize <w, alpha>; the restriction of p to
/// the w-maximal face of its Newton polytope. Missing weights count as 0.
inline SparsePoly face_restriction(const SparsePoly& p, const std::map<Var, Rat>& w) {
    if (p.is_zero()) return p;
    const auto& vars = p.vars();
    RatVec weights(vars.size(), Rat(0));
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = w.find(vars[i]);
        if (it != w.end()) weights[i] = it->second;
    }
    bool first = true;
    Rat best;
    for (const auto& [e, c] : p.terms()) {
        Rat s = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) s += weights[i] * Rat(e[i]);
        if (first || s > best) {
            best = s;
            first = false;
        }
    }
    SparsePoly out;
    for (const auto& [e, c] : p.terms()) {
        Rat s = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) s += weights[i] * Rat(e[i]);
        if (s == best) {
            SparsePoly mono = SparsePoly::constant(c);
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (e[i] > 0) mono = mono * SparsePoly::variable(vars[i], e[i]);
            out = out + mono;
        }
    }
    return out;
}

struct SignWitness {
    bool has_negative_vertex = false;
    std::vector<Var> variables;        // order of direction / witness entries
    std::vector<Int> direction;        // outer direction of the negative vertex
    std::vector<int> vertex;           // the exponent vector carrying the negative coefficient
    std::vector<double> witness_point; // x with p(x) < 0 (empty when search failed)
    double value = 0;
    bool search_failed = false;
};

/// A negative coefficient at a vertex of New(p) certifies that p takes
/// negative values on the positive orthant; the witness is found by scaling
/// x(t) = (t^{w_1},...,t^{w_n}) along the vertex's separating direction.
inline SignWitness vertex_sign_witness(const SparsePoly& poly) {
    if (poly.is_zero()) throw ZeroPolynomial("sign witness of the zero polynomial");
    const SparsePoly p = poly.compact();
    SignWitness out;
    out.variables = p.vars();
    const std::size_t n = out.variables.size();

    const auto exps = p.support(out.variables);
    const Polytope np = hull(exps, n);

    std::map<std::vector<Rat>, Rat> coef_at;
    for (const auto& [e, c] : p.terms()) {
        RatVec key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = Rat(e[i]);
        coef_at[key] = c;
    }

    RatVec vertex;
    for (const auto& v : np.vertices) {  // canonical (lexicographic) order
        auto it = coef_at.find(v);
        if (it != coef_at.end() && it->second < 0) {
            vertex = v;
            break;
        }
    }
    if (vertex.empty() && !(n == 0)) {
        out.has_negative_vertex = false;
        return out;
    }
    if (n == 0) {  // constant polynomial
        out.has_negative_vertex = p.constant_value() < 0;
        if (out.has_negative_vertex) {
            out.vertex = {};
            out.witness_point = {};
            out.value = to_double(p.constant_value());
        }
        return out;
    }

    out.has_negative_vertex = true;
    out.vertex.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.vertex[i] = crn::numerator(vertex[i]).convert_to<int>();

    // separating direction: <w, vertex - beta> >= 1 for all other exponents
    std::vector<RatVec> others;
    for (const auto& e : exps)
        if (e != vertex) others.push_back(e);
    if (others.empty()) {
        out.direction.assign(n, Int(0));  // single-term polynomial: any direction
    } else {
        RatMatrix a(others.size(), n + others.size());
        RatVec b(others.size());
        for (std::size_t row = 0; row < others.size(); ++row) {
            for (std::size_t j = 0; j < n; ++j) a(row, j) = vertex[j] - others[row][j];
            a(row, n + row) = -1;  // slack
            b[row] = 1;
        }
        std::vector<std::size_t> nonneg(others.size());
        for (std::size_t i = 0; i < others.size(); ++i) nonneg[i] = n + i;
        const LpResult lp = lp_feasible(a, b, nonneg);
        if (!lp.feasible) throw Error("internal: no separating direction for a hull vertex");
        RatVec w(lp.witness.begin(), lp.witness.begin() + n);
        out.direction = primitive_integer(w);
        bool all_zero = true;
        for (const auto& v : out.direction) all_zero = all_zero && v == 0;
        if (all_zero) out.direction.assign(n, Int(0));
    }

    // doubling search on t = 2^k, capped at t = 2^60
    for (long long k : {1LL, 2LL, 4LL, 8LL, 16LL, 32LL, 60LL}) {
        Rat val = 0;
        for (const auto& [e, c] : p.terms()) {
            Int dot = 0;
            for (std::size_t i = 0; i < n; ++i) dot += out.direction[i] * e[i];
            const Int shift = k * dot;
            Rat term(c);
            if (shift >= 0)
                term *= Rat(Int(1) << static_cast<unsigned>(shift.convert_to<long long>()));
            else
                term /= Rat(Int(1) << static_cast<unsigned>((-shift).convert_to<long long>()));
            val += term;
        }
        if (val < 0) {
            out.witness_point.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                out.witness_point[i] =
                    std::pow(2.0, static_cast<double>(k) * out.direction[i].convert_to<double>());
            out.value = to_double(val);
            return out;
        }
    }
    out.search_failed = true;
    return out;
}

// ---------------------------------------------------------------------------
// Mixed-volume pipelines for steady-state counting bounds
// ---------------------------------------------------------------------------

struct MixedVolumeReport {
    Rat value;
    std::vector<Polytope> polytopes;        // the Newton polytopes fed to MV
    std::vector<std::size_t> nprime_rows;   // aug: which ODE rows were kept
    std::vector<std::string> free_species;  // ssp: remaining variables
};

/// augMV: mixed volume of the Newton polytopes of the augmented steady-state
/// system — the ODE right-hand sides with linearly redundant rows replaced by
/// the conservation laws Zx - c (generic total amounts keep the constant
/// term). Supports are taken structurally with symbolic rates.
inline MixedVolumeReport aug_mv_report(const Network& net) {
    MixedVolumeReport rep;
    const RatMatrix nrat = to_rat(stoichiometric_matrix(net));
    rep.nprime_rows = full_rank_rows(nrat);
    const RatMatrix z = left_kernel(nrat);
    const std::size_t n = net.n();
    if (rep.nprime_rows.size() + z.rows() != n)
        throw Error("internal: rank + corank mismatch");

    std::vector<Var> sv;
    for (std::size_t i = 0; i < n; ++i) sv.push_back(species_var(net, i));

    const auto f = mass_action_polynomials(net);
    for (std::size_t row : rep.nprime_rows) {
        if (f[row].is_zero()) throw EliminationFailed("structurally zero ODE row");
        rep.polytopes.push_back(newton_polytope(f[row], sv));
    }
    for (std::size_t kk = 0; kk < z.rows(); ++kk) {
        SparsePoly g = -SparsePoly::variable(param_var("_c" + std::to_string(kk + 1)));
        for (std::size_t i = 0; i < n; ++i)
            if (z(kk, i) != 0) g = g + z(kk, i) * SparsePoly::variable(sv[i]);
        rep.polytopes.push_back(newton_polytope(g, sv));
    }
    rep.value = mixed_volume(rep.polytopes);
    return rep;
}

inline Rat aug_mv(const Network& net) { return aug_mv_report(net).value; }

/// sspMV: substitute a steady-state parametrization into the conservation
/// laws, clear denominators, and take the mixed volume of the resulting
/// Newton polytopes over the free variables.
inline MixedVolumeReport ssp_mv_report(const Network& net,
                                       const std::vector<std::string>& eliminate) {
    MixedVolumeReport rep;
    const Parametrization par = eliminate_linear(net, eliminate);
    const RatMatrix z = left_kernel(to_rat(stoichiometric_matrix(net)));
    const std::size_t d = z.rows();
    if (par.free_vars.size() != d)
        throw DimensionMismatch("sspMV needs #free variables (" +
                                std::to_string(par.free_vars.size()) +
                                ") equal to #conservation laws (" + std::to_string(d) + ")");
    if (d == 0) throw DimensionMismatch("network has no conservation laws");
    for (const auto& v : par.free_vars) rep.free_species.push_back(v.name);

    for (std::size_t kk = 0; kk < d; ++kk) {
        PolyFraction total;
        for (std::size_t i = 0; i < net.n(); ++i) {
            if (z(kk, i) == 0) continue;
            const Var v = species_var(net, i);
            auto it = par.exprs.find(v);
            const PolyFraction term =
                it != par.exprs.end() ? it->second : PolyFraction(SparsePoly::variable(v));
            total = total + PolyFraction::constant(z(kk, i)) * term;
        }
        const SparsePoly cvar = SparsePoly::variable(param_var("_c" + std::to_string(kk + 1)));
        const SparsePoly cleared = total.num() - cvar * total.den();
        if (cleared.is_zero()) throw EliminationFailed("conservation law collapsed to zero");
        rep.polytopes.push_back(newton_polytope(cleared, par.free_vars));
    }
    rep.value = mixed_volume(rep.polytopes);
    return rep;
}

inline Rat ssp_mv(const Network& net, const std::vector<std::string>& eliminate) {
    return ssp_mv_report(net, eliminate).value;
}

} // namespace crn
