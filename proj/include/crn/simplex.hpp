#pragma once

#include <cstddef>
#include <vector>

#include "crn/matrix.hpp"
#include "crn/rational.hpp"

namespace crn {

struct LpResult {
    bool feasible = false;
    RatVec witness;  // satisfies every constraint exactly when feasible
};

/// Exact feasibility of
///     A x = b,
///     x_i >= 0 for i in nonneg_vars (others free),
///     sum_{i in unit_sum_vars} x_i = 1 (row added only when the set is nonempty),
/// decided by an exact rational phase-one simplex with Bland's anti-cycling
/// rule. Returns a witness on success.
inline LpResult lp_feasible(const RatMatrix& a, const RatVec& b,
                            const std::vector<std::size_t>& nonneg_vars,
                            const std::vector<std::size_t>& unit_sum_vars = {}) {
    if (a.rows() != b.size()) throw DimensionMismatch("lp_feasible shape");
    const std::size_t nvars = a.cols();

    std::vector<bool> nonneg(nvars, false);
    for (std::size_t i : nonneg_vars) nonneg[i] = true;

    // Column layout: one column per sign-constrained variable, two (plus/minus)
    // per free variable.
    std::vector<std::size_t> col_of(nvars), neg_col_of(nvars, static_cast<std::size_t>(-1));
    std::size_t ncols = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
        col_of[i] = ncols++;
        if (!nonneg[i]) neg_col_of[i] = ncols++;
    }

    const std::size_t extra = unit_sum_vars.empty() ? 0 : 1;
    const std::size_t m = a.rows() + extra;

    // tableau: m rows of [columns | artificial block | rhs]
    const std::size_t width = ncols + m + 1;
    std::vector<RatVec> t(m, RatVec(width));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < nvars; ++j) {
            t[i][col_of[j]] = a(i, j);
            if (neg_col_of[j] != static_cast<std::size_t>(-1)) t[i][neg_col_of[j]] = -a(i, j);
        }
        t[i][width - 1] = b[i];
    }
    if (extra) {
        for (std::size_t j : unit_sum_vars) {
            t[m - 1][col_of[j]] = 1;
            if (neg_col_of[j] != static_cast<std::size_t>(-1)) t[m - 1][neg_col_of[j]] = -1;
        }
        t[m - 1][width - 1] = 1;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (t[i][width - 1] < 0)
            for (auto& v : t[i]) v = -v;
        t[i][ncols + i] = 1;
    }

    // objective: minimize sum of artificials; reduced-cost row z = -sum of rows
    RatVec z(width);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < width; ++j) z[j] -= t[i][j];
    for (std::size_t i = 0; i < m; ++i) z[ncols + i] = 0;

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = ncols + i;

    const std::size_t total_cols = ncols + m;
    for (;;) {
        // Bland: entering = lowest-index column with negative reduced cost
        std::size_t enter = total_cols;
        for (std::size_t j = 0; j < total_cols; ++j)
            if (z[j] < 0) { enter = j; break; }
        if (enter == total_cols) break;

        std::size_t leave = m;
        Rat best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= 0) continue;
            Rat ratio = t[i][width - 1] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m)
            throw Error("internal: phase-one simplex claims unbounded objective");

        const Rat piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rat f = t[i][enter];
            for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
        }
        if (z[enter] != 0) {
            const Rat f = z[enter];
            for (std::size_t j = 0; j < width; ++j) z[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    Rat objective = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= ncols) objective += t[i][width - 1];

    LpResult res;
    if (objective != 0) return res;
    res.feasible = true;
    RatVec cols(total_cols);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < total_cols) cols[basis[i]] = t[i][width - 1];
    res.witness.assign(nvars, Rat(0));
    for (std::size_t i = 0; i < nvars; ++i) {
        res.witness[i] = cols[col_of[i]];
        if (neg_col_of[i] != static_cast<std::size_t>(-1)) res.witness[i] -= cols[neg_col_of[i]];
    }
    return res;
}

/// Membership of a point in the convex hull of a point set, via exact LP.
inline bool in_convex_hull(const RatVec& p, const std::vector<RatVec>& points) {
    if (points.empty()) return false;
    const std::size_t d = p.size();
    RatMatrix a(d + 1, points.size());
    RatVec b(d + 1);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j].size() != d) throw DimensionMismatch("in_convex_hull point dim");
        for (std::size_t i = 0; i < d; ++i) a(i, j) = points[j][i];
        a(d, j) = 1;
    }
    for (std::size_t i = 0; i < d; ++i) b[i] = p[i];
    b[d] = 1;
    std::vector<std::size_t> nn(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) nn[j] = j;
    return lp_feasible(a, b, nn).feasible;
}

} // namespace crn
