#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crn/errors.hpp"
#include "crn/matrix.hpp"
#include "crn/network.hpp"
#include "crn/rational.hpp"

namespace crn {

/// Mass-action exponent matrix B (n x r): column j is the source complex of
/// reaction j.
inline IntMatrix exponent_matrix(const Network& net) {
    IntMatrix b(net.n(), std::vector<Int>(net.r()));
    for (std::size_t j = 0; j < net.r(); ++j)
        for (std::size_t i = 0; i < net.n(); ++i)
            b[i][j] = net.complexes[net.reactions[j].source][i];
    return b;
}

struct InjectivityVerdict {
    enum class Status { Injective, NotInjective, DegenerateZeroDeterminant };
    Status status = Status::DegenerateZeroDeterminant;
    // (reaction subset T, species subset S) -> nonzero coefficient of
    // kappa^T lambda^S in det M(kappa, lambda)
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, Int> coefficients;
    std::size_t positive_count = 0, negative_count = 0;
    std::vector<std::size_t> nprime_rows;  // rows of N kept for N'
    IntMatrix z;                           // conservation rows used (integer-scaled)
    std::size_t s = 0, d = 0;
};

namespace detail {

inline Int int_det(IntMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return Int(1);
    // fraction-free Bareiss
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return Int(0);
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

inline void subsets(std::size_t n, std::size_t k,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
        if (pos == k) {
            fn(idx);
            return;
        }
        for (std::size_t j = from; j + (k - pos) <= n; ++j) {
            idx[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
}

} // namespace detail

/// Conservation rows scaled to primitive integer vectors (safe for integer
/// minors; the scaling changes det M by a nonzero constant, so the verdict is
/// unaffected).
inline IntMatrix integer_conservation_rows(const RatMatrix& basis) {
    IntMatrix z;
    for (std::size_t i = 0; i < basis.rows(); ++i) z.push_back(primitive_integer(basis.row(i)));
    return z;
}

/// Injectivity criterion: expand
///   det M(kappa,lambda), with M = [ N' diag(kappa) B^T diag(lambda) ; Z ],
/// exactly over subsets: det M = sum over species subsets S (|S| = s) and
/// reaction subsets T (|T| = s) of
///   eps(S) * det(N'_{.,T}) * det(B_{S,T}) * det(Z_{.,S-complement}) * kappa^T lambda^S.
/// The network is injective iff all retained coefficients share one sign.
inline InjectivityVerdict injectivity_with(const Network& net,
                                           const std::vector<std::size_t>& nprime_rows,
                                           const IntMatrix& z) {
    const IntMatrix nmat = stoichiometric_matrix(net);
    const IntMatrix b = exponent_matrix(net);
    const std::size_t n = net.n(), r = net.r();
    const std::size_t s = nprime_rows.size();
    const std::size_t d = z.size();
    if (s + d != n) throw DimensionMismatch("N' rows plus conservation rows must equal n");

    InjectivityVerdict out;
    out.nprime_rows = nprime_rows;
    out.z = z;
    out.s = s;
    out.d = d;

    if (s > r) {
        out.status = InjectivityVerdict::Status::DegenerateZeroDeterminant;
        return out;
    }

    double terms = 1;
    for (std::size_t i = 0; i < s; ++i)
        terms *= static_cast<double>(n - i) / static_cast<double>(i + 1) *
                 static_cast<double>(r - i) / static_cast<double>(i + 1);
    if (terms > 1e7) throw TermCapExceeded("injectivity expansion exceeds 10^7 terms");

    detail::subsets(n, s, [&](const std::vector<std::size_t>& species) {
        // Laplace sign for taking columns `species` in the first s rows
        std::size_t colsum = 0;
        for (std::size_t j : species) colsum += j + 1;
        const bool neg = ((s * (s + 1)) / 2 + colsum) % 2 != 0;

        std::vector<std::size_t> comp;
        for (std::size_t j = 0; j < n; ++j)
            if (!std::binary_search(species.begin(), species.end(), j)) comp.push_back(j);
        IntMatrix zsub(d, std::vector<Int>(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k) zsub[i][k] = z[i][comp[k]];
        const Int zdet = detail::int_det(zsub);
        if (zdet == 0) return;

        detail::subsets(r, s, [&](const std::vector<std::size_t>& t) {
            IntMatrix np(s, std::vector<Int>(s)), bs(s, std::vector<Int>(s));
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t k = 0; k < s; ++k) {
                    np[i][k] = nmat[nprime_rows[i]][t[k]];
                    bs[i][k] = b[species[i]][t[k]];
                }
            Int coef = detail::int_det(np);
            if (coef == 0) return;
            coef *= detail::int_det(bs);
            if (coef == 0) return;
            coef *= zdet;
            if (neg) coef = -coef;
            out.coefficients[{t, species}] += coef;
        });
    });

    for (auto it = out.coefficients.begin(); it != out.coefficients.end();) {
        if (it->second == 0) {
            it = out.coefficients.erase(it);
            continue;
        }
        if (it->second > 0)
            ++out.positive_count;
        else
            ++out.negative_count;
        ++it;
    }
    if (out.coefficients.empty())
        out.status = InjectivityVerdict::Status::DegenerateZeroDeterminant;
    else if (out.positive_count == 0 || out.negative_count == 0)
        out.status = InjectivityVerdict::Status::Injective;
    else
        out.status = InjectivityVerdict::Status::NotInjective;
    return out;
}

inline InjectivityVerdict injectivity(const Network& net) {
    const RatMatrix nrat = to_rat(stoichiometric_matrix(net));
    return injectivity_with(net, full_rank_rows(nrat), integer_conservation_rows(left_kernel(nrat)));
}

/// Numeric assembly of M(kappa,lambda) at exact rational values (the oracle
/// route: its determinant must equal the evaluated expansion).
inline RatMatrix injectivity_matrix(const Network& net, const std::vector<std::size_t>& nprime_rows,
                                    const IntMatrix& z, const RatVec& kappa, const RatVec& lambda) {
    const IntMatrix nmat = stoichiometric_matrix(net);
    const IntMatrix b = exponent_matrix(net);
    const std::size_t n = net.n(), r = net.r();
    const std::size_t s = nprime_rows.size(), d = z.size();
    if (kappa.size() != r || lambda.size() != n) throw DimensionMismatch("sample lengths");
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat t = 0;
            for (std::size_t k = 0; k < r; ++k)
                t += Rat(nmat[nprime_rows[i]][k]) * kappa[k] * Rat(b[j][k]) * lambda[j];
            m(i, j) = t;
        }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j) m(s + i, j) = Rat(z[i][j]);
    return m;
}

/// Exact evaluation of the expansion at rational (kappa, lambda).
inline Rat evaluate_expansion(const InjectivityVerdict& v, const RatVec& kappa,
                              const RatVec& lambda) {
    Rat total = 0;
    for (const auto& [key, coef] : v.coefficients) {
        Rat t(coef);
        for (std::size_t j : key.first) t *= kappa[j];
        for (std::size_t i : key.second) t *= lambda[i];
        total += t;
    }
    return total;
}

} // namespace crn
