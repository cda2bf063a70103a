#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "crn/errors.hpp"
#include "crn/rational.hpp"

namespace crn {

/// Dense matrix over exact rationals. All elimination routines are exact; no
/// floating point anywhere in this header.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rat>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
            for (const auto& v : row) a_.push_back(v);
        }
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
        RatMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& v = (*this)(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += v * o(k, j);
            }
        return p;
    }

    RatVec operator*(const RatVec& x) const {
        if (cols_ != x.size()) throw DimensionMismatch("matrix-vector shape");
        RatVec y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const Rat& v) { return v == 0; });
    }

    std::vector<Rat> row(std::size_t i) const {
        return std::vector<Rat>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> a_;
};

struct Echelon {
    RatMatrix mat;               // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
    std::size_t rank = 0;
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
inline Echelon rref(RatMatrix m) {
    Echelon e;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const Rat piv = m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) /= piv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        e.pivots.push_back(c);
        ++r;
    }
    e.rank = r;
    e.mat = std::move(m);
    return e;
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).rank; }

/// Basis of {x : A x = 0}, one vector per row, in reduced echelon form.
inline RatMatrix right_kernel(const RatMatrix& a) {
    Echelon e = rref(a);
    const std::size_t n = a.cols();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : e.pivots) is_pivot[c] = true;
    RatMatrix k(n - e.rank, n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        k(row, c) = 1;
        for (std::size_t i = 0; i < e.rank; ++i) k(row, e.pivots[i]) = -e.mat(i, c);
        ++row;
    }
    // already in reduced echelon form after sorting rows by pivot position
    return rref(std::move(k)).mat;
}

/// Basis of {v : v A = 0}, one vector per row, in reduced echelon form.
inline RatMatrix left_kernel(const RatMatrix& a) { return right_kernel(a.transpose()); }

inline Rat det(RatMatrix m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
    const std::size_t n = m.rows();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return Rat(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        const Rat piv = m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const Rat f = m(i, c) / piv;
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/// Any exact solution of A x = b, or nullopt when inconsistent.
inline std::optional<RatVec> solve(const RatMatrix& a, const RatVec& b) {
    if (a.rows() != b.size()) throw DimensionMismatch("solve shape");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    Echelon e = rref(std::move(aug));
    for (std::size_t i = 0; i < e.rank; ++i)
        if (e.pivots[i] == a.cols()) return std::nullopt;  // row 0 = 1
    RatVec x(a.cols());
    for (std::size_t i = 0; i < e.rank; ++i) x[e.pivots[i]] = e.mat(i, a.cols());
    return x;
}

// ---------------------------------------------------------------------------
// Integer lattice routines (Hermite normal form, saturated kernels)
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<Int>>;

inline IntMatrix int_identity(std::size_t n) {
    IntMatrix u(n, std::vector<Int>(n));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
    return u;
}

inline RatMatrix to_rat(const IntMatrix& a) {
    RatMatrix m(a.size(), a.empty() ? 0 : a[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) m(i, j) = Rat(a[i][j]);
    return m;
}

struct ColumnHnf {
    IntMatrix h;  // column-style HNF of the input, non-negative pivots
    IntMatrix u;  // unimodular with A * U = H
    std::size_t rank = 0;
};

/// Column-style Hermite normal form with non-negative pivot convention.
/// Columns of U beyond `rank` span ker(A) over Z (a saturated lattice basis).
inline ColumnHnf hnf_column(const IntMatrix& a) {
    const std::size_t g = a.size();
    const std::size_t m = g ? a[0].size() : 0;
    ColumnHnf res;
    res.h = a;
    res.u = int_identity(m);
    auto& h = res.h;
    auto& u = res.u;

    auto colop = [&](std::size_t j, std::size_t k, const Int& x, const Int& y, const Int& z,
                     const Int& w) {
        // (col_j, col_k) <- (x*col_j + y*col_k, z*col_j + w*col_k)
        for (std::size_t i = 0; i < g; ++i) {
            Int nj = x * h[i][j] + y * h[i][k];
            Int nk = z * h[i][j] + w * h[i][k];
            h[i][j] = nj;
            h[i][k] = nk;
        }
        for (std::size_t i = 0; i < m; ++i) {
            Int nj = x * u[i][j] + y * u[i][k];
            Int nk = z * u[i][j] + w * u[i][k];
            u[i][j] = nj;
            u[i][k] = nk;
        }
    };

    std::size_t c = 0;
    for (std::size_t r = 0; r < g && c < m; ++r) {
        // clear row r to a single non-negative pivot at column c
        std::size_t nz = c;
        while (nz < m && h[r][nz] == 0) ++nz;
        if (nz == m) continue;
        if (nz != c) colop(c, nz, 0, 1, 1, 0);  // swap
        for (std::size_t j = c + 1; j < m; ++j) {
            if (h[r][j] == 0) continue;
            Int aa = h[r][c], bb = h[r][j];
            // extended gcd
            Int x0 = 1, y0 = 0, x1 = 0, y1 = 1, q;
            Int r0 = aa, r1 = bb;
            while (r1 != 0) {
                q = r0 / r1;
                Int t = r0 - q * r1; r0 = r1; r1 = t;
                t = x0 - q * x1; x0 = x1; x1 = t;
                t = y0 - q * y1; y0 = y1; y1 = t;
            }
            const Int gdd = r0;  // = x0*aa + y0*bb
            colop(c, j, x0, y0, -bb / gdd, aa / gdd);
        }
        if (h[r][c] < 0) {
            for (std::size_t i = 0; i < g; ++i) h[i][c] = -h[i][c];
            for (std::size_t i = 0; i < m; ++i) u[i][c] = -u[i][c];
        }
        // reduce earlier columns of this row into [0, pivot)
        for (std::size_t j = 0; j < c; ++j) {
            if (h[r][j] == 0) continue;
            Int q = h[r][j] / h[r][c];
            if (h[r][j] - q * h[r][c] < 0) q -= 1;  // floor division
            if (q == 0) continue;
            for (std::size_t i = 0; i < g; ++i) h[i][j] -= q * h[i][c];
            for (std::size_t i = 0; i < m; ++i) u[i][j] -= q * u[i][c];
        }
        ++c;
    }
    res.rank = c;
    return res;
}

/// Row-style HNF used to canonicalize lattice bases (non-negative pivots,
/// entries above each pivot reduced into [0, pivot)).
inline IntMatrix hnf_row_canonical(IntMatrix a) {
    const std::size_t g = a.size();
    if (g == 0) return a;
    const std::size_t m = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < g; ++c) {
        std::size_t nz = r;
        while (nz < g && a[nz][c] == 0) ++nz;
        if (nz == g) continue;
        std::swap(a[r], a[nz]);
        for (std::size_t i = r + 1; i < g; ++i) {
            while (a[i][c] != 0) {
                Int q = a[r][c] / a[i][c];
                for (std::size_t j = 0; j < m; ++j) a[r][j] -= q * a[i][j];
                std::swap(a[r], a[i]);
            }
        }
        if (a[r][c] < 0)
            for (std::size_t j = 0; j < m; ++j) a[r][j] = -a[r][j];
        for (std::size_t i = 0; i < r; ++i) {
            Int q = a[i][c] / a[r][c];
            if (a[i][c] - q * a[r][c] < 0) q -= 1;
            if (q == 0) continue;
            for (std::size_t j = 0; j < m; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

/// Saturated basis of ker(A) ∩ Z^cols, canonicalized by row HNF. Every integer
/// kernel vector is an integer combination of the returned rows.
inline IntMatrix integer_kernel(const IntMatrix& a) {
    if (a.empty()) return {};
    ColumnHnf c = hnf_column(a);
    const std::size_t m = a[0].size();
    IntMatrix basis;
    for (std::size_t j = c.rank; j < m; ++j) {
        std::vector<Int> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = c.u[i][j];
        basis.push_back(std::move(v));
    }
    return hnf_row_canonical(std::move(basis));
}

/// Scales a rational vector to a primitive integer vector (gcd 1), preserving
/// direction; the first nonzero entry's sign is preserved.
inline std::vector<Int> primitive_integer(const RatVec& v) {
    Int l = 1;
    for (const Rat& x : v) l = lcm(l, denominator(x));
    std::vector<Int> w(v.size());
    Int g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = numerator(v[i]) * (l / denominator(v[i]));
        g = gcd(g, w[i]);
    }
    if (g > 1)
        for (auto& x : w) x /= g;
    return w;
}

} // namespace crn
