#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crn/errors.hpp"
#include "crn/massaction.hpp"
#include "crn/matrix.hpp"
#include "crn/network.hpp"
#include "crn/poly.hpp"
#include "crn/rational.hpp"

namespace crn {

/// Symbolic A_kappa = C_G K_kappa (m x m): entry (j,l) collects the rate
/// constants of reactions l -> j, minus the total outflow of l on the
/// diagonal. Column sums are identically zero.
inline PolyMatrix laplacian(const Network& net) {
    PolyMatrix a(net.m(), std::vector<SparsePoly>(net.m()));
    for (std::size_t j = 0; j < net.r(); ++j) {
        const SparsePoly k = SparsePoly::variable(rate_var(net, j));
        const auto& rx = net.reactions[j];
        a[rx.target][rx.source] = a[rx.target][rx.source] + k;
        a[rx.source][rx.source] = a[rx.source][rx.source] - k;
    }
    return a;
}

inline RatMatrix laplacian_numeric(const Network& net, const RatVec& rates) {
    RatMatrix a(net.m(), net.m());
    for (std::size_t j = 0; j < net.r(); ++j) {
        const auto& rx = net.reactions[j];
        a(rx.target, rx.source) += rates[j];
        a(rx.source, rx.source) -= rates[j];
    }
    return a;
}

struct ToricLabels {
    std::vector<SparsePoly> k;  // one label polynomial per complex
    bool weakly_reversible = true;
};

namespace detail {

/// Sum over spanning trees of the component directed toward `root` of the
/// products of edge rate labels.
inline SparsePoly tree_label_by_enumeration(const Network& net,
                                            const std::vector<std::size_t>& component,
                                            std::size_t root) {
    std::vector<std::size_t> nodes;  // non-root complexes of the component
    for (std::size_t c : component)
        if (c != root) nodes.push_back(c);
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> out_edges;
    for (std::size_t j = 0; j < net.r(); ++j) {
        const auto& rx = net.reactions[j];
        if (std::find(component.begin(), component.end(), rx.source) == component.end()) continue;
        out_edges[rx.source].push_back({rx.target, j});
    }

    SparsePoly total;
    std::map<std::size_t, std::size_t> choice;  // node -> chosen target
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == nodes.size()) {
            SparsePoly prod = SparsePoly::constant(1);
            for (std::size_t u : nodes) {
                for (const auto& [tgt, j] : out_edges[u])
                    if (tgt == choice[u]) {
                        prod = prod * SparsePoly::variable(rate_var(net, j));
                        break;
                    }
            }
            total = total + prod;
            return;
        }
        const std::size_t u = nodes[pos];
        for (const auto& [tgt, j] : out_edges[u]) {
            // reject choices that close a cycle: follow chosen pointers from tgt
            std::size_t w = tgt;
            bool cycle = false;
            while (w != root) {
                if (w == u) { cycle = true; break; }
                auto it = choice.find(w);
                if (it == choice.end()) break;  // dangling; later choices decide
                w = it->second;
            }
            if (cycle) continue;
            choice[u] = tgt;
            rec(pos + 1);
            choice.erase(u);
        }
    };
    rec(0);
    return total;
}

/// Cross-check route: K_i as the signed minor of the component Laplacian with
/// row/column i removed.
inline SparsePoly tree_label_by_minor(const PolyMatrix& a_kappa,
                                      const std::vector<std::size_t>& component,
                                      std::size_t root) {
    std::vector<std::size_t> keep;
    for (std::size_t c : component)
        if (c != root) keep.push_back(c);
    PolyMatrix minor(keep.size(), std::vector<SparsePoly>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) minor[i][j] = a_kappa[keep[i]][keep[j]];
    SparsePoly d = det_bareiss(minor);
    return (component.size() - 1) % 2 == 1 ? -d : d;
}

} // namespace detail

/// Matrix-Tree labels K_i, one per complex: spanning-tree enumeration
/// cross-checked against the signed Laplacian minors; all coefficients are
/// verified positive. Warns (flag) when the network is not weakly reversible.
inline ToricLabels tree_labels(const Network& net) {
    ToricLabels out;
    out.weakly_reversible = weakly_reversible(net);
    out.k.resize(net.m());
    const PolyMatrix a = laplacian(net);
    for (const auto& component : linkage_classes(net)) {
        for (std::size_t root : component) {
            SparsePoly by_trees = detail::tree_label_by_enumeration(net, component, root);
            const SparsePoly by_minor = detail::tree_label_by_minor(a, component, root);
            if (!(by_trees == by_minor))
                throw Error("internal: spanning-tree and minor computations of K disagree");
            if (out.weakly_reversible)
                for (const auto& [e, c] : by_trees.terms())
                    if (c <= 0) throw Error("internal: non-positive coefficient in K label");
            out.k[root] = std::move(by_trees);
        }
    }
    return out;
}

struct BinomialCondition {
    std::vector<Int> u;            // kernel vector (permuted complex order)
    std::vector<int> lhs_complexes, rhs_complexes;  // exponents per complex (original order)
    std::string lhs, rhs;          // monomials in K_1..K_m
    SparsePoly lhs_kappa, rhs_kappa;  // expanded in kappa, common factors cancelled
};

struct ToricReport {
    IntMatrix cayley;                    // (n + l) x m
    std::vector<std::size_t> complex_order;  // permutation: position -> complex index
    IntMatrix kernel;                    // saturated integer kernel, canonical rows
    std::vector<BinomialCondition> conditions;
    long long deficiency = 0;
    ToricLabels labels;
};

/// Cayley matrix and the binomial conditions K^{u+} = K^{u-} for the rate
/// constants that admit complex-balanced steady states. The number of
/// independent conditions equals the deficiency for weakly reversible
/// networks.
inline ToricReport cayley_conditions(const Network& net) {
    ToricReport rep;
    const auto classes = linkage_classes(net);
    for (const auto& cls : classes)
        for (std::size_t c : cls) rep.complex_order.push_back(c);

    const std::size_t n = net.n(), m = net.m(), ell = classes.size();
    rep.cayley.assign(n + ell, std::vector<Int>(m));
    std::size_t col = 0;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        for (std::size_t c : classes[ci]) {
            for (std::size_t i = 0; i < n; ++i) rep.cayley[i][col] = net.complexes[c][i];
            rep.cayley[n + ci][col] = 1;
            ++col;
        }
    }
    rep.kernel = integer_kernel(rep.cayley);
    rep.deficiency = structure(net).deficiency;
    rep.labels = tree_labels(net);

    for (const auto& u : rep.kernel) {
        BinomialCondition cond;
        cond.u = u;
        cond.lhs_complexes.assign(m, 0);
        cond.rhs_complexes.assign(m, 0);
        SparsePoly lk = SparsePoly::constant(1), rk = SparsePoly::constant(1);
        for (std::size_t pos = 0; pos < m; ++pos) {
            const std::size_t c = rep.complex_order[pos];
            if (u[pos] > 0) {
                cond.lhs_complexes[c] = static_cast<int>(u[pos].convert_to<long long>());
                lk = lk * rep.labels.k[c].pow(static_cast<unsigned>(cond.lhs_complexes[c]));
            } else if (u[pos] < 0) {
                cond.rhs_complexes[c] = static_cast<int>((-u[pos]).convert_to<long long>());
                rk = rk * rep.labels.k[c].pow(static_cast<unsigned>(cond.rhs_complexes[c]));
            }
        }
        auto monomial_str = [&](const std::vector<int>& exps) {
            std::string s;
            for (std::size_t c = 0; c < exps.size(); ++c) {
                if (exps[c] == 0) continue;
                if (!s.empty()) s += "*";
                s += "K" + std::to_string(c + 1);
                if (exps[c] > 1) s += "^" + std::to_string(exps[c]);
            }
            return s.empty() ? std::string("1") : s;
        };
        cond.lhs = monomial_str(cond.lhs_complexes);
        cond.rhs = monomial_str(cond.rhs_complexes);
        // cancel shared monomial and content between the two kappa expansions
        const PolyFraction reduced(lk, rk);
        cond.lhs_kappa = reduced.num();
        cond.rhs_kappa = reduced.den();
        rep.conditions.push_back(std::move(cond));
    }
    return rep;
}

struct ComplexBalanceVerdict {
    enum class Status { AlwaysByDeficiencyZero, Yes, No } status = Status::No;
    std::string reason;           // set when status == No
    int failing_condition = -1;   // index into the report's conditions
};

inline ComplexBalanceVerdict is_complex_balanced(const Network& net, const RatVec& rates,
                                                 const ToricReport* precomputed = nullptr) {
    for (const Rat& k : rates)
        if (k <= 0) throw NonpositiveRate("rates must be positive");
    ComplexBalanceVerdict v;
    if (!weakly_reversible(net)) {
        v.status = ComplexBalanceVerdict::Status::No;
        v.reason = "network is not weakly reversible";
        return v;
    }
    ToricReport local;
    const ToricReport& rep = precomputed ? *precomputed : (local = cayley_conditions(net));
    if (rep.deficiency == 0) {
        v.status = ComplexBalanceVerdict::Status::AlwaysByDeficiencyZero;
        return v;
    }
    const auto kv = rate_values(net, rates);
    for (std::size_t i = 0; i < rep.conditions.size(); ++i) {
        const auto& c = rep.conditions[i];
        if (c.lhs_kappa.eval(kv) != c.rhs_kappa.eval(kv)) {
            v.status = ComplexBalanceVerdict::Status::No;
            v.reason = c.lhs + " != " + c.rhs;
            v.failing_condition = static_cast<int>(i);
            return v;
        }
    }
    v.status = ComplexBalanceVerdict::Status::Yes;
    return v;
}

namespace detail {

/// Least-norm solution of a consistent linear system by row-wise
/// Gram-Schmidt; rows that are numerically dependent are dropped.
inline std::vector<double> least_norm_solution(const std::vector<std::vector<double>>& a,
                                               const std::vector<double>& b) {
    const std::size_t n = a.empty() ? 0 : a[0].size();
    std::vector<std::vector<double>> q;
    std::vector<double> beta;
    double scale = 1e-300;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<double> w = a[i];
        double rhs = b[i];
        for (std::size_t k = 0; k < q.size(); ++k) {
            double dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += w[j] * q[k][j];
            for (std::size_t j = 0; j < n; ++j) w[j] -= dot * q[k][j];
            rhs -= dot * beta[k];
        }
        double norm = 0;
        for (double v : w) norm += v * v;
        norm = std::sqrt(norm);
        if (norm <= 1e-12 * scale) continue;  // dependent row; consistency already certified
        for (double& v : w) v /= norm;
        q.push_back(std::move(w));
        beta.push_back(rhs / norm);
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k)
        for (std::size_t j = 0; j < n; ++j) x[j] += beta[k] * q[k][j];
    return x;
}

} // namespace detail

/// Residual of A_kappa x^Y = 0 relative to the total flux through complexes.
inline double complex_balance_residual(const Network& net, const RatVec& rates,
                                       const std::vector<double>& x) {
    std::vector<double> xy(net.m());
    for (std::size_t c = 0; c < net.m(); ++c) {
        double t = 1;
        for (std::size_t i = 0; i < net.n(); ++i)
            for (long long e = 0; e < net.complexes[c][i]; ++e) t *= x[i];
        xy[c] = t;
    }
    std::vector<double> resid(net.m(), 0.0), flow(net.m(), 0.0);
    for (std::size_t j = 0; j < net.r(); ++j) {
        const auto& rx = net.reactions[j];
        const double f = to_double(rates[j]) * xy[rx.source];
        resid[rx.target] += f;
        resid[rx.source] -= f;
        flow[rx.source] += f;
        flow[rx.target] += f;
    }
    double worst = 0;
    for (std::size_t c = 0; c < net.m(); ++c)
        worst = std::max(worst, std::fabs(resid[c]) / (1.0 + flow[c]));
    return worst;
}

/// A positive point x_ref with A_kappa x_ref^Y = 0, found by solving the
/// binomial tree equations (y_j - y_i) . ln x = ln(K_j / K_i) in log space
/// (least-norm). Refuses when the rates are not complex-balanced.
inline std::vector<double> complex_balanced_point(const Network& net, const RatVec& rates,
                                                  const ToricReport* precomputed = nullptr) {
    ToricReport local;
    const ToricReport& rep = precomputed ? *precomputed : (local = cayley_conditions(net));
    const auto verdict = is_complex_balanced(net, rates, &rep);
    if (verdict.status == ComplexBalanceVerdict::Status::No)
        throw NotComplexBalanced("rates are not complex-balanced: " + verdict.reason);

    const auto kv = rate_values(net, rates);
    std::vector<double> klog(net.m());
    for (std::size_t c = 0; c < net.m(); ++c) {
        const Rat kc = rep.labels.k[c].eval(kv);
        if (kc <= 0) throw NotComplexBalanced("vanishing tree label K" + std::to_string(c + 1));
        klog[c] = std::log(to_double(kc));
    }

    // spanning-tree edges of each linkage class (undirected BFS tree)
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& cls : linkage_classes(net)) {
        std::vector<std::vector<std::size_t>> adj(net.m());
        for (const auto& rx : net.reactions) {
            adj[rx.source].push_back(rx.target);
            adj[rx.target].push_back(rx.source);
        }
        std::vector<bool> seen(net.m(), false);
        std::vector<std::size_t> queue{cls.front()};
        seen[cls.front()] = true;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.erase(queue.begin());
            for (std::size_t v : adj[u]) {
                if (seen[v]) continue;
                seen[v] = true;
                queue.push_back(v);
                std::vector<double> row(net.n());
                for (std::size_t i = 0; i < net.n(); ++i)
                    row[i] = static_cast<double>(net.complexes[v][i] - net.complexes[u][i]);
                rows.push_back(std::move(row));
                rhs.push_back(klog[v] - klog[u]);
            }
        }
    }

    const auto w = detail::least_norm_solution(rows, rhs);
    std::vector<double> x(net.n());
    for (std::size_t i = 0; i < net.n(); ++i) x[i] = std::exp(w[i]);
    const double resid = complex_balance_residual(net, rates, x);
    if (resid > 1e-10)
        throw NoConvergence("complex-balanced point residual " + std::to_string(resid) +
                            " exceeds 1e-10");
    return x;
}

struct BirchSolution {
    std::vector<double> x_star;
    double residual = 0;
    int iterations = 0;
};

/// The unique positive steady state of a complex-balanced system in the given
/// compatibility class, by damped Newton iteration on
/// mu -> Z exp(ln x_ref + Z^T mu) - c (Jacobian Z diag(x) Z^T is positive
/// definite).
inline BirchSolution birch_point(const Network& net, const RatVec& rates,
                                 const CompatibilityClass& cls,
                                 const ToricReport* precomputed = nullptr) {
    const std::vector<double> x_ref = complex_balanced_point(net, rates, precomputed);
    const std::size_t n = net.n(), d = cls.z.rows();

    // the class must contain a positive point
    {
        VertexEnumeration ve;
        try {
            ve = class_vertices(cls);
        } catch (const EmptyClass&) {
            throw ClassEmpty("compatibility class is empty");
        }
        for (std::size_t i = 0; i < n; ++i) {
            bool positive = false;
            for (const auto& v : ve.vertices) positive = positive || v[i] > 0;
            for (const auto& r : ve.rays) positive = positive || r[i] > 0;
            if (!positive)
                throw ClassEmpty("no positive point: x_" + std::to_string(i + 1) +
                                 " vanishes on the whole class");
        }
    }

    std::vector<std::vector<double>> z(d, std::vector<double>(n));
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) z[i][j] = to_double(cls.z(i, j));
        c[i] = to_double(cls.c[i]);
    }
    double cnorm = 0;
    for (double v : c) cnorm = std::max(cnorm, std::fabs(v));
    const double tol = 1e-12 * (1.0 + cnorm);

    std::vector<double> mu(d, 0.0);
    auto x_of = [&](const std::vector<double>& m) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) {
            double t = std::log(x_ref[j]);
            for (std::size_t i = 0; i < d; ++i) t += z[i][j] * m[i];
            x[j] = std::exp(t);
        }
        return x;
    };
    auto f_of = [&](const std::vector<double>& x) {
        std::vector<double> f(d);
        for (std::size_t i = 0; i < d; ++i) {
            f[i] = -c[i];
            for (std::size_t j = 0; j < n; ++j) f[i] += z[i][j] * x[j];
        }
        return f;
    };
    auto norm_inf = [](const std::vector<double>& v) {
        double t = 0;
        for (double w : v) t = std::max(t, std::fabs(w));
        return t;
    };

    BirchSolution sol;
    std::vector<double> x = x_of(mu);
    std::vector<double> f = f_of(x);
    for (int iter = 0; iter <= 100; ++iter) {
        sol.residual = norm_inf(f);
        sol.iterations = iter;
        sol.x_star = x;
        if (sol.residual <= tol) return sol;
        if (iter == 100) break;

        // J = Z diag(x) Z^T, solve J p = -f by Gaussian elimination
        std::vector<std::vector<double>> jac(d, std::vector<double>(d + 1));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                double t = 0;
                for (std::size_t j = 0; j < n; ++j) t += z[i][j] * x[j] * z[k][j];
                jac[i][k] = t;
            }
            jac[i][d] = -f[i];
        }
        for (std::size_t col = 0; col < d; ++col) {
            std::size_t piv = col;
            for (std::size_t i = col + 1; i < d; ++i)
                if (std::fabs(jac[i][col]) > std::fabs(jac[piv][col])) piv = i;
            std::swap(jac[col], jac[piv]);
            if (jac[col][col] == 0) throw NoConvergence("singular Newton system");
            for (std::size_t i = 0; i < d; ++i) {
                if (i == col) continue;
                const double fmul = jac[i][col] / jac[col][col];
                for (std::size_t k = col; k <= d; ++k) jac[i][k] -= fmul * jac[col][k];
            }
        }
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = jac[i][d] / jac[i][i];

        double alpha = 1.0;
        for (;;) {
            std::vector<double> mu2(d);
            for (std::size_t i = 0; i < d; ++i) mu2[i] = mu[i] + alpha * p[i];
            const auto x2 = x_of(mu2);
            const auto f2 = f_of(x2);
            if (norm_inf(f2) < sol.residual || alpha < 1e-12) {
                mu = mu2;
                x = x2;
                f = f2;
                break;
            }
            alpha /= 2;
        }
    }
    throw NoConvergence("Birch-point Newton iteration did not converge in 100 steps");
}

/// The strict Lyapunov function of complex-balanced systems,
/// sum_i (x_i ln x_i - x_i ln x*_i - x_i + x*_i); >= 0 with equality iff
/// x = x*.
inline double lyapunov(const std::vector<double>& x, const std::vector<double>& x_star) {
    if (x.size() != x_star.size()) throw DimensionMismatch("lyapunov vector lengths");
    double total = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || x_star[i] <= 0)
            throw NonpositiveInput("lyapunov requires strictly positive vectors");
        total += x[i] * std::log(x[i]) - x[i] * std::log(x_star[i]) - x[i] + x_star[i];
    }
    return total;
}

} // namespace crn
