#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "crn/errors.hpp"
#include "crn/rational.hpp"

namespace crn {

/// A named variable. Rate constants live in the Param block, species and other
/// state-like symbols in the State block; the block ordering fixes the
/// canonical variable order (Param block first, alphabetical within block).
struct Var {
    enum class Block : std::uint8_t { Param = 0, State = 1 };
    Block block = Block::State;
    std::string name;

    auto operator<=>(const Var&) const = default;
};

inline Var param_var(std::string name) { return Var{Var::Block::Param, std::move(name)}; }
inline Var state_var(std::string name) { return Var{Var::Block::State, std::move(name)}; }

class PolyFraction;

/// Sparse multivariate polynomial over exact rationals. Terms map exponent
/// vectors (aligned with the sorted variable list) to nonzero coefficients.
class SparsePoly {
public:
    using Exp = std::vector<int>;

    SparsePoly() = default;

    static SparsePoly zero() { return SparsePoly(); }

    static SparsePoly constant(const Rat& c) {
        SparsePoly p;
        if (c != 0) p.terms_[Exp{}] = c;
        return p;
    }

    static SparsePoly variable(const Var& v, int exp = 1, const Rat& coef = Rat(1)) {
        SparsePoly p;
        if (coef != 0 && exp >= 0) {
            p.vars_ = {v};
            Exp e{exp};
            p.terms_[e] = coef;
        }
        return p;
    }

    const std::vector<Var>& vars() const { return vars_; }
    const std::map<Exp, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        auto it = terms_.find(Exp(vars_.size(), 0));
        return it == terms_.end() ? Rat(0) : it->second;
    }

    static int total_degree(const Exp& e) {
        int d = 0;
        for (int x : e) d += x;
        return d;
    }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    int degree_in(const Var& v) const {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
        if (it == vars_.end() || *it != v) return 0;
        const std::size_t k = static_cast<std::size_t>(it - vars_.begin());
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[k]);
        return d;
    }

    /// Graded-lex order on exponent vectors (degree first, then earlier
    /// variables weigh more).
    static bool grlex_less(const Exp& a, const Exp& b) {
        const int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }

    SparsePoly operator-() const {
        SparsePoly p(*this);
        for (auto& [e, c] : p.terms_) c = -c;
        return p;
    }

    SparsePoly& operator+=(const SparsePoly& o) { return *this = *this + o; }
    SparsePoly& operator-=(const SparsePoly& o) { return *this = *this + (-o); }
    SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
        auto [u, ea, eb] = merge_universe(a, b);
        SparsePoly r;
        r.vars_ = std::move(u);
        for (const auto& [e, c] : a.terms_) r.terms_[remap(e, ea, r.vars_.size())] += c;
        for (const auto& [e, c] : b.terms_) r.terms_[remap(e, eb, r.vars_.size())] += c;
        r.prune();
        return r;
    }

    friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) { return a + (-b); }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        auto [u, ea, eb] = merge_universe(a, b);
        SparsePoly r;
        r.vars_ = std::move(u);
        const std::size_t n = r.vars_.size();
        for (const auto& [e1, c1] : a.terms_) {
            const Exp m1 = remap(e1, ea, n);
            for (const auto& [e2, c2] : b.terms_) {
                Exp e = remap(e2, eb, n);
                for (std::size_t i = 0; i < n; ++i) e[i] += m1[i];
                r.terms_[e] += c1 * c2;
            }
        }
        r.prune();
        return r;
    }

    friend SparsePoly operator*(const Rat& c, const SparsePoly& a) {
        SparsePoly r;
        if (c == 0) return r;
        r = a;
        for (auto& [e, v] : r.terms_) v *= c;
        return r;
    }

    SparsePoly pow(unsigned n) const {
        SparsePoly r = constant(1);
        SparsePoly base = *this;
        while (n) {
            if (n & 1u) r = r * base;
            base = base * base;
            n >>= 1u;
        }
        return r;
    }

    bool operator==(const SparsePoly& o) const { return (*this - o).is_zero(); }

    /// Exact evaluation; every variable present with a nonzero exponent must
    /// have a value.
    Rat eval(const std::map<Var, Rat>& values) const {
        Rat total = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = values.find(vars_[i]);
                if (it == values.end())
                    throw MissingVariableValue("no value for variable '" + vars_[i].name + "'");
                t *= pow_rat(it->second, e[i]);
            }
            total += t;
        }
        return total;
    }

    double eval_double(const std::map<Var, double>& values) const {
        double total = 0;
        for (const auto& [e, c] : terms_) {
            double t = to_double(c);
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = values.find(vars_[i]);
                if (it == values.end())
                    throw MissingVariableValue("no value for variable '" + vars_[i].name + "'");
                t *= std::pow(it->second, e[i]);
            }
            total += t;
        }
        return total;
    }

    /// Partial exact substitution of variable values; untouched variables stay
    /// symbolic.
    SparsePoly eval_partial(const std::map<Var, Rat>& values) const {
        SparsePoly r;
        for (const auto& [e, c] : terms_) {
            Rat coef = c;
            SparsePoly mono = constant(1);
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = values.find(vars_[i]);
                if (it != values.end())
                    coef *= pow_rat(it->second, e[i]);
                else
                    mono = mono * variable(vars_[i], e[i]);
            }
            r = r + coef * mono;
        }
        return r;
    }

    /// gcd of all coefficients (positive), 0 for the zero polynomial.
    Rat content() const {
        Int g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            g = crn::gcd(g, numerator(c));
            l = crn::lcm(l, denominator(c));
        }
        if (g == 0) return Rat(0);
        return Rat(g, l);
    }

    /// Exponent-wise minimum over all terms (the common monomial factor).
    Exp monomial_content() const {
        Exp m(vars_.size(), 0);
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first) {
                m = e;
                first = false;
            } else {
                for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
            }
        }
        return m;
    }

    SparsePoly divide_by_monomial(const Exp& m) const {
        SparsePoly r;
        r.vars_ = vars_;
        for (const auto& [e, c] : terms_) {
            Exp ne = e;
            for (std::size_t i = 0; i < ne.size(); ++i) {
                ne[i] -= m[i];
                if (ne[i] < 0) throw ExactDivisionFailure("monomial does not divide polynomial");
            }
            r.terms_[ne] = c;
        }
        return r;
    }

    /// Leading coefficient in graded-lex order (0 for the zero polynomial).
    Rat leading_coefficient() const {
        if (terms_.empty()) return Rat(0);
        auto best = terms_.begin();
        for (auto it = terms_.begin(); it != terms_.end(); ++it)
            if (grlex_less(best->first, it->first)) best = it;
        return best->second;
    }

    /// Exact division; throws ExactDivisionFailure when the divisor does not
    /// divide this polynomial.
    SparsePoly exact_div(const SparsePoly& d) const {
        if (d.is_zero()) throw ExactDivisionFailure("division by zero polynomial");
        if (is_zero()) return zero();
        auto [u, ef, ed] = merge_universe(*this, d);
        const std::size_t n = u.size();
        std::map<Exp, Rat> rem;
        for (const auto& [e, c] : terms_) rem[remap(e, ef, n)] = c;
        std::map<Exp, Rat> div;
        for (const auto& [e, c] : d.terms_) div[remap(e, ed, n)] = c;

        auto leading = [](const std::map<Exp, Rat>& t) {
            auto best = t.begin();
            for (auto it = t.begin(); it != t.end(); ++it)
                if (grlex_less(best->first, it->first)) best = it;
            return best;
        };
        const auto ld = leading(div);

        SparsePoly q;
        q.vars_ = u;
        while (!rem.empty()) {
            auto lr = leading(rem);
            Exp t(n);
            for (std::size_t i = 0; i < n; ++i) {
                t[i] = lr->first[i] - ld->first[i];
                if (t[i] < 0) throw ExactDivisionFailure("leading-term division failed");
            }
            const Rat coef = lr->second / ld->second;
            q.terms_[t] += coef;
            for (const auto& [e, c] : div) {
                Exp e2 = e;
                for (std::size_t i = 0; i < n; ++i) e2[i] += t[i];
                auto it = rem.find(e2);
                const Rat nv = (it == rem.end() ? Rat(0) : it->second) - coef * c;
                if (nv == 0) {
                    if (it != rem.end()) rem.erase(it);
                } else {
                    rem[e2] = nv;
                }
            }
        }
        q.prune();
        return q;
    }

    /// Exponent vectors projected onto the given variables (in the order
    /// given); variables that do not occur project to 0.
    std::vector<std::vector<Rat>> support(const std::vector<Var>& over) const {
        std::vector<std::size_t> idx(over.size(), static_cast<std::size_t>(-1));
        for (std::size_t k = 0; k < over.size(); ++k) {
            auto it = std::lower_bound(vars_.begin(), vars_.end(), over[k]);
            if (it != vars_.end() && *it == over[k]) idx[k] = static_cast<std::size_t>(it - vars_.begin());
        }
        std::vector<std::vector<Rat>> pts;
        for (const auto& [e, c] : terms_) {
            std::vector<Rat> p(over.size());
            for (std::size_t k = 0; k < over.size(); ++k)
                p[k] = idx[k] == static_cast<std::size_t>(-1) ? Rat(0) : Rat(e[idx[k]]);
            pts.push_back(std::move(p));
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    PolyFraction substitute(const std::map<Var, PolyFraction>& repl) const;

    /// Canonical text: terms in descending graded-lex order, coefficients in
    /// parentheses as p/q, e.g. "(1)*k2*k4 + (1)*k3*k4".
    std::string render() const { return render_impl(false); }

    /// Plain text: unit coefficients omitted, "a - b" form, e.g. "k2+k3".
    std::string render_plain() const { return render_impl(true); }

    /// Drops variables that occur in no term; canonicalizes the universe.
    SparsePoly compact() const {
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (e[i] > 0) used[i] = true;
        SparsePoly r;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) r.vars_.push_back(vars_[i]);
        for (const auto& [e, c] : terms_) {
            Exp ne;
            ne.reserve(r.vars_.size());
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (used[i]) ne.push_back(e[i]);
            r.terms_[ne] = c;
        }
        return r;
    }

private:
    std::vector<Var> vars_;       // strictly increasing
    std::map<Exp, Rat> terms_;    // keys of length vars_.size(), values nonzero

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->second == 0 ? terms_.erase(it) : std::next(it);
    }

    static Rat pow_rat(const Rat& base, int e) {
        Rat r = 1;
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }

    // mapping from each operand's variable positions into the merged universe
    static std::tuple<std::vector<Var>, std::vector<std::size_t>, std::vector<std::size_t>>
    merge_universe(const SparsePoly& a, const SparsePoly& b) {
        std::vector<Var> u;
        std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                       std::back_inserter(u));
        auto positions = [&u](const std::vector<Var>& v) {
            std::vector<std::size_t> pos(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                pos[i] = static_cast<std::size_t>(
                    std::lower_bound(u.begin(), u.end(), v[i]) - u.begin());
            return pos;
        };
        return {u, positions(a.vars_), positions(b.vars_)};
    }

    static Exp remap(const Exp& e, const std::vector<std::size_t>& pos, std::size_t n) {
        Exp r(n, 0);
        for (std::size_t i = 0; i < e.size(); ++i) r[pos[i]] = e[i];
        return r;
    }

    std::string render_impl(bool plain) const {
        if (terms_.empty()) return plain ? "0" : "(0)";
        std::vector<const std::pair<const Exp, Rat>*> order;
        for (const auto& t : terms_) order.push_back(&t);
        std::sort(order.begin(), order.end(),
                  [](auto* x, auto* y) { return grlex_less(y->first, x->first); });
        std::string out;
        bool first = true;
        for (auto* t : order) {
            const auto& [e, c] = *t;
            std::string mono;
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += vars_[i].name;
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (!plain) {
                if (!first) out += " + ";
                out += "(" + rat_str(c) + ")";
                if (!mono.empty()) out += "*" + mono;
            } else {
                const Rat ac = c < 0 ? Rat(-c) : c;
                if (first)
                    out += (c < 0 ? "-" : "");
                else
                    out += (c < 0 ? " - " : " + ");
                if (mono.empty())
                    out += rat_str(ac);
                else if (ac == 1)
                    out += mono;
                else
                    out += rat_str(ac) + "*" + mono;
            }
            first = false;
        }
        return out;
    }
};

/// Quotient of two polynomials. Reduction divides out the integer content and
/// the common monomial factor only; equality tests use cross-multiplication.
class PolyFraction {
public:
    PolyFraction() : num_(SparsePoly::zero()), den_(SparsePoly::constant(1)) {}
    PolyFraction(SparsePoly num, SparsePoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DomainError("polynomial fraction with zero denominator");
        reduce();
    }
    explicit PolyFraction(const SparsePoly& p) : num_(p), den_(SparsePoly::constant(1)) {}
    static PolyFraction constant(const Rat& c) { return PolyFraction(SparsePoly::constant(c)); }

    const SparsePoly& num() const { return num_; }
    const SparsePoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend PolyFraction operator+(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend PolyFraction operator-(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend PolyFraction operator*(const PolyFraction& a, const PolyFraction& b) {
        return PolyFraction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend PolyFraction operator/(const PolyFraction& a, const PolyFraction& b) {
        if (b.num_.is_zero()) throw DomainError("division by zero polynomial fraction");
        return PolyFraction(a.num_ * b.den_, a.den_ * b.num_);
    }

    PolyFraction pow(int n) const {
        if (n < 0) return PolyFraction(den_, num_).pow(-n);
        return PolyFraction(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)));
    }

    /// Equality by cross-multiplication (exact, gcd-free).
    bool equals(const PolyFraction& o) const {
        return (num_ * o.den_ - o.num_ * den_).is_zero();
    }

    Rat eval(const std::map<Var, Rat>& values) const {
        const Rat d = den_.eval(values);
        if (d == 0) throw DomainError("fraction denominator vanishes at evaluation point");
        return num_.eval(values) / d;
    }

    std::string render_plain() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.render_plain();
        return "(" + num_.render_plain() + ")/(" + den_.render_plain() + ")";
    }

private:
    SparsePoly num_, den_;

    void reduce() {
        if (num_.is_zero()) {
            den_ = SparsePoly::constant(1);
            return;
        }
        // common monomial factor
        auto merge_min = [](const std::vector<Var>& va, SparsePoly::Exp ma,
                            const std::vector<Var>& vb, SparsePoly::Exp mb) {
            std::map<Var, int> m;
            for (std::size_t i = 0; i < va.size(); ++i) m[va[i]] = ma[i];
            for (auto& [v, e] : m) {
                auto it = std::lower_bound(vb.begin(), vb.end(), v);
                int eb = (it != vb.end() && *it == v)
                             ? mb[static_cast<std::size_t>(it - vb.begin())]
                             : 0;
                e = std::min(e, eb);
            }
            return m;
        };
        auto shrink = [](SparsePoly& p, const std::map<Var, int>& m) {
            SparsePoly::Exp d(p.vars().size(), 0);
            for (std::size_t i = 0; i < p.vars().size(); ++i) {
                auto it = m.find(p.vars()[i]);
                if (it != m.end()) d[i] = it->second;
            }
            p = p.divide_by_monomial(d);
        };
        const auto common = merge_min(num_.vars(), num_.monomial_content(),
                                      den_.vars(), den_.monomial_content());
        bool any = false;
        for (const auto& [v, e] : common) any = any || e > 0;
        if (any) {
            shrink(num_, common);
            shrink(den_, common);
        }
        // rational content: scale so both parts are integral and primitive jointly
        const Rat cn = num_.content(), cd = den_.content();
        Rat scale = Rat(crn::gcd(numerator(cn), numerator(cd)),
                        crn::lcm(denominator(cn), denominator(cd)));
        if (scale != 0 && scale != 1) {
            const Rat inv = 1 / scale;
            num_ = inv * num_;
            den_ = inv * den_;
        }
        if (den_.leading_coefficient() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        num_ = num_.compact();
        den_ = den_.compact();
    }
};

inline PolyFraction SparsePoly::substitute(const std::map<Var, PolyFraction>& repl) const {
    PolyFraction total;
    for (const auto& [e, c] : terms_) {
        PolyFraction term = PolyFraction::constant(c);
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = repl.find(vars_[i]);
            if (it != repl.end())
                term = term * it->second.pow(e[i]);
            else
                term = term * PolyFraction(variable(vars_[i], e[i]));
        }
        total = total + term;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Symbolic linear algebra
// ---------------------------------------------------------------------------

using PolyMatrix = std::vector<std::vector<SparsePoly>>;

/// Exact determinant by fraction-free (Bareiss) elimination. Every division in
/// the sweep is exact; a failed division signals an implementation bug.
inline SparsePoly det_bareiss(PolyMatrix m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw DimensionMismatch("det of non-square symbolic matrix");
    if (n == 0) return SparsePoly::constant(1);

    SparsePoly prev = SparsePoly::constant(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t p = k + 1;
            while (p < n && m[p][k].is_zero()) ++p;
            if (p == n) return SparsePoly::zero();
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                SparsePoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = t.is_zero() ? SparsePoly::zero() : t.exact_div(prev);
            }
            m[i][k] = SparsePoly::zero();
        }
        prev = m[k][k];
    }
    return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Cramer-rule solve of A x = b over the polynomial ring; entries are
/// content-reduced fractions. Throws SingularSymbolicSystem when det(A) = 0.
inline std::vector<PolyFraction> solve_linear_symbolic(const PolyMatrix& a,
                                                       const std::vector<SparsePoly>& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("solve_linear_symbolic shape");
    const SparsePoly d = det_bareiss(a);
    if (d.is_zero()) throw SingularSymbolicSystem("symbolic coefficient matrix is singular");
    std::vector<PolyFraction> x;
    x.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PolyMatrix ai = a;
        for (std::size_t r = 0; r < n; ++r) ai[r][i] = b[r];
        x.emplace_back(det_bareiss(ai), d);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Polynomial expression parser
// ---------------------------------------------------------------------------

/// Parses "k1*x1*x2 - 3/2*x3^2 + (x1 - x2)*k4". Identifiers are classified by
/// the caller (rate labels vs. state variables).
template <typename Classify>
SparsePoly parse_poly(const std::string& text, Classify classify) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& msg) -> SparsePoly {
        throw UsageError("polynomial parse error at offset " + std::to_string(i) + ": " + msg);
    };

    std::function<SparsePoly()> expr, term, factor;

    factor = [&]() -> SparsePoly {
        skip();
        if (i >= text.size()) return fail("unexpected end of input");
        SparsePoly base;
        if (text[i] == '(') {
            ++i;
            base = expr();
            skip();
            if (i >= text.size() || text[i] != ')') return fail("expected ')'");
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                    text[j] == '/' ||
                    ((text[j] == 'e' || text[j] == 'E') && j + 1 < text.size() &&
                     (std::isdigit(static_cast<unsigned char>(text[j + 1])) ||
                      text[j + 1] == '+' || text[j + 1] == '-')) ||
                    ((text[j] == '+' || text[j] == '-') && j > i &&
                     (text[j - 1] == 'e' || text[j - 1] == 'E'))))
                ++j;
            base = SparsePoly::constant(parse_rational(text.substr(i, j - i)));
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(text[i]))) {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            base = SparsePoly::variable(classify(text.substr(i, j - i)));
            i = j;
        } else {
            return fail(std::string("unexpected character '") + text[i] + "'");
        }
        skip();
        if (i < text.size() && text[i] == '^') {
            ++i;
            skip();
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i) return fail("expected exponent");
            base = base.pow(static_cast<unsigned>(std::stoul(text.substr(i, j - i))));
            i = j;
        }
        return base;
    };

    term = [&]() -> SparsePoly {
        SparsePoly p = factor();
        for (;;) {
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                p = p * factor();
            } else {
                return p;
            }
        }
    };

    expr = [&]() -> SparsePoly {
        skip();
        bool neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = (text[i++] == '-');
        SparsePoly p = term();
        if (neg) p = -p;
        for (;;) {
            skip();
            if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
                const bool minus = (text[i++] == '-');
                SparsePoly q = term();
                p = minus ? p - q : p + q;
            } else {
                return p;
            }
        }
    };

    SparsePoly p = expr();
    skip();
    if (i != text.size()) fail("trailing input");
    return p;
}

} // namespace crn
