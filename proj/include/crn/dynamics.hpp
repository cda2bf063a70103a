#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "crn/errors.hpp"
#include "crn/massaction.hpp"
#include "crn/matrix.hpp"
#include "crn/network.hpp"
#include "crn/polytope.hpp"
#include "crn/toric.hpp"

namespace crn {

/// Exact mass-action right-hand side N v(x); always cross-checked against the
/// decomposition Y A_kappa x^Y, which must agree exactly.
inline RatVec rhs_exact(const Network& net, const RatVec& rates, const RatVec& x) {
    if (rates.size() != net.r() || x.size() != net.n())
        throw DimensionMismatch("rhs input lengths");
    RatVec xy(net.m());
    for (std::size_t c = 0; c < net.m(); ++c) {
        Rat t = 1;
        for (std::size_t i = 0; i < net.n(); ++i)
            for (long long e = 0; e < net.complexes[c][i]; ++e) t *= x[i];
        xy[c] = t;
    }
    RatVec v(net.r());
    for (std::size_t j = 0; j < net.r(); ++j) v[j] = rates[j] * xy[net.reactions[j].source];

    const IntMatrix nmat = stoichiometric_matrix(net);
    RatVec out(net.n(), Rat(0));
    for (std::size_t i = 0; i < net.n(); ++i)
        for (std::size_t j = 0; j < net.r(); ++j)
            if (nmat[i][j] != 0) out[i] += Rat(nmat[i][j]) * v[j];

    // identity N v(x) = Y A_kappa x^Y
    const RatMatrix ak = laplacian_numeric(net, rates);
    RatVec akxy = ak * xy;
    const IntMatrix y = complex_matrix(net);
    for (std::size_t i = 0; i < net.n(); ++i) {
        Rat t = 0;
        for (std::size_t c = 0; c < net.m(); ++c)
            if (y[i][c] != 0) t += Rat(y[i][c]) * akxy[c];
        if (t != out[i]) throw Error("internal: N v(x) != Y A_k x^Y");
    }
    return out;
}

/// Floating-point right-hand side used by the integrator.
struct RhsEvaluator {
    const Network& net;
    std::vector<double> rates;
    IntMatrix nmat;

    RhsEvaluator(const Network& n_, const RatVec& rates_) : net(n_), nmat(stoichiometric_matrix(n_)) {
        rates.reserve(rates_.size());
        for (const auto& k : rates_) rates.push_back(to_double(k));
    }

    void operator()(const double* x, double* dx) const {
        for (std::size_t i = 0; i < net.n(); ++i) dx[i] = 0;
        for (std::size_t j = 0; j < net.r(); ++j) {
            const auto& src = net.complexes[net.reactions[j].source];
            double v = rates[j];
            for (std::size_t i = 0; i < net.n(); ++i)
                for (long long e = 0; e < src[i]; ++e) v *= x[i];
            for (std::size_t i = 0; i < net.n(); ++i) {
                const double nij = nmat[i][j].convert_to<double>();
                if (nij != 0) dx[i] += nij * v;
            }
        }
    }
};

struct SimulationTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> drift;  // |Z x(t) - Z x0| per conservation law
    std::vector<double> lyapunov;            // filled when a reference point is supplied
    std::vector<double> terminal;
    bool clipped = false;     // a state component undershot below the warning threshold
    bool early_stop = false;  // ||rhs||_inf fell below 1e-12 (1 + ||x||_inf)
};

/// Classical fixed-step RK4 with conservation-drift monitoring, optional
/// Lyapunov monitoring, clip-at-zero handling of solver undershoot, and early
/// stop at numerical steady state.
inline SimulationTrace simulate(const Network& net, const RatVec& rates, const RatVec& x0,
                                double t_end, double dt,
                                const std::vector<double>* lyapunov_ref = nullptr) {
    if (dt <= 0) throw StepUnderflow("step size must be positive");
    if (t_end < 0) throw DomainError("negative end time");
    for (const auto& v : x0)
        if (v < 0) throw DomainError("negative initial state");

    const std::size_t n = net.n();
    const RatMatrix zb = structure(net).conservation_basis;
    std::vector<std::vector<double>> z(zb.rows(), std::vector<double>(n));
    for (std::size_t i = 0; i < zb.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) z[i][j] = to_double(zb(i, j));

    RhsEvaluator rhs(net, rates);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = to_double(x0[i]);

    std::vector<double> c0(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        c0[i] = 0;
        for (std::size_t j = 0; j < n; ++j) c0[i] += z[i][j] * x[j];
    }

    SimulationTrace tr;
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.states.push_back(x);
        std::vector<double> dr(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            double ci = 0;
            for (std::size_t j = 0; j < n; ++j) ci += z[i][j] * x[j];
            dr[i] = std::fabs(ci - c0[i]);
        }
        tr.drift.push_back(std::move(dr));
        if (lyapunov_ref) {
            bool positive = true;
            for (double v : x) positive = positive && v > 0;
            tr.lyapunov.push_back(positive ? lyapunov(x, *lyapunov_ref)
                                           : std::numeric_limits<double>::quiet_NaN());
        }
    };

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0;
    record(t);
    while (t < t_end) {
        if (t + dt == t) throw StepUnderflow("step size underflows at t = " + std::to_string(t));
        const double h = std::min(dt, t_end - t);
        rhs(x.data(), k1.data());

        // early stop at numerical steady state
        double rn = 0, xn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            rn = std::max(rn, std::fabs(k1[i]));
            xn = std::max(xn, std::fabs(x[i]));
        }
        if (rn < 1e-12 * (1 + xn)) {
            tr.early_stop = true;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        rhs(tmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        rhs(tmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        rhs(tmp.data(), k4.data());

        double scale = 1;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(x[i]));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += h / 6.0 * (k1[i] + 2 * (k2[i] + k3[i]) + k4[i]);
            if (x[i] < 0) {
                // the orthant is forward invariant; undershoot is solver noise
                if (x[i] < -10 * std::numeric_limits<double>::epsilon() * scale) tr.clipped = true;
                x[i] = 0;
            }
        }
        t += h;
        record(t);
    }
    tr.terminal = x;
    return tr;
}

struct LyapunovMonitor {
    std::vector<double> values;
    bool monotone = true;  // non-increasing up to 1e-9 per step
};

inline LyapunovMonitor lyapunov_monitor(const SimulationTrace& trace,
                                        const std::vector<double>& x_star) {
    LyapunovMonitor mon;
    for (const auto& x : trace.states) {
        for (double v : x)
            if (v <= 0) throw NonpositiveInput("state with non-positive component");
        mon.values.push_back(lyapunov(x, x_star));
    }
    for (std::size_t i = 1; i < mon.values.size(); ++i)
        if (mon.values[i] > mon.values[i - 1] + 1e-9) mon.monotone = false;
    return mon;
}

/// Convex hull of the sampled trajectory projected to the chosen coordinates.
/// Float samples are promoted to exact rationals; the sample count is thinned
/// to keep the exact hull tractable.
inline Polytope trajectory_hull(const SimulationTrace& trace, const std::vector<std::size_t>& coords,
                                std::size_t max_samples = 512) {
    if (coords.size() > 4) throw DimensionMismatch("trajectory hull capped at 4 coordinates");
    if (trace.states.empty()) throw DomainError("empty trace");
    if (coords.size() >= 3) max_samples = std::min<std::size_t>(max_samples, 128);
    const std::size_t stride = std::max<std::size_t>(1, trace.states.size() / max_samples);
    std::vector<RatVec> pts;
    for (std::size_t i = 0; i < trace.states.size(); i += stride) {
        RatVec p;
        for (std::size_t c : coords) {
            if (c >= trace.states[i].size()) throw DimensionMismatch("coordinate out of range");
            p.push_back(rat_from_double(trace.states[i][c]));
        }
        pts.push_back(std::move(p));
    }
    {
        RatVec p;
        for (std::size_t c : coords) p.push_back(rat_from_double(trace.states.back()[c]));
        pts.push_back(std::move(p));
    }
    return hull(std::move(pts), coords.size());
}

} // namespace crn
