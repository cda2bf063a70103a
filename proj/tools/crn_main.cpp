// crn: structural and algebraic analysis of mass-action reaction networks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crn/dynamics.hpp"
#include "crn/elimination.hpp"
#include "crn/errors.hpp"
#include "crn/inject.hpp"
#include "crn/jsonio.hpp"
#include "crn/netio.hpp"
#include "crn/network.hpp"
#include "crn/polytope.hpp"
#include "crn/siphons.hpp"
#include "crn/toric.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw crn::UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string item = s.substr(pos, comma - pos);
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
        pos = comma + 1;
    }
    return out;
}

struct Options {
    bool json = false;
    bool autolabel = false;
    unsigned seed = 0;
};

crn::Network load(const std::string& path, const Options& opt) {
    crn::ParseOptions po;
    po.autolabel = opt.autolabel;
    return crn::parse_network(read_file(path), po);
}

void emit(const crn::Json& j, const Options& opt, const std::function<void()>& plain) {
    if (opt.json)
        std::cout << j.dump(2) << "\n";
    else
        plain();
}

int cmd_analyze(const std::string& path, const Options& opt) {
    const auto net = load(path, opt);
    const auto rep = crn::structure(net);
    crn::Json j = crn::to_json(rep);
    j["network"] = crn::to_json(net);
    emit(j, opt, [&] {
        std::cout << "species: " << rep.n << "\ncomplexes: " << rep.m
                  << "\nreactions: " << rep.r << "\nlinkage classes: " << rep.linkage_class_count
                  << "\nrank: " << rep.stoich_rank << "\ndeficiency: " << rep.deficiency
                  << "\nweakly reversible: " << (rep.weakly_reversible ? "true" : "false") << "\n";
        std::cout << "conservation laws:\n";
        for (std::size_t i = 0; i < rep.conservation_basis.rows(); ++i) {
            std::string line;
            for (std::size_t k = 0; k < net.n(); ++k) {
                const crn::Rat& c = rep.conservation_basis(i, k);
                if (c == 0) continue;
                if (!line.empty()) line += " + ";
                if (c != 1) line += crn::rat_str(c) + " ";
                line += net.species[k];
            }
            std::cout << "  " << line << " = c" << i + 1 << "\n";
        }
    });
    return 0;
}

int cmd_siphons(const std::string& path, bool relevant, bool all, const Options& opt) {
    const auto net = load(path, opt);
    const auto rep = crn::siphon_report(net);
    crn::Json j = crn::to_json(rep);
    if (all) {
        crn::Json lattice = crn::Json::array();
        for (const auto& w : crn::all_siphons(net)) {
            crn::Json s = crn::Json::array();
            for (std::size_t i : w) s.push_back(i + 1);
            lattice.push_back(s);
        }
        j["all_siphons"] = lattice;
    }
    emit(j, opt, [&] {
        std::cout << "minimal siphons: " << rep.minimal_siphons.size() << "\n";
        for (const auto& rel : rep.relevance) {
            std::cout << "  {";
            for (std::size_t k = 0; k < rel.siphon.size(); ++k)
                std::cout << (k ? "," : "") << rel.siphon[k] + 1;
            std::cout << "}";
            if (relevant)
                std::cout << (rel.covered ? "  covered by conservation law" : "  relevant");
            std::cout << "\n";
        }
        if (relevant)
            std::cout << "no boundary steady states: "
                      << (rep.no_boundary_steady_states ? "true" : "false") << "\n";
    });
    return 0;
}

int cmd_toric(const std::string& path, const std::string& rates_text, const Options& opt) {
    const auto net = load(path, opt);
    const auto rep = crn::cayley_conditions(net);
    crn::Json j = crn::to_json(rep);
    std::string verdict;
    if (!rates_text.empty()) {
        const auto rates = crn::parse_rates(rates_text, net);
        const auto v = crn::is_complex_balanced(net, rates, &rep);
        switch (v.status) {
            case crn::ComplexBalanceVerdict::Status::AlwaysByDeficiencyZero:
                verdict = "always-by-deficiency-zero";
                break;
            case crn::ComplexBalanceVerdict::Status::Yes:
                verdict = "yes";
                break;
            case crn::ComplexBalanceVerdict::Status::No:
                verdict = "no (" + v.reason + ")";
                break;
        }
        j["complex_balanced"] = verdict;
    }
    emit(j, opt, [&] {
        std::cout << "deficiency: " << rep.deficiency << "\n";
        for (std::size_t c = 0; c < rep.labels.k.size(); ++c)
            std::cout << "K" << c + 1 << " = " << rep.labels.k[c].render_plain() << "\n";
        std::cout << "binomial conditions: " << rep.conditions.size() << "\n";
        for (const auto& c : rep.conditions)
            std::cout << "  " << c.lhs << " = " << c.rhs << "   (" << c.lhs_kappa.render_plain()
                      << " = " << c.rhs_kappa.render_plain() << ")\n";
        if (!verdict.empty()) std::cout << "complex balanced: " << verdict << "\n";
    });
    return 0;
}

int cmd_birch(const std::string& path, const std::string& rates_text, const std::string& totals,
              const std::string& x0_text, const Options& opt) {
    const auto net = load(path, opt);
    const auto rates = crn::parse_rates(rates_text, net);
    const auto srep = crn::structure(net);
    crn::CompatibilityClass cls;
    cls.z = srep.conservation_basis;
    if (!totals.empty()) {
        cls.c = crn::parse_totals(totals, cls.z.rows());
    } else if (!x0_text.empty()) {
        cls.c = cls.z * crn::parse_state(x0_text, net);
    } else {
        throw crn::UsageError("birch requires --totals or --x0");
    }
    const auto rep = crn::cayley_conditions(net);
    const auto x_ref = crn::complex_balanced_point(net, rates, &rep);
    const auto sol = crn::birch_point(net, rates, cls, &rep);
    crn::Json j;
    j["x_ref"] = x_ref;
    j["x_star"] = sol.x_star;
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["totals"] = crn::json_rat_vec(cls.c);
    emit(j, opt, [&] {
        std::cout << "complex-balanced reference point:\n";
        for (std::size_t i = 0; i < net.n(); ++i)
            std::cout << "  " << net.species[i] << " = " << fmt(x_ref[i]) << "\n";
        std::cout << "Birch point (class totals";
        for (std::size_t i = 0; i < cls.c.size(); ++i)
            std::cout << (i ? "," : " ") << "c" << i + 1 << "=" << crn::rat_str(cls.c[i]);
        std::cout << "):\n";
        for (std::size_t i = 0; i < net.n(); ++i)
            std::cout << "  " << net.species[i] << " = " << fmt(sol.x_star[i]) << "\n";
        std::cout << "residual: " << fmt(sol.residual) << "\niterations: " << sol.iterations
                  << "\n";
    });
    return 0;
}

int cmd_injectivity(const std::string& path, bool full, const Options& opt) {
    const auto net = load(path, opt);
    const auto v = crn::injectivity(net);
    crn::Json j = crn::to_json(v, full);
    emit(j, opt, [&] {
        std::string status;
        switch (v.status) {
            case crn::InjectivityVerdict::Status::Injective:
                status = "injective (multistationarity precluded)";
                break;
            case crn::InjectivityVerdict::Status::NotInjective:
                status = "not injective (criterion inconclusive for multistationarity)";
                break;
            case crn::InjectivityVerdict::Status::DegenerateZeroDeterminant:
                status = "degenerate: det M(k,l) is the zero polynomial";
                break;
        }
        std::cout << "status: " << status << "\n";
        std::cout << "coefficients: " << v.coefficients.size() << " (" << v.positive_count
                  << " positive, " << v.negative_count << " negative)\n";
        std::size_t shown = 0;
        for (const auto& [key, c] : v.coefficients) {
            if (shown++ >= 20) {
                std::cout << "  ...\n";
                break;
            }
            std::cout << "  k{";
            for (std::size_t i = 0; i < key.first.size(); ++i)
                std::cout << (i ? "," : "") << key.first[i] + 1;
            std::cout << "} l{";
            for (std::size_t i = 0; i < key.second.size(); ++i)
                std::cout << (i ? "," : "") << key.second[i] + 1;
            std::cout << "}: " << c.str() << "\n";
        }
    });
    return 0;
}

int cmd_mixed_volume(const std::string& path, const std::string& method,
                     const std::string& eliminate, const Options& opt) {
    const auto net = load(path, opt);
    crn::MixedVolumeReport rep;
    std::string name;
    if (method == "aug") {
        rep = crn::aug_mv_report(net);
        name = "augMV";
    } else if (method == "ssp") {
        if (eliminate.empty()) throw crn::UsageError("--method ssp requires --eliminate");
        rep = crn::ssp_mv_report(net, split_commas(eliminate));
        name = "sspMV";
    } else {
        throw crn::UsageError("--method must be aug or ssp");
    }
    crn::Json j;
    j["method"] = name;
    j["value"] = crn::rat_str(rep.value);
    crn::Json polys = crn::Json::array();
    for (const auto& p : rep.polytopes) polys.push_back(crn::to_json(p));
    j["newton_polytopes"] = polys;
    emit(j, opt, [&] { std::cout << name << ": " << crn::rat_str(rep.value) << "\n"; });
    return 0;
}

int cmd_parametrize(const std::string& path, const std::string& eliminate, const Options& opt) {
    const auto net = load(path, opt);
    const auto par = crn::eliminate_linear(net, split_commas(eliminate));
    crn::Json j;
    j["expressions"] = crn::to_json(par);
    emit(j, opt, [&] {
        for (const auto& v : par.elim_vars) {
            const auto& f = par.exprs.at(v);
            std::cout << v.name << " = " << f.render_plain() << "\n";
        }
    });
    return 0;
}

int cmd_verify_invariant(const std::string& path, const std::string& eliminate,
                         const std::string& poly_text, const Options& opt) {
    const auto net = load(path, opt);
    const auto par = crn::eliminate_linear(net, split_commas(eliminate));
    const auto p = crn::parse_poly(poly_text, [&](const std::string& name) {
        for (const auto& rx : net.reactions)
            if (rx.label == name) return crn::param_var(name);
        for (const auto& s : net.species)
            if (s == name) return crn::state_var(name);
        throw crn::UnknownLabel("unknown symbol '" + name + "' in polynomial");
    });
    const bool ok = crn::verify_invariant(par, p);
    crn::Json j;
    j["invariant"] = ok;
    j["polynomial"] = p.render_plain();
    emit(j, opt, [&] {
        std::cout << (ok ? "invariant: holds identically on the parametrization"
                         : "invariant: does NOT vanish on the parametrization")
                  << "\n";
    });
    return ok ? 0 : 2;
}

int cmd_simulate(const std::string& path, const std::string& rates_text,
                 const std::string& x0_text, double t_end, double dt, const std::string& csv,
                 bool monitor_lyapunov, const std::string& hull_coords, const Options& opt) {
    const auto net = load(path, opt);
    const auto rates = crn::parse_rates(rates_text, net);
    const auto x0 = crn::parse_state(x0_text, net);

    std::vector<double> birch;
    const std::vector<double>* ref = nullptr;
    if (monitor_lyapunov) {
        crn::CompatibilityClass cls;
        cls.z = crn::structure(net).conservation_basis;
        cls.c = cls.z * x0;
        birch = crn::birch_point(net, rates, cls).x_star;
        ref = &birch;
    }
    const auto tr = crn::simulate(net, rates, x0, t_end, dt, ref);
    if (!csv.empty()) {
        std::ofstream out(csv, std::ios::binary);
        if (!out) throw crn::UsageError("cannot write '" + csv + "'");
        out << crn::trace_csv(net, tr);
    }
    crn::Json j;
    j["steps"] = tr.times.size() - 1;
    j["t_end"] = tr.times.back();
    j["terminal"] = tr.terminal;
    double maxdrift = 0;
    for (const auto& d : tr.drift)
        for (double v : d) maxdrift = std::max(maxdrift, v);
    j["max_drift"] = maxdrift;
    j["early_stop"] = tr.early_stop;
    j["clipped"] = tr.clipped;
    if (monitor_lyapunov) {
        const auto mon = crn::lyapunov_monitor(tr, birch);
        j["lyapunov_monotone"] = mon.monotone;
        j["lyapunov_final"] = mon.values.back();
        j["birch_point"] = birch;
    }
    if (!hull_coords.empty()) {
        std::vector<std::size_t> coords;
        for (const auto& name : split_commas(hull_coords)) coords.push_back(net.species_index(name));
        j["trajectory_hull"] = crn::to_json(crn::trajectory_hull(tr, coords));
    }
    emit(j, opt, [&] {
        std::cout << "steps: " << tr.times.size() - 1 << "\nterminal state:";
        for (std::size_t i = 0; i < net.n(); ++i)
            std::cout << " " << net.species[i] << "=" << fmt(tr.terminal[i]);
        std::cout << "\nmax conservation drift: " << fmt(maxdrift) << "\n";
        if (tr.early_stop) std::cout << "stopped early at numerical steady state\n";
        if (j.contains("lyapunov_monotone"))
            std::cout << "Lyapunov monotone: " << (j["lyapunov_monotone"].get<bool>() ? "true" : "false")
                      << "\n";
        if (j.contains("trajectory_hull"))
            std::cout << "trajectory hull vertices: " << j["trajectory_hull"]["vertices"].size()
                      << "\n";
    });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact structural and algebraic analysis of mass-action reaction networks"};
    app.require_subcommand(1);

    Options opt;
    app.add_flag("--json", opt.json, "machine-readable JSON output");
    app.add_flag("--autolabel", opt.autolabel, "auto-generate rate labels k1..kr");
    app.add_option("--seed", opt.seed, "seed for any sampling (default 0)");

    std::string path, rates, totals, x0, eliminate, poly, method = "aug", csv, hull_coords;
    bool relevant = false, all = false, full = false, monitor_lyapunov = false;
    double t_end = 50.0, dt = 1e-3;

    auto* analyze = app.add_subcommand("analyze", "structure report: counts, deficiency, laws");
    analyze->add_option("network", path)->required();

    auto* siphons = app.add_subcommand("siphons", "minimal siphons and relevance");
    siphons->add_option("network", path)->required();
    siphons->add_flag("--relevant", relevant, "test coverage by conservation laws");
    siphons->add_flag("--all", all, "also list the full siphon lattice (capped)");

    auto* toric = app.add_subcommand("toric", "Cayley conditions and complex balance");
    toric->add_option("network", path)->required();
    toric->add_option("--rates", rates, "rate assignment k1=...,k2=...");

    auto* birch = app.add_subcommand("birch", "complex-balanced point and Birch point");
    birch->add_option("network", path)->required();
    birch->add_option("--rates", rates)->required();
    birch->add_option("--totals", totals, "total amounts c1=...,c2=...");
    birch->add_option("--x0", x0, "state defining the class, x1=...,x2=...");

    auto* inj = app.add_subcommand("injectivity", "injectivity criterion via det M(k,l)");
    inj->add_option("network", path)->required();
    inj->add_flag("--full", full, "dump the full coefficient table (JSON)");

    auto* mv = app.add_subcommand("mixed-volume", "augMV / sspMV steady-state bounds");
    mv->add_option("network", path)->required();
    mv->add_option("--method", method, "aug or ssp")->required();
    mv->add_option("--eliminate", eliminate, "species to eliminate (ssp)");

    auto* par = app.add_subcommand("parametrize", "steady-state parametrization");
    par->add_option("network", path)->required();
    par->add_option("--eliminate", eliminate)->required();

    auto* ver = app.add_subcommand("verify-invariant", "check a steady-state invariant");
    ver->add_option("network", path)->required();
    ver->add_option("--eliminate", eliminate)->required();
    ver->add_option("--poly", poly)->required();

    auto* sim = app.add_subcommand("simulate", "RK4 integration with monitors");
    sim->add_option("network", path)->required();
    sim->add_option("--rates", rates)->required();
    sim->add_option("--x0", x0)->required();
    sim->add_option("--t-end", t_end);
    sim->add_option("--dt", dt);
    sim->add_option("--csv", csv, "write the trace as CSV");
    sim->add_flag("--monitor-lyapunov", monitor_lyapunov, "track the Lyapunov function");
    sim->add_option("--hull", hull_coords, "convex hull of the trajectory over these species");

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return cmd_analyze(path, opt);
        if (siphons->parsed()) return cmd_siphons(path, relevant, all, opt);
        if (toric->parsed()) return cmd_toric(path, rates, opt);
        if (birch->parsed()) return cmd_birch(path, rates, totals, x0, opt);
        if (inj->parsed()) return cmd_injectivity(path, full, opt);
        if (mv->parsed()) return cmd_mixed_volume(path, method, eliminate, opt);
        if (par->parsed()) return cmd_parametrize(path, eliminate, opt);
        if (ver->parsed()) return cmd_verify_invariant(path, eliminate, poly, opt);
        if (sim->parsed())
            return cmd_simulate(path, rates, x0, t_end, dt, csv, monitor_lyapunov, hull_coords, opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const crn::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const crn::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const crn::Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
