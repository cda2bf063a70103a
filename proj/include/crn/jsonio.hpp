#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "crn/dynamics.hpp"
#include "crn/inject.hpp"
#include "crn/network.hpp"
#include "crn/polytope.hpp"
#include "crn/siphons.hpp"
#include "crn/toric.hpp"

namespace crn {

using Json = nlohmann::ordered_json;

inline Json json_rat_vec(const RatVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rat_str(x));
    return a;
}

inline Json json_rat_matrix(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(json_rat_vec(m.row(i)));
    return rows;
}

inline Json json_int_matrix(const IntMatrix& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(v.convert_to<long long>());
        rows.push_back(r);
    }
    return rows;
}

inline Json to_json(const Network& net) {
    Json j;
    j["species"] = net.species;
    Json cx = Json::array();
    for (const auto& c : net.complexes) cx.push_back(c);
    j["complexes"] = cx;
    Json rx = Json::array();
    for (const auto& re : net.reactions)
        rx.push_back({{"source", re.source}, {"target", re.target}, {"label", re.label}});
    j["reactions"] = rx;
    return j;
}

inline Json to_json(const StructureReport& s) {
    Json j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["r"] = s.r;
    j["linkage_classes"] = s.linkage_class_count;
    j["rank"] = s.stoich_rank;
    j["deficiency"] = s.deficiency;
    j["weakly_reversible"] = s.weakly_reversible;
    j["conservation_basis"] = json_rat_matrix(s.conservation_basis);
    return j;
}

inline Json to_json(const SiphonReport& rep) {
    Json j;
    Json ms = Json::array();
    for (const auto& w : rep.minimal_siphons) {
        Json s = Json::array();
        for (std::size_t i : w) s.push_back(i + 1);  // 1-based, paper notation
        ms.push_back(s);
    }
    j["minimal_siphons"] = ms;
    Json rel = Json::array();
    for (const auto& r : rep.relevance) {
        Json e;
        Json s = Json::array();
        for (std::size_t i : r.siphon) s.push_back(i + 1);
        e["siphon"] = s;
        e["status"] = r.covered ? "covered-by-conservation-law" : "relevant";
        if (r.covered) e["witness"] = json_rat_vec(r.witness);
        rel.push_back(e);
    }
    j["relevance"] = rel;
    j["no_boundary_steady_states"] = rep.no_boundary_steady_states;
    return j;
}

inline Json to_json(const ToricReport& rep) {
    Json j;
    j["cayley"] = json_int_matrix(rep.cayley);
    Json order = Json::array();
    for (std::size_t c : rep.complex_order) order.push_back(c + 1);
    j["complex_order"] = order;
    j["kernel"] = json_int_matrix(rep.kernel);
    j["deficiency"] = rep.deficiency;
    Json labels = Json::array();
    for (std::size_t c = 0; c < rep.labels.k.size(); ++c)
        labels.push_back({{"complex", c + 1}, {"K", rep.labels.k[c].render_plain()}});
    j["tree_labels"] = labels;
    Json conds = Json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"lhs_kappa", c.lhs_kappa.render_plain()},
                         {"rhs_kappa", c.rhs_kappa.render_plain()}});
    j["conditions"] = conds;
    return j;
}

inline Json to_json(const InjectivityVerdict& v, bool full) {
    Json j;
    switch (v.status) {
        case InjectivityVerdict::Status::Injective:
            j["status"] = "injective";
            break;
        case InjectivityVerdict::Status::NotInjective:
            j["status"] = "not-injective";
            break;
        case InjectivityVerdict::Status::DegenerateZeroDeterminant:
            j["status"] = "degenerate-zero-determinant";
            break;
    }
    j["positive_count"] = v.positive_count;
    j["negative_count"] = v.negative_count;
    Json rows = Json::array();
    for (std::size_t r : v.nprime_rows) rows.push_back(r + 1);
    j["nprime_rows"] = rows;
    if (full) {
        Json co = Json::array();
        for (const auto& [key, c] : v.coefficients) {
            Json reactions = Json::array(), species = Json::array();
            for (std::size_t t : key.first) reactions.push_back(t + 1);
            for (std::size_t s : key.second) species.push_back(s + 1);
            co.push_back({{"reactions", reactions},
                          {"species", species},
                          {"coefficient", c.str()}});
        }
        j["coefficients"] = co;
    }
    return j;
}

inline Json to_json(const Polytope& p) {
    Json j;
    j["dim"] = p.dim;
    Json vs = Json::array();
    for (const auto& v : p.vertices) vs.push_back(json_rat_vec(v));
    j["vertices"] = vs;
    return j;
}

inline Json to_json(const Parametrization& par) {
    Json j = Json::array();
    for (const auto& v : par.elim_vars) {
        const auto& f = par.exprs.at(v);
        j.push_back({{"var", v.name},
                     {"num", f.num().render_plain()},
                     {"den", f.den().render_plain()}});
    }
    return j;
}

inline std::string trace_csv(const Network& net, const SimulationTrace& tr) {
    std::string out = "t";
    for (const auto& s : net.species) out += "," + s;
    for (std::size_t i = 0; i < (tr.drift.empty() ? 0 : tr.drift[0].size()); ++i)
        out += ",drift" + std::to_string(i + 1);
    if (!tr.lyapunov.empty()) out += ",lyapunov";
    out += "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out += buf;
    };
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        put(tr.times[k]);
        for (double v : tr.states[k]) {
            out += ",";
            put(v);
        }
        for (double v : tr.drift[k]) {
            out += ",";
            put(v);
        }
        if (!tr.lyapunov.empty()) {
            out += ",";
            put(tr.lyapunov[k]);
        }
        out += "\n";
    }
    return out;
}

} // namespace crn
