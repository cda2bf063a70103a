#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "crn/errors.hpp"
#include "crn/network.hpp"
#include "crn/rational.hpp"

namespace crn {

struct ParseOptions {
    bool autolabel = false;       // generate k1..kr for unlabeled reactions
    bool allow_parallel = false;  // permit duplicate (source,target) pairs
};

namespace detail {

constexpr long long kMaxStoichCoefficient = 1000000;  // complexes live in Z^n_{>=0}

struct LineScanner {
    const std::string& s;
    int line;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
    bool eol() {
        skip();
        return i >= s.size() || s[i] == '#';
    }
    int col() const { return static_cast<int>(i) + 1; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg, line, static_cast<int>(i) + 1);
    }
    bool ident_start() {
        skip();
        return i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) != 0);
    }
    std::string ident() {
        skip();
        if (!ident_start()) fail("expected identifier");
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string out = s.substr(i, j - i);
        i = j;
        return out;
    }
    bool peek_digit() {
        skip();
        return i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0;
    }
    long long integer() {
        skip();
        if (i < s.size() && s[i] == '-') fail("negative stoichiometric coefficient");
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) fail("expected integer");
        if (j - i > 7) fail("stoichiometric coefficient too large");
        long long v = std::stoll(s.substr(i, j - i));
        i = j;
        return v;
    }
    bool consume(const std::string& tok) {
        skip();
        if (s.compare(i, tok.size(), tok) == 0) {
            i += tok.size();
            return true;
        }
        return false;
    }
};

} // namespace detail

/// Parses the textual network format:
///
///   line    := complex "->" complex ";" label
///            | complex "<->" complex ";" label label
///            | "species:" ident+
///            | "#" comment
///   complex := "0" | term ("+" term)*
///   term    := [int] ident
///
/// Species order follows the declaration when present, first appearance
/// otherwise; complexes are deduplicated in first-appearance order; the
/// reversible shorthand expands forward-then-backward.
inline Network parse_network(const std::string& text, const ParseOptions& opt = {}) {
    Network net;
    std::map<std::string, std::size_t> species_idx;
    bool declared = false;

    auto species_id = [&](const std::string& name, detail::LineScanner& sc) {
        auto it = species_idx.find(name);
        if (it != species_idx.end()) return it->second;
        if (declared) sc.fail("species '" + name + "' not in the species declaration");
        species_idx[name] = net.species.size();
        net.species.push_back(name);
        return net.species.size() - 1;
    };

    // complexes are collected as name->coefficient maps; resolved to vectors
    // once the species universe is complete
    using ComplexMap = std::map<std::string, long long>;
    std::vector<ComplexMap> complexes;
    std::map<std::string, std::size_t> complex_idx;
    struct RawReaction {
        std::size_t source, target;
        std::string label;
        int line;
    };
    std::vector<RawReaction> raw;

    auto complex_key = [](const ComplexMap& c) {
        std::string k;
        for (const auto& [name, coef] : c) k += std::to_string(coef) + "*" + name + "+";
        return k;
    };

    auto parse_complex = [&](detail::LineScanner& sc) -> std::size_t {
        ComplexMap c;
        sc.skip();
        if (sc.i < sc.s.size() && sc.s[sc.i] == '-' && sc.s.compare(sc.i, 2, "->") != 0) {
            throw NegativeStoichiometry("negative stoichiometry (line " +
                                        std::to_string(sc.line) + ")");
        }
        if (sc.i < sc.s.size() && sc.s[sc.i] == '0' &&
            (sc.i + 1 >= sc.s.size() || !std::isalnum(static_cast<unsigned char>(sc.s[sc.i + 1])))) {
            ++sc.i;  // the empty complex
        } else {
            for (;;) {
                sc.skip();
                if (sc.i < sc.s.size() && sc.s[sc.i] == '-' && sc.s.compare(sc.i, 2, "->") != 0)
                    throw NegativeStoichiometry("negative stoichiometry (line " +
                                                std::to_string(sc.line) + ")");
                long long coef = 1;
                if (sc.peek_digit()) coef = sc.integer();
                if (coef > detail::kMaxStoichCoefficient)
                    sc.fail("stoichiometric coefficient exceeds 10^6");
                const std::string name = sc.ident();
                species_id(name, sc);
                c[name] += coef;
                if (!sc.consume("+")) break;
            }
        }
        const std::string key = complex_key(c);
        auto it = complex_idx.find(key);
        if (it != complex_idx.end()) return it->second;
        complex_idx[key] = complexes.size();
        complexes.push_back(std::move(c));
        return complexes.size() - 1;
    };

    int lineno = 0;
    std::size_t pos = 0;
    int autolabel_next = 1;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        detail::LineScanner sc{line, lineno};
        if (sc.eol()) continue;

        // species declaration
        {
            detail::LineScanner probe = sc;
            if (probe.ident_start()) {
                const std::string head = probe.ident();
                if (head == "species" && probe.consume(":")) {
                    if (declared || !net.species.empty())
                        probe.fail("species declaration must come first and appear once");
                    while (!probe.eol()) {
                        const std::string name = probe.ident();
                        if (species_idx.count(name)) probe.fail("duplicate species '" + name + "'");
                        species_idx[name] = net.species.size();
                        net.species.push_back(name);
                    }
                    declared = true;
                    continue;
                }
            }
        }

        const std::size_t src = parse_complex(sc);
        bool reversible = false;
        if (sc.consume("<->"))
            reversible = true;
        else if (!sc.consume("->"))
            sc.fail("expected '->' or '<->'");
        const std::size_t tgt = parse_complex(sc);

        std::string fwd_label, bwd_label;
        if (sc.consume(";")) {
            fwd_label = sc.ident();
            if (reversible) bwd_label = sc.ident();
        } else if (opt.autolabel) {
            fwd_label = "k" + std::to_string(autolabel_next++);
            if (reversible) bwd_label = "k" + std::to_string(autolabel_next++);
        } else {
            sc.fail("expected ';' and rate label (or use --autolabel)");
        }
        if (!sc.eol()) sc.fail("trailing input after reaction");

        raw.push_back({src, tgt, fwd_label, lineno});
        if (reversible) raw.push_back({tgt, src, bwd_label, lineno});
    }

    net.complexes.assign(complexes.size(), std::vector<long long>(net.species.size(), 0));
    for (std::size_t i = 0; i < complexes.size(); ++i)
        for (const auto& [name, coef] : complexes[i])
            net.complexes[i][species_idx.at(name)] = coef;

    for (const auto& rr : raw) {
        if (rr.source == rr.target)
            throw InvalidNetwork("self-loop reaction (line " + std::to_string(rr.line) + ")");
        net.reactions.push_back({rr.source, rr.target, rr.label});
    }
    net.validate(opt.allow_parallel);
    return net;
}

/// Canonical text form: species declaration, then one reaction per line with
/// terms in species order. parse(serialize(parse(t))) == parse(t).
inline std::string serialize_network(const Network& net) {
    std::string out = "species:";
    for (const auto& s : net.species) out += " " + s;
    out += "\n";
    auto complex_str = [&](std::size_t idx) {
        const auto& c = net.complexes[idx];
        std::string t;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            if (!t.empty()) t += " + ";
            if (c[i] != 1) t += std::to_string(c[i]) + " ";
            t += net.species[i];
        }
        return t.empty() ? std::string("0") : t;
    };
    for (const auto& rx : net.reactions)
        out += complex_str(rx.source) + " -> " + complex_str(rx.target) + " ; " + rx.label + "\n";
    return out;
}

/// Parses "k1=1, k2=3/2" into ordered (key, value) pairs.
inline std::vector<std::pair<std::string, Rat>> parse_assignment_pairs(const std::string& text) {
    std::vector<std::pair<std::string, Rat>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            bool blank = std::all_of(item.begin(), item.end(), [](unsigned char c) {
                return std::isspace(c) != 0;
            });
            if (blank) continue;
            throw UsageError("malformed assignment '" + item + "' (expected key=value)");
        }
        std::string key = item.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; }),
                  key.end());
        if (key.empty()) throw UsageError("assignment with empty key");
        out.emplace_back(key, parse_rational(item.substr(eq + 1)));
    }
    return out;
}

/// Rate assignment keyed by declared labels; every rate must be > 0 and every
/// label must be assigned.
inline RatVec parse_rates(const std::string& text, const Network& net) {
    RatVec rates(net.r());
    std::vector<bool> set(net.r(), false);
    for (const auto& [key, value] : parse_assignment_pairs(text)) {
        const std::size_t j = net.reaction_index(key);  // throws UnknownLabel
        if (value <= 0)
            throw NonpositiveRate("rate '" + key + "' must be positive, got " + rat_str(value));
        rates[j] = value;
        set[j] = true;
    }
    for (std::size_t j = 0; j < net.r(); ++j)
        if (!set[j])
            throw UsageError("no rate given for label '" + net.reactions[j].label + "'");
    return rates;
}

/// Total-amount assignment keyed c1..cd (indices into the conservation basis).
inline RatVec parse_totals(const std::string& text, std::size_t d) {
    RatVec totals(d);
    std::vector<bool> set(d, false);
    for (const auto& [key, value] : parse_assignment_pairs(text)) {
        if (key.size() < 2 || key[0] != 'c')
            throw UnknownLabel("unknown total key '" + key + "' (expected c1..c" +
                               std::to_string(d) + ")");
        std::size_t idx = 0;
        try {
            idx = std::stoul(key.substr(1));
        } catch (...) {
            throw UnknownLabel("unknown total key '" + key + "'");
        }
        if (idx < 1 || idx > d)
            throw UnknownLabel("total key '" + key + "' out of range 1.." + std::to_string(d));
        totals[idx - 1] = value;
        set[idx - 1] = true;
    }
    for (std::size_t i = 0; i < d; ++i)
        if (!set[i]) throw UsageError("no value for total c" + std::to_string(i + 1));
    return totals;
}

/// State assignment keyed by species names; unset species default to 0.
inline RatVec parse_state(const std::string& text, const Network& net) {
    RatVec x(net.n(), Rat(0));
    for (const auto& [key, value] : parse_assignment_pairs(text)) {
        const std::size_t i = net.species_index(key);
        if (value < 0) throw DomainError("negative concentration for '" + key + "'");
        x[i] = value;
    }
    return x;
}

} // namespace crn
