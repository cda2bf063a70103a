#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crn/netio.hpp"
#include "crn/network.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline crn::Network load_net(const std::string& name) {
    return crn::parse_network(read_file(std::string(CRN_DATA_DIR) + "/" + name));
}

inline crn::Network mckeithan() { return load_net("mckeithan.crn"); }
inline crn::Network extended_mckeithan() { return load_net("extended_mckeithan.crn"); }
inline crn::Network g1() { return load_net("g1.crn"); }
inline crn::Network g2() { return load_net("g2.crn"); }
inline crn::Network lotka() { return load_net("lotka.crn"); }

using Rng = std::mt19937;

inline crn::Rat random_rat(Rng& rng, int max_num = 9, int max_den = 9) {
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    return crn::Rat(num(rng), den(rng));
}

inline crn::Rat random_positive_rat(Rng& rng, int max_num = 9, int max_den = 9) {
    std::uniform_int_distribution<int> num(1, max_num), den(1, max_den);
    return crn::Rat(num(rng), den(rng));
}

/// Random valid network: n <= max_n species, r <= max_r reactions, complexes
/// with coefficients <= 2. Complexes are exactly those used by reactions.
inline crn::Network random_network(Rng& rng, std::size_t max_n = 6, std::size_t max_r = 10) {
    std::uniform_int_distribution<std::size_t> nd(2, max_n);
    const std::size_t n = nd(rng);
    std::uniform_int_distribution<std::size_t> rd(1, max_r);
    const std::size_t want_r = rd(rng);

    auto random_complex = [&] {
        std::vector<long long> c(n, 0);
        std::uniform_int_distribution<int> terms(0, 2), coef(1, 2);
        std::uniform_int_distribution<std::size_t> which(0, n - 1);
        const int t = terms(rng);
        for (int i = 0; i < t; ++i) c[which(rng)] += coef(rng);
        return c;
    };

    std::vector<std::vector<long long>> pool;
    for (int i = 0; i < 8; ++i) {
        auto c = random_complex();
        if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (int attempts = 0; attempts < 200 && pairs.size() < want_r; ++attempts) {
        const std::size_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end()) continue;
        pairs.push_back({a, b});
    }
    if (pairs.empty()) pairs.push_back({0, 1});

    // compact to the complexes actually used
    crn::Network net;
    for (std::size_t i = 0; i < n; ++i) net.species.push_back("S" + std::to_string(i + 1));
    std::vector<long long> seen(pool.size(), -1);
    auto use = [&](std::size_t i) {
        if (seen[i] < 0) {
            seen[i] = static_cast<long long>(net.complexes.size());
            net.complexes.push_back(pool[i]);
        }
        return static_cast<std::size_t>(seen[i]);
    };
    for (std::size_t k = 0; k < pairs.size(); ++k)
        net.reactions.push_back(
            {use(pairs[k].first), use(pairs[k].second), "k" + std::to_string(k + 1)});
    net.validate();
    return net;
}

inline crn::RatVec random_rates(Rng& rng, const crn::Network& net) {
    crn::RatVec rates;
    for (std::size_t j = 0; j < net.r(); ++j) rates.push_back(random_positive_rat(rng));
    return rates;
}

} // namespace testutil
