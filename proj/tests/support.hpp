#pragma once

#include <string>
#include <vector>

#include "contagion/core.hpp"
#include "contagion/rng.hpp"

namespace support {

inline contagion::Bank bank(std::string id, double external, double deposits, double liquid = 0.0) {
    contagion::Bank b;
    b.id = std::move(id);
    b.balance_sheet.liquid_assets = liquid;
    b.balance_sheet.illiquid_assets = external;
    b.balance_sheet.deposits = deposits;
    return b;
}

/// Random network with non-negative starting equity for every bank.
inline contagion::InterbankNetwork random_interbank(contagion::Engine& eng, std::size_t n, double density,
                                                    double max_equity = 5.0) {
    using namespace contagion;
    std::vector<Exposure> edges;
    std::vector<double> owed(n, 0.0), lent(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && bernoulli(eng, density)) {
                const double amount = 1.0 + 9.0 * uniform01(eng);
                edges.push_back({i, j, amount});
                lent[i] += amount;
                owed[j] += amount;
            }
    std::vector<Bank> banks;
    for (std::size_t i = 0; i < n; ++i) {
        const double external = 5.0 + 20.0 * uniform01(eng);
        const double eq = max_equity * uniform01(eng);
        const double deposits = std::max(0.0, external + lent[i] - owed[i] - eq);
        banks.push_back(bank("B" + std::to_string(i), external + (deposits == 0.0 ? owed[i] : 0.0), deposits));
    }
    return InterbankNetwork::with_derived_positions(std::move(banks), std::move(edges));
}

} // namespace support
