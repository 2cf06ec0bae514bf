#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "contagion/core.hpp"
#include "contagion/rng.hpp"

namespace contagion {

struct DegreeDistribution {
    enum class Kind { ErdosRenyi, PowerLaw };
    Kind kind = Kind::ErdosRenyi;
    double exponent = 2.5; // PowerLaw only

    static DegreeDistribution erdos_renyi() { return {Kind::ErdosRenyi, 0.0}; }
    static DegreeDistribution power_law(double exponent) { return {Kind::PowerLaw, exponent}; }
};

/// Uniform means every bank has size total_asset_scale. PowerLaw draws a
/// continuous bounded Pareto on [total_asset_scale, total_asset_scale * n_banks].
struct SizeDistribution {
    enum class Kind { Uniform, PowerLaw };
    Kind kind = Kind::Uniform;
    double exponent = 2.5; // PowerLaw only

    static SizeDistribution uniform() { return {Kind::Uniform, 0.0}; }
    static SizeDistribution power_law(double exponent) { return {Kind::PowerLaw, exponent}; }
};

/// Interbank generator parameters. avg_degree is the expected out-degree
/// (number of borrowers per lender).
struct NetGenParams {
    std::size_t n_banks = 100;
    double avg_degree = 1.0;
    DegreeDistribution degree_dist;
    SizeDistribution size_dist;
    double capital_ratio = 0.04;
    double interbank_fraction = 0.2;
    double total_asset_scale = 1.0;
    double liquid_fraction = 0.0; // share of external assets held liquid
    std::uint64_t seed = 0;
};

void validate(const NetGenParams& params);

/// Draws n bank sizes from the given distribution.
std::vector<double> sample_sizes(const SizeDistribution& dist, std::size_t n, double scale, Engine& eng);

/// Random interbank network. Each lender splits interbank_fraction of its
/// assets equally over its borrowers; equity is capital_ratio of total
/// assets and deposits fill the remaining liabilities. A bank whose
/// interbank liabilities leave no room for deposits has its external
/// assets topped up so that deposits are zero.
InterbankNetwork gen_interbank(const NetGenParams& params);

struct BipartiteParams {
    std::size_t n_banks = 100;
    std::size_t n_assets = 20;
    double bank_avg_degree = 4.0;
    SizeDistribution size_dist;
    double capital_ratio = 0.05; // in (0, 1]; 1 means no debt
    double depth_factor = 1.0;   // may be +infinity
    double liquid_fraction = 0.0;
    double total_asset_scale = 1.0;
    std::uint64_t seed = 0;
};

void validate(const BipartiteParams& params);

/// Random bank-asset network. Each bank holds a uniformly random subset of
/// floor(d) or floor(d)+1 assets (expected size d), split equally; each
/// asset's depth is depth_factor times the system's total holdings of it.
BipartiteNetwork gen_bipartite(const BipartiteParams& params);

} // namespace contagion
