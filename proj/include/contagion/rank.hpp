#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contagion/core.hpp"

namespace contagion {

enum class RankBasis { Random, Size, Systemicness, OverlapCentrality, AssetVolume };

std::string to_string(RankBasis basis);
/// Accepts "random", "size", "systemicness", "overlap", "volume".
RankBasis parse_rank_basis(const std::string& name);

struct RankEntry {
    std::string id;
    double score = 0.0;
    std::size_t index = 0; // position in the source network
};

/// Descending by score, ties broken by ascending id.
struct Ranking {
    RankBasis basis = RankBasis::Size;
    std::uint64_t seed = 0; // Random basis only
    std::vector<RankEntry> entries;

    std::vector<std::size_t> indices() const;
    /// Indices of the top ceil(fraction * size) entries.
    std::vector<std::size_t> top(double fraction) const;
};

/// Number of entries padded at `fraction` of `count` items.
std::size_t padded_count(double fraction, std::size_t count);

Ranking make_ranking(RankBasis basis, std::vector<RankEntry> entries, std::uint64_t seed = 0);

/// Uniformly random order of `ids`; a pure function of seed.
Ranking rank_random(const std::vector<std::string>& ids, std::uint64_t seed);

/// Score = total assets.
Ranking rank_by_size(std::span<const Bank> banks);

enum class Connectedness { Degree, WeightedDegree };

/// Score = size * leverage * connectedness, divided by the population
/// maximum. Banks that are not solvent or have non-positive equity are
/// excluded (and logged). Bipartite connectedness counts held assets
/// (or their marked value); interbank counts in- plus out-edges (or their
/// total amount).
Ranking systemicness(const BipartiteNetwork& net, Connectedness connectedness = Connectedness::Degree);
Ranking systemicness(const InterbankNetwork& net, Connectedness connectedness = Connectedness::Degree);

/// Liquidity-weighted portfolio overlap:
///   score_i = sum_{j != i} sum_k value(i,k) * value(j,k) / depth_k
/// with holdings valued at current prices.
Eigen::VectorXd overlap_scores(const BipartiteNetwork& net);
Ranking overlap_centrality(const BipartiteNetwork& net);

/// Score_k = total system holdings of asset k at current prices.
Ranking rank_assets_by_volume(const BipartiteNetwork& net);

} // namespace contagion
