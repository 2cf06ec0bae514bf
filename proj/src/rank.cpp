#include "contagion/rank.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/error.hpp"
#include "contagion/log.hpp"
#include "contagion/rng.hpp"

namespace contagion {
namespace {

std::vector<RankEntry> bank_entries(std::span<const Bank> banks, const Eigen::VectorXd& scores) {
    std::vector<RankEntry> out;
    out.reserve(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i)
        out.push_back({banks[i].id, scores[static_cast<Eigen::Index>(i)], i});
    return out;
}

template <class Degree>
Ranking systemicness_impl(std::span<const Bank> banks, Degree degree) {
    std::vector<RankEntry> entries;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < banks.size(); ++i) {
        const auto& bs = banks[i].balance_sheet;
        if (banks[i].status == BankStatus::Defaulted || !(equity(bs) > 0.0)) {
            ++excluded;
            continue;
        }
        entries.push_back({banks[i].id, bs.total_assets() * leverage(bs) * degree(i), i});
    }
    if (excluded > 0)
        log(LogLevel::Info, "systemicness: excluded " + std::to_string(excluded) +
                                " defaulted or non-positive-equity banks");
    double top = 0.0;
    for (const auto& e : entries) top = std::max(top, e.score);
    if (top > 0.0)
        for (auto& e : entries) e.score /= top;
    return make_ranking(RankBasis::Systemicness, std::move(entries));
}

} // namespace

std::string to_string(RankBasis basis) {
    switch (basis) {
    case RankBasis::Random: return "random";
    case RankBasis::Size: return "size";
    case RankBasis::Systemicness: return "systemicness";
    case RankBasis::OverlapCentrality: return "overlap";
    case RankBasis::AssetVolume: return "volume";
    }
    return "unknown";
}

RankBasis parse_rank_basis(const std::string& name) {
    if (name == "random") return RankBasis::Random;
    if (name == "size") return RankBasis::Size;
    if (name == "systemicness") return RankBasis::Systemicness;
    if (name == "overlap") return RankBasis::OverlapCentrality;
    if (name == "volume") return RankBasis::AssetVolume;
    throw ValidationError("unknown ranking basis '" + name + "'");
}

std::vector<std::size_t> Ranking::indices() const {
    std::vector<std::size_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.index);
    return out;
}

std::size_t padded_count(double fraction, std::size_t count) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("fraction must lie in [0, 1]");
    // Guard against 0.3 * 90 = 27.000000000000004 rounding up to 28.
    const double raw = fraction * static_cast<double>(count);
    return std::min(count, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

std::vector<std::size_t> Ranking::top(double fraction) const {
    const auto k = padded_count(fraction, entries.size());
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < k; ++r) out.push_back(entries[r].index);
    return out;
}

Ranking make_ranking(RankBasis basis, std::vector<RankEntry> entries, std::uint64_t seed) {
    for (const auto& e : entries)
        if (!std::isfinite(e.score)) throw ValidationError("ranking score for '" + e.id + "' is not finite");
    std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return Ranking{basis, seed, std::move(entries)};
}

Ranking rank_random(const std::vector<std::string>& ids, std::uint64_t seed) {
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Engine eng = make_engine(seed);
    shuffle(std::span<std::size_t>(order), eng);
    // Score = reversed position, so the shuffled order is the ranking.
    std::vector<RankEntry> entries;
    entries.reserve(ids.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        entries.push_back({ids[order[r]], static_cast<double>(order.size() - r), order[r]});
    return make_ranking(RankBasis::Random, std::move(entries), seed);
}

Ranking rank_by_size(std::span<const Bank> banks) {
    Eigen::VectorXd scores(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i)
        scores[static_cast<Eigen::Index>(i)] = banks[i].balance_sheet.total_assets();
    return make_ranking(RankBasis::Size, bank_entries(banks, scores));
}

Ranking systemicness(const BipartiteNetwork& net, Connectedness connectedness) {
    const Eigen::MatrixXd value = net.holdings_value();
    return systemicness_impl(net.banks(), [&](std::size_t i) {
        const auto row = value.row(static_cast<Eigen::Index>(i));
        return connectedness == Connectedness::Degree ? static_cast<double>((row.array() > 0.0).count())
                                                      : row.sum();
    });
}

Ranking systemicness(const InterbankNetwork& net, Connectedness connectedness) {
    return systemicness_impl(net.banks(), [&](std::size_t i) {
        if (connectedness == Connectedness::Degree)
            return static_cast<double>(net.claims_of(i).size() + net.obligations_of(i).size());
        const auto& bs = net.bank(i).balance_sheet;
        return bs.interbank_assets + bs.interbank_liabilities;
    });
}

Eigen::VectorXd overlap_scores(const BipartiteNetwork& net) {
    const Eigen::MatrixXd value = net.holdings_value();
    const Eigen::VectorXd inv_depth = net.depths().cwiseInverse();
    // Overlap matrix W = V diag(1/D) V^T; drop self-overlap on the diagonal.
    const Eigen::MatrixXd w = value * inv_depth.asDiagonal() * value.transpose();
    return w.rowwise().sum() - w.diagonal();
}

Ranking overlap_centrality(const BipartiteNetwork& net) {
    return make_ranking(RankBasis::OverlapCentrality, bank_entries(net.banks(), overlap_scores(net)));
}

Ranking rank_assets_by_volume(const BipartiteNetwork& net) {
    const Eigen::VectorXd volume = net.holdings_value().colwise().sum().transpose();
    std::vector<RankEntry> entries;
    for (std::size_t k = 0; k < net.num_assets(); ++k)
        entries.push_back({net.asset(k).id, volume[static_cast<Eigen::Index>(k)], k});
    return make_ranking(RankBasis::AssetVolume, std::move(entries));
}

} // namespace contagion
