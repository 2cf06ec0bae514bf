#include "contagion/netgen.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "contagion/error.hpp"
#include "contagion/log.hpp"

namespace contagion {
namespace {

std::string bank_name(std::size_t i, std::size_t n) {
    const auto width = std::to_string(n > 0 ? n - 1 : 0).size();
    auto digits = std::to_string(i);
    return "B" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::string asset_name(std::size_t k, std::size_t n) {
    auto s = bank_name(k, n);
    s[0] = 'A';
    return s;
}

// Ordered (lender, borrower) pairs, each present independently with
// probability p. Geometric skipping over the n(n-1) linearized pairs.
std::vector<std::pair<std::size_t, std::size_t>> erdos_renyi_edges(std::size_t n, double p, Engine& eng) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (n < 2 || p <= 0.0) return edges;
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1);
    edges.reserve(static_cast<std::size_t>(std::min<double>(static_cast<double>(m), m * p * 1.2 + 16)));
    std::uint64_t pos = geometric(eng, p);
    while (pos < m) {
        const auto lender = static_cast<std::size_t>(pos / (n - 1));
        auto borrower = static_cast<std::size_t>(pos % (n - 1));
        if (borrower >= lender) ++borrower;
        edges.emplace_back(lender, borrower);
        const auto skip = geometric(eng, p);
        if (skip >= m - pos) break;
        pos += skip + 1;
    }
    return edges;
}

// Out-degrees follow the power law exactly (up to stochastic rounding);
// each out-stub picks its borrower with probability proportional to an
// independent power-law weight. Self-loops and repeated pairs are dropped.
std::vector<std::pair<std::size_t, std::size_t>> power_law_edges(std::size_t n, double z, double exponent,
                                                                 Engine& eng) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (n < 2 || z <= 0.0) return edges;
    const double cap = static_cast<double>(n - 1);
    std::vector<double> out_w(n), in_w(n);
    for (auto& w : out_w) w = bounded_pareto(eng, exponent, 1.0, cap);
    for (auto& w : in_w) w = bounded_pareto(eng, exponent, 1.0, cap);
    const double out_mean = std::accumulate(out_w.begin(), out_w.end(), 0.0) / static_cast<double>(n);

    std::vector<double> cumulative(n);
    std::partial_sum(in_w.begin(), in_w.end(), cumulative.begin());
    const double total_in = cumulative.back();

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = std::min(cap, z * out_w[i] / out_mean);
        auto k = static_cast<std::size_t>(std::floor(target));
        if (bernoulli(eng, target - std::floor(target))) ++k;
        for (std::size_t s = 0; s < k; ++s) {
            const double u = uniform01(eng) * total_in;
            auto j = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                              cumulative.begin());
            j = std::min(j, n - 1);
            if (j == i || !seen.emplace(i, j).second) {
                ++dropped;
                continue;
            }
            edges.emplace_back(i, j);
        }
    }
    if (dropped > 0)
        log(LogLevel::Debug, "power-law generator dropped " + std::to_string(dropped) +
                                 " self-loop or duplicate stubs");
    std::sort(edges.begin(), edges.end());
    return edges;
}

} // namespace

void validate(const NetGenParams& p) {
    if (p.n_banks < 2) throw ValidationError("n_banks must be at least 2");
    if (!(p.avg_degree >= 0.0) || !std::isfinite(p.avg_degree))
        throw ValidationError("avg_degree must be finite and non-negative");
    if (!(p.capital_ratio > 0.0 && p.capital_ratio < 1.0))
        throw ValidationError("capital_ratio must lie in (0, 1)");
    if (!(p.interbank_fraction >= 0.0 && p.interbank_fraction <= 1.0))
        throw ValidationError("interbank_fraction must lie in [0, 1]");
    if (!(p.liquid_fraction >= 0.0 && p.liquid_fraction <= 1.0))
        throw ValidationError("liquid_fraction must lie in [0, 1]");
    if (!(p.total_asset_scale > 0.0) || !std::isfinite(p.total_asset_scale))
        throw ValidationError("total_asset_scale must be positive");
    if (p.degree_dist.kind == DegreeDistribution::Kind::PowerLaw && !(p.degree_dist.exponent > 1.0))
        throw ValidationError("power-law degree exponent must exceed 1");
    if (p.size_dist.kind == SizeDistribution::Kind::PowerLaw && !(p.size_dist.exponent > 1.0))
        throw ValidationError("power-law size exponent must exceed 1");
}

std::vector<double> sample_sizes(const SizeDistribution& dist, std::size_t n, double scale, Engine& eng) {
    std::vector<double> sizes(n, scale);
    if (dist.kind == SizeDistribution::Kind::PowerLaw) {
        const double cap = scale * static_cast<double>(std::max<std::size_t>(n, 2));
        for (auto& s : sizes) s = bounded_pareto(eng, dist.exponent, scale, cap);
    }
    return sizes;
}

InterbankNetwork gen_interbank(const NetGenParams& params) {
    validate(params);
    const std::size_t n = params.n_banks;
    Engine size_eng = make_engine(derive_seed(params.seed, 0));
    Engine edge_eng = make_engine(derive_seed(params.seed, 1));

    const auto sizes = sample_sizes(params.size_dist, n, params.total_asset_scale, size_eng);
    const auto pairs = params.degree_dist.kind == DegreeDistribution::Kind::ErdosRenyi
                           ? erdos_renyi_edges(n, std::min(1.0, params.avg_degree / static_cast<double>(n - 1)),
                                               edge_eng)
                           : power_law_edges(n, params.avg_degree, params.degree_dist.exponent, edge_eng);

    std::vector<std::size_t> out_degree(n, 0);
    for (const auto& [lender, borrower] : pairs) ++out_degree[lender];

    std::vector<double> interbank_assets(n, 0.0);
    std::size_t reassigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out_degree[i] > 0)
            interbank_assets[i] = params.interbank_fraction * sizes[i];
        else if (params.interbank_fraction > 0.0)
            ++reassigned;
    }
    if (reassigned > 0)
        log(LogLevel::Info, std::to_string(reassigned) +
                                " banks without borrowers: interbank assets reassigned to illiquid assets");

    std::vector<Exposure> exposures;
    exposures.reserve(pairs.size());
    std::vector<double> interbank_liabilities(n, 0.0);
    for (const auto& [lender, borrower] : pairs) {
        const double amount = interbank_assets[lender] / static_cast<double>(out_degree[lender]);
        if (!(amount > 0.0)) continue; // interbank_fraction == 0
        exposures.push_back({lender, borrower, amount});
        interbank_liabilities[borrower] += amount;
    }

    std::vector<Bank> banks(n);
    std::size_t topped_up = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double total = sizes[i];
        const bool top_up = interbank_liabilities[i] > (1.0 - params.capital_ratio) * total;
        if (top_up) {
            total = interbank_liabilities[i] / (1.0 - params.capital_ratio);
            ++topped_up;
        }
        const double external = total - interbank_assets[i];
        auto& bs = banks[i].balance_sheet;
        bs.liquid_assets = params.liquid_fraction * external;
        bs.illiquid_assets = external - bs.liquid_assets;
        bs.deposits = top_up ? 0.0 : total - params.capital_ratio * total - interbank_liabilities[i];
        banks[i].id = bank_name(i, n);
    }
    if (topped_up > 0)
        log(LogLevel::Info, std::to_string(topped_up) +
                                " banks had interbank liabilities above their debt capacity; external assets topped up");

    return InterbankNetwork::with_derived_positions(std::move(banks), std::move(exposures));
}

void validate(const BipartiteParams& p) {
    if (p.n_banks < 1) throw ValidationError("n_banks must be at least 1");
    if (p.n_assets < 1) throw ValidationError("n_assets must be at least 1");
    if (!(p.bank_avg_degree >= 0.0) || p.bank_avg_degree > static_cast<double>(p.n_assets))
        throw ValidationError("bank_avg_degree must lie in [0, n_assets]");
    if (!(p.capital_ratio > 0.0 && p.capital_ratio <= 1.0))
        throw ValidationError("capital_ratio must lie in (0, 1]");
    if (!(p.depth_factor > 0.0)) throw ValidationError("depth_factor must be positive");
    if (!(p.liquid_fraction >= 0.0 && p.liquid_fraction < 1.0))
        throw ValidationError("liquid_fraction must lie in [0, 1)");
    if (!(p.total_asset_scale > 0.0) || !std::isfinite(p.total_asset_scale))
        throw ValidationError("total_asset_scale must be positive");
    if (p.size_dist.kind == SizeDistribution::Kind::PowerLaw && !(p.size_dist.exponent > 1.0))
        throw ValidationError("power-law size exponent must exceed 1");
}

BipartiteNetwork gen_bipartite(const BipartiteParams& params) {
    validate(params);
    const std::size_t n = params.n_banks;
    const std::size_t m = params.n_assets;
    Engine size_eng = make_engine(derive_seed(params.seed, 0));
    Engine link_eng = make_engine(derive_seed(params.seed, 1));

    const auto sizes = sample_sizes(params.size_dist, n, params.total_asset_scale, size_eng);
    Eigen::MatrixXd units = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    std::vector<std::size_t> pool(m);
    std::vector<Bank> banks(n);
    const double base = std::floor(params.bank_avg_degree);
    const double frac = params.bank_avg_degree - base;
    std::size_t relinked = 0;

    for (std::size_t i = 0; i < n; ++i) {
        auto degree = static_cast<std::size_t>(base);
        if (bernoulli(link_eng, frac)) ++degree;
        degree = std::min(degree, m);
        if (degree == 0) {
            degree = 1;
            ++relinked;
        }
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        // Partial Fisher-Yates: the first `degree` slots become the subset.
        for (std::size_t s = 0; s < degree; ++s) {
            const auto j = s + static_cast<std::size_t>(uniform_index(link_eng, m - s));
            std::swap(pool[s], pool[j]);
        }
        const double invested = (1.0 - params.liquid_fraction) * sizes[i];
        for (std::size_t s = 0; s < degree; ++s)
            units(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pool[s])) =
                invested / static_cast<double>(degree);

        auto& bs = banks[i].balance_sheet;
        bs.liquid_assets = params.liquid_fraction * sizes[i];
        bs.deposits = (1.0 - params.capital_ratio) * sizes[i];
        banks[i].id = bank_name(i, n);
    }
    if (relinked > 0)
        log(LogLevel::Info, std::to_string(relinked) + " banks drew no assets and were linked to one at random");

    std::vector<Asset> assets(m);
    const Eigen::RowVectorXd held = units.colwise().sum();
    for (std::size_t k = 0; k < m; ++k) {
        const double volume = held[static_cast<Eigen::Index>(k)] > 0.0 ? held[static_cast<Eigen::Index>(k)]
                                                                       : params.total_asset_scale;
        assets[k] = {asset_name(k, m), params.depth_factor * volume, 1.0};
    }
    return BipartiteNetwork::with_marked_holdings(std::move(banks), std::move(assets), std::move(units));
}

} // namespace contagion
