#include <algorithm>
#include <cmath>

#include "contagion/error.hpp"
#include "contagion/io.hpp"
#include "contagion/rng.hpp"

namespace contagion {

namespace {

std::string padded_id(char prefix, std::size_t i, std::size_t n) {
    const auto width = std::to_string(n > 0 ? n - 1 : 0).size();
    auto digits = std::to_string(i);
    return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

} // namespace

BipartiteNetwork gen_synthetic_eba(std::uint64_t seed, const SyntheticEbaOptions& o) {
    if (o.n_banks == 0 || o.n_assets == 0) throw ValidationError("synthetic panel needs banks and assets");
    if (!(o.min_capital > 0.0 && o.min_capital <= o.max_capital && o.max_capital < 1.0))
        throw ValidationError("capital range must satisfy 0 < min <= max < 1");
    if (!(o.min_liquid >= 0.0 && o.min_liquid <= o.max_liquid && o.max_liquid < 1.0))
        throw ValidationError("liquid range must satisfy 0 <= min <= max < 1");
    if (!(o.min_degree >= 1.0 && o.min_degree <= o.max_degree)) throw ValidationError("bad degree range");
    if (!(o.depth_factor > 0.0)) throw ValidationError("depth_factor must be positive");

    auto eng = make_engine(derive_seed(seed, 0xEBA));
    const auto nb = static_cast<Eigen::Index>(o.n_banks);
    const auto na = static_cast<Eigen::Index>(o.n_assets);

    std::vector<double> popularity(o.n_assets);
    for (auto& w : popularity) w = bounded_pareto(eng, o.popularity_exponent, 1.0, 1000.0);

    std::vector<Bank> banks(o.n_banks);
    Eigen::MatrixXd units = Eigen::MatrixXd::Zero(nb, na);
    for (std::size_t i = 0; i < o.n_banks; ++i) {
        const double size = bounded_pareto(eng, o.size_exponent, 1.0, static_cast<double>(o.n_banks));
        const double capital = o.min_capital + (o.max_capital - o.min_capital) * uniform01(eng);
        const double liquid = o.min_liquid + (o.max_liquid - o.min_liquid) * uniform01(eng);
        auto degree = static_cast<std::size_t>(
            std::floor(bounded_pareto(eng, o.degree_exponent, o.min_degree, o.max_degree + 1.0)));
        degree = std::clamp<std::size_t>(degree, 1, o.n_assets);

        // Weighted sampling without replacement.
        std::vector<double> weights = popularity;
        std::vector<std::size_t> chosen;
        double total_weight = 0.0;
        for (double w : weights) total_weight += w;
        while (chosen.size() < degree) {
            double target = uniform01(eng) * total_weight;
            std::size_t k = 0;
            for (; k + 1 < weights.size(); ++k) {
                if (target < weights[k]) break;
                target -= weights[k];
            }
            if (weights[k] == 0.0) continue;
            total_weight -= weights[k];
            weights[k] = 0.0;
            chosen.push_back(k);
        }

        std::vector<double> shares(chosen.size());
        double share_total = 0.0;
        for (auto& s : shares) {
            s = -std::log(uniform01_open_left(eng));
            share_total += s;
        }
        const double securities = size * (1.0 - liquid);
        for (std::size_t j = 0; j < chosen.size(); ++j)
            units(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(chosen[j])) =
                securities * shares[j] / share_total;

        auto& b = banks[i];
        b.id = padded_id('E', i, o.n_banks);
        b.balance_sheet.liquid_assets = size * liquid;
        b.balance_sheet.illiquid_assets = units.row(static_cast<Eigen::Index>(i)).sum();
        b.balance_sheet.deposits = (1.0 - capital) * size;
    }

    std::vector<Asset> assets(o.n_assets);
    for (std::size_t k = 0; k < o.n_assets; ++k) {
        const double held = units.col(static_cast<Eigen::Index>(k)).sum();
        assets[k] = {padded_id('S', k, o.n_assets), o.depth_factor * (held > 0.0 ? held : 1.0), 1.0};
    }
    return BipartiteNetwork::with_marked_holdings(std::move(banks), std::move(assets), std::move(units));
}

} // namespace contagion
