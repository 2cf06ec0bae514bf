#include "contagion/intervene.hpp"

#include <algorithm>
#include <tuple>

#include "contagion/parallel.hpp"
#include "contagion/rng.hpp"

namespace contagion {

void pad_banks(FiresaleState& state, const std::vector<std::size_t>& banks) {
    for (auto i : banks) {
        if (i >= state.status.size()) throw ValidationError("unknown bank index " + std::to_string(i));
        if (state.status[i] == BankStatus::Defaulted)
            throw ValidationError("bank '" + state.network->bank(i).id + "' has already defaulted");
        state.status[i] = BankStatus::Padded;
    }
}

void pad_banks(FiresaleState& state, const std::vector<std::string>& bank_ids) {
    std::vector<std::size_t> idx;
    for (const auto& id : bank_ids) idx.push_back(state.network->bank_index(id));
    pad_banks(state, idx);
}

void pad_assets(FiresaleState& state, const std::vector<std::size_t>& assets) {
    for (auto k : assets) {
        if (k >= state.asset_padded.size()) throw ValidationError("unknown asset index " + std::to_string(k));
        state.asset_padded[k] = true;
    }
}

void pad_assets(FiresaleState& state, const std::vector<std::string>& asset_ids) {
    std::vector<std::size_t> idx;
    for (const auto& id : asset_ids) idx.push_back(state.network->asset_index(id));
    pad_assets(state, idx);
}

double guarantee_cost(const BipartiteNetwork& net, const std::vector<std::size_t>& padded_banks,
                      const std::vector<std::size_t>& padded_assets) {
    double cost = 0.0;
    for (auto i : padded_banks) cost += net.bank(i).balance_sheet.total_assets();
    if (!padded_assets.empty()) {
        const Eigen::VectorXd volume = net.holdings_value().colwise().sum().transpose();
        for (auto k : padded_assets) {
            if (k >= net.num_assets()) throw ValidationError("unknown asset index " + std::to_string(k));
            cost += volume[static_cast<Eigen::Index>(k)];
        }
    }
    return cost;
}

double guarantee_drawn(const FiresaleState& state) {
    double drawn = 0.0;
    for (std::size_t i = 0; i < state.status.size(); ++i)
        if (state.status[i] == BankStatus::Padded) drawn += std::max(0.0, -state.equity(i));
    return drawn;
}

std::string to_string(InterventionKind kind) { return kind == InterventionKind::Bailout ? "bailout" : "buyout"; }

InterventionKind parse_intervention_kind(const std::string& name) {
    if (name == "bailout") return InterventionKind::Bailout;
    if (name == "buyout") return InterventionKind::Buyout;
    throw ValidationError("unknown intervention kind '" + name + "'");
}

std::vector<Scenario> single_asset_scenarios(const BipartiteNetwork& net, double haircut) {
    std::vector<Scenario> out;
    for (const auto& a : net.assets()) out.push_back({a.id, Shock::asset(a.id, haircut)});
    return out;
}

Ranking intervention_ranking(const BipartiteNetwork& net, InterventionKind kind, RankBasis basis,
                             std::uint64_t seed, std::size_t scenario_index) {
    if (kind == InterventionKind::Bailout) {
        switch (basis) {
        case RankBasis::Random: {
            std::vector<std::string> ids;
            for (const auto& b : net.banks()) ids.push_back(b.id);
            return rank_random(ids, derive_seed(seed, scenario_index, 2));
        }
        case RankBasis::Size: return rank_by_size(net.banks());
        case RankBasis::Systemicness: return systemicness(net);
        case RankBasis::OverlapCentrality: return overlap_centrality(net);
        case RankBasis::AssetVolume: break;
        }
        throw ValidationError("ranking basis 'volume' ranks assets, not banks");
    }
    switch (basis) {
    case RankBasis::Random: {
        std::vector<std::string> ids;
        for (const auto& a : net.assets()) ids.push_back(a.id);
        return rank_random(ids, derive_seed(seed, scenario_index, 2));
    }
    case RankBasis::AssetVolume: return rank_assets_by_volume(net);
    default: break;
    }
    throw ValidationError("ranking basis '" + to_string(basis) + "' does not apply to assets");
}

namespace {

struct Cell {
    std::size_t scenario;
    std::size_t strategy;
    std::size_t fraction;
};

InterventionRecord run_cell(const BipartiteNetwork& net, InterventionKind kind, std::optional<RankBasis> basis,
                            const std::optional<Ranking>& ranking, double fraction, const Scenario& scenario,
                            std::size_t scenario_index, const InterventionConfig& config) {
    auto state = initial_state(net);
    std::vector<std::size_t> padded;
    InterventionRecord rec;
    if (ranking) {
        padded = ranking->top(fraction);
        for (std::size_t r = 0; r < padded.size(); ++r) rec.padded_ids.push_back(ranking->entries[r].id);
    }
    if (kind == InterventionKind::Bailout) {
        pad_banks(state, padded);
        rec.guarantee_size = guarantee_cost(net, padded, {});
    } else {
        pad_assets(state, padded);
        rec.guarantee_size = guarantee_cost(net, {}, padded);
    }
    auto fs = config.firesale;
    fs.shock = scenario.shock;
    fs.seed = derive_seed(config.seed, scenario_index, 1);
    apply_shock(state, fs.shock, fs.seed);
    const auto result = run_firesale(state, fs);

    rec.scenario_id = scenario.id;
    rec.kind = kind;
    rec.strategy = basis;
    rec.padded_fraction = fraction;
    rec.n_defaults = result.defaulted.size();
    rec.fraction_defaulted = result.fraction_defaulted;
    rec.guarantee_drawn = guarantee_drawn(state);
    rec.systemic = result.fraction_defaulted > fs.systemic_threshold;
    return rec;
}

std::vector<InterventionRecord> run_experiment(const BipartiteNetwork& net, InterventionKind kind,
                                               const std::vector<RankBasis>& strategies,
                                               const std::vector<double>& fractions,
                                               const std::vector<Scenario>& scenarios,
                                               const InterventionConfig& config) {
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("padding fractions must lie in [0, 1]");
    validate(config.firesale);

    // Deterministic rankings are computed once; Random ones per scenario.
    std::vector<std::optional<Ranking>> fixed(strategies.size());
    for (std::size_t s = 0; s < strategies.size(); ++s)
        if (strategies[s] != RankBasis::Random) fixed[s] = intervention_ranking(net, kind, strategies[s], config.seed, 0);

    std::vector<Cell> cells;
    for (std::size_t c = 0; c < scenarios.size(); ++c)
        for (std::size_t s = 0; s < strategies.size(); ++s)
            for (std::size_t f = 0; f < fractions.size(); ++f) cells.push_back({c, s, f});

    std::vector<InterventionRecord> records(cells.size());
    parallel_for(cells.size(), config.jobs, [&](std::size_t j) {
        const auto& cell = cells[j];
        const auto basis = strategies[cell.strategy];
        const auto ranking = fixed[cell.strategy]
                                 ? fixed[cell.strategy]
                                 : std::optional<Ranking>(intervention_ranking(net, kind, basis, config.seed, cell.scenario));
        records[j] = run_cell(net, kind, basis, ranking, fractions[cell.fraction], scenarios[cell.scenario],
                              cell.scenario, config);
    });
    return records;
}

} // namespace

std::vector<InterventionRecord> bailout_experiment(const BipartiteNetwork& net, const std::vector<RankBasis>& strategies,
                                                   const std::vector<double>& fractions,
                                                   const std::vector<Scenario>& scenarios,
                                                   const InterventionConfig& config) {
    return run_experiment(net, InterventionKind::Bailout, strategies, fractions, scenarios, config);
}

std::vector<InterventionRecord> buyout_experiment(const BipartiteNetwork& net, const std::vector<RankBasis>& strategies,
                                                  const std::vector<double>& fractions,
                                                  const std::vector<Scenario>& scenarios,
                                                  const InterventionConfig& config) {
    return run_experiment(net, InterventionKind::Buyout, strategies, fractions, scenarios, config);
}

std::vector<InterventionRecord> baseline_records(const BipartiteNetwork& net, const std::vector<Scenario>& scenarios,
                                                 const InterventionConfig& config, InterventionKind kind) {
    validate(config.firesale);
    std::vector<InterventionRecord> records(scenarios.size());
    parallel_for(scenarios.size(), config.jobs, [&](std::size_t c) {
        records[c] = run_cell(net, kind, std::nullopt, std::nullopt, 0.0, scenarios[c], c, config);
    });
    return records;
}

} // namespace contagion
