#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contagion/firesale.hpp"
#include "contagion/rank.hpp"

namespace contagion {

/// Padded banks never default and never sell; losses they absorb stay with
/// the guarantor. Throws ValidationError for unknown banks.
void pad_banks(FiresaleState& state, const std::vector<std::size_t>& banks);
void pad_banks(FiresaleState& state, const std::vector<std::string>& bank_ids);

/// Sales of padded assets do not move their price. Exogenous shocks still apply.
void pad_assets(FiresaleState& state, const std::vector<std::size_t>& assets);
void pad_assets(FiresaleState& state, const std::vector<std::string>& asset_ids);

/// Nominal guarantee: total assets of padded banks plus system holdings of
/// padded assets, both at the network's (pre-shock) prices.
double guarantee_cost(const BipartiteNetwork& net, const std::vector<std::size_t>& padded_banks,
                      const std::vector<std::size_t>& padded_assets);

/// Losses absorbed by the guarantor: sum of negative equity over padded banks.
double guarantee_drawn(const FiresaleState& state);

enum class InterventionKind { Bailout, Buyout };
std::string to_string(InterventionKind kind);
InterventionKind parse_intervention_kind(const std::string& name);

struct Scenario {
    std::string id;
    Shock shock;
};

/// One scenario per asset, each devaluing that asset by `haircut`.
std::vector<Scenario> single_asset_scenarios(const BipartiteNetwork& net, double haircut = 0.3);

struct InterventionRecord {
    std::string scenario_id;
    InterventionKind kind = InterventionKind::Bailout;
    std::optional<RankBasis> strategy; // empty: no guarantees
    double padded_fraction = 0.0;
    std::vector<std::string> padded_ids; // in ranking order
    std::size_t n_defaults = 0;
    double fraction_defaulted = 0.0;
    double guarantee_size = 0.0;
    double guarantee_drawn = 0.0;
    bool systemic = false;

    std::string strategy_name() const { return strategy ? to_string(*strategy) : "none"; }
    friend bool operator==(const InterventionRecord&, const InterventionRecord&) = default;
};

struct InterventionConfig {
    FiresaleConfig firesale; // impact, policy, thresholds; the shock comes from each scenario
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Every (strategy, fraction, scenario) cell: rank banks, pad the top
/// ceil(f * N), shock, run the fire sale. Random rankings are redrawn per
/// (seed, scenario). Records are ordered by scenario, strategy, fraction.
std::vector<InterventionRecord> bailout_experiment(const BipartiteNetwork& net, const std::vector<RankBasis>& strategies,
                                                   const std::vector<double>& fractions,
                                                   const std::vector<Scenario>& scenarios,
                                                   const InterventionConfig& config);

/// As bailout_experiment, padding assets instead (Random or AssetVolume).
std::vector<InterventionRecord> buyout_experiment(const BipartiteNetwork& net, const std::vector<RankBasis>& strategies,
                                                  const std::vector<double>& fractions,
                                                  const std::vector<Scenario>& scenarios,
                                                  const InterventionConfig& config);

/// No-guarantee runs, one record per scenario (strategy empty, fraction 0).
std::vector<InterventionRecord> baseline_records(const BipartiteNetwork& net, const std::vector<Scenario>& scenarios,
                                                 const InterventionConfig& config,
                                                 InterventionKind kind = InterventionKind::Bailout);

/// Ranking used for a cell; exposed so callers can inspect padded sets.
Ranking intervention_ranking(const BipartiteNetwork& net, InterventionKind kind, RankBasis basis,
                             std::uint64_t seed, std::size_t scenario_index);

} // namespace contagion
