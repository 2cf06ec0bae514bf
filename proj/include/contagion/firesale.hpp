#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "contagion/cascade.hpp"
#include "contagion/core.hpp"
#include "contagion/error.hpp"
#include "contagion/netgen.hpp"

namespace contagion {

enum class ImpactKind { Linear, Exponential };

/// Lowest price multiplier the linear impact can produce.
inline constexpr double kPriceFloor = 1e-6;

/// New price after `volume` units are sold into a market of depth `depth`.
/// Linear: price * max(floor, 1 - volume/depth). Exponential:
/// price * max(floor, exp(-volume/depth)). Volume is measured in units, i.e. currency at
/// the initial price.
template <class Scalar>
    requires std::is_floating_point_v<Scalar>
Scalar price_impact(Scalar price, Scalar volume, Scalar depth, ImpactKind kind) {
    if (!(volume >= Scalar(0))) throw ValidationError("sale volume must be non-negative");
    if (!(depth > Scalar(0))) throw ValidationError("market depth must be positive");
    using std::exp;
    using std::max;
    const Scalar x = volume / depth;
    if (kind == ImpactKind::Linear) return price * max(Scalar(kPriceFloor), Scalar(1) - x);
    return price * max(Scalar(kPriceFloor), Scalar(exp(-x)));
}

/// Elementwise impact over all assets.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> price_impact(const Eigen::MatrixBase<Derived>& prices,
                                                                        const Eigen::MatrixBase<Derived>& volumes,
                                                                        const Eigen::MatrixBase<Derived>& depths,
                                                                        ImpactKind kind) {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(prices.size());
    for (Eigen::Index k = 0; k < prices.size(); ++k) out[k] = price_impact(prices[k], volumes[k], depths[k], kind);
    return out;
}

struct LiquidationPolicy {
    enum class Kind { OnDefault, LeverageTarget };
    Kind kind = Kind::OnDefault;
    double max_leverage = 0.0; // LeverageTarget only, > 1

    static LiquidationPolicy on_default() { return {}; }
    static LiquidationPolicy leverage_target(double lambda_max) { return {Kind::LeverageTarget, lambda_max}; }
};

struct Shock {
    enum class Kind { None, AssetDevaluation, BankDefault, RandomAsset, RandomBank };
    Kind kind = Kind::None;
    std::string target; // asset or bank id for the targeted kinds
    double haircut = 0.3;

    static Shock none() { return {}; }
    static Shock asset(std::string id, double haircut) { return {Kind::AssetDevaluation, std::move(id), haircut}; }
    static Shock bank(std::string id) { return {Kind::BankDefault, std::move(id), 1.0}; }
    static Shock random_asset(double haircut) { return {Kind::RandomAsset, {}, haircut}; }
    static Shock random_bank() { return {Kind::RandomBank, {}, 1.0}; }
};

/// Short human-readable label, e.g. "asset:A003@0.3" or "bank:B01".
std::string describe(const Shock& shock);

struct FiresaleConfig {
    ImpactKind impact = ImpactKind::Exponential;
    LiquidationPolicy policy;
    Shock shock;
    std::size_t max_rounds = 1000;
    double systemic_threshold = 0.05;
    std::uint64_t seed = 0; // resolves random shocks
};

void validate(const FiresaleConfig& config);

/// Evolving fire-sale state. Sale proceeds are credited at the pre-impact
/// price; deleveraging banks use them to repay debt.
struct FiresaleState {
    const BipartiteNetwork* network = nullptr;
    Eigen::MatrixXd units;
    Eigen::VectorXd prices;
    Eigen::VectorXd cash;        // liquid + interbank assets + sale proceeds
    Eigen::VectorXd liabilities; // deposits + interbank liabilities
    Eigen::VectorXd initial_equity;
    std::vector<BankStatus> status;
    std::vector<bool> liquidated;
    std::vector<bool> asset_padded;
    std::size_t shock_defaults = 0;

    double equity(std::size_t bank) const;
    Eigen::VectorXd equities() const;
    double total_assets(std::size_t bank) const;
};

FiresaleState initial_state(const BipartiteNetwork& net);
FiresaleState initial_state(BipartiteNetwork&&) = delete; // the state keeps a pointer

/// Applies an exogenous shock. Asset devaluations multiply the price by
/// (1 - haircut) even for padded assets; bank defaults queue the bank's
/// whole portfolio for liquidation. Random kinds draw their target from
/// `seed`.
void apply_shock(FiresaleState& state, const Shock& shock, std::uint64_t seed = 0);
FiresaleState apply_shock(const BipartiteNetwork& net, const Shock& shock, std::uint64_t seed = 0);
FiresaleState apply_shock(BipartiteNetwork&&, const Shock&, std::uint64_t = 0) = delete;

struct RoundOutcome {
    std::vector<std::size_t> new_defaults;
    Eigen::VectorXd volumes; // units sold per asset this round
    bool active() const { return !new_defaults.empty() || (volumes.size() > 0 && volumes.maxCoeff() > 0.0); }
};

/// One synchronous round: detect insolvencies, collect sales, move each
/// asset's price once on the aggregated volume.
RoundOutcome firesale_round(FiresaleState& state, const FiresaleConfig& config);

/// Runs rounds until one changes nothing or max_rounds is hit
/// (converged = false). Round 0 is the first round after the shock.
CascadeResult run_firesale(FiresaleState& state, const FiresaleConfig& config);
CascadeResult run_firesale(const BipartiteNetwork& net, const FiresaleConfig& config);

struct CriticalLeverageRow {
    double leverage = 0.0;
    double probability = 0.0;
};

struct CriticalLeverageResult {
    std::vector<CriticalLeverageRow> rows;
    std::optional<double> critical; // midpoint of the first threshold crossing
};

struct CriticalLeverageOptions {
    std::size_t trials = 200;
    std::uint64_t seed = 0;
    double crossing_threshold = 0.01;
    std::size_t jobs = 1;
};

/// For each leverage value, regenerates networks with capital_ratio = 1 /
/// leverage and estimates the systemic probability under random single-bank
/// defaults. `base` supplies impact, policy and thresholds.
CriticalLeverageResult critical_leverage(const BipartiteParams& params, const std::vector<double>& leverages,
                                         const FiresaleConfig& base, const CriticalLeverageOptions& options);

} // namespace contagion
