#include "contagion/firesale.hpp"

#include <algorithm>
#include <sstream>

#include "contagion/parallel.hpp"
#include "contagion/rng.hpp"

namespace contagion {

std::string describe(const Shock& shock) {
    std::ostringstream os;
    switch (shock.kind) {
    case Shock::Kind::None: return "none";
    case Shock::Kind::AssetDevaluation: os << "asset:" << shock.target << '@' << shock.haircut; break;
    case Shock::Kind::BankDefault: os << "bank:" << shock.target; break;
    case Shock::Kind::RandomAsset: os << "random_asset@" << shock.haircut; break;
    case Shock::Kind::RandomBank: os << "random_bank"; break;
    }
    return os.str();
}

void validate(const FiresaleConfig& config) {
    if (config.policy.kind == LiquidationPolicy::Kind::LeverageTarget && !(config.policy.max_leverage > 1.0))
        throw ValidationError("leverage target must exceed 1");
    const auto k = config.shock.kind;
    if ((k == Shock::Kind::AssetDevaluation || k == Shock::Kind::RandomAsset) &&
        !(config.shock.haircut > 0.0 && config.shock.haircut <= 1.0))
        throw ValidationError("haircut must lie in (0, 1]");
    if (!(config.systemic_threshold >= 0.0 && config.systemic_threshold < 1.0))
        throw ValidationError("systemic_threshold must lie in [0, 1)");
}

double FiresaleState::equity(std::size_t bank) const {
    const auto i = static_cast<Eigen::Index>(bank);
    return cash[i] + units.row(i).dot(prices) - liabilities[i];
}

Eigen::VectorXd FiresaleState::equities() const { return cash + units * prices - liabilities; }

double FiresaleState::total_assets(std::size_t bank) const {
    const auto i = static_cast<Eigen::Index>(bank);
    return cash[i] + units.row(i).dot(prices);
}

FiresaleState initial_state(const BipartiteNetwork& net) {
    FiresaleState s;
    const auto n = static_cast<Eigen::Index>(net.num_banks());
    s.network = &net;
    s.units = net.units();
    s.prices = net.prices();
    s.cash.resize(n);
    s.liabilities.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& bs = net.bank(static_cast<std::size_t>(i)).balance_sheet;
        s.cash[i] = bs.liquid_assets + bs.interbank_assets;
        s.liabilities[i] = bs.total_liabilities();
        s.status.push_back(net.bank(static_cast<std::size_t>(i)).status);
    }
    s.initial_equity = s.equities();
    s.liquidated.assign(net.num_banks(), false);
    s.asset_padded.assign(net.num_assets(), false);
    return s;
}

void apply_shock(FiresaleState& state, const Shock& shock, std::uint64_t seed) {
    if (state.network == nullptr) throw ValidationError("fire-sale state has no network");
    const auto& net = *state.network;
    Engine eng = make_engine(seed);
    switch (shock.kind) {
    case Shock::Kind::None: return;
    case Shock::Kind::AssetDevaluation:
    case Shock::Kind::RandomAsset: {
        if (!(shock.haircut > 0.0 && shock.haircut <= 1.0)) throw ValidationError("haircut must lie in (0, 1]");
        const auto k = shock.kind == Shock::Kind::AssetDevaluation
                           ? net.asset_index(shock.target)
                           : static_cast<std::size_t>(uniform_index(eng, net.num_assets()));
        // A full write-off keeps a strictly positive price.
        const double factor = std::max(kPriceFloor, 1.0 - shock.haircut);
        state.prices[static_cast<Eigen::Index>(k)] *= factor;
        return;
    }
    case Shock::Kind::BankDefault:
    case Shock::Kind::RandomBank: {
        const auto i = shock.kind == Shock::Kind::BankDefault
                           ? net.bank_index(shock.target)
                           : static_cast<std::size_t>(uniform_index(eng, net.num_banks()));
        if (state.status[i] == BankStatus::Padded) return; // guaranteed banks cannot be defaulted
        if (state.status[i] == BankStatus::Defaulted)
            throw ValidationError("bank '" + net.bank(i).id + "' has already defaulted");
        state.status[i] = BankStatus::Defaulted;
        ++state.shock_defaults;
        return;
    }
    }
}

FiresaleState apply_shock(const BipartiteNetwork& net, const Shock& shock, std::uint64_t seed) {
    auto state = initial_state(net);
    apply_shock(state, shock, seed);
    return state;
}

RoundOutcome firesale_round(FiresaleState& state, const FiresaleConfig& config) {
    const auto& net = *state.network;
    const std::size_t n = net.num_banks();
    const auto m = static_cast<Eigen::Index>(net.num_assets());

    RoundOutcome out;
    out.volumes = Eigen::VectorXd::Zero(m);

    const Eigen::VectorXd eq = state.equities();
    for (std::size_t i = 0; i < n; ++i) {
        if (state.status[i] != BankStatus::Solvent) continue;
        if (eq[static_cast<Eigen::Index>(i)] < -tolerance(state.total_assets(i))) {
            state.status[i] = BankStatus::Defaulted;
            out.new_defaults.push_back(i);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (state.status[i] == BankStatus::Defaulted && !state.liquidated[i]) {
            // Entire portfolio, once.
            out.volumes += state.units.row(r).transpose();
            state.cash[r] += state.units.row(r).dot(state.prices);
            state.units.row(r).setZero();
            state.liquidated[i] = true;
        } else if (state.status[i] == BankStatus::Solvent &&
                   config.policy.kind == LiquidationPolicy::Kind::LeverageTarget) {
            const double e = eq[r];
            if (!(e > 0.0)) continue;
            const double assets = state.total_assets(i);
            const double excess = assets - config.policy.max_leverage * e;
            const double held = state.units.row(r).dot(state.prices);
            if (excess <= tolerance(assets) || held <= 0.0) continue;
            const double share = std::min(1.0, excess / held);
            const Eigen::RowVectorXd sold = share * state.units.row(r);
            out.volumes += sold.transpose();
            const double proceeds = sold.dot(state.prices);
            state.units.row(r) -= sold;
            const double repaid = std::min(proceeds, state.liabilities[r]);
            state.liabilities[r] -= repaid;
            state.cash[r] += proceeds - repaid;
        }
    }

    const Eigen::VectorXd depths = net.depths();
    for (Eigen::Index k = 0; k < m; ++k) {
        if (out.volumes[k] <= 0.0 || state.asset_padded[static_cast<std::size_t>(k)]) continue;
        state.prices[k] = price_impact(state.prices[k], out.volumes[k], depths[k], config.impact);
    }
    return out;
}

CascadeResult run_firesale(FiresaleState& state, const FiresaleConfig& config) {
    validate(config);
    if (state.network == nullptr) throw ValidationError("fire-sale state has no network");
    const std::size_t n = state.network->num_banks();

    CascadeResult result;
    result.n_banks = n;
    result.converged = false;
    for (std::size_t round = 0; round <= config.max_rounds; ++round) {
        const auto outcome = firesale_round(state, config);
        std::size_t count = outcome.new_defaults.size();
        if (round == 0) count += state.shock_defaults;
        result.per_round_defaults.push_back(count);
        result.rounds = round;
        if (!outcome.active()) {
            result.converged = true;
            break;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        if (state.status[i] == BankStatus::Defaulted) result.defaulted.push_back(i);
    result.fraction_defaulted = n > 0 ? static_cast<double>(result.defaulted.size()) / static_cast<double>(n) : 0.0;
    result.total_equity_loss = (state.initial_equity - state.equities()).sum();
    return result;
}

CascadeResult run_firesale(const BipartiteNetwork& net, const FiresaleConfig& config) {
    validate(config);
    auto state = apply_shock(net, config.shock, config.seed);
    return run_firesale(state, config);
}

CriticalLeverageResult critical_leverage(const BipartiteParams& params, const std::vector<double>& leverages,
                                         const FiresaleConfig& base, const CriticalLeverageOptions& options) {
    if (leverages.empty()) throw ValidationError("leverage grid is empty");
    if (!std::is_sorted(leverages.begin(), leverages.end()))
        throw ValidationError("leverage values must be sorted ascending");
    if (leverages.front() < 1.0) throw ValidationError("leverage values must be at least 1");
    if (options.trials < 1) throw ValidationError("trials must be at least 1");

    CriticalLeverageResult result;
    for (double lambda : leverages) {
        std::vector<char> systemic(options.trials, 0);
        parallel_for(options.trials, options.jobs, [&](std::size_t t) {
            auto p = params;
            p.capital_ratio = 1.0 / lambda;
            p.seed = derive_seed(options.seed, t, 0);
            const auto net = gen_bipartite(p);
            auto config = base;
            config.shock = Shock::random_bank();
            config.seed = derive_seed(options.seed, t, 1);
            systemic[t] = run_firesale(net, config).fraction_defaulted > config.systemic_threshold;
        });
        const auto hits = static_cast<double>(std::count(systemic.begin(), systemic.end(), 1));
        result.rows.push_back({lambda, hits / static_cast<double>(options.trials)});
    }
    for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
        if (result.rows[i].probability <= options.crossing_threshold &&
            result.rows[i + 1].probability > options.crossing_threshold) {
            result.critical = 0.5 * (result.rows[i].leverage + result.rows[i + 1].leverage);
            break;
        }
    }
    return result;
}

} // namespace contagion
