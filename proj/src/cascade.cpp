#include "contagion/cascade.hpp"

#include <algorithm>

#include "contagion/error.hpp"
#include "contagion/parallel.hpp"
#include "contagion/rng.hpp"

namespace contagion {

CascadeState initial_state(const InterbankNetwork& net) {
    CascadeState state;
    state.network = &net;
    state.status.reserve(net.size());
    for (const auto& b : net.banks()) state.status.push_back(b.status);
    state.shock_loss.assign(net.size(), 0.0);
    return state;
}

void shock_bank(CascadeState& state, std::size_t bank, double loss_fraction) {
    if (state.network == nullptr) throw ValidationError("cascade state has no network");
    if (bank >= state.network->size()) throw ValidationError("unknown bank index " + std::to_string(bank));
    if (state.status[bank] != BankStatus::Solvent)
        throw ValidationError("bank '" + state.network->bank(bank).id + "' is not solvent and cannot be shocked");
    if (!(loss_fraction > 0.0 && loss_fraction <= 1.0))
        throw ValidationError("shock loss fraction must lie in (0, 1]");
    const auto& bs = state.network->bank(bank).balance_sheet;
    state.shock_loss[bank] += loss_fraction * bs.total_assets();
    if (loss_fraction == 1.0 || equity(bs) - state.shock_loss[bank] < -tolerance(bs.total_assets()))
        state.status[bank] = BankStatus::Defaulted;
}

CascadeState shock_bank(const InterbankNetwork& net, std::size_t bank, double loss_fraction) {
    auto state = initial_state(net);
    shock_bank(state, bank, loss_fraction);
    return state;
}

CascadeState shock_bank(const InterbankNetwork& net, const std::string& bank_id, double loss_fraction) {
    return shock_bank(net, net.index_of(bank_id), loss_fraction);
}

CascadeResult run_cascade(const CascadeState& state, const CascadeOptions& options) {
    if (state.network == nullptr) throw ValidationError("cascade state has no network");
    if (!(options.recovery_rate >= 0.0 && options.recovery_rate <= 1.0))
        throw ValidationError("recovery_rate must lie in [0, 1]");
    const auto& net = *state.network;
    const std::size_t n = net.size();
    const double lgd = 1.0 - options.recovery_rate;

    auto status = state.status;
    std::vector<double> buffer(n), writedown(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) buffer[i] = equity(net.bank(i).balance_sheet) - state.shock_loss[i];

    CascadeResult result;
    result.n_banks = n;

    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < n; ++i)
        if (status[i] == BankStatus::Defaulted) fresh.push_back(i);
    result.per_round_defaults.push_back(fresh.size());

    auto write_down_creditors = [&](std::size_t borrower) {
        for (auto e : net.obligations_of(borrower)) {
            const auto& x = net.exposures()[e];
            if (status[x.lender] != BankStatus::Defaulted) writedown[x.lender] += lgd * x.amount;
        }
    };
    auto fails = [&](std::size_t i) {
        return status[i] == BankStatus::Solvent &&
               buffer[i] - writedown[i] < -tolerance(net.bank(i).balance_sheet.total_assets());
    };

    std::size_t round = 0;
    while (true) {
        ++round;
        std::vector<std::size_t> next;
        if (options.sequential) {
            for (auto d : fresh) write_down_creditors(d);
            for (std::size_t i = 0; i < n; ++i) {
                if (!fails(i)) continue;
                status[i] = BankStatus::Defaulted;
                next.push_back(i);
                write_down_creditors(i);
            }
            // Losses from this round's defaults were already propagated.
            result.per_round_defaults.push_back(next.size());
            if (next.empty()) break;
            fresh.clear();
            continue;
        }
        for (auto d : fresh) write_down_creditors(d);
        for (std::size_t i = 0; i < n; ++i)
            if (fails(i)) next.push_back(i);
        for (auto i : next) status[i] = BankStatus::Defaulted;
        result.per_round_defaults.push_back(next.size());
        if (next.empty()) break;
        fresh = std::move(next);
    }
    result.rounds = round;

    for (std::size_t i = 0; i < n; ++i) {
        if (status[i] == BankStatus::Defaulted) result.defaulted.push_back(i);
        result.total_equity_loss += state.shock_loss[i] + writedown[i];
    }
    result.fraction_defaulted = n > 0 ? static_cast<double>(result.defaulted.size()) / static_cast<double>(n) : 0.0;
    return result;
}

ContagionStats monte_carlo(const NetGenParams& params, const MonteCarloOptions& options) {
    if (options.trials < 1) throw ValidationError("trials must be at least 1");
    validate(params);
    std::vector<double> fractions(options.trials, 0.0);
    parallel_for(options.trials, options.jobs, [&](std::size_t t) {
        auto trial_params = params;
        trial_params.seed = derive_seed(options.seed, t, 0);
        const auto net = gen_interbank(trial_params);
        Engine eng = make_engine(derive_seed(options.seed, t, 1));
        const auto target = static_cast<std::size_t>(uniform_index(eng, net.size()));
        fractions[t] = run_cascade(shock_bank(net, target), options.cascade).fraction_defaulted;
    });

    ContagionStats stats;
    stats.trials = options.trials;
    stats.systemic_threshold = options.systemic_threshold;
    double extent_sum = 0.0;
    for (double f : fractions) {
        if (f > options.systemic_threshold) {
            ++stats.systemic_trials;
            extent_sum += f;
        }
    }
    stats.probability = static_cast<double>(stats.systemic_trials) / static_cast<double>(stats.trials);
    if (stats.systemic_trials > 0) stats.extent = extent_sum / static_cast<double>(stats.systemic_trials);
    return stats;
}

std::vector<SweepRow> degree_sweep(const NetGenParams& params, const std::vector<double>& z_values,
                                   const MonteCarloOptions& options) {
    if (z_values.empty()) throw ValidationError("degree sweep needs at least one z value");
    std::vector<SweepRow> rows;
    for (double z : z_values) {
        auto p = params;
        p.avg_degree = z;
        rows.push_back({z, monte_carlo(p, options)});
    }
    return rows;
}

std::vector<SweepRow> capital_sweep(const NetGenParams& params, const std::vector<double>& capital_values,
                                    const MonteCarloOptions& options) {
    if (capital_values.empty()) throw ValidationError("capital sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (double c : capital_values) {
        if (!(c > 0.0 && c < 1.0)) throw ValidationError("capital values must lie in (0, 1)");
        auto p = params;
        p.capital_ratio = c;
        rows.push_back({c, monte_carlo(p, options)});
    }
    return rows;
}

} // namespace contagion
