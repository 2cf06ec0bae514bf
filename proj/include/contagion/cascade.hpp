#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contagion/core.hpp"
#include "contagion/netgen.hpp"

namespace contagion {

/// Trajectory and terminal state of one contagion run. Round 0 holds the
/// defaults caused directly by the shock; `rounds` is the index of the
/// first round that changed nothing.
struct CascadeResult {
    std::vector<std::size_t> defaulted; // ascending bank indices
    std::size_t n_banks = 0;
    std::size_t rounds = 0;
    double fraction_defaulted = 0.0;
    std::vector<std::size_t> per_round_defaults;
    double total_equity_loss = 0.0;
    bool converged = true;
};

struct CascadeOptions {
    double recovery_rate = 0.0; // share of a claim recovered from a defaulted borrower
    bool sequential = false;    // update banks one at a time within a round
};

/// Mutable cascade state over a fixed interbank network.
struct CascadeState {
    const InterbankNetwork* network = nullptr;
    std::vector<BankStatus> status;
    std::vector<double> shock_loss; // asset write-offs applied by shocks
};

CascadeState initial_state(const InterbankNetwork& net);
CascadeState initial_state(InterbankNetwork&&) = delete; // the state keeps a pointer

/// Writes off `loss_fraction` of the bank's asset side. A full write-off
/// always defaults the bank; a partial one defaults it only if equity turns
/// negative. Throws ValidationError for unknown or non-solvent banks.
CascadeState shock_bank(const InterbankNetwork& net, std::size_t bank, double loss_fraction = 1.0);
CascadeState shock_bank(const InterbankNetwork& net, const std::string& bank_id, double loss_fraction = 1.0);
CascadeState shock_bank(InterbankNetwork&&, std::size_t, double = 1.0) = delete;
CascadeState shock_bank(InterbankNetwork&&, const std::string&, double = 1.0) = delete;
void shock_bank(CascadeState& state, std::size_t bank, double loss_fraction = 1.0);

/// Round-based default propagation. Solvent banks write their claims on
/// defaulted borrowers down by (1 - recovery_rate); a bank defaults once its
/// equity net of write-downs turns negative. Padded banks never default.
CascadeResult run_cascade(const CascadeState& state, const CascadeOptions& options = {});

struct ContagionStats {
    double probability = 0.0;
    std::optional<double> extent; // undefined when no trial was systemic
    std::size_t trials = 0;
    std::size_t systemic_trials = 0;
    double systemic_threshold = 0.05;
};

struct MonteCarloOptions {
    std::size_t trials = 100;
    double systemic_threshold = 0.05;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    CascadeOptions cascade;
};

/// Trial t generates a network from stream (seed, t), shocks one uniformly
/// random bank, and runs the cascade. A trial is systemic when its default
/// fraction (shocked bank included) exceeds the threshold.
ContagionStats monte_carlo(const NetGenParams& params, const MonteCarloOptions& options);

struct SweepRow {
    double value = 0.0; // z or capital ratio
    ContagionStats stats;
};

/// Every row uses the same trial streams (common random numbers).
std::vector<SweepRow> degree_sweep(const NetGenParams& params, const std::vector<double>& z_values,
                                   const MonteCarloOptions& options);
std::vector<SweepRow> capital_sweep(const NetGenParams& params, const std::vector<double>& capital_values,
                                    const MonteCarloOptions& options);

} // namespace contagion
