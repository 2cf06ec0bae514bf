#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace contagion {

/// Absolute comparison tolerance for currency values of order one.
inline constexpr double kEpsilon = 1e-9;

/// Tolerance scaled to the magnitude of the quantities being compared.
inline double tolerance(double scale) noexcept {
    return kEpsilon * std::max(1.0, std::abs(scale));
}

struct BalanceSheet {
    double liquid_assets = 0.0;
    double illiquid_assets = 0.0; // external, non-interbank
    double interbank_assets = 0.0;
    double deposits = 0.0;
    double interbank_liabilities = 0.0;
    double short_term_liabilities = 0.0; // informational, part of the liabilities above

    double total_assets() const noexcept { return liquid_assets + illiquid_assets + interbank_assets; }
    double total_liabilities() const noexcept { return deposits + interbank_liabilities; }
};

/// Throws ValidationError if any field is negative or not finite.
void validate(const BalanceSheet& bs);

/// Assets minus liabilities. Never stored, may be negative.
inline double equity(const BalanceSheet& bs) noexcept {
    return bs.total_assets() - bs.total_liabilities();
}

/// Strictly negative net worth. Zero equity is solvent; values within
/// rounding noise of zero are treated as zero.
bool is_insolvent(const BalanceSheet& bs) noexcept;

bool is_illiquid(const BalanceSheet& bs) noexcept;

/// Total assets over equity. Throws ValidationError when equity <= 0.
double leverage(const BalanceSheet& bs);

enum class CapitalBasis { TotalAssets, IlliquidAssets };

/// Equity over the chosen basis. Throws ValidationError when the basis is 0.
double capital_ratio(const BalanceSheet& bs, CapitalBasis basis);

enum class BankStatus { Solvent, Defaulted, Padded };

struct Bank {
    std::string id;
    BalanceSheet balance_sheet;
    BankStatus status = BankStatus::Solvent;
};

/// lender has a claim of `amount` on borrower. Indices refer to the owning
/// network's bank list.
struct Exposure {
    std::size_t lender = 0;
    std::size_t borrower = 0;
    double amount = 0.0;
};

/// Directed weighted lender -> borrower exposure graph. Immutable once
/// built; the constructor enforces every structural invariant.
class InterbankNetwork {
public:
    InterbankNetwork() = default;

    /// Validates ids, edges, and that each bank's interbank positions equal
    /// the sums over its edges.
    InterbankNetwork(std::vector<Bank> banks, std::vector<Exposure> exposures);

    /// Overwrites interbank_assets / interbank_liabilities from the edges,
    /// then validates.
    static InterbankNetwork with_derived_positions(std::vector<Bank> banks,
                                                   std::vector<Exposure> exposures);

    std::size_t size() const noexcept { return banks_.size(); }
    std::span<const Bank> banks() const noexcept { return banks_; }
    const Bank& bank(std::size_t i) const { return banks_.at(i); }
    std::span<const Exposure> exposures() const noexcept { return exposures_; }

    /// Exposure indices where bank i is the lender (its claims).
    std::span<const std::size_t> claims_of(std::size_t i) const;
    /// Exposure indices where bank i is the borrower (its obligations).
    std::span<const std::size_t> obligations_of(std::size_t i) const;

    std::optional<std::size_t> find(const std::string& id) const;
    /// Throws ValidationError for unknown ids.
    std::size_t index_of(const std::string& id) const;

private:
    void build_index();

    std::vector<Bank> banks_;
    std::vector<Exposure> exposures_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> claim_offsets_, claim_edges_;
    std::vector<std::size_t> obligation_offsets_, obligation_edges_;
};

struct Asset {
    std::string id;
    double depth = 1.0;
    double price = 1.0; // fraction of initial value
};

/// Bank-asset holdings. Units are denominated so that one unit is worth
/// one currency unit at the initial price, i.e. units(i, k) is bank i's
/// initial currency position in asset k.
class BipartiteNetwork {
public:
    BipartiteNetwork() = default;

    /// Validates ids, depths, prices, units, and that every bank's
    /// illiquid_assets equals its marked holdings.
    BipartiteNetwork(std::vector<Bank> banks, std::vector<Asset> assets, Eigen::MatrixXd units);

    /// Same as the constructor but first sets illiquid_assets from the holdings.
    static BipartiteNetwork with_marked_holdings(std::vector<Bank> banks, std::vector<Asset> assets,
                                                 Eigen::MatrixXd units);

    std::size_t num_banks() const noexcept { return banks_.size(); }
    std::size_t num_assets() const noexcept { return assets_.size(); }
    std::span<const Bank> banks() const noexcept { return banks_; }
    const Bank& bank(std::size_t i) const { return banks_.at(i); }
    std::span<const Asset> assets() const noexcept { return assets_; }
    const Asset& asset(std::size_t k) const { return assets_.at(k); }

    const Eigen::MatrixXd& units() const noexcept { return units_; }
    Eigen::VectorXd prices() const;
    Eigen::VectorXd depths() const;
    /// Currency holdings at current prices, units * diag(prices).
    Eigen::MatrixXd holdings_value() const;

    std::optional<std::size_t> find_bank(const std::string& id) const;
    std::optional<std::size_t> find_asset(const std::string& id) const;
    std::size_t bank_index(const std::string& id) const;
    std::size_t asset_index(const std::string& id) const;

    /// Copy with new prices and balance sheets left as they were; pass the
    /// result through mark_to_market before relying on illiquid_assets.
    BipartiteNetwork with_prices(const Eigen::VectorXd& prices) const;
    /// Copy with replaced bank list (statuses, liquid assets, liabilities).
    BipartiteNetwork with_banks(std::vector<Bank> banks) const;

    friend BipartiteNetwork mark_to_market(const BipartiteNetwork& net);

private:
    struct Unchecked {};
    BipartiteNetwork(Unchecked, std::vector<Bank> banks, std::vector<Asset> assets, Eigen::MatrixXd units);
    void validate_structure() const;
    void build_index();

    std::vector<Bank> banks_;
    std::vector<Asset> assets_;
    Eigen::MatrixXd units_;
    std::unordered_map<std::string, std::size_t> bank_index_;
    std::unordered_map<std::string, std::size_t> asset_index_;
};

/// Recomputes every bank's illiquid_assets as sum_k units(i,k) * price_k.
BipartiteNetwork mark_to_market(const BipartiteNetwork& net);

/// Checks illiquid_assets against the marked holdings, throws ValidationError
/// naming the first inconsistent bank.
void check_marked(const BipartiteNetwork& net);

} // namespace contagion
