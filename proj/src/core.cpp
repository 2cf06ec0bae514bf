#include "contagion/core.hpp"

#include <set>
#include <utility>

#include "contagion/error.hpp"

namespace contagion {
namespace {

void require_field(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
        throw ValidationError(std::string("balance sheet field ") + name +
                              " must be finite and non-negative, got " + std::to_string(value));
}

bool close(double a, double b) { return std::abs(a - b) <= tolerance(std::max(std::abs(a), std::abs(b))); }

std::unordered_map<std::string, std::size_t> index_ids(std::span<const Bank> banks) {
    std::unordered_map<std::string, std::size_t> out;
    out.reserve(banks.size());
    for (std::size_t i = 0; i < banks.size(); ++i) {
        if (banks[i].id.empty()) throw ValidationError("bank " + std::to_string(i) + " has an empty id");
        if (!out.emplace(banks[i].id, i).second)
            throw ValidationError("duplicate bank id '" + banks[i].id + "'");
    }
    return out;
}

// CSR adjacency keyed by `key(exposure)`.
template <class Key>
void build_csr(std::size_t n, std::span<const Exposure> edges, Key key,
               std::vector<std::size_t>& offsets, std::vector<std::size_t>& items) {
    offsets.assign(n + 1, 0);
    for (const auto& e : edges) ++offsets[key(e) + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    items.resize(edges.size());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t j = 0; j < edges.size(); ++j) items[cursor[key(edges[j])]++] = j;
}

} // namespace

void validate(const BalanceSheet& bs) {
    require_field(bs.liquid_assets, "liquid_assets");
    require_field(bs.illiquid_assets, "illiquid_assets");
    require_field(bs.interbank_assets, "interbank_assets");
    require_field(bs.deposits, "deposits");
    require_field(bs.interbank_liabilities, "interbank_liabilities");
    require_field(bs.short_term_liabilities, "short_term_liabilities");
}

bool is_insolvent(const BalanceSheet& bs) noexcept {
    return equity(bs) < -tolerance(bs.total_assets());
}

bool is_illiquid(const BalanceSheet& bs) noexcept {
    return bs.short_term_liabilities > bs.liquid_assets;
}

double leverage(const BalanceSheet& bs) {
    const double e = equity(bs);
    if (!(e > 0.0)) throw ValidationError("leverage undefined for non-positive equity " + std::to_string(e));
    return bs.total_assets() / e;
}

double capital_ratio(const BalanceSheet& bs, CapitalBasis basis) {
    const double base = basis == CapitalBasis::TotalAssets ? bs.total_assets() : bs.illiquid_assets;
    if (!(base > 0.0)) throw ValidationError("capital ratio basis must be positive");
    return equity(bs) / base;
}

// ---------------------------------------------------------------------------
// InterbankNetwork

InterbankNetwork::InterbankNetwork(std::vector<Bank> banks, std::vector<Exposure> exposures)
    : banks_(std::move(banks)), exposures_(std::move(exposures)) {
    index_ = index_ids(banks_);
    for (const auto& b : banks_) validate(b.balance_sheet);

    const std::size_t n = banks_.size();
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<double> lent(n, 0.0), owed(n, 0.0);
    for (std::size_t j = 0; j < exposures_.size(); ++j) {
        const auto& e = exposures_[j];
        const auto where = "exposure " + std::to_string(j) + ": ";
        if (e.lender >= n || e.borrower >= n) throw ValidationError(where + "dangling bank index");
        if (e.lender == e.borrower) throw ValidationError(where + "self-loop on '" + banks_[e.lender].id + "'");
        if (!std::isfinite(e.amount) || !(e.amount > 0.0))
            throw ValidationError(where + "amount must be positive");
        if (!seen.emplace(e.lender, e.borrower).second)
            throw ValidationError(where + "duplicate edge " + banks_[e.lender].id + " -> " + banks_[e.borrower].id);
        lent[e.lender] += e.amount;
        owed[e.borrower] += e.amount;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& bs = banks_[i].balance_sheet;
        if (!close(bs.interbank_assets, lent[i]))
            throw ValidationError("bank '" + banks_[i].id + "': interbank_assets " +
                                  std::to_string(bs.interbank_assets) + " != sum of claims " +
                                  std::to_string(lent[i]));
        if (!close(bs.interbank_liabilities, owed[i]))
            throw ValidationError("bank '" + banks_[i].id + "': interbank_liabilities " +
                                  std::to_string(bs.interbank_liabilities) + " != sum of obligations " +
                                  std::to_string(owed[i]));
    }
    build_index();
}

InterbankNetwork InterbankNetwork::with_derived_positions(std::vector<Bank> banks,
                                                          std::vector<Exposure> exposures) {
    for (auto& b : banks) {
        b.balance_sheet.interbank_assets = 0.0;
        b.balance_sheet.interbank_liabilities = 0.0;
    }
    for (const auto& e : exposures) {
        if (e.lender >= banks.size() || e.borrower >= banks.size())
            throw ValidationError("exposure references a bank index out of range");
        banks[e.lender].balance_sheet.interbank_assets += e.amount;
        banks[e.borrower].balance_sheet.interbank_liabilities += e.amount;
    }
    return InterbankNetwork(std::move(banks), std::move(exposures));
}

void InterbankNetwork::build_index() {
    build_csr(banks_.size(), exposures_, [](const Exposure& e) { return e.lender; },
              claim_offsets_, claim_edges_);
    build_csr(banks_.size(), exposures_, [](const Exposure& e) { return e.borrower; },
              obligation_offsets_, obligation_edges_);
}

std::span<const std::size_t> InterbankNetwork::claims_of(std::size_t i) const {
    return std::span<const std::size_t>(claim_edges_).subspan(claim_offsets_.at(i),
                                                              claim_offsets_.at(i + 1) - claim_offsets_[i]);
}

std::span<const std::size_t> InterbankNetwork::obligations_of(std::size_t i) const {
    return std::span<const std::size_t>(obligation_edges_)
        .subspan(obligation_offsets_.at(i), obligation_offsets_.at(i + 1) - obligation_offsets_[i]);
}

std::optional<std::size_t> InterbankNetwork::find(const std::string& id) const {
    if (auto it = index_.find(id); it != index_.end()) return it->second;
    return std::nullopt;
}

std::size_t InterbankNetwork::index_of(const std::string& id) const {
    if (auto i = find(id)) return *i;
    throw ValidationError("unknown bank id '" + id + "'");
}

// ---------------------------------------------------------------------------
// BipartiteNetwork

BipartiteNetwork::BipartiteNetwork(Unchecked, std::vector<Bank> banks, std::vector<Asset> assets,
                                   Eigen::MatrixXd units)
    : banks_(std::move(banks)), assets_(std::move(assets)), units_(std::move(units)) {
    build_index();
}

BipartiteNetwork::BipartiteNetwork(std::vector<Bank> banks, std::vector<Asset> assets, Eigen::MatrixXd units)
    : BipartiteNetwork(Unchecked{}, std::move(banks), std::move(assets), std::move(units)) {
    validate_structure();
    check_marked(*this);
}

BipartiteNetwork BipartiteNetwork::with_marked_holdings(std::vector<Bank> banks, std::vector<Asset> assets,
                                                        Eigen::MatrixXd units) {
    BipartiteNetwork net(Unchecked{}, std::move(banks), std::move(assets), std::move(units));
    net.validate_structure();
    return mark_to_market(net);
}

void BipartiteNetwork::build_index() {
    bank_index_ = index_ids(banks_);
    asset_index_.clear();
    for (std::size_t k = 0; k < assets_.size(); ++k) {
        if (assets_[k].id.empty()) throw ValidationError("asset " + std::to_string(k) + " has an empty id");
        if (!asset_index_.emplace(assets_[k].id, k).second)
            throw ValidationError("duplicate asset id '" + assets_[k].id + "'");
    }
}

void BipartiteNetwork::validate_structure() const {
    if (units_.rows() != static_cast<Eigen::Index>(banks_.size()) ||
        units_.cols() != static_cast<Eigen::Index>(assets_.size()))
        throw ValidationError("holdings matrix shape does not match banks x assets");
    for (const auto& b : banks_) validate(b.balance_sheet);
    for (const auto& a : assets_) {
        // Infinite depth is allowed and means sales never move the price.
        if (!(a.depth > 0.0))
            throw ValidationError("asset '" + a.id + "': depth must be positive");
        if (!(a.price > 0.0) || a.price > 1.0)
            throw ValidationError("asset '" + a.id + "': price must lie in (0, 1]");
    }
    if (!units_.allFinite() || (units_.size() > 0 && units_.minCoeff() < 0.0))
        throw ValidationError("holdings must be finite and non-negative");
}

Eigen::VectorXd BipartiteNetwork::prices() const {
    Eigen::VectorXd p(assets_.size());
    for (std::size_t k = 0; k < assets_.size(); ++k) p[k] = assets_[k].price;
    return p;
}

Eigen::VectorXd BipartiteNetwork::depths() const {
    Eigen::VectorXd d(assets_.size());
    for (std::size_t k = 0; k < assets_.size(); ++k) d[k] = assets_[k].depth;
    return d;
}

Eigen::MatrixXd BipartiteNetwork::holdings_value() const {
    return units_ * prices().asDiagonal();
}

std::optional<std::size_t> BipartiteNetwork::find_bank(const std::string& id) const {
    if (auto it = bank_index_.find(id); it != bank_index_.end()) return it->second;
    return std::nullopt;
}

std::optional<std::size_t> BipartiteNetwork::find_asset(const std::string& id) const {
    if (auto it = asset_index_.find(id); it != asset_index_.end()) return it->second;
    return std::nullopt;
}

std::size_t BipartiteNetwork::bank_index(const std::string& id) const {
    if (auto i = find_bank(id)) return *i;
    throw ValidationError("unknown bank id '" + id + "'");
}

std::size_t BipartiteNetwork::asset_index(const std::string& id) const {
    if (auto k = find_asset(id)) return *k;
    throw ValidationError("unknown asset id '" + id + "'");
}

BipartiteNetwork BipartiteNetwork::with_prices(const Eigen::VectorXd& prices) const {
    if (prices.size() != static_cast<Eigen::Index>(assets_.size()))
        throw ValidationError("price vector size does not match asset count");
    auto assets = assets_;
    for (std::size_t k = 0; k < assets.size(); ++k) {
        if (!(prices[k] > 0.0) || prices[k] > 1.0)
            throw ValidationError("asset '" + assets[k].id + "': price must lie in (0, 1]");
        assets[k].price = prices[k];
    }
    return BipartiteNetwork(Unchecked{}, banks_, std::move(assets), units_);
}

BipartiteNetwork BipartiteNetwork::with_banks(std::vector<Bank> banks) const {
    if (banks.size() != banks_.size()) throw ValidationError("bank count mismatch");
    BipartiteNetwork net(Unchecked{}, std::move(banks), assets_, units_);
    net.validate_structure();
    return net;
}

BipartiteNetwork mark_to_market(const BipartiteNetwork& net) {
    const Eigen::VectorXd marked = net.units_ * net.prices();
    auto banks = net.banks_;
    for (std::size_t i = 0; i < banks.size(); ++i) banks[i].balance_sheet.illiquid_assets = marked[i];
    return BipartiteNetwork(BipartiteNetwork::Unchecked{}, std::move(banks), net.assets_, net.units_);
}

void check_marked(const BipartiteNetwork& net) {
    const Eigen::VectorXd marked = net.units() * net.prices();
    for (std::size_t i = 0; i < net.num_banks(); ++i) {
        const double have = net.bank(i).balance_sheet.illiquid_assets;
        if (std::abs(have - marked[i]) > tolerance(std::max(have, marked[i])))
            throw ValidationError("bank '" + net.bank(i).id + "': illiquid_assets " + std::to_string(have) +
                                  " != marked holdings " + std::to_string(marked[i]));
    }
}

} // namespace contagion
