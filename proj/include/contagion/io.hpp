#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/clearing.hpp"
#include "contagion/core.hpp"
#include "contagion/firesale.hpp"
#include "contagion/intervene.hpp"
#include "contagion/rank.hpp"

namespace contagion {

// File formats (UTF-8, '.' decimal separator, LF line endings). Every file
// may start with a "#format=contagion/1" version line; readers refuse other
// versions. Further lines starting with '#' before the header are comments.
//
//   banks.csv      bank_id,liquid_assets,illiquid_assets,deposits,short_term_liabilities
//   exposures.csv  lender_id,borrower_id,amount
//   holdings.csv   bank_id,asset_id,amount
//   assets.csv     asset_id,depth
//
// Interbank positions are always derived from exposures.csv.

inline constexpr std::string_view kFormatVersion = "contagion/1";
inline constexpr std::string_view kArtifactVersion = "0.1.0";

inline constexpr std::string_view kBanksHeader =
    "bank_id,liquid_assets,illiquid_assets,deposits,short_term_liabilities";
inline constexpr std::string_view kExposuresHeader = "lender_id,borrower_id,amount";
inline constexpr std::string_view kHoldingsHeader = "bank_id,asset_id,amount";
inline constexpr std::string_view kAssetsHeader = "asset_id,depth";

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

/// Provenance embedded in every output artifact as a leading comment.
struct Provenance {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version = std::string(kArtifactVersion);

    std::string comment_line() const; // "# contagion 0.1.0 seed=7 config_hash=..."
};

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

struct NetworkPaths {
    std::filesystem::path banks;
    std::filesystem::path exposures; // interbank networks
    std::filesystem::path holdings;  // bipartite networks
    std::filesystem::path assets;    // bipartite networks
};

using LoadedNetwork = std::variant<InterbankNetwork, BipartiteNetwork>;

/// Interbank when `holdings` is empty, bipartite otherwise. Throws ParseError
/// naming the file and row of the first problem.
LoadedNetwork load_network(const NetworkPaths& paths);

// In-memory parsers; `source` names the input in error messages.
InterbankNetwork parse_interbank(std::string_view banks_csv, std::string_view exposures_csv,
                                 const std::string& banks_source = "banks.csv",
                                 const std::string& exposures_source = "exposures.csv");
BipartiteNetwork parse_bipartite(std::string_view banks_csv, std::string_view holdings_csv,
                                 std::optional<std::string_view> assets_csv,
                                 const std::string& banks_source = "banks.csv",
                                 const std::string& holdings_source = "holdings.csv",
                                 const std::string& assets_source = "assets.csv");

std::string banks_csv(std::span<const Bank> banks, const Provenance* provenance = nullptr);
std::string exposures_csv(const InterbankNetwork& net, const Provenance* provenance = nullptr);
std::string holdings_csv(const BipartiteNetwork& net, const Provenance* provenance = nullptr);
std::string assets_csv(const BipartiteNetwork& net, const Provenance* provenance = nullptr);

/// Writes the network's files into `dir` and returns their paths.
std::vector<std::filesystem::path> save_network(const InterbankNetwork& net, const std::filesystem::path& dir,
                                                const Provenance* provenance = nullptr);
std::vector<std::filesystem::path> save_network(const BipartiteNetwork& net, const std::filesystem::path& dir,
                                                const Provenance* provenance = nullptr);

/// Synthetic stand-in for a 90-bank x 140-asset-class holdings panel. This
/// is NOT real supervisory data: bank sizes are power-law, holdings are
/// sparse and concentrated, capital ratios lie in [5%, 8%], and depths are
/// proportional to system holdings.
inline constexpr std::size_t kSyntheticEbaBanks = 90;
inline constexpr std::size_t kSyntheticEbaAssets = 140;

struct SyntheticEbaOptions {
    std::size_t n_banks = kSyntheticEbaBanks;
    std::size_t n_assets = kSyntheticEbaAssets;
    double size_exponent = 2.0;
    double popularity_exponent = 1.6; // asset popularity weights
    double min_degree = 3.0;
    double max_degree = 60.0;
    double degree_exponent = 1.8;
    double min_capital = 0.05;
    double max_capital = 0.08;
    double min_liquid = 0.05;
    double max_liquid = 0.15;
    double depth_factor = 1.0;
};

BipartiteNetwork gen_synthetic_eba(std::uint64_t seed, const SyntheticEbaOptions& options = {});

enum class ExportFormat { CSV, JsonLines, PlotData };

/// Writes records under `dir`. CSV -> interventions.csv, JsonLines ->
/// interventions.jsonl, PlotData -> one whitespace-separated file per
/// (kind, strategy) panel. Records are sorted by scenario, strategy,
/// fraction before writing. Throws ValidationError on an empty record list.
std::vector<std::filesystem::path> export_results(std::vector<InterventionRecord> records, ExportFormat format,
                                                  const std::filesystem::path& dir, const Provenance& provenance);

std::string records_csv(std::vector<InterventionRecord> records, const Provenance& provenance);
std::vector<InterventionRecord> parse_records_csv(std::string_view csv);
void sort_records(std::vector<InterventionRecord>& records);

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t seed, const Provenance& provenance);
std::string critical_leverage_csv(const CriticalLeverageResult& result, std::uint64_t seed,
                                  const Provenance& provenance);
std::string ranking_csv(const Ranking& ranking, const Provenance& provenance);

struct FiresaleRow {
    std::string scenario_id;
    std::string shock;
    CascadeResult result;
};
std::string firesale_csv(const std::vector<FiresaleRow>& rows, const Provenance& provenance);
std::string cascade_csv(const InterbankNetwork& net, const CascadeResult& result, const Provenance& provenance);
std::string clearing_csv(const InterbankNetwork& net, const ClearingSolution<double>& sol,
                         const Provenance& provenance);

} // namespace contagion
