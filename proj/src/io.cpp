#include "contagion/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "contagion/error.hpp"

namespace contagion {
namespace fs = std::filesystem;

std::string format_number(double value) {
    if (value == 0.0) return "0"; // also folds -0
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return std::string(buf, end);
}

std::string Provenance::comment_line() const {
    return "# contagion " + version + " seed=" + std::to_string(seed) + " config_hash=" +
           (config_hash.empty() ? "none" : config_hash) + "\n";
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "", "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

// ---------------------------------------------------------------------------
// CSV reading

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string_view> fields;
};

struct CsvTable {
    std::string source;
    std::size_t header_line = 0;
    std::vector<std::size_t> column_of; // expected column -> position in file
    std::vector<CsvRow> rows;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

CsvTable read_csv(std::string_view text, const std::string& source, std::string_view expected_header) {
    const auto expected = split(expected_header, ',');
    CsvTable table;
    table.source = source;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (!have_header) {
            if (line.starts_with("#format=")) {
                const auto version = line.substr(8);
                if (version != kFormatVersion)
                    throw ParseError(source, line_no, "", "unsupported format version '" + std::string(version) +
                                                              "', expected '" + std::string(kFormatVersion) + "'");
                continue;
            }
            if (line.starts_with("#") || line.empty()) continue;
            const auto columns = split(line, ',');
            table.header_line = line_no;
            for (const auto& want : expected) {
                const auto it = std::find(columns.begin(), columns.end(), want);
                if (it == columns.end())
                    throw ParseError(source, line_no, std::string(want), "missing column");
                table.column_of.push_back(static_cast<std::size_t>(it - columns.begin()));
            }
            for (const auto& have : columns) {
                if (std::find(expected.begin(), expected.end(), have) == expected.end())
                    throw ParseError(source, line_no, std::string(have), "unknown column");
            }
            if (std::set<std::string_view>(columns.begin(), columns.end()).size() != columns.size())
                throw ParseError(source, line_no, "", "duplicate column in header");
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != expected.size())
            throw ParseError(source, line_no, "", "expected " + std::to_string(expected.size()) + " fields, found " +
                                                      std::to_string(fields.size()));
        CsvRow row{line_no, {}};
        for (auto pos : table.column_of) row.fields.push_back(fields[pos]);
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(source, 0, "", "missing header line '" + std::string(expected_header) + "'");
    return table;
}

double parse_number(const CsvTable& t, const CsvRow& row, std::size_t col, std::string_view column) {
    const auto field = row.fields[col];
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last || std::isnan(value))
        throw ParseError(t.source, row.line, std::string(column), "not a number: '" + std::string(field) + "'");
    return value;
}

double parse_non_negative(const CsvTable& t, const CsvRow& row, std::size_t col, std::string_view column) {
    const double v = parse_number(t, row, col, column);
    if (v < 0.0) throw ParseError(t.source, row.line, std::string(column), "negative value " + std::string(row.fields[col]));
    if (!std::isfinite(v)) throw ParseError(t.source, row.line, std::string(column), "value must be finite");
    return v;
}

std::string parse_id(const CsvTable& t, const CsvRow& row, std::size_t col, std::string_view column) {
    const auto field = row.fields[col];
    if (field.empty()) throw ParseError(t.source, row.line, std::string(column), "empty id");
    if (field.find_first_of(" \t\";") != std::string_view::npos)
        throw ParseError(t.source, row.line, std::string(column), "id contains whitespace, quote or ';'");
    return std::string(field);
}

struct ParsedBanks {
    std::vector<Bank> banks;
    std::vector<std::size_t> lines;
    std::map<std::string, std::size_t, std::less<>> index;
};

ParsedBanks parse_banks(std::string_view text, const std::string& source) {
    const auto t = read_csv(text, source, kBanksHeader);
    ParsedBanks out;
    for (const auto& row : t.rows) {
        Bank b;
        b.id = parse_id(t, row, 0, "bank_id");
        b.balance_sheet.liquid_assets = parse_non_negative(t, row, 1, "liquid_assets");
        b.balance_sheet.illiquid_assets = parse_non_negative(t, row, 2, "illiquid_assets");
        b.balance_sheet.deposits = parse_non_negative(t, row, 3, "deposits");
        b.balance_sheet.short_term_liabilities = parse_non_negative(t, row, 4, "short_term_liabilities");
        if (!out.index.emplace(b.id, out.banks.size()).second)
            throw ParseError(source, row.line, "bank_id", "duplicate bank id '" + b.id + "'");
        out.banks.push_back(std::move(b));
        out.lines.push_back(row.line);
    }
    return out;
}

std::string header_block(std::string_view header, const Provenance* provenance) {
    std::string out = "#format=" + std::string(kFormatVersion) + "\n";
    if (provenance) out += provenance->comment_line();
    out += header;
    out += '\n';
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Networks

InterbankNetwork parse_interbank(std::string_view banks_text, std::string_view exposures_text,
                                 const std::string& banks_source, const std::string& exposures_source) {
    auto parsed = parse_banks(banks_text, banks_source);
    const auto t = read_csv(exposures_text, exposures_source, kExposuresHeader);
    std::vector<Exposure> exposures;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& row : t.rows) {
        const auto lender_id = parse_id(t, row, 0, "lender_id");
        const auto borrower_id = parse_id(t, row, 1, "borrower_id");
        const auto lender = parsed.index.find(lender_id);
        if (lender == parsed.index.end())
            throw ParseError(exposures_source, row.line, "lender_id", "dangling bank id '" + lender_id + "'");
        const auto borrower = parsed.index.find(borrower_id);
        if (borrower == parsed.index.end())
            throw ParseError(exposures_source, row.line, "borrower_id", "dangling bank id '" + borrower_id + "'");
        const double amount = parse_non_negative(t, row, 2, "amount");
        if (!(amount > 0.0)) throw ParseError(exposures_source, row.line, "amount", "amount must be positive");
        if (lender->second == borrower->second)
            throw ParseError(exposures_source, row.line, "", "self-loop on '" + lender_id + "'");
        if (!seen.emplace(lender->second, borrower->second).second)
            throw ParseError(exposures_source, row.line, "", "duplicate edge " + lender_id + " -> " + borrower_id);
        exposures.push_back({lender->second, borrower->second, amount});
    }
    return InterbankNetwork::with_derived_positions(std::move(parsed.banks), std::move(exposures));
}

BipartiteNetwork parse_bipartite(std::string_view banks_text, std::string_view holdings_text,
                                 std::optional<std::string_view> assets_text, const std::string& banks_source,
                                 const std::string& holdings_source, const std::string& assets_source) {
    auto parsed = parse_banks(banks_text, banks_source);
    std::vector<Asset> assets;
    std::map<std::string, std::size_t, std::less<>> asset_index;
    if (assets_text) {
        const auto t = read_csv(*assets_text, assets_source, kAssetsHeader);
        for (const auto& row : t.rows) {
            auto id = parse_id(t, row, 0, "asset_id");
            const double depth = parse_number(t, row, 1, "depth");
            if (!(depth > 0.0)) throw ParseError(assets_source, row.line, "depth", "depth must be positive");
            if (!asset_index.emplace(id, assets.size()).second)
                throw ParseError(assets_source, row.line, "asset_id", "duplicate asset id '" + id + "'");
            assets.push_back({std::move(id), depth, 1.0});
        }
    }

    const auto t = read_csv(holdings_text, holdings_source, kHoldingsHeader);
    struct Entry {
        std::size_t bank, asset;
        double amount;
    };
    std::vector<Entry> entries;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& row : t.rows) {
        const auto bank_id = parse_id(t, row, 0, "bank_id");
        const auto asset_id = parse_id(t, row, 1, "asset_id");
        const auto b = parsed.index.find(bank_id);
        if (b == parsed.index.end())
            throw ParseError(holdings_source, row.line, "bank_id", "dangling bank id '" + bank_id + "'");
        auto a = asset_index.find(asset_id);
        if (a == asset_index.end()) {
            if (assets_text)
                throw ParseError(holdings_source, row.line, "asset_id", "dangling asset id '" + asset_id + "'");
            a = asset_index.emplace(asset_id, assets.size()).first;
            assets.push_back({asset_id, 0.0, 1.0});
        }
        const double amount = parse_non_negative(t, row, 2, "amount");
        if (!seen.emplace(b->second, a->second).second)
            throw ParseError(holdings_source, row.line, "", "duplicate holding " + bank_id + " / " + asset_id);
        entries.push_back({b->second, a->second, amount});
    }

    Eigen::MatrixXd units = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(parsed.banks.size()),
                                                  static_cast<Eigen::Index>(assets.size()));
    for (const auto& e : entries)
        units(static_cast<Eigen::Index>(e.bank), static_cast<Eigen::Index>(e.asset)) = e.amount;
    if (!assets_text) {
        // No depth file: depth equals total holdings of the asset.
        for (std::size_t k = 0; k < assets.size(); ++k) {
            const double held = units.col(static_cast<Eigen::Index>(k)).sum();
            assets[k].depth = held > 0.0 ? held : 1.0;
        }
    }

    const Eigen::VectorXd marked = units.rowwise().sum();
    for (std::size_t i = 0; i < parsed.banks.size(); ++i) {
        const double have = parsed.banks[i].balance_sheet.illiquid_assets;
        const double want = marked[static_cast<Eigen::Index>(i)];
        if (std::abs(have - want) > tolerance(std::max(have, want)))
            throw ParseError(banks_source, parsed.lines[i], "illiquid_assets",
                             "illiquid_assets " + format_number(have) + " of bank '" + parsed.banks[i].id +
                                 "' does not match its holdings " + format_number(want));
    }
    return BipartiteNetwork::with_marked_holdings(std::move(parsed.banks), std::move(assets), std::move(units));
}

LoadedNetwork load_network(const NetworkPaths& paths) {
    if (paths.banks.empty()) throw ValidationError("a banks file is required");
    const auto banks = read_file(paths.banks);
    if (paths.holdings.empty()) {
        if (paths.exposures.empty()) throw ValidationError("an interbank network needs an exposures file");
        if (!paths.assets.empty()) throw ValidationError("an assets file requires a holdings file");
        return parse_interbank(banks, read_file(paths.exposures), paths.banks.string(), paths.exposures.string());
    }
    if (!paths.exposures.empty())
        throw ValidationError("give either an exposures file or a holdings file, not both");
    const auto holdings = read_file(paths.holdings);
    std::optional<std::string> assets;
    if (!paths.assets.empty()) assets = read_file(paths.assets);
    return parse_bipartite(banks, holdings, assets ? std::optional<std::string_view>(*assets) : std::nullopt,
                           paths.banks.string(), paths.holdings.string(), paths.assets.string());
}

std::string banks_csv(std::span<const Bank> banks, const Provenance* provenance) {
    std::string out = header_block(kBanksHeader, provenance);
    for (const auto& b : banks) {
        const auto& bs = b.balance_sheet;
        out += b.id + ',' + format_number(bs.liquid_assets) + ',' + format_number(bs.illiquid_assets) + ',' +
               format_number(bs.deposits) + ',' + format_number(bs.short_term_liabilities) + '\n';
    }
    return out;
}

std::string exposures_csv(const InterbankNetwork& net, const Provenance* provenance) {
    std::string out = header_block(kExposuresHeader, provenance);
    for (const auto& e : net.exposures())
        out += net.bank(e.lender).id + ',' + net.bank(e.borrower).id + ',' + format_number(e.amount) + '\n';
    return out;
}

std::string holdings_csv(const BipartiteNetwork& net, const Provenance* provenance) {
    std::string out = header_block(kHoldingsHeader, provenance);
    const auto& u = net.units();
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index k = 0; k < u.cols(); ++k)
            if (u(i, k) > 0.0)
                out += net.bank(static_cast<std::size_t>(i)).id + ',' + net.asset(static_cast<std::size_t>(k)).id +
                       ',' + format_number(u(i, k)) + '\n';
    return out;
}

std::string assets_csv(const BipartiteNetwork& net, const Provenance* provenance) {
    std::string out = header_block(kAssetsHeader, provenance);
    for (const auto& a : net.assets()) out += a.id + ',' + format_number(a.depth) + '\n';
    return out;
}

std::vector<fs::path> save_network(const InterbankNetwork& net, const fs::path& dir, const Provenance* provenance) {
    const auto banks = dir / "banks.csv";
    const auto exposures = dir / "exposures.csv";
    write_file_atomic(banks, banks_csv(net.banks(), provenance));
    write_file_atomic(exposures, exposures_csv(net, provenance));
    return {banks, exposures};
}

std::vector<fs::path> save_network(const BipartiteNetwork& net, const fs::path& dir, const Provenance* provenance) {
    if (std::any_of(net.assets().begin(), net.assets().end(), [](const Asset& a) { return a.price != 1.0; }))
        throw ValidationError("only networks at initial prices can be saved; holdings are stored in units");
    const auto banks = dir / "banks.csv";
    const auto holdings = dir / "holdings.csv";
    const auto assets = dir / "assets.csv";
    write_file_atomic(banks, banks_csv(net.banks(), provenance));
    write_file_atomic(holdings, holdings_csv(net, provenance));
    write_file_atomic(assets, assets_csv(net, provenance));
    return {banks, holdings, assets};
}

// ---------------------------------------------------------------------------
// Results

void sort_records(std::vector<InterventionRecord>& records) {
    std::stable_sort(records.begin(), records.end(), [](const InterventionRecord& a, const InterventionRecord& b) {
        return std::tuple(a.scenario_id, to_string(a.kind), a.strategy_name(), a.padded_fraction) <
               std::tuple(b.scenario_id, to_string(b.kind), b.strategy_name(), b.padded_fraction);
    });
}

namespace {

constexpr std::string_view kRecordsHeader =
    "scenario_id,strategy,fraction,n_defaults,guarantee_size,systemic,kind,fraction_defaulted,guarantee_drawn,"
    "padded_ids";

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

nlohmann::json to_json(const InterventionRecord& r) {
    return nlohmann::json{{"scenario_id", r.scenario_id},
                          {"strategy", r.strategy_name()},
                          {"fraction", r.padded_fraction},
                          {"n_defaults", r.n_defaults},
                          {"guarantee_size", r.guarantee_size},
                          {"systemic", r.systemic},
                          {"kind", to_string(r.kind)},
                          {"fraction_defaulted", r.fraction_defaulted},
                          {"guarantee_drawn", r.guarantee_drawn},
                          {"padded_ids", r.padded_ids}};
}

} // namespace

std::string records_csv(std::vector<InterventionRecord> records, const Provenance& provenance) {
    sort_records(records);
    std::string out = provenance.comment_line();
    out += kRecordsHeader;
    out += '\n';
    for (const auto& r : records) {
        out += r.scenario_id + ',' + r.strategy_name() + ',' + format_number(r.padded_fraction) + ',' +
               std::to_string(r.n_defaults) + ',' + format_number(r.guarantee_size) + ',' + (r.systemic ? "1" : "0") +
               ',' + to_string(r.kind) + ',' + format_number(r.fraction_defaulted) + ',' +
               format_number(r.guarantee_drawn) + ',' + join(r.padded_ids, ';') + '\n';
    }
    return out;
}

std::vector<InterventionRecord> parse_records_csv(std::string_view csv) {
    const auto t = read_csv(csv, "interventions.csv", kRecordsHeader);
    std::vector<InterventionRecord> out;
    for (const auto& row : t.rows) {
        InterventionRecord r;
        r.scenario_id = std::string(row.fields[0]);
        const std::string strategy(row.fields[1]);
        if (strategy != "none") r.strategy = parse_rank_basis(strategy);
        r.padded_fraction = parse_number(t, row, 2, "fraction");
        r.n_defaults = static_cast<std::size_t>(parse_non_negative(t, row, 3, "n_defaults"));
        r.guarantee_size = parse_non_negative(t, row, 4, "guarantee_size");
        if (row.fields[5] != "0" && row.fields[5] != "1")
            throw ParseError(t.source, row.line, "systemic", "expected 0 or 1");
        r.systemic = row.fields[5] == "1";
        r.kind = parse_intervention_kind(std::string(row.fields[6]));
        r.fraction_defaulted = parse_non_negative(t, row, 7, "fraction_defaulted");
        r.guarantee_drawn = parse_non_negative(t, row, 8, "guarantee_drawn");
        if (!row.fields[9].empty())
            for (auto id : split(row.fields[9], ';')) r.padded_ids.emplace_back(id);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<fs::path> export_results(std::vector<InterventionRecord> records, ExportFormat format, const fs::path& dir,
                                     const Provenance& provenance) {
    if (records.empty()) throw ValidationError("no records to export");
    sort_records(records);
    switch (format) {
    case ExportFormat::CSV: {
        const auto path = dir / "interventions.csv";
        write_file_atomic(path, records_csv(records, provenance));
        return {path};
    }
    case ExportFormat::JsonLines: {
        std::string out;
        nlohmann::json meta{{"seed", provenance.seed}, {"config_hash", provenance.config_hash},
                            {"version", provenance.version}};
        out += nlohmann::json{{"provenance", meta}}.dump() + '\n';
        for (const auto& r : records) out += to_json(r).dump() + '\n';
        const auto path = dir / "interventions.jsonl";
        write_file_atomic(path, out);
        return {path};
    }
    case ExportFormat::PlotData: {
        std::map<std::string, std::string> panels;
        for (const auto& r : records) {
            const auto name = to_string(r.kind) + "_" + r.strategy_name();
            auto& body = panels[name];
            if (body.empty())
                body = provenance.comment_line() + "# panel: " + name +
                       "\n# x: padded_fraction  y: n_defaults  (guarantee_size systemic scenario_id follow)\n";
            body += format_number(r.padded_fraction) + ' ' + std::to_string(r.n_defaults) + ' ' +
                    format_number(r.guarantee_size) + ' ' + (r.systemic ? "1" : "0") + ' ' + r.scenario_id + '\n';
        }
        std::vector<fs::path> paths;
        for (const auto& [name, body] : panels) {
            const auto path = dir / (name + ".dat");
            write_file_atomic(path, body);
            paths.push_back(path);
        }
        return paths;
    }
    }
    return {};
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t seed, const Provenance& provenance) {
    std::string out = provenance.comment_line() + "z_or_capital,probability,extent,trials,seed\n";
    for (const auto& r : rows)
        out += format_number(r.value) + ',' + format_number(r.stats.probability) + ',' +
               (r.stats.extent ? format_number(*r.stats.extent) : "NA") + ',' + std::to_string(r.stats.trials) + ',' +
               std::to_string(seed) + '\n';
    return out;
}

std::string critical_leverage_csv(const CriticalLeverageResult& result, std::uint64_t seed,
                                  const Provenance& provenance) {
    std::string out = provenance.comment_line();
    out += "# critical_leverage=" + (result.critical ? format_number(*result.critical) : std::string("NA")) + "\n";
    out += "leverage,probability,seed\n";
    for (const auto& r : result.rows)
        out += format_number(r.leverage) + ',' + format_number(r.probability) + ',' + std::to_string(seed) + '\n';
    return out;
}

std::string ranking_csv(const Ranking& ranking, const Provenance& provenance) {
    std::string out = provenance.comment_line() + "rank,id,score,basis\n";
    for (std::size_t r = 0; r < ranking.entries.size(); ++r)
        out += std::to_string(r + 1) + ',' + ranking.entries[r].id + ',' + format_number(ranking.entries[r].score) +
               ',' + to_string(ranking.basis) + '\n';
    return out;
}

std::string firesale_csv(const std::vector<FiresaleRow>& rows, const Provenance& provenance) {
    std::string out =
        provenance.comment_line() + "scenario_id,shock,n_defaults,fraction,equity_loss,rounds,converged\n";
    for (const auto& r : rows)
        out += r.scenario_id + ',' + r.shock + ',' + std::to_string(r.result.defaulted.size()) + ',' +
               format_number(r.result.fraction_defaulted) + ',' + format_number(r.result.total_equity_loss) + ',' +
               std::to_string(r.result.rounds) + ',' + (r.result.converged ? "1" : "0") + '\n';
    return out;
}

std::string cascade_csv(const InterbankNetwork& net, const CascadeResult& result, const Provenance& provenance) {
    std::vector<std::string> ids, rounds;
    for (auto i : result.defaulted) ids.push_back(net.bank(i).id);
    for (auto c : result.per_round_defaults) rounds.push_back(std::to_string(c));
    std::string out = provenance.comment_line() +
                      "n_banks,n_defaults,fraction_defaulted,rounds,total_equity_loss,per_round_defaults,defaulted_ids\n";
    out += std::to_string(result.n_banks) + ',' + std::to_string(result.defaulted.size()) + ',' +
           format_number(result.fraction_defaulted) + ',' + std::to_string(result.rounds) + ',' +
           format_number(result.total_equity_loss) + ',' + join(rounds, ';') + ',' + join(ids, ';') + '\n';
    return out;
}

std::string clearing_csv(const InterbankNetwork& net, const ClearingSolution<double>& sol,
                         const Provenance& provenance) {
    std::string out = provenance.comment_line() + "bank_id,payment,nominal,equity_after,defaulted\n";
    std::set<std::size_t> defaults(sol.defaults.begin(), sol.defaults.end());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out += net.bank(i).id + ',' + format_number(sol.payments[k]) + ',' + format_number(sol.nominal[k]) + ',' +
               format_number(sol.equity_after[k]) + ',' + (defaults.count(i) ? "1" : "0") + '\n';
    }
    return out;
}

} // namespace contagion
