#include "contagion/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "contagion/clearing.hpp"
#include "contagion/config.hpp"
#include "contagion/error.hpp"
#include "contagion/log.hpp"

namespace contagion {

namespace {

const char* const kFormatHelp = R"(File formats (UTF-8, '.' decimal separator, LF line endings; optional first
line "#format=contagion/1"; '#' comment lines may precede the header):
  banks.csv      bank_id,liquid_assets,illiquid_assets,deposits,short_term_liabilities
  exposures.csv  lender_id,borrower_id,amount
  holdings.csv   bank_id,asset_id,amount
  assets.csv     asset_id,depth
Config files hold one `section.key = value` per line. Seed precedence:
--seed, then CONTAGION_SEED, then run.seed. Results and resolved.cfg are
written under --out.)";

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> jobs;
    std::string out;
    std::string banks, exposures, holdings, assets;
};

ScenarioConfig resolve(const Overrides& o) {
    KeyValueConfig kv;
    if (!o.config.empty()) kv = KeyValueConfig::load(o.config);
    if (auto env = seed_from_env()) kv.set("run.seed", std::to_string(*env));
    if (o.seed) kv.set("run.seed", std::to_string(*o.seed));
    if (o.trials) kv.set("run.trials", std::to_string(*o.trials));
    if (o.jobs) kv.set("run.jobs", std::to_string(*o.jobs));
    if (!o.out.empty()) kv.set("run.out", o.out);
    if (!o.banks.empty() || !o.exposures.empty() || !o.holdings.empty() || !o.assets.empty()) {
        std::vector<std::string> drop;
        for (const auto& [key, value] : kv.values())
            if (key.starts_with("network.") || key.starts_with("input.")) drop.push_back(key);
        for (const auto& key : drop) kv.erase(key);
        if (!o.banks.empty()) kv.set("input.banks", o.banks);
        if (!o.exposures.empty()) kv.set("input.exposures", o.exposures);
        if (!o.holdings.empty()) kv.set("input.holdings", o.holdings);
        if (!o.assets.empty()) kv.set("input.assets", o.assets);
    }
    return ScenarioConfig::from(kv);
}

LoadedNetwork make_network(const ScenarioConfig& c) {
    if (c.source == NetworkSource::Loaded) return load_network(c.input);
    switch (c.generator) {
    case GeneratorKind::Interbank: return gen_interbank(c.interbank);
    case GeneratorKind::Bipartite: return gen_bipartite(c.bipartite);
    case GeneratorKind::SyntheticEba: return gen_synthetic_eba(c.seed);
    }
    throw ValidationError("unknown generator");
}

InterbankNetwork interbank_network(const ScenarioConfig& c, const std::string& command) {
    auto net = make_network(c);
    if (auto* ib = std::get_if<InterbankNetwork>(&net)) return std::move(*ib);
    throw ValidationError(command + " needs an interbank network (exposures file or interbank generator)");
}

BipartiteNetwork bipartite_network(const ScenarioConfig& c, const std::string& command) {
    auto net = make_network(c);
    if (auto* bp = std::get_if<BipartiteNetwork>(&net)) return std::move(*bp);
    throw ValidationError(command + " needs a bank-asset network (holdings file or bipartite generator)");
}

void write_resolved(const ScenarioConfig& c) {
    write_file_atomic(c.out / "resolved.cfg", c.provenance().comment_line() + c.resolved().canonical());
}

std::vector<std::string> split_ids(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::size_t> shocked_banks(const InterbankNetwork& net, const ScenarioConfig& c) {
    std::vector<std::size_t> shocked;
    if (c.shock.kind == Shock::Kind::None) return shocked;
    if (c.shock.kind != Shock::Kind::BankDefault)
        throw ValidationError("this command accepts shock.kind = bank or none");
    for (const auto& id : split_ids(c.shock.target)) shocked.push_back(net.index_of(id));
    if (shocked.empty()) throw ValidationError("shock.kind = bank needs shock.target");
    return shocked;
}

void cmd_generate(const ScenarioConfig& c, std::ostream& out) {
    if (c.source != NetworkSource::Generated) throw ValidationError("generate needs network.generator");
    const auto prov = c.provenance();
    const auto net = make_network(c);
    const auto files = std::visit([&](const auto& n) { return save_network(n, c.out, &prov); }, net);
    for (const auto& f : files) out << "wrote " << f.string() << '\n';
}

void cmd_simulate_interbank(const ScenarioConfig& c, std::ostream& out) {
    const auto prov = c.provenance();
    if (c.shock.kind == Shock::Kind::BankDefault) {
        const auto net = interbank_network(c, "simulate-interbank");
        auto state = initial_state(net);
        for (auto i : shocked_banks(net, c)) shock_bank(state, i, c.shock_loss_fraction);
        const auto result = run_cascade(state, c.cascade);
        write_file_atomic(c.out / "cascade.csv", cascade_csv(net, result, prov));
        out << "defaults " << result.defaulted.size() << " of " << result.n_banks << " in " << result.rounds
            << " rounds\n";
        return;
    }
    if (c.shock.kind != Shock::Kind::None && c.shock.kind != Shock::Kind::RandomBank)
        throw ValidationError("simulate-interbank accepts shock.kind = bank, random_bank or none");

    ContagionStats stats;
    double value = 0.0;
    if (c.source == NetworkSource::Generated) {
        if (c.generator != GeneratorKind::Interbank)
            throw ValidationError("simulate-interbank needs an interbank network");
        stats = monte_carlo(c.interbank, c.monte_carlo_options());
        value = c.interbank.avg_degree;
    } else {
        // Fixed network: trial t defaults one random bank.
        const auto net = interbank_network(c, "simulate-interbank");
        if (net.size() == 0) throw ValidationError("network has no banks");
        stats.trials = c.trials;
        stats.systemic_threshold = c.systemic_threshold;
        double extent_sum = 0.0;
        for (std::size_t t = 0; t < c.trials; ++t) {
            auto eng = make_engine(derive_seed(c.seed, t, 1));
            const auto bank = static_cast<std::size_t>(uniform_index(eng, net.size()));
            const auto r = run_cascade(shock_bank(net, bank, c.shock_loss_fraction), c.cascade);
            if (r.fraction_defaulted > c.systemic_threshold) {
                ++stats.systemic_trials;
                extent_sum += r.fraction_defaulted;
            }
        }
        stats.probability = c.trials ? static_cast<double>(stats.systemic_trials) / static_cast<double>(c.trials) : 0.0;
        if (stats.systemic_trials) stats.extent = extent_sum / static_cast<double>(stats.systemic_trials);
    }
    write_file_atomic(c.out / "contagion.csv", sweep_csv({SweepRow{value, stats}}, c.seed, prov));
    out << "probability " << format_number(stats.probability) << " extent "
        << (stats.extent ? format_number(*stats.extent) : "NA") << '\n';
}

void cmd_clearing(const ScenarioConfig& c, std::ostream& out) {
    const auto net = interbank_network(c, "clearing");
    const auto shocked = shocked_banks(net, c);
    const auto cmp = cascade_vs_clearing(net, shocked);
    const auto prov = c.provenance();
    write_file_atomic(c.out / "clearing.csv", clearing_csv(net, cmp.clearing, prov));

    std::string comparison = prov.comment_line() + "bank_id,cascade_default,clearing_default\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto in = [i](const std::vector<std::size_t>& v) {
            return std::find(v.begin(), v.end(), i) != v.end() ? "1" : "0";
        };
        comparison += net.bank(i).id + ',' + in(cmp.cascade_defaults) + ',' + in(cmp.clearing_defaults) + '\n';
    }
    write_file_atomic(c.out / "comparison.csv", comparison);

    out << "p = (";
    for (Eigen::Index i = 0; i < cmp.clearing.payments.size(); ++i)
        out << (i ? ", " : "") << format_number(cmp.clearing.payments[i]);
    out << ")\n";
    if (!cmp.clearing.unique) out << "note: least and greatest clearing vectors differ\n";
}

void cmd_simulate_firesale(const ScenarioConfig& c, std::ostream& out) {
    const auto net = bipartite_network(c, "simulate-firesale");
    std::vector<FiresaleRow> rows;
    auto config = c.firesale_config();
    if (c.shock.kind == Shock::Kind::None) {
        for (const auto& s : single_asset_scenarios(net, c.shock.haircut)) {
            config.shock = s.shock;
            rows.push_back({s.id, describe(s.shock), run_firesale(net, config)});
        }
    } else {
        rows.push_back({"config", describe(c.shock), run_firesale(net, config)});
    }
    write_file_atomic(c.out / "firesale.csv", firesale_csv(rows, c.provenance()));
    std::size_t systemic = 0;
    for (const auto& r : rows) systemic += r.result.fraction_defaulted > c.systemic_threshold;
    out << rows.size() << " scenarios, " << systemic << " systemic\n";
}

void cmd_rank(const ScenarioConfig& c, std::ostream& out) {
    const auto net = make_network(c);
    Ranking ranking;
    if (const auto* ib = std::get_if<InterbankNetwork>(&net)) {
        std::vector<std::string> ids;
        for (const auto& b : ib->banks()) ids.push_back(b.id);
        switch (c.rank_basis) {
        case RankBasis::Random: ranking = rank_random(ids, c.seed); break;
        case RankBasis::Size: ranking = rank_by_size(ib->banks()); break;
        case RankBasis::Systemicness: ranking = systemicness(*ib); break;
        default: throw ValidationError("rank basis '" + to_string(c.rank_basis) + "' needs a bank-asset network");
        }
    } else {
        const auto& bp = std::get<BipartiteNetwork>(net);
        std::vector<std::string> ids;
        for (const auto& b : bp.banks()) ids.push_back(b.id);
        switch (c.rank_basis) {
        case RankBasis::Random: ranking = rank_random(ids, c.seed); break;
        case RankBasis::Size: ranking = rank_by_size(bp.banks()); break;
        case RankBasis::Systemicness: ranking = systemicness(bp); break;
        case RankBasis::OverlapCentrality: ranking = overlap_centrality(bp); break;
        case RankBasis::AssetVolume: ranking = rank_assets_by_volume(bp); break;
        }
    }
    write_file_atomic(c.out / "ranking.csv", ranking_csv(ranking, c.provenance()));
    for (std::size_t r = 0; r < std::min<std::size_t>(10, ranking.entries.size()); ++r)
        out << r + 1 << ' ' << ranking.entries[r].id << ' ' << format_number(ranking.entries[r].score) << '\n';
}

void cmd_intervene(const ScenarioConfig& c, std::ostream& out) {
    const auto net = bipartite_network(c, "intervene");
    const auto scenarios = single_asset_scenarios(net, c.scenario_haircut);
    InterventionConfig config{c.firesale_config(), c.seed, c.jobs};
    std::vector<InterventionRecord> records;
    for (auto kind : c.intervene_kinds) {
        auto base = baseline_records(net, scenarios, config, kind);
        records.insert(records.end(), base.begin(), base.end());
        auto cells = kind == InterventionKind::Bailout
                         ? bailout_experiment(net, c.bailout_strategies, c.fractions, scenarios, config)
                         : buyout_experiment(net, c.buyout_strategies, c.fractions, scenarios, config);
        records.insert(records.end(), cells.begin(), cells.end());
    }
    const auto prov = c.provenance();
    for (auto format : c.formats)
        for (const auto& f : export_results(records, format, c.out, prov)) out << "wrote " << f.string() << '\n';
}

void cmd_sweep(const ScenarioConfig& c, std::ostream& out) {
    if (c.sweep_values.empty()) throw ValidationError("sweep.values is empty");
    if (c.source != NetworkSource::Generated) throw ValidationError("sweep needs network.generator");
    const auto prov = c.provenance();
    if (c.sweep_param == SweepParam::Leverage) {
        if (c.generator != GeneratorKind::Bipartite)
            throw ValidationError("a leverage sweep needs network.generator = bipartite");
        CriticalLeverageOptions options{c.trials, c.seed, c.crossing_threshold, c.jobs};
        const auto result = critical_leverage(c.bipartite, c.sweep_values, c.firesale_config(), options);
        write_file_atomic(c.out / "critical_leverage.csv", critical_leverage_csv(result, c.seed, prov));
        out << "critical leverage " << (result.critical ? format_number(*result.critical) : "NA") << '\n';
        return;
    }
    if (c.generator != GeneratorKind::Interbank)
        throw ValidationError("degree and capital sweeps need network.generator = interbank");
    const auto rows = c.sweep_param == SweepParam::Degree
                          ? degree_sweep(c.interbank, c.sweep_values, c.monte_carlo_options())
                          : capital_sweep(c.interbank, c.sweep_values, c.monte_carlo_options());
    write_file_atomic(c.out / "sweep.csv", sweep_csv(rows, c.seed, prov));
    for (const auto& r : rows)
        out << format_number(r.value) << ' ' << format_number(r.stats.probability) << ' '
            << (r.stats.extent ? format_number(*r.stats.extent) : "NA") << '\n';
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Financial network contagion simulator", "contagion"};
    app.footer(kFormatHelp);
    app.require_subcommand(1, 1);
    Overrides o;
    std::string log_level = "warning";
    app.add_option("--log-level", log_level, "debug, info, warning, error or off");

    using Handler = void (*)(const ScenarioConfig&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands{
        {"generate", "Generate a network and write its CSV files", cmd_generate},
        {"simulate-interbank", "Run default cascades on an interbank network", cmd_simulate_interbank},
        {"clearing", "Compute the clearing payment vector", cmd_clearing},
        {"simulate-firesale", "Run fire-sale contagion on a bank-asset network", cmd_simulate_firesale},
        {"rank", "Rank banks or assets by systemic importance", cmd_rank},
        {"intervene", "Evaluate bail-out and buy-out strategies", cmd_intervene},
        {"sweep", "Sweep degree, capital or leverage", cmd_sweep},
    };
    std::map<CLI::App*, Handler> handlers;
    for (const auto& [name, help, handler] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "Config file (section.key = value)");
        sub->add_option("--seed", o.seed, "Master seed");
        sub->add_option("--trials", o.trials, "Monte Carlo trials per point");
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--jobs", o.jobs, "Worker threads");
        sub->add_option("--banks", o.banks, "banks.csv");
        sub->add_option("--exposures", o.exposures, "exposures.csv");
        sub->add_option("--holdings", o.holdings, "holdings.csv");
        sub->add_option("--assets", o.assets, "assets.csv");
        handlers[sub] = handler;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (log_level == "debug") set_log_level(LogLevel::Debug);
        else if (log_level == "info") set_log_level(LogLevel::Info);
        else if (log_level == "warning") set_log_level(LogLevel::Warning);
        else if (log_level == "error") set_log_level(LogLevel::Error);
        else if (log_level == "off") set_log_level(LogLevel::Off);
        else throw ValidationError("unknown log level '" + log_level + "'");

        const auto config = resolve(o);
        write_resolved(config);
        for (auto* sub : app.get_subcommands()) handlers.at(sub)(config, out);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return 2;
    }
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

} // namespace contagion
