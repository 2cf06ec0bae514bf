#include "contagion/config.hpp"

#include <charconv>
#include <cstdlib>
#include <set>

#include "contagion/error.hpp"

namespace contagion {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(',', start);
        if (pos == std::string_view::npos) pos = s.size();
        const auto item = trim(s.substr(start, pos - start));
        if (!item.empty()) out.emplace_back(item);
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(v))
        throw ValidationError(key + ": expected a number, got '" + std::string(text) + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, std::string_view text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError(key + ": expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

bool to_bool(const std::string& key, std::string_view text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ValidationError(key + ": expected true or false, got '" + std::string(text) + "'");
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_number(values[i]);
    return out;
}

template <class T, class F>
std::string join_with(const std::vector<T>& values, F&& name) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + name(values[i]);
    return out;
}

// Consumes keys from a config and remembers which were read.
class Reader {
public:
    explicit Reader(const KeyValueConfig& kv) : kv_(kv) {}

    std::optional<std::string> str(const std::string& key) {
        used_.insert(key);
        return kv_.get(key);
    }
    template <class T, class F>
    void read(const std::string& key, T& target, F&& convert) {
        if (auto v = str(key)) target = convert(key, *v);
    }
    void number(const std::string& key, double& target) { read(key, target, to_double); }
    void count(const std::string& key, std::size_t& target) {
        read(key, target, [](const std::string& k, const std::string& v) { return static_cast<std::size_t>(to_u64(k, v)); });
    }
    void finish() const {
        for (const auto& [key, value] : kv_.values())
            if (!used_.count(key)) throw ValidationError("unknown config key '" + key + "'");
    }

private:
    const KeyValueConfig& kv_;
    std::set<std::string> used_;
};

DegreeDistribution::Kind parse_degree_kind(const std::string& key, const std::string& v) {
    if (v == "erdos_renyi") return DegreeDistribution::Kind::ErdosRenyi;
    if (v == "power_law") return DegreeDistribution::Kind::PowerLaw;
    throw ValidationError(key + ": expected erdos_renyi or power_law, got '" + v + "'");
}

SizeDistribution::Kind parse_size_kind(const std::string& key, const std::string& v) {
    if (v == "uniform") return SizeDistribution::Kind::Uniform;
    if (v == "power_law") return SizeDistribution::Kind::PowerLaw;
    throw ValidationError(key + ": expected uniform or power_law, got '" + v + "'");
}

std::string shock_kind_name(Shock::Kind kind) {
    switch (kind) {
    case Shock::Kind::None: return "none";
    case Shock::Kind::AssetDevaluation: return "asset";
    case Shock::Kind::BankDefault: return "bank";
    case Shock::Kind::RandomAsset: return "random_asset";
    case Shock::Kind::RandomBank: return "random_bank";
    }
    return "none";
}

Shock::Kind parse_shock_kind(const std::string& key, const std::string& v) {
    for (auto k : {Shock::Kind::None, Shock::Kind::AssetDevaluation, Shock::Kind::BankDefault, Shock::Kind::RandomAsset,
                   Shock::Kind::RandomBank})
        if (shock_kind_name(k) == v) return k;
    throw ValidationError(key + ": expected none, asset, bank, random_asset or random_bank, got '" + v + "'");
}

ExportFormat parse_format(const std::string& key, const std::string& v) {
    if (v == "csv") return ExportFormat::CSV;
    if (v == "jsonl") return ExportFormat::JsonLines;
    if (v == "plot") return ExportFormat::PlotData;
    throw ValidationError(key + ": expected csv, jsonl or plot, got '" + v + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F&& parse_item) {
    std::vector<T> out;
    for (const auto& item : split_list(v)) out.push_back(parse_item(key, item));
    return out;
}

RankBasis rank_basis_item(const std::string& key, const std::string& v) {
    try {
        return parse_rank_basis(v);
    } catch (const ValidationError& e) {
        throw ValidationError(key + ": " + e.what());
    }
}

} // namespace

std::string to_string(ImpactKind kind) { return kind == ImpactKind::Linear ? "linear" : "exponential"; }

std::string to_string(ExportFormat format) {
    switch (format) {
    case ExportFormat::CSV: return "csv";
    case ExportFormat::JsonLines: return "jsonl";
    case ExportFormat::PlotData: return "plot";
    }
    return "csv";
}

std::string to_string(SweepParam param) {
    switch (param) {
    case SweepParam::Degree: return "degree";
    case SweepParam::Capital: return "capital";
    case SweepParam::Leverage: return "leverage";
    }
    return "degree";
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& source) {
    KeyValueConfig cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "", "expected 'key = value'");
        const auto key = std::string(trim(line.substr(0, eq)));
        const auto value = std::string(trim(line.substr(eq + 1)));
        if (key.empty() || key.find_first_of(" \t") != std::string::npos)
            throw ParseError(source, line_no, "", "malformed key '" + key + "'");
        if (!cfg.values_.emplace(key, value).second)
            throw ParseError(source, line_no, key, "duplicate key");
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + '\n';
    return out;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* value = std::getenv("CONTAGION_SEED");
    if (!value || !*value) return std::nullopt;
    return to_u64("CONTAGION_SEED", value);
}

ScenarioConfig ScenarioConfig::from(const KeyValueConfig& kv) {
    ScenarioConfig c;
    Reader r(kv);

    const auto seed = r.str("run.seed");
    if (!seed) throw ValidationError("run.seed is required (config, CONTAGION_SEED or --seed)");
    c.seed = to_u64("run.seed", *seed);
    r.count("run.trials", c.trials);
    r.number("run.systemic_threshold", c.systemic_threshold);
    r.count("run.jobs", c.jobs);
    if (auto v = r.str("run.out")) c.out = *v;
    if (c.jobs == 0) throw ValidationError("run.jobs must be at least 1");
    if (!(c.systemic_threshold >= 0.0 && c.systemic_threshold < 1.0))
        throw ValidationError("run.systemic_threshold must lie in [0, 1)");

    const auto generator = r.str("network.generator");
    if (auto v = r.str("input.banks")) c.input.banks = *v;
    if (auto v = r.str("input.exposures")) c.input.exposures = *v;
    if (auto v = r.str("input.holdings")) c.input.holdings = *v;
    if (auto v = r.str("input.assets")) c.input.assets = *v;
    const bool loaded = !c.input.banks.empty() || !c.input.exposures.empty() || !c.input.holdings.empty() ||
                        !c.input.assets.empty();
    if (generator && loaded) throw ValidationError("specify either network.generator or input files, not both");
    if (!generator && !loaded) throw ValidationError("no network: set network.generator or input.banks");
    c.source = loaded ? NetworkSource::Loaded : NetworkSource::Generated;
    if (generator) {
        if (*generator == "interbank") c.generator = GeneratorKind::Interbank;
        else if (*generator == "bipartite") c.generator = GeneratorKind::Bipartite;
        else if (*generator == "synthetic_eba") c.generator = GeneratorKind::SyntheticEba;
        else throw ValidationError("network.generator: expected interbank, bipartite or synthetic_eba, got '" + *generator + "'");
    }

    // Generator keys; the relevant subset is validated below.
    std::size_t n_banks = 100;
    r.count("network.n_banks", n_banks);
    c.interbank.n_banks = c.bipartite.n_banks = n_banks;
    r.number("network.avg_degree", c.interbank.avg_degree);
    r.read("network.degree_dist", c.interbank.degree_dist.kind, parse_degree_kind);
    r.number("network.degree_exponent", c.interbank.degree_dist.exponent);
    SizeDistribution size;
    r.read("network.size_dist", size.kind, parse_size_kind);
    r.number("network.size_exponent", size.exponent);
    c.interbank.size_dist = c.bipartite.size_dist = size;
    double capital = 0.04;
    if (c.generator == GeneratorKind::Bipartite) capital = 0.05;
    r.number("network.capital_ratio", capital);
    c.interbank.capital_ratio = c.bipartite.capital_ratio = capital;
    r.number("network.interbank_fraction", c.interbank.interbank_fraction);
    double scale = 1.0, liquid = 0.0;
    r.number("network.total_asset_scale", scale);
    r.number("network.liquid_fraction", liquid);
    c.interbank.total_asset_scale = c.bipartite.total_asset_scale = scale;
    c.interbank.liquid_fraction = c.bipartite.liquid_fraction = liquid;
    r.count("network.n_assets", c.bipartite.n_assets);
    r.number("network.bank_avg_degree", c.bipartite.bank_avg_degree);
    r.number("network.depth_factor", c.bipartite.depth_factor);
    c.interbank.seed = c.bipartite.seed = c.seed;

    r.number("cascade.recovery_rate", c.cascade.recovery_rate);
    r.read("cascade.sequential", c.cascade.sequential, to_bool);
    r.number("cascade.shock_loss_fraction", c.shock_loss_fraction);
    if (!(c.cascade.recovery_rate >= 0.0 && c.cascade.recovery_rate <= 1.0))
        throw ValidationError("cascade.recovery_rate must lie in [0, 1]");
    if (!(c.shock_loss_fraction > 0.0 && c.shock_loss_fraction <= 1.0))
        throw ValidationError("cascade.shock_loss_fraction must lie in (0, 1]");

    r.read("shock.kind", c.shock.kind, parse_shock_kind);
    if (auto v = r.str("shock.target")) c.shock.target = *v;
    r.number("shock.haircut", c.shock.haircut);

    if (auto v = r.str("firesale.impact")) {
        if (*v == "linear") c.impact = ImpactKind::Linear;
        else if (*v == "exponential") c.impact = ImpactKind::Exponential;
        else throw ValidationError("firesale.impact: expected linear or exponential, got '" + *v + "'");
    }
    if (auto v = r.str("firesale.policy")) {
        if (*v == "on_default") c.policy.kind = LiquidationPolicy::Kind::OnDefault;
        else if (*v == "leverage_target") c.policy.kind = LiquidationPolicy::Kind::LeverageTarget;
        else throw ValidationError("firesale.policy: expected on_default or leverage_target, got '" + *v + "'");
    }
    r.number("firesale.max_leverage", c.policy.max_leverage);
    r.count("firesale.max_rounds", c.max_rounds);

    if (auto v = r.str("sweep.param")) {
        if (*v == "degree") c.sweep_param = SweepParam::Degree;
        else if (*v == "capital") c.sweep_param = SweepParam::Capital;
        else if (*v == "leverage") c.sweep_param = SweepParam::Leverage;
        else throw ValidationError("sweep.param: expected degree, capital or leverage, got '" + *v + "'");
    }
    if (auto v = r.str("sweep.values")) c.sweep_values = parse_list<double>("sweep.values", *v, to_double);
    r.number("sweep.crossing_threshold", c.crossing_threshold);

    r.read("rank.basis", c.rank_basis, rank_basis_item);

    if (auto v = r.str("intervene.kinds"))
        c.intervene_kinds = parse_list<InterventionKind>("intervene.kinds", *v, [](const std::string& k, const std::string& s) {
            try {
                return parse_intervention_kind(s);
            } catch (const ValidationError& e) {
                throw ValidationError(k + ": " + e.what());
            }
        });
    if (auto v = r.str("intervene.bailout_strategies"))
        c.bailout_strategies = parse_list<RankBasis>("intervene.bailout_strategies", *v, rank_basis_item);
    if (auto v = r.str("intervene.buyout_strategies"))
        c.buyout_strategies = parse_list<RankBasis>("intervene.buyout_strategies", *v, rank_basis_item);
    if (auto v = r.str("intervene.fractions")) c.fractions = parse_list<double>("intervene.fractions", *v, to_double);
    r.number("intervene.haircut", c.scenario_haircut);
    if (auto v = r.str("intervene.formats")) c.formats = parse_list<ExportFormat>("intervene.formats", *v, parse_format);
    for (double f : c.fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("intervene.fractions must lie in [0, 1]");
    if (!(c.scenario_haircut > 0.0 && c.scenario_haircut <= 1.0))
        throw ValidationError("intervene.haircut must lie in (0, 1]");

    r.finish();

    if (c.source == NetworkSource::Generated) {
        if (c.generator == GeneratorKind::Interbank) validate(c.interbank);
        if (c.generator == GeneratorKind::Bipartite) validate(c.bipartite);
    }
    validate(c.firesale_config());
    return c;
}

KeyValueConfig ScenarioConfig::resolved() const {
    KeyValueConfig kv;
    kv.set("run.seed", std::to_string(seed));
    kv.set("run.trials", std::to_string(trials));
    kv.set("run.systemic_threshold", format_number(systemic_threshold));

    if (source == NetworkSource::Loaded) {
        if (!input.banks.empty()) kv.set("input.banks", input.banks.string());
        if (!input.exposures.empty()) kv.set("input.exposures", input.exposures.string());
        if (!input.holdings.empty()) kv.set("input.holdings", input.holdings.string());
        if (!input.assets.empty()) kv.set("input.assets", input.assets.string());
    } else if (generator == GeneratorKind::SyntheticEba) {
        kv.set("network.generator", "synthetic_eba");
    } else {
        const bool ib = generator == GeneratorKind::Interbank;
        kv.set("network.generator", ib ? "interbank" : "bipartite");
        const auto& size = ib ? interbank.size_dist : bipartite.size_dist;
        kv.set("network.n_banks", std::to_string(ib ? interbank.n_banks : bipartite.n_banks));
        kv.set("network.size_dist", size.kind == SizeDistribution::Kind::Uniform ? "uniform" : "power_law");
        if (size.kind == SizeDistribution::Kind::PowerLaw) kv.set("network.size_exponent", format_number(size.exponent));
        kv.set("network.capital_ratio", format_number(ib ? interbank.capital_ratio : bipartite.capital_ratio));
        kv.set("network.total_asset_scale",
               format_number(ib ? interbank.total_asset_scale : bipartite.total_asset_scale));
        kv.set("network.liquid_fraction", format_number(ib ? interbank.liquid_fraction : bipartite.liquid_fraction));
        if (ib) {
            kv.set("network.avg_degree", format_number(interbank.avg_degree));
            const bool er = interbank.degree_dist.kind == DegreeDistribution::Kind::ErdosRenyi;
            kv.set("network.degree_dist", er ? "erdos_renyi" : "power_law");
            if (!er) kv.set("network.degree_exponent", format_number(interbank.degree_dist.exponent));
            kv.set("network.interbank_fraction", format_number(interbank.interbank_fraction));
        } else {
            kv.set("network.n_assets", std::to_string(bipartite.n_assets));
            kv.set("network.bank_avg_degree", format_number(bipartite.bank_avg_degree));
            kv.set("network.depth_factor", format_number(bipartite.depth_factor));
        }
    }

    kv.set("cascade.recovery_rate", format_number(cascade.recovery_rate));
    kv.set("cascade.sequential", cascade.sequential ? "true" : "false");
    kv.set("cascade.shock_loss_fraction", format_number(shock_loss_fraction));
    kv.set("shock.kind", shock_kind_name(shock.kind));
    if (!shock.target.empty()) kv.set("shock.target", shock.target);
    kv.set("shock.haircut", format_number(shock.haircut));
    kv.set("firesale.impact", to_string(impact));
    kv.set("firesale.policy", policy.kind == LiquidationPolicy::Kind::OnDefault ? "on_default" : "leverage_target");
    if (policy.kind == LiquidationPolicy::Kind::LeverageTarget)
        kv.set("firesale.max_leverage", format_number(policy.max_leverage));
    kv.set("firesale.max_rounds", std::to_string(max_rounds));
    kv.set("sweep.param", to_string(sweep_param));
    kv.set("sweep.values", join_numbers(sweep_values));
    kv.set("sweep.crossing_threshold", format_number(crossing_threshold));
    kv.set("rank.basis", to_string(rank_basis));
    kv.set("intervene.kinds", join_with(intervene_kinds, [](InterventionKind k) { return to_string(k); }));
    kv.set("intervene.bailout_strategies", join_with(bailout_strategies, [](RankBasis b) { return to_string(b); }));
    kv.set("intervene.buyout_strategies", join_with(buyout_strategies, [](RankBasis b) { return to_string(b); }));
    kv.set("intervene.fractions", join_numbers(fractions));
    kv.set("intervene.haircut", format_number(scenario_haircut));
    kv.set("intervene.formats", join_with(formats, [](ExportFormat f) { return to_string(f); }));
    return kv;
}

FiresaleConfig ScenarioConfig::firesale_config() const {
    FiresaleConfig f;
    f.impact = impact;
    f.policy = policy;
    f.shock = shock;
    f.max_rounds = max_rounds;
    f.systemic_threshold = systemic_threshold;
    f.seed = seed;
    return f;
}

MonteCarloOptions ScenarioConfig::monte_carlo_options() const {
    MonteCarloOptions m;
    m.trials = trials;
    m.systemic_threshold = systemic_threshold;
    m.seed = seed;
    m.jobs = jobs;
    m.cascade = cascade;
    return m;
}

} // namespace contagion
