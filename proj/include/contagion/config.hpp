#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contagion/cascade.hpp"
#include "contagion/firesale.hpp"
#include "contagion/intervene.hpp"
#include "contagion/io.hpp"
#include "contagion/netgen.hpp"
#include "contagion/rank.hpp"

namespace contagion {

/// Flat `section.key = value` text. Blank lines and lines starting with '#'
/// are ignored; repeated keys are an error.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, const std::string& source = "config");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    void erase(const std::string& key) { values_.erase(key); }
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

    /// Sorted "key = value" lines.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

/// FNV-1a 64, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

enum class NetworkSource { Generated, Loaded };
enum class GeneratorKind { Interbank, Bipartite, SyntheticEba };
enum class SweepParam { Degree, Capital, Leverage };

/// Fully resolved run configuration. Every field has a default except the
/// seed and the network source.
struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    double systemic_threshold = 0.05;
    std::size_t jobs = 1;
    std::filesystem::path out = "out";

    NetworkSource source = NetworkSource::Generated;
    GeneratorKind generator = GeneratorKind::Interbank;
    NetGenParams interbank;
    BipartiteParams bipartite;
    NetworkPaths input;

    CascadeOptions cascade;
    double shock_loss_fraction = 1.0;
    Shock shock;
    ImpactKind impact = ImpactKind::Exponential;
    LiquidationPolicy policy;
    std::size_t max_rounds = 1000;

    SweepParam sweep_param = SweepParam::Degree;
    std::vector<double> sweep_values;
    double crossing_threshold = 0.01;

    RankBasis rank_basis = RankBasis::Size;

    std::vector<InterventionKind> intervene_kinds{InterventionKind::Bailout, InterventionKind::Buyout};
    std::vector<RankBasis> bailout_strategies{RankBasis::Random, RankBasis::Size, RankBasis::OverlapCentrality};
    std::vector<RankBasis> buyout_strategies{RankBasis::Random, RankBasis::AssetVolume};
    std::vector<double> fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    double scenario_haircut = 0.3;
    std::vector<ExportFormat> formats{ExportFormat::CSV, ExportFormat::PlotData};

    /// Reads keys from `kv`. Unknown keys, malformed values, a missing seed,
    /// or both/neither network sources raise ValidationError.
    static ScenarioConfig from(const KeyValueConfig& kv);

    /// Every result-affecting field, including defaults. `out` and `jobs`
    /// are excluded because they do not change results.
    KeyValueConfig resolved() const;
    std::string hash() const { return fnv1a_hex(resolved().canonical()); }
    Provenance provenance() const { return {seed, hash(), std::string(kArtifactVersion)}; }

    FiresaleConfig firesale_config() const;
    MonteCarloOptions monte_carlo_options() const;
};

std::string to_string(ImpactKind kind);
std::string to_string(ExportFormat format);
std::string to_string(SweepParam param);

/// Reads CONTAGION_SEED; nullopt when unset. A malformed value is a
/// ValidationError.
std::optional<std::uint64_t> seed_from_env();

} // namespace contagion
