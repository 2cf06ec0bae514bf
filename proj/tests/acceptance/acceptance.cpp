// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "clearing_oracle.hpp"
#include "contagion/cascade.hpp"
#include "contagion/clearing.hpp"
#include "contagion/cli.hpp"
#include "contagion/firesale.hpp"
#include "contagion/intervene.hpp"
#include "contagion/io.hpp"
#include "contagion/netgen.hpp"
#include "support.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t g_jobs = 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 3) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Criteria 1-2: contagion window on Erdos-Renyi networks

const std::vector<double> kWindowZ{0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
constexpr std::size_t kWindowTrials = 200;

NetGenParams window_params() {
    NetGenParams p;
    p.n_banks = 1000;
    p.capital_ratio = 0.04;
    p.interbank_fraction = 0.2;
    return p;
}

std::vector<SweepRow> window_sweep(std::uint64_t seed) {
    MonteCarloOptions mc;
    mc.trials = kWindowTrials;
    mc.seed = seed;
    mc.jobs = g_jobs;
    return degree_sweep(window_params(), kWindowZ, mc);
}

struct Golden {
    std::uint64_t seed = 0;
    std::vector<std::pair<double, double>> rows; // z, probability
};

Golden read_golden(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open golden file " + path.string());
    Golden g;
    std::string line;
    bool seen_seed = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.starts_with("seed=")) {
            g.seed = std::stoull(line.substr(5));
            seen_seed = true;
            continue;
        }
        if (line.starts_with("z,")) continue;
        std::stringstream ss(line);
        std::string z, p;
        std::getline(ss, z, ',');
        std::getline(ss, p, ',');
        g.rows.emplace_back(std::stod(z), std::stod(p));
    }
    if (!seen_seed) throw std::runtime_error("golden file has no seed line");
    return g;
}

void write_golden(const fs::path& path, std::uint64_t seed) {
    const auto rows = window_sweep(seed);
    std::string out = "# degree sweep, erdos_renyi, n=1000, capital_ratio=0.04, interbank_fraction=0.2, trials=200\n";
    out += "seed=" + std::to_string(seed) + "\nz,probability,extent\n";
    for (const auto& r : rows)
        out += format_number(r.value) + ',' + format_number(r.stats.probability) + ',' +
               (r.stats.extent ? format_number(*r.stats.extent) : "NA") + '\n';
    write_file_atomic(path, out);
}

std::pair<Outcome, Outcome> criteria_1_2(const Golden& golden) {
    const auto start = Clock::now();
    const auto rows = window_sweep(golden.seed);
    const double elapsed = seconds_since(start);

    Outcome c1;
    const double p_first = rows.front().stats.probability;
    const double p_last = rows.back().stats.probability;
    bool interior = false;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) interior |= rows[i].stats.probability > 0.0;

    bool golden_ok = golden.rows.size() == rows.size();
    bool exact = golden_ok;
    for (std::size_t i = 0; golden_ok && i < rows.size(); ++i) {
        const auto [z, p] = golden.rows[i];
        const double q = rows[i].stats.probability;
        const double tol = 3.0 * std::sqrt(std::max(p * (1 - p), 0.25 / kWindowTrials) / kWindowTrials);
        golden_ok = z == rows[i].value && std::abs(q - p) <= tol;
        exact = exact && q == p;
    }
    c1.pass = p_first == 0.0 && interior && p_last <= 0.02 && golden_ok && elapsed <= 300.0;

    std::size_t arg = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].stats.probability > rows[arg].stats.probability) arg = i;
    c1.detail = "p(z=0.5)=" + fmt(p_first) + " max p=" + fmt(rows[arg].stats.probability) +
                " at z=" + fmt(rows[arg].value) + " p(z=12)=" + fmt(p_last) + " golden " +
                (exact ? "exact" : golden_ok ? "within tolerance" : "MISMATCH") + " seed=" +
                std::to_string(golden.seed) + " " + fmt(elapsed, 2) + "s";

    Outcome c2;
    const auto extent = rows[arg].stats.extent;
    c2.pass = rows[arg].stats.probability > 0.0 && extent && *extent >= 0.5;
    c2.detail = "extent at z=" + fmt(rows[arg].value) + " is " + (extent ? fmt(*extent) : std::string("NA"));
    return {c1, c2};
}

// ---------------------------------------------------------------------------
// Criterion 3: capital monotonicity

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = average_ranks(x), ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

Outcome criterion_3(std::uint64_t seed) {
    auto p = window_params();
    p.avg_degree = 3.0;
    const std::vector<double> capital{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    MonteCarloOptions mc;
    mc.trials = 200;
    mc.seed = seed;
    mc.jobs = g_jobs;
    const auto rows = capital_sweep(p, capital, mc);
    std::vector<double> prob;
    std::string table;
    for (const auto& r : rows) {
        prob.push_back(r.stats.probability);
        table += (table.empty() ? "" : " ") + fmt(r.stats.probability);
    }
    const double rho = spearman(capital, prob);
    return {rho <= -0.8, "z=3 spearman=" + fmt(rho) + " p=[" + table + "]"};
}

// ---------------------------------------------------------------------------
// Criterion 4: clearing against the default-set oracle

Outcome criterion_4() {
    auto eng = make_engine(20240);
    std::size_t compared = 0, singular = 0;
    double worst = 0.0;
    while (compared < 500) {
        const auto prob = support::random_clearing_problem(eng, 1 + uniform_index(eng, 6));
        const auto expected = support::clearing_oracle(prob);
        if (!expected) {
            ++singular;
            continue;
        }
        worst = std::max(worst, (clearing_vector(prob).payments - *expected).lpNorm<Eigen::Infinity>());
        ++compared;
    }
    std::size_t violations = 0;
    for (int t = 0; t < 200; ++t) {
        auto prob = support::random_clearing_problem(eng, 1 + uniform_index(eng, 6));
        const Eigen::VectorXd before = clearing_vector(prob).payments;
        prob.external[static_cast<Eigen::Index>(uniform_index(eng, prob.size()))] += 5.0 * uniform01(eng);
        const Eigen::VectorXd after = clearing_vector(prob).payments;
        if ((after - before).minCoeff() < -1e-9) ++violations;
    }
    return {worst <= 1e-9 && violations == 0,
            std::to_string(compared) + " instances, max |p - oracle| = " + fmt(worst) + " (" +
                std::to_string(singular) + " skipped as singular), " + std::to_string(violations) +
                " monotonicity violations in 200 pairs"};
}

// ---------------------------------------------------------------------------
// Criterion 5: critical leverage

Outcome criterion_5() {
    BipartiteParams p;
    p.n_banks = 100;
    p.n_assets = 20;
    p.bank_avg_degree = 4;
    p.depth_factor = 1.0;
    FiresaleConfig base;
    base.impact = ImpactKind::Exponential;
    CriticalLeverageOptions options;
    options.trials = 200;
    options.seed = 11;
    options.jobs = g_jobs;
    const std::vector<double> grid{1, 2, 5, 10, 15, 20, 25, 30, 40, 50, 75, 100};
    const auto start = Clock::now();
    const auto result = critical_leverage(p, grid, base, options);
    const double elapsed = seconds_since(start);
    const auto& rows = result.rows;
    std::string table;
    for (const auto& r : rows) table += (table.empty() ? "" : " ") + fmt(r.probability);
    const bool pass = rows[0].probability == 0.0 && rows[1].probability == 0.0 &&
                      rows.back().probability >= 0.2 && result.critical.has_value() && elapsed <= 300.0;
    return {pass, "lambda*=" + (result.critical ? fmt(*result.critical) : std::string("none")) + " p=[" + table +
                      "] " + fmt(elapsed, 2) + "s"};
}

// ---------------------------------------------------------------------------
// Criterion 6: intervention ordering on synthetic panels

const std::vector<double> kFractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

std::vector<std::size_t> direct_defaults(const BipartiteNetwork& net, const Shock& shock) {
    auto state = initial_state(net);
    apply_shock(state, shock);
    const Eigen::VectorXd eq = state.equities();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < net.num_banks(); ++i)
        if (eq[static_cast<Eigen::Index>(i)] < -tolerance(state.total_assets(i))) out.push_back(i);
    return out;
}

Outcome criterion_6(std::size_t n_seeds) {
    const std::vector<RankBasis> bail_strategies{RankBasis::Random, RankBasis::Size, RankBasis::OverlapCentrality};
    const std::vector<RankBasis> buy_strategies{RankBasis::Random, RankBasis::AssetVolume};

    // Mean systemic scenario count per (strategy, fraction).
    std::map<RankBasis, std::vector<double>> systemic;
    for (auto b : bail_strategies) systemic[b].assign(kFractions.size(), 0.0);

    std::size_t b_checked = 0, b_failures = 0;
    constexpr std::size_t kBins = 10;
    std::vector<double> bail_prevented(kBins, 0.0), buy_prevented(kBins, 0.0);
    std::vector<std::size_t> bail_count(kBins, 0), buy_count(kBins, 0);

    for (std::size_t s = 1; s <= n_seeds; ++s) {
        const auto net = gen_synthetic_eba(s);
        const auto scenarios = single_asset_scenarios(net, 0.3);
        InterventionConfig config;
        config.seed = s;
        config.jobs = g_jobs;
        const auto bail = bailout_experiment(net, bail_strategies, kFractions, scenarios, config);
        const auto buy = buyout_experiment(net, buy_strategies, kFractions, scenarios, config);
        const auto base = baseline_records(net, scenarios, config);
        std::map<std::string, bool> base_systemic;
        for (const auto& r : base) base_systemic[r.scenario_id] = r.systemic;

        for (const auto& r : bail) {
            const auto f = static_cast<std::size_t>(std::find(kFractions.begin(), kFractions.end(), r.padded_fraction) -
                                                    kFractions.begin());
            systemic[*r.strategy][f] += r.systemic ? 1.0 / static_cast<double>(n_seeds) : 0.0;
        }

        // (b) full padding leaves only direct-shock insolvencies.
        std::map<std::string, std::vector<std::size_t>> direct;
        for (const auto& sc : scenarios) direct[sc.id] = direct_defaults(net, sc.shock);
        std::vector<std::size_t> all_assets(net.num_assets());
        std::iota(all_assets.begin(), all_assets.end(), 0);
        for (const auto& sc : scenarios) {
            auto state = initial_state(net);
            pad_assets(state, all_assets);
            apply_shock(state, sc.shock);
            const auto r = run_firesale(state, FiresaleConfig{});
            ++b_checked;
            if (r.defaulted != direct[sc.id]) ++b_failures;
        }
        for (const auto& r : bail)
            if (r.padded_fraction == 1.0) {
                ++b_checked;
                if (r.n_defaults != 0) ++b_failures;
            }
        for (const auto& r : buy)
            if (r.padded_fraction == 1.0) {
                ++b_checked;
                if (r.n_defaults != direct[r.scenario_id].size()) ++b_failures;
            }

        // (c) prevented systemic scenarios by nominal guarantee / total system assets.
        double total_assets = 0.0;
        for (const auto& bank : net.banks()) total_assets += bank.balance_sheet.total_assets();
        const auto bin_of = [&](double g) {
            return std::min(kBins - 1, static_cast<std::size_t>(g / total_assets * static_cast<double>(kBins)));
        };
        for (const auto& r : bail) {
            if (r.padded_fraction == 0.0) continue;
            const auto b = bin_of(r.guarantee_size);
            bail_prevented[b] += static_cast<double>(base_systemic[r.scenario_id]) - static_cast<double>(r.systemic);
            ++bail_count[b];
        }
        for (const auto& r : buy) {
            if (r.padded_fraction == 0.0) continue;
            const auto b = bin_of(r.guarantee_size);
            buy_prevented[b] += static_cast<double>(base_systemic[r.scenario_id]) - static_cast<double>(r.systemic);
            ++buy_count[b];
        }
    }

    // (a)
    bool a_pass = true;
    std::string a_detail;
    for (auto basis : {RankBasis::Size, RankBasis::OverlapCentrality}) {
        bool never_worse = true, strictly_better = false;
        for (std::size_t f = 0; f < kFractions.size(); ++f) {
            never_worse &= systemic[basis][f] <= systemic[RankBasis::Random][f] + 1e-12;
            strictly_better |= systemic[basis][f] < systemic[RankBasis::Random][f] - 1e-12;
        }
        a_pass &= never_worse && strictly_better;
        a_detail += " " + to_string(basis) + (never_worse && strictly_better ? " ok" : " FAILS") + " (at f=0.1: " +
                    fmt(systemic[basis][1]) + " vs random " + fmt(systemic[RankBasis::Random][1]) + ")";
    }

    // (c)
    double diff = 0.0;
    std::size_t matched = 0;
    for (std::size_t b = 0; b < kBins; ++b) {
        if (bail_count[b] == 0 || buy_count[b] == 0) continue;
        diff += bail_prevented[b] / static_cast<double>(bail_count[b]) -
                buy_prevented[b] / static_cast<double>(buy_count[b]);
        ++matched;
    }
    const double mean_diff = matched ? diff / static_cast<double>(matched) : 0.0;
    const bool c_pass = matched > 0 && mean_diff >= 0.0;
    const bool b_pass = b_failures == 0;

    std::string detail = std::to_string(n_seeds) + " seeds; (a)" + a_detail + "; (b) " +
                         std::to_string(b_checked - b_failures) + "/" + std::to_string(b_checked) +
                         " full-padding checks; (c) " + std::to_string(matched) +
                         " matched bins, mean prevented-rate advantage of bail-outs " + fmt(mean_diff);
    return {a_pass && b_pass && c_pass, detail};
}

// ---------------------------------------------------------------------------
// Criterion 7: CLI determinism

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) files[entry.path().filename().string()] = read_file(entry.path());
    return files;
}

Outcome criterion_7(const fs::path& work) {
    fs::remove_all(work);
    fs::create_directories(work);
    const auto put = [&](const std::string& name, const std::string& content) {
        write_file_atomic(work / name, content);
        return (work / name).string();
    };
    const auto banks = put("banks.csv", "bank_id,liquid_assets,illiquid_assets,deposits,short_term_liabilities\n"
                                        "A,0,5,0,0\nB,0,2,0,0\nC,0,1,0,0\n");
    const auto exposures = put("exposures.csv", "lender_id,borrower_id,amount\nB,A,10\nC,B,10\n");
    const auto window = put("window.cfg", "run.seed = 7\nrun.trials = 60\nnetwork.generator = interbank\n"
                                          "network.n_banks = 400\nsweep.param = degree\nsweep.values = 0.5, 2, 4, 8\n");
    const auto capital = put("capital.cfg", "run.seed = 7\nrun.trials = 60\nnetwork.generator = interbank\n"
                                            "network.n_banks = 400\nnetwork.avg_degree = 3\nsweep.param = capital\n"
                                            "sweep.values = 0.02, 0.05, 0.08\n");
    const auto leverage = put("leverage.cfg", "run.seed = 11\nrun.trials = 60\nnetwork.generator = bipartite\n"
                                              "network.n_banks = 100\nnetwork.n_assets = 20\n"
                                              "network.bank_avg_degree = 4\nsweep.param = leverage\n"
                                              "sweep.values = 1, 10, 30, 100\n");
    const auto eba = put("eba.cfg", "run.seed = 3\nnetwork.generator = synthetic_eba\n"
                                    "intervene.fractions = 0, 0.1, 0.5, 1\nintervene.formats = csv, jsonl, plot\n"
                                    "rank.basis = overlap\n");
    const auto mc = put("mc.cfg", "run.seed = 5\nrun.trials = 100\nnetwork.generator = interbank\n"
                                  "network.n_banks = 300\nnetwork.avg_degree = 3\n");

    const std::vector<std::vector<std::string>> commands{
        {"sweep", "--config", window},
        {"sweep", "--config", capital},
        {"sweep", "--config", leverage},
        {"simulate-interbank", "--config", mc},
        {"generate", "--config", leverage},
        {"simulate-firesale", "--config", eba},
        {"rank", "--config", eba},
        {"intervene", "--config", eba},
        {"clearing", "--seed", "0", "--banks", banks, "--exposures", exposures},
    };
    std::size_t identical = 0, files = 0;
    std::string failures;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::map<std::string, std::string> runs[3];
        bool ok = true;
        for (int k = 0; k < 3; ++k) {
            auto args = commands[c];
            const auto dir = work / ("run" + std::to_string(c) + "_" + std::to_string(k));
            args.insert(args.end(), {"--out", dir.string(), "--jobs", k == 2 ? "4" : "1"});
            std::ostringstream out, err;
            ok &= dispatch(args, out, err) == 0;
            if (ok) runs[k] = snapshot(dir);
        }
        if (ok && runs[0].size() > 1 && runs[0] == runs[1] && runs[0] == runs[2]) {
            ++identical;
            files += runs[0].size();
        } else {
            failures += " " + commands[c][0];
        }
    }
    fs::remove_all(work);
    return {identical == commands.size(),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands byte-identical across two runs and --jobs 1 vs 4 (" + std::to_string(files) + " files)" +
                (failures.empty() ? "" : "; differing:" + failures)};
}

// ---------------------------------------------------------------------------
// Criterion 8: invariant suites

struct Suite {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    void check(bool ok) { failures += ok ? 0 : 1; }
};

Suite price_monotonicity() {
    Suite s{"price impact"};
    auto eng = make_engine(801);
    for (; s.cases < 2000; ++s.cases) {
        const double price = 0.01 + uniform01(eng), v = 100 * uniform01(eng), depth = 0.01 + 50 * uniform01(eng);
        const auto kind = bernoulli(eng, 0.5) ? ImpactKind::Linear : ImpactKind::Exponential;
        const double p = price_impact(price, v, depth, kind);
        s.check(p > 0.0 && p <= price);
        s.check(price_impact(price, v + uniform01(eng), depth, kind) <= p);
        s.check(price_impact(price, v, depth * (1 + uniform01(eng)), kind) >= p);
    }
    return s;
}

BipartiteParams random_bipartite(Engine& eng) {
    BipartiteParams p;
    p.n_banks = 2 + uniform_index(eng, 20);
    p.n_assets = 1 + uniform_index(eng, 8);
    p.bank_avg_degree = 1.0 + uniform01(eng) * static_cast<double>(p.n_assets - 1);
    p.capital_ratio = 0.02 + 0.15 * uniform01(eng);
    p.depth_factor = 0.2 + 2.0 * uniform01(eng);
    if (bernoulli(eng, 0.5)) p.size_dist = SizeDistribution::power_law(2.0);
    p.seed = eng();
    return p;
}

Suite firesale_rounds() {
    Suite s{"fire-sale rounds"};
    auto eng = make_engine(802);
    for (; s.cases < 1000; ++s.cases) {
        const auto net = gen_bipartite(random_bipartite(eng));
        FiresaleConfig c;
        c.impact = bernoulli(eng, 0.5) ? ImpactKind::Linear : ImpactKind::Exponential;
        if (bernoulli(eng, 0.3)) c.policy = LiquidationPolicy::leverage_target(5.0 + 20.0 * uniform01(eng));
        c.shock = bernoulli(eng, 0.5) ? Shock::random_bank()
                                      : Shock::asset(net.asset(uniform_index(eng, net.num_assets())).id,
                                                     0.05 + 0.9 * uniform01(eng));
        auto state = apply_shock(net, c.shock, eng());
        for (int round = 0; round < 500; ++round) {
            const Eigen::VectorXd prices = state.prices, eq = state.equities();
            const auto outcome = firesale_round(state, c);
            const Eigen::VectorXd dp = state.prices - prices;
            s.check(dp.maxCoeff() <= 0.0);
            const Eigen::VectorXd de = state.equities() - eq, expected = state.units * dp;
            for (Eigen::Index i = 0; i < de.size(); ++i) {
                const double scale = std::max(1.0, state.total_assets(static_cast<std::size_t>(i)));
                s.check(std::abs(de[i] - expected[i]) <= 1e-9 * scale);
            }
            if (!outcome.active()) break;
        }
    }
    return s;
}

Suite padding_monotonicity() {
    Suite s{"padding monotonicity"};
    auto eng = make_engine(803);
    for (; s.cases < 1000; ++s.cases) {
        const auto net = gen_bipartite(random_bipartite(eng));
        const auto shock = Shock::asset(net.asset(uniform_index(eng, net.num_assets())).id, 0.05 + 0.9 * uniform01(eng));
        const bool banks = bernoulli(eng, 0.5);
        const std::size_t n = banks ? net.num_banks() : net.num_assets();
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = uniform01(eng);
            if (u < 0.25) small.push_back(i);
            if (u < 0.5) large.push_back(i);
        }
        const auto run = [&](const std::vector<std::size_t>& padded) {
            auto state = initial_state(net);
            if (banks) pad_banks(state, padded);
            else pad_assets(state, padded);
            apply_shock(state, shock);
            const auto r = run_firesale(state, FiresaleConfig{});
            if (banks)
                for (auto i : padded) s.check(!std::binary_search(r.defaulted.begin(), r.defaulted.end(), i));
            return r.defaulted.size();
        };
        const auto none = run({}), few = run(small), many = run(large);
        s.check(many <= few && few <= none);
    }
    return s;
}

Suite cascade_bounds() {
    Suite s{"cascade bounds"};
    auto eng = make_engine(804);
    for (; s.cases < 1000; ++s.cases) {
        const auto n = 2 + uniform_index(eng, 15);
        const auto net = support::random_interbank(eng, n, 0.1 + 0.5 * uniform01(eng), 1 + 10 * uniform01(eng));
        std::vector<std::size_t> small, large;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = uniform01(eng);
            if (u < 0.15) small.push_back(i);
            if (u < 0.4) large.push_back(i);
        }
        CascadeOptions opt;
        opt.recovery_rate = bernoulli(eng, 0.5) ? 0.0 : uniform01(eng);
        opt.sequential = bernoulli(eng, 0.3);
        const auto run = [&](const std::vector<std::size_t>& shocked) {
            auto state = initial_state(net);
            for (auto i : shocked) shock_bank(state, i);
            const auto r = run_cascade(state, opt);
            s.check(r.fraction_defaulted >= 0.0 && r.fraction_defaulted <= 1.0);
            s.check(std::accumulate(r.per_round_defaults.begin(), r.per_round_defaults.end(), std::size_t{0}) ==
                    r.defaulted.size());
            s.check(r.per_round_defaults.back() == 0);
            s.check(r.total_equity_loss >= -1e-9);
            for (auto i : shocked) s.check(std::binary_search(r.defaulted.begin(), r.defaulted.end(), i));
            return r.defaulted;
        };
        const auto a = run(small), b = run(large);
        s.check(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
    return s;
}

Suite clearing_bounds() {
    Suite s{"clearing bounds and conservation"};
    auto eng = make_engine(805);
    for (; s.cases < 1000; ++s.cases) {
        const auto prob = support::random_clearing_problem(eng, 1 + uniform_index(eng, 10));
        const auto sol = clearing_vector(prob);
        const Eigen::VectorXd p_bar = prob.nominal();
        const Eigen::VectorXd received = prob.relative().transpose() * sol.payments;
        const double scale = std::max(1.0, p_bar.lpNorm<Eigen::Infinity>());
        s.check(sol.payments.minCoeff() >= 0.0);
        s.check((p_bar - sol.payments).minCoeff() >= 0.0);
        s.check(fixed_point_residual(prob, sol.payments) <= 1e-10 * scale);
        s.check(std::abs(received.sum() - sol.payments.sum()) <= 1e-9 * scale * static_cast<double>(prob.size()));
        s.check(sol.equity_after.minCoeff() >= -1e-9 * scale);
    }
    return s;
}

Suite generator_accounting() {
    Suite s{"generator accounting"};
    auto eng = make_engine(806);
    for (; s.cases < 1000; ++s.cases) {
        NetGenParams p;
        p.n_banks = 2 + uniform_index(eng, 60);
        p.avg_degree = 6.0 * uniform01(eng);
        p.capital_ratio = 0.01 + 0.2 * uniform01(eng);
        p.interbank_fraction = 0.5 * uniform01(eng);
        if (bernoulli(eng, 0.5)) p.size_dist = SizeDistribution::power_law(2.0 + uniform01(eng));
        p.seed = eng();
        const auto net = gen_interbank(p);
        double lent = 0.0, owed = 0.0;
        for (const auto& b : net.banks()) {
            const auto& bs = b.balance_sheet;
            lent += bs.interbank_assets;
            owed += bs.interbank_liabilities;
            s.check(bs.deposits >= 0.0);
            s.check(std::abs(equity(bs) - p.capital_ratio * bs.total_assets()) <= 1e-9 * bs.total_assets());
        }
        s.check(std::abs(lent - owed) <= 1e-9 * std::max(1.0, lent));
    }
    return s;
}

Suite io_round_trip() {
    Suite s{"I/O round trip"};
    auto eng = make_engine(807);
    for (; s.cases < 1000; ++s.cases) {
        if (s.cases % 2 == 0) {
            NetGenParams p;
            p.n_banks = 2 + uniform_index(eng, 30);
            p.avg_degree = 3.0 * uniform01(eng);
            p.seed = eng();
            const auto net = gen_interbank(p);
            const auto banks = banks_csv(net.banks()), exposures = exposures_csv(net);
            const auto back = parse_interbank(banks, exposures);
            s.check(banks_csv(back.banks()) == banks && exposures_csv(back) == exposures);
        } else {
            const auto net = gen_bipartite(random_bipartite(eng));
            const auto banks = banks_csv(net.banks()), holdings = holdings_csv(net), assets = assets_csv(net);
            const auto back = parse_bipartite(banks, holdings, std::string_view(assets));
            s.check(banks_csv(back.banks()) == banks && holdings_csv(back) == holdings && assets_csv(back) == assets);
        }
    }
    return s;
}

Outcome criterion_8() {
    const std::vector<std::function<Suite()>> suites{price_monotonicity, firesale_rounds, padding_monotonicity,
                                                     cascade_bounds,     clearing_bounds, generator_accounting,
                                                     io_round_trip};
    bool pass = true;
    std::string detail;
    for (const auto& make : suites) {
        const auto s = make();
        pass &= s.failures == 0 && s.cases >= 1000;
        detail += (detail.empty() ? "" : ", ") + s.name + " " + std::to_string(s.cases - std::min(s.cases, s.failures)) +
                  "/" + std::to_string(s.cases) + (s.failures ? " (" + std::to_string(s.failures) + " violations)" : "");
    }
    return {pass, detail};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string golden_path;
    std::string write_path;
    std::uint64_t golden_seed = 7;
    std::string work = (fs::temp_directory_path() / "contagion_acceptance").string();
    std::size_t seeds = 20;
    g_jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--golden", golden_path, "Pinned contagion-window table");
    app.add_option("--write-golden", write_path, "Regenerate the golden table and exit");
    app.add_option("--golden-seed", golden_seed, "Seed used with --write-golden");
    app.add_option("--work", work, "Scratch directory for CLI runs");
    app.add_option("--seeds", seeds, "Synthetic panels for the intervention criterion")->check(CLI::Range(20, 1000));
    app.add_option("--jobs", g_jobs, "Worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    if (!write_path.empty()) {
        write_golden(write_path, golden_seed);
        return 0;
    }
    if (golden_path.empty()) {
        std::cerr << "--golden is required\n";
        return 2;
    }

    bool all = true;
    const auto report = [&](int id, const Outcome& o) {
        all &= o.pass;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    };
    const auto guarded = [&](int id, const std::function<Outcome()>& f) {
        try {
            report(id, f());
        } catch (const std::exception& e) {
            report(id, {false, std::string("exception: ") + e.what()});
        }
    };

    try {
        const auto golden = read_golden(golden_path);
        const auto [c1, c2] = criteria_1_2(golden);
        report(1, c1);
        report(2, c2);
        guarded(3, [&] { return criterion_3(golden.seed); });
    } catch (const std::exception& e) {
        for (int id : {1, 2, 3}) report(id, {false, std::string("exception: ") + e.what()});
    }
    guarded(4, criterion_4);
    guarded(5, criterion_5);
    guarded(6, [&] { return criterion_6(seeds); });
    guarded(7, [&] { return criterion_7(work); });
    guarded(8, criterion_8);
    return all ? 0 : 1;
}
