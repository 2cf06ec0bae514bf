#include "contagion/clearing.hpp"

#include <algorithm>
#include <iterator>

#include "contagion/cascade.hpp"

namespace contagion {

ClearingProblem<double> to_clearing_problem(const InterbankNetwork& net, const std::vector<std::size_t>& shocked) {
    const auto n = static_cast<Eigen::Index>(net.size());
    ClearingProblem<double> prob;
    prob.liabilities = Eigen::MatrixXd::Zero(n, n);
    prob.external = Eigen::VectorXd::Zero(n);
    for (const auto& e : net.exposures())
        prob.liabilities(static_cast<Eigen::Index>(e.borrower), static_cast<Eigen::Index>(e.lender)) += e.amount;

    std::vector<bool> is_shocked(net.size(), false);
    for (auto s : shocked) {
        if (s >= net.size()) throw ValidationError("unknown bank index " + std::to_string(s));
        is_shocked[s] = true;
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (is_shocked[i]) continue;
        const auto& bs = net.bank(i).balance_sheet;
        const double outside = bs.liquid_assets + bs.illiquid_assets;
        const double net_external = outside - bs.deposits;
        if (net_external < -tolerance(outside))
            throw ValidationError("bank '" + net.bank(i).id + "': external assets " + std::to_string(outside) +
                                  " do not cover deposits " + std::to_string(bs.deposits) +
                                  "; cannot form a clearing problem");
        prob.external[static_cast<Eigen::Index>(i)] = std::max(0.0, net_external);
    }
    return prob;
}

CascadeClearingComparison cascade_vs_clearing(const InterbankNetwork& net, const std::vector<std::size_t>& shocked) {
    CascadeClearingComparison out;

    auto state = initial_state(net);
    for (auto s : shocked) shock_bank(state, s);
    out.cascade_defaults = run_cascade(state).defaulted;

    out.clearing = clearing_vector(to_clearing_problem(net, shocked));
    std::vector<std::size_t> cleared = out.clearing.defaults;
    cleared.insert(cleared.end(), shocked.begin(), shocked.end());
    std::sort(cleared.begin(), cleared.end());
    cleared.erase(std::unique(cleared.begin(), cleared.end()), cleared.end());
    out.clearing_defaults = std::move(cleared);

    std::set_difference(out.cascade_defaults.begin(), out.cascade_defaults.end(), out.clearing_defaults.begin(),
                        out.clearing_defaults.end(), std::back_inserter(out.only_cascade));
    std::set_difference(out.clearing_defaults.begin(), out.clearing_defaults.end(), out.cascade_defaults.begin(),
                        out.cascade_defaults.end(), std::back_inserter(out.only_clearing));
    return out;
}

} // namespace contagion
