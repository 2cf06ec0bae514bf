#pragma once

// Clearing payment vectors for simultaneous settlement of interbank
// obligations. Bank i owes liabilities(i, j) to bank j and holds
// external(i) of outside assets; the clearing vector p solves
//
//     p = min(p_bar, external + Pi^T p),   p_bar = row sums of liabilities,
//
// where Pi is the row-normalized liability matrix.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contagion/core.hpp"
#include "contagion/error.hpp"

namespace contagion {

template <class Scalar>
struct ClearingProblem {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Matrix liabilities;
    Vector external;

    Eigen::Index size() const { return external.size(); }
    Vector nominal() const { return liabilities.rowwise().sum(); }

    /// Relative liabilities; rows of banks that owe nothing are zero.
    Matrix relative() const {
        const Vector p_bar = nominal();
        Matrix pi = Matrix::Zero(liabilities.rows(), liabilities.cols());
        for (Eigen::Index i = 0; i < liabilities.rows(); ++i)
            if (p_bar[i] > Scalar(0)) pi.row(i) = liabilities.row(i) / p_bar[i];
        return pi;
    }
};

template <class Scalar>
void validate(const ClearingProblem<Scalar>& prob) {
    const auto n = prob.external.size();
    if (prob.liabilities.rows() != n || prob.liabilities.cols() != n)
        throw ValidationError("liability matrix must be n x n with n = size of external assets");
    if (!prob.liabilities.allFinite() || !prob.external.allFinite())
        throw ValidationError("clearing problem entries must be finite");
    if (n > 0 && (prob.liabilities.minCoeff() < Scalar(0) || prob.external.minCoeff() < Scalar(0)))
        throw ValidationError("clearing problem entries must be non-negative");
    for (Eigen::Index i = 0; i < n; ++i)
        if (prob.liabilities(i, i) != Scalar(0)) throw ValidationError("liability matrix must have a zero diagonal");
}

template <class Scalar>
struct ClearingSolution {
    using Vector = typename ClearingProblem<Scalar>::Vector;

    Vector payments;
    Vector nominal;
    Vector equity_after;              // external + received - paid
    std::vector<std::size_t> defaults; // payments[i] < nominal[i] - eps
    std::size_t iterations = 0;
    bool unique = true; // least and greatest fixed points agree
};

struct ClearingOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1'000'000;
    bool check_uniqueness = true;
};

/// min(p_bar, external + Pi^T p), the clearing map.
template <class Scalar>
typename ClearingProblem<Scalar>::Vector clearing_map(const typename ClearingProblem<Scalar>::Matrix& pi,
                                                      const typename ClearingProblem<Scalar>::Vector& p_bar,
                                                      const typename ClearingProblem<Scalar>::Vector& external,
                                                      const typename ClearingProblem<Scalar>::Vector& p) {
    return p_bar.cwiseMin(external + pi.transpose() * p);
}

namespace detail {

template <class Scalar>
typename ClearingProblem<Scalar>::Vector picard(const typename ClearingProblem<Scalar>::Matrix& pi,
                                                const typename ClearingProblem<Scalar>::Vector& p_bar,
                                                const typename ClearingProblem<Scalar>::Vector& external,
                                                typename ClearingProblem<Scalar>::Vector p,
                                                const ClearingOptions& options, std::size_t& iterations) {
    // Tolerance is relative to the largest obligation so that the stopping
    // rule is scale free.
    const Scalar scale = p_bar.size() > 0 ? std::max(Scalar(1), p_bar.cwiseAbs().maxCoeff()) : Scalar(1);
    for (iterations = 1; iterations <= options.max_iter; ++iterations) {
        auto next = clearing_map<Scalar>(pi, p_bar, external, p);
        const Scalar step = p.size() > 0 ? (next - p).cwiseAbs().maxCoeff() : Scalar(0);
        p = std::move(next);
        if (step < Scalar(options.tol) * scale) return p;
    }
    throw NumericalError("clearing iteration did not converge within " + std::to_string(options.max_iter) +
                         " iterations");
}

/// Given the default set implied by an approximate fixed point, solves the
/// induced linear system for the defaulters' payments exactly. Returns the
/// refined vector when it is consistent and has a smaller residual.
template <class Scalar>
typename ClearingProblem<Scalar>::Vector polish(const typename ClearingProblem<Scalar>::Matrix& pi,
                                                const typename ClearingProblem<Scalar>::Vector& p_bar,
                                                const typename ClearingProblem<Scalar>::Vector& external,
                                                const typename ClearingProblem<Scalar>::Vector& p) {
    using Matrix = typename ClearingProblem<Scalar>::Matrix;
    using Vector = typename ClearingProblem<Scalar>::Vector;
    std::vector<Eigen::Index> defaulting;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] < p_bar[i]) defaulting.push_back(i);
    if (defaulting.empty()) return p;

    const auto m = static_cast<Eigen::Index>(defaulting.size());
    Vector full = p_bar;
    for (auto i : defaulting) full[i] = Scalar(0);
    const Vector inflow = external + pi.transpose() * full; // receipts from full payers
    Matrix a = Matrix::Identity(m, m);
    Vector b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        b[r] = inflow[defaulting[static_cast<std::size_t>(r)]];
        for (Eigen::Index c = 0; c < m; ++c)
            a(r, c) -= pi(defaulting[static_cast<std::size_t>(c)], defaulting[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) return p;
    const Vector x = lu.solve(b);
    Vector candidate = p_bar;
    for (Eigen::Index r = 0; r < m; ++r) candidate[defaulting[static_cast<std::size_t>(r)]] = x[r];
    if (!candidate.allFinite() || candidate.minCoeff() < Scalar(0)) return p;

    auto residual = [&](const Vector& q) {
        return (q - clearing_map<Scalar>(pi, p_bar, external, q)).cwiseAbs().maxCoeff();
    };
    return residual(candidate) < residual(p) ? candidate : p;
}

} // namespace detail

/// Greatest clearing vector by monotone iteration from p_bar. When
/// check_uniqueness is set, also iterates up from zero and reports whether
/// the least fixed point differs.
template <class Scalar>
ClearingSolution<Scalar> clearing_vector(const ClearingProblem<Scalar>& prob, const ClearingOptions& options = {}) {
    validate(prob);
    using Vector = typename ClearingProblem<Scalar>::Vector;
    const auto pi = prob.relative();
    const Vector p_bar = prob.nominal();

    ClearingSolution<Scalar> sol;
    sol.nominal = p_bar;
    sol.payments = detail::picard<Scalar>(pi, p_bar, prob.external, p_bar, options, sol.iterations);
    sol.payments = detail::polish<Scalar>(pi, p_bar, prob.external, sol.payments);
    sol.equity_after = prob.external + pi.transpose() * sol.payments - sol.payments;
    for (Eigen::Index i = 0; i < sol.payments.size(); ++i)
        if (sol.payments[i] < p_bar[i] - Scalar(tolerance(static_cast<double>(p_bar[i]))))
            sol.defaults.push_back(static_cast<std::size_t>(i));

    if (options.check_uniqueness && p_bar.size() > 0) {
        std::size_t up_iterations = 0;
        const Vector least =
            detail::picard<Scalar>(pi, p_bar, prob.external, Vector::Zero(p_bar.size()), options, up_iterations);
        const Scalar gap = (sol.payments - least).cwiseAbs().maxCoeff();
        sol.unique = gap <= Scalar(10 * options.tol) * std::max(Scalar(1), p_bar.cwiseAbs().maxCoeff());
    }
    return sol;
}

/// Residual of the fixed-point equation, in the infinity norm.
template <class Scalar>
Scalar fixed_point_residual(const ClearingProblem<Scalar>& prob, const typename ClearingProblem<Scalar>::Vector& p) {
    const auto mapped = clearing_map<Scalar>(prob.relative(), prob.nominal(), prob.external, p);
    return p.size() > 0 ? (p - mapped).cwiseAbs().maxCoeff() : Scalar(0);
}

// ---------------------------------------------------------------------------
// Bridges to interbank networks.

/// liabilities(borrower, lender) = exposure amount; external = liquid +
/// illiquid - deposits (deposits are senior). Throws ValidationError when a
/// bank's external assets do not cover its deposits. A shocked bank has its
/// external assets written off and external set to zero.
ClearingProblem<double> to_clearing_problem(const InterbankNetwork& net,
                                            const std::vector<std::size_t>& shocked = {});

struct CascadeClearingComparison {
    std::vector<std::size_t> cascade_defaults;
    std::vector<std::size_t> clearing_defaults;
    std::vector<std::size_t> only_cascade;
    std::vector<std::size_t> only_clearing;
    ClearingSolution<double> clearing;
};

/// Runs the zero-recovery cascade and the clearing solver on the same
/// shocked network. Shocked banks count as defaulted in both sets.
CascadeClearingComparison cascade_vs_clearing(const InterbankNetwork& net, const std::vector<std::size_t>& shocked);

} // namespace contagion
