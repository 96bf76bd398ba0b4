#include "seqctx/lp.hpp"

#include <cmath>
#include <vector>

namespace seqctx {

namespace {

constexpr double kPivotTol = 1e-10;

// Tableau rows 0..m-1 hold the constraints, row m holds reduced costs
// (entry j = c_B B^{-1} A_j - c_j); last column is the RHS.
struct Tableau {
    Eigen::MatrixXd t;
    std::vector<int> basis;
    int m, total;  // total = column count without RHS

    double& rhs(int i) { return t(i, total); }

    void pivot(int row, int col) {
        t.row(row) /= t(row, col);
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = t(i, col);
            if (f != 0.0) t.row(i) -= f * t.row(row);
        }
        basis[row] = col;
    }

    // Bland's rule: smallest eligible entering index, smallest basis index
    // on ratio ties. Returns Optimal, Unbounded, or NumericalFailure.
    LpStatus run(const std::vector<bool>& allowed) {
        const long max_iter = 200000;
        for (long iter = 0; iter < max_iter; ++iter) {
            int enter = -1;
            for (int j = 0; j < total; ++j)
                if (allowed[j] && t(m, j) < -kPivotTol) { enter = j; break; }
            if (enter < 0) return LpStatus::Optimal;

            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < m; ++i) {
                if (t(i, enter) <= kPivotTol) continue;
                double ratio = rhs(i) / t(i, enter);
                if (leave < 0 || ratio < best - kPivotTol ||
                    (ratio < best + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
        return LpStatus::NumericalFailure;
    }
};

}  // namespace

LpSolution solve(const LinearProgram& p) {
    const int m = static_cast<int>(p.constraints.rows());
    const int n = static_cast<int>(p.constraints.cols());
    if (p.bounds.size() != m || p.objective.size() != n)
        throw std::invalid_argument("linear program dimensions are inconsistent");
    if (!p.constraints.allFinite() || !p.bounds.allFinite() || !p.objective.allFinite())
        throw std::invalid_argument("linear program has non-finite entries");

    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i)
        if (p.bounds[i] < 0.0) art_rows.push_back(i);
    const int n_art = static_cast<int>(art_rows.size());
    const int total = n + m + n_art;

    Tableau tab;
    tab.m = m;
    tab.total = total;
    tab.t = Eigen::MatrixXd::Zero(m + 1, total + 1);
    tab.basis.assign(m, -1);

    std::vector<int> row_sign(m, 1);
    for (int i : art_rows) row_sign[i] = -1;

    int next_art = n + m;
    for (int i = 0; i < m; ++i) {
        tab.t.block(i, 0, 1, n) = row_sign[i] * p.constraints.row(i);
        tab.t(i, n + i) = row_sign[i];
        tab.rhs(i) = row_sign[i] * p.bounds[i];
        if (row_sign[i] < 0) {
            tab.t(i, next_art) = 1.0;
            tab.basis[i] = next_art++;
        } else {
            tab.basis[i] = n + i;
        }
    }

    LpSolution sol;
    std::vector<bool> allowed(total, true);

    if (n_art > 0) {
        // Phase 1: maximize -sum(artificials).
        for (int j = n + m; j < total; ++j) tab.t(m, j) = 1.0;
        for (int i = 0; i < m; ++i)
            if (tab.basis[i] >= n + m) tab.t.row(m) -= tab.t.row(i);
        LpStatus st = tab.run(allowed);
        if (st != LpStatus::Optimal) { sol.status = LpStatus::NumericalFailure; return sol; }
        if (tab.rhs(m) < -1e-8) { sol.status = LpStatus::Infeasible; return sol; }
        // Pivot any artificial still basic (at zero) out when possible.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < n + m) continue;
            for (int j = 0; j < n + m; ++j)
                if (std::abs(tab.t(i, j)) > kPivotTol) { tab.pivot(i, j); break; }
        }
        for (int j = n + m; j < total; ++j) allowed[j] = false;
    }

    // Phase 2 objective row.
    tab.t.row(m).setZero();
    for (int j = 0; j < n; ++j) tab.t(m, j) = -p.objective[j];
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] >= total) continue;
        double f = tab.t(m, tab.basis[i]);
        if (f != 0.0) tab.t.row(m) -= f * tab.t.row(i);
    }

    LpStatus st = tab.run(allowed);
    sol.status = st;
    if (st != LpStatus::Optimal) return sol;

    sol.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.rhs(i);
    sol.objective = p.objective.dot(sol.x);

    sol.dual = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) sol.dual[i] = row_sign[i] * tab.t(m, n + i);

    // Certificate check: never report a wrong "optimal".
    double gap = std::abs(sol.objective - sol.dual.dot(p.bounds));
    double primal_violation = (p.constraints * sol.x - p.bounds).maxCoeff();
    if (gap > 1e-8 * (1.0 + std::abs(sol.objective)) || primal_violation > 1e-9 ||
        sol.x.minCoeff() < -1e-9)
        sol.status = LpStatus::NumericalFailure;
    return sol;
}

}  // namespace seqctx
