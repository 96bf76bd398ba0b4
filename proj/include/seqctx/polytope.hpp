#pragma once

#include <Eigen/Dense>

#include "seqctx/empirical.hpp"
#include "seqctx/lp.hpp"
#include "seqctx/scenario.hpp"

namespace seqctx {

/// Rows: one per (sequence, joint outcome) pair, concatenated in sequence
/// order; columns: one per global assignment. An entry is 1 iff the outcome
/// is consistent and its projection equals the assignment restricted to the
/// sequence's base set, so each column restricted to one sequence's rows
/// sums to exactly 1.
struct IncidenceMatrix {
    Eigen::MatrixXd m;
    std::vector<std::int64_t> row_offsets;  // first row of each sequence block
};

IncidenceMatrix build_incidence(const SequentialScenario& s,
                                std::int64_t cap = std::int64_t{1} << 24);

struct CFResult {
    double ncf = 0.0;
    double cf = 1.0;
    Eigen::VectorXd weights;       // sub-distribution over global assignments
    EmpiricalBehaviour residual;   // the e' part; zero tables when ncf = 1
    LpStatus status = LpStatus::NumericalFailure;
    bool ok() const { return status == LpStatus::Optimal; }
};

/// Non-contextual fraction by linear programming: maximize the total weight
/// of a sub-distribution over global assignments whose induced behaviour is
/// dominated componentwise by e.
CFResult contextual_fraction(const EmpiricalBehaviour& e);

bool is_noncontextual(const EmpiricalBehaviour& e, double tol = 1e-7);

struct NcDecomposition {
    double lambda_star;                     // the non-contextual fraction
    std::optional<EmpiricalBehaviour> nc;   // absent when lambda_star ~ 0
    EmpiricalBehaviour residual;
};

/// e = lambda* e_nc + (1 - lambda*) e_residual.
NcDecomposition nc_decomposition(const EmpiricalBehaviour& e);

}  // namespace seqctx
