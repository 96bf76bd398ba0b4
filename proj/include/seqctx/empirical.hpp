#pragma once

#include <Eigen/Dense>

#include "seqctx/scenario.hpp"

namespace seqctx {

/// Empirical behaviour: one probability distribution per sequence, stored as
/// a dense vector over the row-major joint-outcome linearization.
struct EmpiricalBehaviour {
    SequentialScenario scenario;
    std::vector<Eigen::VectorXd> tables;  // one per sequence
};

/// Reports normalization / negativity / shape violations beyond tol.
ValidationReport validate_behaviour(const EmpiricalBehaviour& e, double tol = 1e-9);

/// Sums out every position not in `positions`; the result is indexed
/// row-major over the kept positions in their given order.
Eigen::VectorXd marginal(const EmpiricalBehaviour& e, int seq_index,
                         const std::vector<int>& positions);

struct MarginalMismatch {
    int label;
    int seq_a, pos_a;
    int seq_b, pos_b;
    double deviation;
};

struct CompatibilityReport {
    std::vector<MarginalMismatch> mismatches;
    double max_deviation = 0.0;
    bool ok() const { return mismatches.empty(); }
};

/// For every label occurring at two or more (sequence, position) slots,
/// checks that all its single-position marginals agree within tol.
CompatibilityReport check_compatibility_of_marginals(const EmpiricalBehaviour& e,
                                                     double tol = 1e-9);

/// The deterministic behaviour of one global assignment: each table is a
/// point mass on the unique consistent outcome matching the assignment.
EmpiricalBehaviour deterministic_model(const SequentialScenario& s, const GlobalAssignment& g);

/// Componentwise convex combination; behaviours must share a scenario shape.
EmpiricalBehaviour mix(const std::vector<std::pair<double, EmpiricalBehaviour>>& parts);

}  // namespace seqctx
