#pragma once

#include <Eigen/Dense>

namespace seqctx {

/// maximize c'x  subject to  A x <= b,  x >= 0.
struct LinearProgram {
    Eigen::MatrixXd constraints;  // A
    Eigen::VectorXd bounds;       // b
    Eigen::VectorXd objective;    // c
};

enum class LpStatus { Optimal, Unbounded, Infeasible, NumericalFailure };

struct LpSolution {
    LpStatus status = LpStatus::NumericalFailure;
    Eigen::VectorXd x;       // primal point
    Eigen::VectorXd dual;    // one multiplier per constraint row
    double objective = 0.0;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule.
/// At Optimal the solution carries a dual certificate: the duality gap
/// |c'x - b'y| is at most 1e-8 for the program sizes this library targets.
LpSolution solve(const LinearProgram& p);

}  // namespace seqctx
