#include "seqctx/polytope.hpp"

#include <cmath>

namespace seqctx {

IncidenceMatrix build_incidence(const SequentialScenario& s, std::int64_t cap) {
    std::vector<GlobalAssignment> assignments = enumerate_global_assignments(s, cap);
    std::int64_t n_rows = 0;
    IncidenceMatrix inc;
    for (int k = 0; k < s.sequence_count(); ++k) {
        inc.row_offsets.push_back(n_rows);
        n_rows += s.table_size(k);
    }
    inc.m = Eigen::MatrixXd::Zero(n_rows, static_cast<std::int64_t>(assignments.size()));

    for (int k = 0; k < s.sequence_count(); ++k) {
        std::vector<int> base = base_set(s.sequences[k]);
        for (std::int64_t idx = 0; idx < s.table_size(k); ++idx) {
            auto proj = consistent_projection(s, k, s.outcome_at(k, idx));
            if (!proj) continue;  // inconsistent outcomes get all-zero rows
            for (std::size_t c = 0; c < assignments.size(); ++c) {
                bool match = true;
                for (std::size_t b = 0; b < base.size(); ++b)
                    if (assignments[c][base[b]] != (*proj)[b]) { match = false; break; }
                if (match) inc.m(inc.row_offsets[k] + idx, static_cast<std::int64_t>(c)) = 1.0;
            }
        }
    }
    return inc;
}

CFResult contextual_fraction(const EmpiricalBehaviour& e) {
    const SequentialScenario& s = e.scenario;
    IncidenceMatrix inc = build_incidence(s);

    Eigen::VectorXd stacked(inc.m.rows());
    for (int k = 0; k < s.sequence_count(); ++k)
        stacked.segment(inc.row_offsets[k], e.tables[k].size()) = e.tables[k];

    LinearProgram p;
    p.constraints = inc.m;
    p.bounds = stacked;
    p.objective = Eigen::VectorXd::Ones(inc.m.cols());

    LpSolution sol = solve(p);
    CFResult out;
    out.status = sol.status;
    if (sol.status != LpStatus::Optimal) return out;

    out.weights = sol.x;
    out.ncf = std::min(1.0, std::max(0.0, sol.objective));
    out.cf = 1.0 - out.ncf;

    out.residual.scenario = s;
    Eigen::VectorXd rest = stacked - inc.m * sol.x;
    for (int k = 0; k < s.sequence_count(); ++k) {
        Eigen::VectorXd r = rest.segment(inc.row_offsets[k], e.tables[k].size());
        if (out.cf > 1e-12)
            r /= out.cf;
        else
            r.setZero();
        out.residual.tables.push_back(std::move(r));
    }
    return out;
}

bool is_noncontextual(const EmpiricalBehaviour& e, double tol) {
    CFResult r = contextual_fraction(e);
    if (!r.ok()) throw std::runtime_error("contextual-fraction LP did not reach optimality");
    return r.cf <= tol;
}

NcDecomposition nc_decomposition(const EmpiricalBehaviour& e) {
    CFResult r = contextual_fraction(e);
    if (!r.ok()) throw std::runtime_error("contextual-fraction LP did not reach optimality");
    NcDecomposition out{r.ncf, std::nullopt, r.residual};
    if (r.ncf > 1e-12) {
        Eigen::VectorXd w = r.weights / r.ncf;
        std::vector<GlobalAssignment> assignments = enumerate_global_assignments(e.scenario);
        std::vector<std::pair<double, EmpiricalBehaviour>> parts;
        for (std::size_t c = 0; c < assignments.size(); ++c)
            if (w[static_cast<Eigen::Index>(c)] > 0.0)
                parts.push_back({w[static_cast<Eigen::Index>(c)],
                                 deterministic_model(e.scenario, assignments[c])});
        // Guard against tiny LP round-off in the weight total.
        double total = 0.0;
        for (auto& [wt, b] : parts) total += wt;
        for (auto& [wt, b] : parts) wt /= total;
        out.nc = mix(parts);
    }
    return out;
}

}  // namespace seqctx
