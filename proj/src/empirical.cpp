#include "seqctx/empirical.hpp"

#include <cmath>
#include <map>

namespace seqctx {

ValidationReport validate_behaviour(const EmpiricalBehaviour& e, double tol) {
    ValidationReport report = validate_scenario(e.scenario);
    if (static_cast<int>(e.tables.size()) != e.scenario.sequence_count()) {
        report.push_back({"expected one table per sequence"});
        return report;
    }
    for (int k = 0; k < e.scenario.sequence_count(); ++k) {
        const Eigen::VectorXd& t = e.tables[k];
        if (t.size() != e.scenario.table_size(k)) {
            report.push_back({"table " + std::to_string(k) + " has wrong length"});
            continue;
        }
        if (t.minCoeff() < -tol)
            report.push_back({"table " + std::to_string(k) + " has a negative entry " +
                              std::to_string(t.minCoeff())});
        double sum = t.sum();
        if (std::abs(sum - 1.0) > tol)
            report.push_back({"table " + std::to_string(k) + " sums to " + std::to_string(sum)});
    }
    return report;
}

Eigen::VectorXd marginal(const EmpiricalBehaviour& e, int seq_index,
                         const std::vector<int>& positions) {
    if (positions.empty()) throw std::invalid_argument("empty position set");
    const SequentialScenario& s = e.scenario;
    const Sequence& seq = s.sequences.at(seq_index);
    for (int p : positions)
        if (p < 0 || p >= static_cast<int>(seq.size()))
            throw std::invalid_argument("position out of range");

    std::int64_t out_size = 1;
    for (int p : positions) out_size *= s.outcome_count(seq[p]);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(out_size);

    const Eigen::VectorXd& table = e.tables.at(seq_index);
    for (std::int64_t idx = 0; idx < table.size(); ++idx) {
        JointOutcome o = s.outcome_at(seq_index, idx);
        std::int64_t m = 0;
        for (int p : positions) m = m * s.outcome_count(seq[p]) + o[p];
        out[m] += table[idx];
    }
    return out;
}

CompatibilityReport check_compatibility_of_marginals(const EmpiricalBehaviour& e, double tol) {
    const SequentialScenario& s = e.scenario;
    // All (sequence, position) slots per label.
    std::map<int, std::vector<std::pair<int, int>>> slots;
    for (int k = 0; k < s.sequence_count(); ++k)
        for (std::size_t p = 0; p < s.sequences[k].size(); ++p)
            slots[s.sequences[k][p]].push_back({k, static_cast<int>(p)});

    CompatibilityReport report;
    for (const auto& [label, occ] : slots) {
        if (occ.size() < 2) continue;
        std::vector<Eigen::VectorXd> marginals;
        for (auto [k, p] : occ) marginals.push_back(marginal(e, k, {p}));
        for (std::size_t i = 0; i < occ.size(); ++i)
            for (std::size_t j = i + 1; j < occ.size(); ++j) {
                double dev = (marginals[i] - marginals[j]).cwiseAbs().maxCoeff();
                report.max_deviation = std::max(report.max_deviation, dev);
                if (dev > tol)
                    report.mismatches.push_back({label, occ[i].first, occ[i].second,
                                                 occ[j].first, occ[j].second, dev});
            }
    }
    return report;
}

EmpiricalBehaviour deterministic_model(const SequentialScenario& s, const GlobalAssignment& g) {
    if (static_cast<int>(g.size()) != s.label_count())
        throw std::invalid_argument("assignment must be total on the label set");
    EmpiricalBehaviour e{s, {}};
    for (int k = 0; k < s.sequence_count(); ++k) {
        const Sequence& seq = s.sequences[k];
        JointOutcome o(seq.size());
        for (std::size_t p = 0; p < seq.size(); ++p) o[p] = g[seq[p]];
        Eigen::VectorXd table = Eigen::VectorXd::Zero(s.table_size(k));
        table[s.linear_index(k, o)] = 1.0;
        e.tables.push_back(std::move(table));
    }
    return e;
}

EmpiricalBehaviour mix(const std::vector<std::pair<double, EmpiricalBehaviour>>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty mixture");
    double total = 0.0;
    for (const auto& [w, b] : parts) {
        if (w < 0.0) throw std::invalid_argument("negative mixture weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");

    EmpiricalBehaviour out{parts.front().second.scenario, {}};
    for (int k = 0; k < out.scenario.sequence_count(); ++k)
        out.tables.push_back(Eigen::VectorXd::Zero(out.scenario.table_size(k)));
    for (const auto& [w, b] : parts) {
        if (b.tables.size() != out.tables.size())
            throw std::invalid_argument("mixture over mismatched scenarios");
        for (std::size_t k = 0; k < out.tables.size(); ++k) {
            if (b.tables[k].size() != out.tables[k].size())
                throw std::invalid_argument("mixture over mismatched scenarios");
            out.tables[k] += w * b.tables[k];
        }
    }
    return out;
}

}  // namespace seqctx
