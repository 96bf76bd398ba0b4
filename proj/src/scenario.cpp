#include "seqctx/scenario.hpp"

#include <algorithm>
#include <set>

namespace seqctx {

int SequentialScenario::label_index(const std::string& name) const {
    for (int i = 0; i < label_count(); ++i)
        if (labels[i] == name) return i;
    return -1;
}

int MeasurementScenario::label_index(const std::string& name) const {
    for (int i = 0; i < label_count(); ++i)
        if (labels[i] == name) return i;
    return -1;
}

std::int64_t SequentialScenario::table_size(int seq_index) const {
    std::int64_t n = 1;
    for (int label : sequences.at(seq_index)) n *= outcome_count(label);
    return n;
}

std::int64_t SequentialScenario::linear_index(int seq_index, const JointOutcome& o) const {
    const Sequence& seq = sequences.at(seq_index);
    if (o.size() != seq.size()) throw std::invalid_argument("outcome/sequence shape mismatch");
    std::int64_t idx = 0;
    for (std::size_t p = 0; p < seq.size(); ++p) {
        int n = outcome_count(seq[p]);
        if (o[p] < 0 || o[p] >= n) throw std::invalid_argument("outcome value out of range");
        idx = idx * n + o[p];
    }
    return idx;
}

JointOutcome SequentialScenario::outcome_at(int seq_index, std::int64_t idx) const {
    const Sequence& seq = sequences.at(seq_index);
    JointOutcome o(seq.size());
    for (std::size_t p = seq.size(); p-- > 0;) {
        int n = outcome_count(seq[p]);
        o[p] = static_cast<int>(idx % n);
        idx /= n;
    }
    return o;
}

ValidationReport validate_scenario(const SequentialScenario& s) {
    ValidationReport report;
    std::set<std::string> seen;
    for (const auto& name : s.labels) {
        if (name.empty()) report.push_back({"empty instrument label"});
        if (!seen.insert(name).second)
            report.push_back({"duplicate instrument label '" + name + "'"});
    }
    if (s.outcomes.size() != s.labels.size()) {
        report.push_back({"outcome alphabet count does not match label count"});
        return report;
    }
    for (int i = 0; i < s.label_count(); ++i)
        if (s.outcomes[i].size() == 0)
            report.push_back({"label '" + s.labels[i] + "' has an empty outcome set"});
    for (std::size_t k = 0; k < s.sequences.size(); ++k) {
        const Sequence& seq = s.sequences[k];
        if (seq.empty())
            report.push_back({"sequence " + std::to_string(k) + " is empty"});
        for (int label : seq)
            if (label < 0 || label >= s.label_count())
                report.push_back({"sequence " + std::to_string(k) +
                                  " references an unknown label index " + std::to_string(label)});
    }
    return report;
}

std::vector<int> base_set(const Sequence& seq) {
    std::set<int> labels(seq.begin(), seq.end());
    return {labels.begin(), labels.end()};
}

std::optional<std::vector<int>> consistent_projection(const SequentialScenario& s,
                                                      int seq_index,
                                                      const JointOutcome& o) {
    const Sequence& seq = s.sequences.at(seq_index);
    if (o.size() != seq.size()) throw std::invalid_argument("outcome/sequence shape mismatch");
    std::vector<int> base = base_set(seq);
    std::vector<int> projected(base.size(), -1);
    for (std::size_t p = 0; p < seq.size(); ++p) {
        auto it = std::lower_bound(base.begin(), base.end(), seq[p]);
        std::size_t b = static_cast<std::size_t>(it - base.begin());
        if (projected[b] == -1)
            projected[b] = o[p];
        else if (projected[b] != o[p])
            return std::nullopt;
    }
    return projected;
}

std::optional<std::int64_t> global_assignment_count(const SequentialScenario& s,
                                                    std::int64_t cap) {
    std::int64_t count = 1;
    for (int i = 0; i < s.label_count(); ++i) {
        count *= s.outcome_count(i);
        if (count > cap) return std::nullopt;
    }
    return count;
}

std::vector<GlobalAssignment> enumerate_global_assignments(const SequentialScenario& s,
                                                           std::int64_t cap) {
    auto count = global_assignment_count(s, cap);
    if (!count) throw std::overflow_error("global assignment count exceeds cap");
    std::vector<GlobalAssignment> out;
    out.reserve(static_cast<std::size_t>(*count));
    GlobalAssignment g(s.label_count(), 0);
    for (std::int64_t i = 0; i < *count; ++i) {
        out.push_back(g);
        for (int j = s.label_count(); j-- > 0;) {
            if (++g[j] < s.outcome_count(j)) break;
            g[j] = 0;
        }
    }
    return out;
}

SequentialScenario induce_sequential(const MeasurementScenario& m, OrderingPolicy policy) {
    std::vector<std::vector<int>> perms;
    for (const auto& ctx : m.contexts) {
        std::vector<int> p(ctx.size());
        for (std::size_t k = 0; k < ctx.size(); ++k)
            p[k] = policy == OrderingPolicy::Declared ? static_cast<int>(k)
                                                      : static_cast<int>(ctx.size() - 1 - k);
        perms.push_back(std::move(p));
    }
    return induce_sequential(m, perms);
}

SequentialScenario induce_sequential(const MeasurementScenario& m,
                                     const std::vector<std::vector<int>>& perms) {
    if (perms.size() != m.contexts.size())
        throw std::invalid_argument("one permutation per context required");
    SequentialScenario s;
    s.labels = m.labels;
    s.outcomes = m.outcomes;
    for (std::size_t c = 0; c < m.contexts.size(); ++c) {
        const auto& ctx = m.contexts[c];
        const auto& perm = perms[c];
        if (perm.size() != ctx.size())
            throw std::invalid_argument("permutation size mismatch for context " + std::to_string(c));
        std::vector<bool> used(ctx.size(), false);
        Sequence seq(ctx.size(), -1);
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            int pos = perm[k];
            if (pos < 0 || pos >= static_cast<int>(ctx.size()) || used[pos])
                throw std::invalid_argument("ordering policy is not a permutation of context " +
                                            std::to_string(c));
            used[pos] = true;
            seq[pos] = ctx[k];
        }
        s.sequences.push_back(std::move(seq));
    }
    return s;
}

std::optional<MeasurementScenario> underlying_measurement_scenario(const SequentialScenario& s) {
    MeasurementScenario m;
    m.labels = s.labels;
    m.outcomes = s.outcomes;
    for (const Sequence& seq : s.sequences) {
        if (base_set(seq).size() != seq.size()) return std::nullopt;  // repeated label: not induced
        m.contexts.push_back(seq);
    }
    return m;
}

SequentialScenario kcbs_scenario() {
    SequentialScenario s;
    for (int i = 0; i < 5; ++i) {
        s.labels.push_back("A" + std::to_string(i));
        s.outcomes.push_back(OutcomeAlphabet::binary());
    }
    for (int i = 0; i < 5; ++i) s.sequences.push_back({i, (i + 1) % 5});
    return s;
}

SequentialScenario extended_kcbs_scenario() {
    SequentialScenario s = kcbs_scenario();
    s.sequences[0] = {0, 1, 0};
    return s;
}

SequentialScenario pm_scenario() {
    SequentialScenario s;
    for (int i = 1; i <= 9; ++i) {
        s.labels.push_back("A" + std::to_string(i));
        s.outcomes.push_back(OutcomeAlphabet::plus_minus());
    }
    // Rows then columns of the 3x3 square (0-based label indices).
    s.sequences = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8},
                   {0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
    return s;
}

MeasurementScenario kcbs_measurement_scenario() {
    MeasurementScenario m;
    for (int i = 0; i < 5; ++i) {
        m.labels.push_back("A" + std::to_string(i));
        m.outcomes.push_back(OutcomeAlphabet::binary());
    }
    for (int i = 0; i < 5; ++i) m.contexts.push_back({i, (i + 1) % 5});
    return m;
}

}  // namespace seqctx
