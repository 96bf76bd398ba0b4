#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqctx {

/// Outcome values are indices into a declared alphabet. The alphabet may
/// carry display names (e.g. "+1"/"-1") used only for presentation and IO.
struct OutcomeAlphabet {
    std::vector<std::string> names;

    int size() const { return static_cast<int>(names.size()); }

    static OutcomeAlphabet binary() { return {{"0", "1"}}; }
    static OutcomeAlphabet plus_minus() { return {{"+1", "-1"}}; }
};

/// A sequence stores, per position, the index of the instrument label.
/// Positions are 0-based and contiguous; the same label may repeat.
using Sequence = std::vector<int>;

/// A joint outcome for a sequence: one outcome index per position.
using JointOutcome = std::vector<int>;

/// A global deterministic assignment: one outcome index per instrument label.
using GlobalAssignment = std::vector<int>;

/// Sequential scenario: instrument labels, per-label outcome alphabets, and
/// ordered sequences of label indices (repeats allowed).
struct SequentialScenario {
    std::vector<std::string> labels;
    std::vector<OutcomeAlphabet> outcomes;   // one per label
    std::vector<Sequence> sequences;

    int label_count() const { return static_cast<int>(labels.size()); }
    int sequence_count() const { return static_cast<int>(sequences.size()); }
    int outcome_count(int label) const { return outcomes[label].size(); }

    /// Index of a label by name, or -1 when absent.
    int label_index(const std::string& name) const;

    /// Number of joint outcomes for one sequence (product of alphabet sizes).
    std::int64_t table_size(int seq_index) const;

    /// Row-major linearization with position 0 most significant.
    std::int64_t linear_index(int seq_index, const JointOutcome& o) const;
    JointOutcome outcome_at(int seq_index, std::int64_t idx) const;
};

/// Measurement scenario: unordered contexts over the same label set.
struct MeasurementScenario {
    std::vector<std::string> labels;
    std::vector<OutcomeAlphabet> outcomes;
    std::vector<std::vector<int>> contexts;  // label indices, unordered sets

    int label_count() const { return static_cast<int>(labels.size()); }
    int label_index(const std::string& name) const;
};

struct ValidationIssue {
    std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Checks label references, alphabet sizes and position contiguity.
/// An empty report means the scenario is valid.
ValidationReport validate_scenario(const SequentialScenario& s);

/// The set of distinct labels in a sequence, ascending by label index.
std::vector<int> base_set(const Sequence& seq);

/// Projects a joint outcome onto the base set when every repeated label
/// carries equal outcomes at all its positions; absent otherwise.
/// The result maps base_set order -> outcome value.
std::optional<std::vector<int>> consistent_projection(const SequentialScenario& s,
                                                      int seq_index,
                                                      const JointOutcome& o);

/// Total number of global assignments, or nullopt past the cap.
std::optional<std::int64_t> global_assignment_count(const SequentialScenario& s,
                                                    std::int64_t cap = std::int64_t{1} << 24);

/// All global assignments in a deterministic order (label 0 most significant).
/// Throws std::overflow_error when the count exceeds the cap.
std::vector<GlobalAssignment> enumerate_global_assignments(const SequentialScenario& s,
                                                           std::int64_t cap = std::int64_t{1} << 24);

enum class OrderingPolicy { Declared, Reversed };

/// Builds the induced sequential scenario of a measurement scenario: one
/// sequence per context, ordered by the given policy.
SequentialScenario induce_sequential(const MeasurementScenario& m,
                                     OrderingPolicy policy = OrderingPolicy::Declared);

/// Same, with an explicit permutation per context (perm[c][k] = the position
/// in the sequence of the k-th declared label of context c).
SequentialScenario induce_sequential(const MeasurementScenario& m,
                                     const std::vector<std::vector<int>>& perms);

/// Strips position indices; absent when any sequence repeats a label
/// (such a scenario is not induced by any measurement scenario).
std::optional<MeasurementScenario> underlying_measurement_scenario(const SequentialScenario& s);

/// The five-instrument cyclic scenario with sequences {A^i, A^(i+1 mod 5)}.
SequentialScenario kcbs_scenario();

/// kcbs_scenario with A^0 repeated at the end of the first sequence.
SequentialScenario extended_kcbs_scenario();

/// The nine-instrument scenario with three row and three column sequences.
SequentialScenario pm_scenario();

/// The measurement scenario underlying kcbs_scenario.
MeasurementScenario kcbs_measurement_scenario();

}  // namespace seqctx
