#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>

#include "seqctx/empirical.hpp"
#include "seqctx/scenario.hpp"

namespace seqctx {

/// One instrument inside a hidden-variable model.
/// response(l, a)    = probability of outcome a given hidden variable l.
/// transfer[a](l, l') = probability to move from l to l' after outcome a.
/// Responses are position-free: an instrument behaves identically wherever
/// it appears in a sequence.
struct HvmInstrument {
    Eigen::MatrixXd response;               // lambda_count x outcome_count
    std::vector<Eigen::MatrixXd> transfer;  // per outcome: lambda_count x lambda_count
};

struct HiddenVariableModel {
    int lambda_count = 0;
    Eigen::VectorXd mu;                            // preparation distribution over lambda
    std::map<std::string, HvmInstrument> instruments;

    const HvmInstrument& instrument(const std::string& label) const;

    /// Hidden variables with mu(l) > 0.
    std::vector<int> support() const;
};

/// Default cap on |Lambda| for dense tensors.
inline constexpr int kDefaultLambdaCap = 4096;

/// Normalization and positivity of mu, responses and transfers.
ValidationReport validate_hvm(const HiddenVariableModel& h, double tol = 1e-9);

/// The empirical behaviour generated by chaining response and transfer
/// functions along each sequence; the final transfer is elided since it
/// marginalizes to 1.
EmpiricalBehaviour behaviour(const HiddenVariableModel& h, const SequentialScenario& s);

/// True iff every response entry is within tol of {0, 1}.
bool check_outcome_determinism(const HiddenVariableModel& h, const std::string& label,
                               double tol = 1e-9);

struct NoDisturbanceResult {
    bool ok;
    double max_deviation;
};

/// Checks that inserting a_label before b_label leaves b_label's response
/// statistics unchanged for every hidden variable.
NoDisturbanceResult check_no_disturbance(const HiddenVariableModel& h,
                                         const std::string& a_label,
                                         const std::string& b_label, double tol = 1e-9);

/// True iff all outcome slices of the label's transfer agree within tol.
bool check_outcome_independence(const HiddenVariableModel& h, const std::string& label,
                                double tol = 1e-9);

struct NdPairResult {
    std::string a_label, b_label;
    double deviation;
};

struct NdHvmReport {
    std::vector<NdPairResult> failures;
    double max_deviation = 0.0;
    bool ok() const { return failures.empty(); }
};

/// Runs check_no_disturbance for every ordered pair (earlier, later) within
/// every sequence of the scenario.
NdHvmReport check_nd_hvm(const HiddenVariableModel& h, const SequentialScenario& s,
                         double tol = 1e-9);

enum class ExampleInstrumentKind {
    FairCoinFlip,
    NonInvasive,
    RepeatableDeterministic,
    RandomResampling,
    DeterministicReset,
};

struct ExampleInstrumentParams {
    int lambda_count = 2;
    int outcome_count = 2;
    /// Outcome per hidden variable; required by the deterministic kinds.
    std::vector<int> assignment;
    /// Target hidden variable; required by DeterministicReset.
    int reset_lambda = 0;
};

/// Builds the worked-example instruments: the deterministic kinds read their
/// outcome off `assignment`, the reset kind routes every lambda to
/// `reset_lambda`.
HvmInstrument build_example_instrument(ExampleInstrumentKind kind,
                                       const ExampleInstrumentParams& params);

/// Lambda = global assignments, deterministic responses, non-invasive
/// transfers. The result is OD, OI and ND by construction and its behaviour
/// is the corresponding mixture of deterministic models.
HiddenVariableModel build_factorizable_hvm(const SequentialScenario& s,
                                           const Eigen::VectorXd& assignment_weights);

enum class HvmRestriction { OdNd, OiNd, Nd };

/// Seeded generator of valid HVMs passing the requested checkers.
HiddenVariableModel random_restricted_hvm(const SequentialScenario& s,
                                          HvmRestriction restriction, std::uint64_t seed);

/// The probability that b_label's (counterfactual) outcome flips when
/// a_label is measured in between; not directly measurable.
double p_flip(const HiddenVariableModel& h, const std::string& a_label,
              const std::string& b_label);

/// The probability that b_label's outcome differs between its two runs in
/// the sequence B, A, B.
double p_err(const HiddenVariableModel& h, const std::string& a_label,
             const std::string& b_label);

/// Two-instrument model on Lambda = {0, 1} where B reads the hidden variable
/// and both instruments carry the epsilon-noisy transfer that routes to the
/// flipped hidden variable with probability eps. On this family
/// p_flip = eps and p_err = 2 eps (1 - eps).
HiddenVariableModel epsilon_noisy_model(double eps);

}  // namespace seqctx
