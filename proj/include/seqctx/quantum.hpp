#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>

#include "seqctx/empirical.hpp"
#include "seqctx/scenario.hpp"

namespace seqctx {

using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;

/// Maximal Hilbert-space dimension for dense complex matrices.
inline constexpr int kMaxDimension = 64;

/// One completely positive map per outcome, in Kraus form.
struct QuantumInstrument {
    std::vector<std::vector<Cmat>> kraus;  // per outcome: list of Kraus operators

    int outcome_count() const { return static_cast<int>(kraus.size()); }
    int dimension() const;

    /// Applies the outcome-a map (no normalization).
    Cmat apply(int a, const Cmat& rho) const;
    /// Sum of the outcome maps (the trace-preserving channel).
    Cmat apply_total(const Cmat& rho) const;
};

struct QuantumRealization {
    int dimension = 0;
    Cmat state;  // input density matrix
    std::map<std::string, QuantumInstrument> instruments;

    const QuantumInstrument& instrument(const std::string& label) const;
};

/// Hermiticity / trace / positivity checks for a density matrix.
bool is_density_matrix(const Cmat& rho, double tol = 1e-10);

/// Principal square root of a PSD Hermitian matrix; eigenvalues below
/// -1e-12 are rejected, small negative noise is clipped to zero.
Cmat psd_sqrt(const Cmat& m);

/// Builds the Lueders instrument of a POVM: one Kraus operator sqrt(E) per
/// effect. Effects must be PSD and sum to the identity within 1e-10.
QuantumInstrument lueders_from_povm(const std::vector<Cmat>& effects);

struct InstrumentApplication {
    double probability;
    std::optional<Cmat> post_state;  // absent when probability is negligible
};

/// p = Tr[I_a(rho)], post-state = I_a(rho)/p when p > threshold.
InstrumentApplication apply_instrument(const QuantumInstrument& inst, int a, const Cmat& rho,
                                       double threshold = 1e-12);

/// Joint outcome distribution of a sequence by chaining the instruments,
/// indexed row-major with position 0 most significant.
Eigen::VectorXd sequential_distribution(const QuantumRealization& r,
                                        const SequentialScenario& s, int seq_index);

/// The full empirical behaviour of a realization on a scenario.
EmpiricalBehaviour quantum_behaviour(const QuantumRealization& r, const SequentialScenario& s);

struct QuantumNdResult {
    bool ok;
    double max_deviation;
};

/// Verifies that applying a_label's (summed) instrument before b_label does
/// not change b_label's outcome probabilities, on a spanning set of d^2
/// Hermitian basis states; linearity extends the check to all states.
QuantumNdResult check_quantum_nd(const QuantumRealization& r, const std::string& a_label,
                                 const std::string& b_label, double tol = 1e-10);

/// The qutrit pentagon realization: five projective instruments on the
/// states nu_0..nu_4 (theta = pi/5) with input psi = (0, 0, 1).
QuantumRealization kcbs_realization();

/// The pentagon inequality sum over the five adjacent pairs; below 1 for
/// the quantum realization, at least 1 classically.
double kcbs_value(const QuantumRealization& r);

/// The two-qubit magic-square realization: nine two-outcome Pauli-product
/// instruments; the input state defaults to |00><00|.
QuantumRealization pm_realization();
QuantumRealization pm_realization(const Cmat& input_state);

/// The six-term magic-square sum (outcomes mapped 0 -> +1, 1 -> -1);
/// 6 for the quantum realization, at most 5 classically.
double pm_value(const QuantumRealization& r);

struct HvmFormulaValues {
    double response;  // xi(a | lambda0)
    double transfer;  // Gamma(lambda1 | lambda0, a); undefined when response ~ 0
    bool transfer_defined;
};

/// Pointwise evaluation of the quantum-as-hidden-variable formulas on pure
/// states lambda0, lambda1.
HvmFormulaValues hvm_formulas(const QuantumInstrument& inst, int a, const Cvec& lambda0,
                              const Cvec& lambda1);

}  // namespace seqctx
