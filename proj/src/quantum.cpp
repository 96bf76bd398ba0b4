#include "seqctx/quantum.hpp"

#include <cmath>
#include <numbers>

namespace seqctx {

namespace {
using namespace std::complex_literals;
}

int QuantumInstrument::dimension() const {
    for (const auto& ops : kraus)
        if (!ops.empty()) return static_cast<int>(ops.front().rows());
    return 0;
}

Cmat QuantumInstrument::apply(int a, const Cmat& rho) const {
    const auto& ops = kraus.at(a);
    Cmat out = Cmat::Zero(rho.rows(), rho.cols());
    for (const Cmat& k : ops) out += k * rho * k.adjoint();
    return out;
}

Cmat QuantumInstrument::apply_total(const Cmat& rho) const {
    Cmat out = Cmat::Zero(rho.rows(), rho.cols());
    for (int a = 0; a < outcome_count(); ++a) out += apply(a, rho);
    return out;
}

const QuantumInstrument& QuantumRealization::instrument(const std::string& label) const {
    auto it = instruments.find(label);
    if (it == instruments.end())
        throw std::invalid_argument("no quantum instrument for label '" + label + "'");
    return it->second;
}

bool is_density_matrix(const Cmat& rho, double tol) {
    if (rho.rows() != rho.cols()) return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return false;
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
        return false;
    Eigen::SelfAdjointEigenSolver<Cmat> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -std::max(tol, 1e-10);
}

Cmat psd_sqrt(const Cmat& m) {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Cmat> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-12) throw std::invalid_argument("matrix is not PSD");
    Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumInstrument lueders_from_povm(const std::vector<Cmat>& effects) {
    if (effects.empty()) throw std::invalid_argument("empty POVM");
    const int d = static_cast<int>(effects.front().rows());
    if (d > kMaxDimension) throw std::invalid_argument("dimension cap exceeded");
    Cmat sum = Cmat::Zero(d, d);
    QuantumInstrument inst;
    for (const Cmat& e : effects) {
        if (e.rows() != d || e.cols() != d)
            throw std::invalid_argument("POVM effects have mismatched dimensions");
        sum += e;
        inst.kraus.push_back({psd_sqrt(e)});
    }
    if ((sum - Cmat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("POVM effects do not sum to the identity");
    return inst;
}

InstrumentApplication apply_instrument(const QuantumInstrument& inst, int a, const Cmat& rho,
                                       double threshold) {
    if (inst.dimension() != rho.rows())
        throw std::invalid_argument("state/instrument dimension mismatch");
    Cmat sigma = inst.apply(a, rho);
    double p = sigma.trace().real();
    InstrumentApplication out{p, std::nullopt};
    if (p > threshold) out.post_state = sigma / p;
    return out;
}

Eigen::VectorXd sequential_distribution(const QuantumRealization& r,
                                        const SequentialScenario& s, int seq_index) {
    const Sequence& seq = s.sequences.at(seq_index);
    Eigen::VectorXd table(s.table_size(seq_index));
    for (std::int64_t idx = 0; idx < table.size(); ++idx) {
        JointOutcome o = s.outcome_at(seq_index, idx);
        // Chain unnormalized: p(o) = Tr[I^{a_N} ... I^{a_1}(rho)].
        Cmat sigma = r.state;
        for (std::size_t p = 0; p < seq.size(); ++p)
            sigma = r.instrument(s.labels[seq[p]]).apply(o[p], sigma);
        table[idx] = std::max(0.0, sigma.trace().real());
    }
    return table;
}

EmpiricalBehaviour quantum_behaviour(const QuantumRealization& r, const SequentialScenario& s) {
    EmpiricalBehaviour e{s, {}};
    for (int k = 0; k < s.sequence_count(); ++k)
        e.tables.push_back(sequential_distribution(r, s, k));
    return e;
}

QuantumNdResult check_quantum_nd(const QuantumRealization& r, const std::string& a_label,
                                 const std::string& b_label, double tol) {
    const QuantumInstrument& a = r.instrument(a_label);
    const QuantumInstrument& b = r.instrument(b_label);
    const int d = a.dimension();

    // Spanning set of d^2 pure states: |i>, (|i>+|j>)/sqrt2, (|i>+i|j>)/sqrt2.
    std::vector<Cvec> states;
    for (int i = 0; i < d; ++i) {
        Cvec v = Cvec::Zero(d);
        v[i] = 1.0;
        states.push_back(v);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Cvec v = Cvec::Zero(d), w = Cvec::Zero(d);
            v[i] = v[j] = 1.0 / std::sqrt(2.0);
            w[i] = 1.0 / std::sqrt(2.0);
            w[j] = std::complex<double>(0.0, 1.0 / std::sqrt(2.0));
            states.push_back(v);
            states.push_back(w);
        }

    double max_dev = 0.0;
    for (const Cvec& v : states) {
        Cmat rho = v * v.adjoint();
        Cmat disturbed = a.apply_total(rho);
        for (int out = 0; out < b.outcome_count(); ++out) {
            double lhs = b.apply(out, disturbed).trace().real();
            double rhs = b.apply(out, rho).trace().real();
            max_dev = std::max(max_dev, std::abs(lhs - rhs));
        }
    }
    return {max_dev <= tol, max_dev};
}

QuantumRealization kcbs_realization() {
    const double theta = std::numbers::pi / 5.0;
    const double norm = std::sqrt(1.0 + std::cos(theta));
    const double rc = std::sqrt(std::cos(theta));

    std::vector<Eigen::Vector3d> nu(5);
    nu[0] << 1.0, 0.0, rc;
    nu[1] << std::cos(4 * theta), std::sin(4 * theta), rc;
    nu[2] << std::cos(2 * theta), -std::sin(2 * theta), rc;
    nu[3] << std::cos(2 * theta), std::sin(2 * theta), rc;
    nu[4] << std::cos(4 * theta), -std::sin(4 * theta), rc;

    QuantumRealization r;
    r.dimension = 3;
    Cvec psi = Cvec::Zero(3);
    psi[2] = 1.0;
    r.state = psi * psi.adjoint();
    for (int i = 0; i < 5; ++i) {
        Cvec v = (nu[i] / norm).cast<std::complex<double>>();
        Cmat p0 = v * v.adjoint();
        r.instruments["A" + std::to_string(i)] =
            lueders_from_povm({p0, Cmat::Identity(3, 3) - p0});
    }
    return r;
}

double kcbs_value(const QuantumRealization& r) {
    SequentialScenario s = kcbs_scenario();
    double total = 0.0;
    for (int k = 0; k < 5; ++k) {
        Eigen::VectorXd t = sequential_distribution(r, s, k);
        total += t[0] + t[3];  // (0,0) and (1,1)
    }
    return total;
}

namespace {

Cmat pauli(char which) {
    Cmat m(2, 2);
    switch (which) {
        case 'i': m << 1, 0, 0, 1; break;
        case 'x': m << 0, 1, 1, 0; break;
        case 'y': m << 0.0, -1.0i, 1.0i, 0.0; break;
        case 'z': m << 1, 0, 0, -1; break;
        default: throw std::logic_error("unknown Pauli");
    }
    return m;
}

Cmat kron(const Cmat& a, const Cmat& b) {
    Cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

QuantumRealization pm_realization() {
    Cvec e0 = Cvec::Zero(4);
    e0[0] = 1.0;
    return pm_realization(e0 * e0.adjoint());
}

QuantumRealization pm_realization(const Cmat& input_state) {
    // Observables of the 3x3 square; sign structure makes the row/column
    // products +1 except the third column, which multiplies to -1.
    const char table[9][2] = {{'z', 'i'}, {'i', 'z'}, {'z', 'z'},
                              {'i', 'x'}, {'x', 'i'}, {'x', 'x'},
                              {'z', 'x'}, {'x', 'z'}, {'y', 'y'}};
    QuantumRealization r;
    r.dimension = 4;
    r.state = input_state;
    for (int i = 0; i < 9; ++i) {
        Cmat obs = kron(pauli(table[i][0]), pauli(table[i][1]));
        // Exact +-1 eigenprojectors from the Pauli algebra.
        Cmat p_plus = 0.5 * (Cmat::Identity(4, 4) + obs);
        Cmat p_minus = 0.5 * (Cmat::Identity(4, 4) - obs);
        QuantumInstrument inst;
        inst.kraus = {{p_plus}, {p_minus}};
        r.instruments["A" + std::to_string(i + 1)] = std::move(inst);
    }
    return r;
}

double pm_value(const QuantumRealization& r) {
    SequentialScenario s = pm_scenario();
    double total = 0.0;
    for (int k = 0; k < s.sequence_count(); ++k) {
        int target_sign = (k == 5) ? -1 : 1;  // third column sequence
        Eigen::VectorXd t = sequential_distribution(r, s, k);
        for (std::int64_t idx = 0; idx < t.size(); ++idx) {
            JointOutcome o = s.outcome_at(k, idx);
            int sign = 1;
            for (int v : o) sign *= (v == 0 ? 1 : -1);
            if (sign == target_sign) total += t[idx];
        }
    }
    return total;
}

HvmFormulaValues hvm_formulas(const QuantumInstrument& inst, int a, const Cvec& lambda0,
                              const Cvec& lambda1) {
    if (std::abs(lambda0.norm() - 1.0) > 1e-9 || std::abs(lambda1.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("lambda states must be normalized");
    Cmat rho0 = lambda0 * lambda0.adjoint();
    Cmat sigma = inst.apply(a, rho0);
    double xi = sigma.trace().real();
    HvmFormulaValues out{xi, 0.0, false};
    if (xi > 1e-12) {
        Cmat rho_a = sigma / xi;
        out.transfer = (rho_a * (lambda1 * lambda1.adjoint())).trace().real();
        out.transfer_defined = true;
    }
    return out;
}

}  // namespace seqctx
