#include "seqctx/hvm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace seqctx {

const HvmInstrument& HiddenVariableModel::instrument(const std::string& label) const {
    auto it = instruments.find(label);
    if (it == instruments.end())
        throw std::invalid_argument("no instrument data for label '" + label + "'");
    return it->second;
}

std::vector<int> HiddenVariableModel::support() const {
    std::vector<int> out;
    for (int l = 0; l < lambda_count; ++l)
        if (mu[l] > 0.0) out.push_back(l);
    return out;
}

ValidationReport validate_hvm(const HiddenVariableModel& h, double tol) {
    ValidationReport report;
    if (h.lambda_count <= 0 || h.lambda_count > kDefaultLambdaCap) {
        report.push_back({"lambda count out of range"});
        return report;
    }
    if (h.mu.size() != h.lambda_count)
        report.push_back({"preparation function has wrong length"});
    else {
        if (h.mu.minCoeff() < -tol) report.push_back({"preparation function has a negative entry"});
        if (std::abs(h.mu.sum() - 1.0) > tol) report.push_back({"preparation function is not normalized"});
    }
    for (const auto& [label, inst] : h.instruments) {
        if (inst.response.rows() != h.lambda_count) {
            report.push_back({"response of '" + label + "' has wrong row count"});
            continue;
        }
        if (inst.response.minCoeff() < -tol)
            report.push_back({"response of '" + label + "' has a negative entry"});
        for (int l = 0; l < h.lambda_count; ++l)
            if (std::abs(inst.response.row(l).sum() - 1.0) > tol)
                report.push_back({"response row " + std::to_string(l) + " of '" + label +
                                  "' is not normalized"});
        if (static_cast<int>(inst.transfer.size()) != inst.response.cols()) {
            report.push_back({"'" + label + "' needs one transfer slice per outcome"});
            continue;
        }
        for (std::size_t a = 0; a < inst.transfer.size(); ++a) {
            const Eigen::MatrixXd& g = inst.transfer[a];
            if (g.rows() != h.lambda_count || g.cols() != h.lambda_count) {
                report.push_back({"transfer slice of '" + label + "' has wrong shape"});
                continue;
            }
            if (g.minCoeff() < -tol)
                report.push_back({"transfer of '" + label + "' has a negative entry"});
            for (int l = 0; l < h.lambda_count; ++l)
                if (std::abs(g.row(l).sum() - 1.0) > tol)
                    report.push_back({"transfer row " + std::to_string(l) + " of '" + label +
                                      "' (outcome " + std::to_string(a) + ") is not normalized"});
        }
    }
    return report;
}

EmpiricalBehaviour behaviour(const HiddenVariableModel& h, const SequentialScenario& s) {
    EmpiricalBehaviour e{s, {}};
    for (int k = 0; k < s.sequence_count(); ++k) {
        const Sequence& seq = s.sequences[k];
        Eigen::VectorXd table(s.table_size(k));
        for (std::int64_t idx = 0; idx < table.size(); ++idx) {
            JointOutcome o = s.outcome_at(k, idx);
            // Forward pass over the lambda distribution; the final transfer
            // sums to 1 and is elided.
            Eigen::VectorXd v = h.mu;
            for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
                const HvmInstrument& inst = h.instrument(s.labels[seq[p]]);
                v = inst.transfer[o[p]].transpose() *
                    v.cwiseProduct(inst.response.col(o[p]));
            }
            const HvmInstrument& last = h.instrument(s.labels[seq.back()]);
            table[idx] = v.dot(last.response.col(o.back()));
        }
        e.tables.push_back(std::move(table));
    }
    return e;
}

bool check_outcome_determinism(const HiddenVariableModel& h, const std::string& label,
                               double tol) {
    const Eigen::MatrixXd& xi = h.instrument(label).response;
    return ((xi.array() - 0.5).abs() >= 0.5 - tol).all();
}

NoDisturbanceResult check_no_disturbance(const HiddenVariableModel& h,
                                         const std::string& a_label,
                                         const std::string& b_label, double tol) {
    const HvmInstrument& a = h.instrument(a_label);
    const HvmInstrument& b = h.instrument(b_label);
    double max_dev = 0.0;
    for (int l = 0; l < h.lambda_count; ++l) {
        Eigen::RowVectorXd after = Eigen::RowVectorXd::Zero(h.lambda_count);
        for (int out = 0; out < a.response.cols(); ++out)
            after += a.response(l, out) * a.transfer[out].row(l);
        Eigen::RowVectorXd stats = after * b.response;
        max_dev = std::max(max_dev, (stats - b.response.row(l)).cwiseAbs().maxCoeff());
    }
    return {max_dev <= tol, max_dev};
}

bool check_outcome_independence(const HiddenVariableModel& h, const std::string& label,
                                double tol) {
    const HvmInstrument& inst = h.instrument(label);
    for (std::size_t a = 1; a < inst.transfer.size(); ++a)
        if ((inst.transfer[a] - inst.transfer[0]).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

NdHvmReport check_nd_hvm(const HiddenVariableModel& h, const SequentialScenario& s,
                         double tol) {
    NdHvmReport report;
    std::set<std::pair<int, int>> checked;
    for (const Sequence& seq : s.sequences)
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                if (!checked.insert({seq[i], seq[j]}).second) continue;
                auto r = check_no_disturbance(h, s.labels[seq[i]], s.labels[seq[j]], tol);
                report.max_deviation = std::max(report.max_deviation, r.max_deviation);
                if (!r.ok)
                    report.failures.push_back({s.labels[seq[i]], s.labels[seq[j]], r.max_deviation});
            }
    return report;
}

HvmInstrument build_example_instrument(ExampleInstrumentKind kind,
                                       const ExampleInstrumentParams& params) {
    const int nl = params.lambda_count;
    const int no = params.outcome_count;
    if (nl <= 0 || no <= 0) throw std::invalid_argument("lambda/outcome counts must be positive");

    auto deterministic_response = [&]() {
        if (static_cast<int>(params.assignment.size()) != nl)
            throw std::invalid_argument("deterministic kinds need one outcome per lambda");
        Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(nl, no);
        for (int l = 0; l < nl; ++l) {
            if (params.assignment[l] < 0 || params.assignment[l] >= no)
                throw std::invalid_argument("assignment outside the outcome set");
            xi(l, params.assignment[l]) = 1.0;
        }
        return xi;
    };

    HvmInstrument inst;
    switch (kind) {
        case ExampleInstrumentKind::FairCoinFlip:
            inst.response = Eigen::MatrixXd::Constant(nl, no, 1.0 / no);
            inst.transfer.assign(no, Eigen::MatrixXd::Identity(nl, nl));
            break;
        case ExampleInstrumentKind::NonInvasive: {
            if (static_cast<int>(params.assignment.size()) == nl)
                inst.response = deterministic_response();
            else
                inst.response = Eigen::MatrixXd::Constant(nl, no, 1.0 / no);
            inst.transfer.assign(no, Eigen::MatrixXd::Identity(nl, nl));
            break;
        }
        case ExampleInstrumentKind::RepeatableDeterministic:
            // Deterministic response with a transfer that stays within the
            // equal-outcome class of the current lambda (identity suffices).
            inst.response = deterministic_response();
            inst.transfer.assign(no, Eigen::MatrixXd::Identity(nl, nl));
            break;
        case ExampleInstrumentKind::RandomResampling:
            inst.response = Eigen::MatrixXd::Constant(nl, no, 1.0 / no);
            inst.transfer.assign(no, Eigen::MatrixXd::Constant(nl, nl, 1.0 / nl));
            break;
        case ExampleInstrumentKind::DeterministicReset: {
            if (params.reset_lambda < 0 || params.reset_lambda >= nl)
                throw std::invalid_argument("reset lambda outside the hidden-variable set");
            if (static_cast<int>(params.assignment.size()) == nl)
                inst.response = deterministic_response();
            else
                inst.response = Eigen::MatrixXd::Constant(nl, no, 1.0 / no);
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nl, nl);
            g.col(params.reset_lambda).setOnes();
            inst.transfer.assign(no, g);
            break;
        }
    }
    return inst;
}

HiddenVariableModel build_factorizable_hvm(const SequentialScenario& s,
                                           const Eigen::VectorXd& assignment_weights) {
    std::vector<GlobalAssignment> assignments = enumerate_global_assignments(s);
    if (assignment_weights.size() != static_cast<Eigen::Index>(assignments.size()))
        throw std::invalid_argument("one weight per global assignment required");
    if (assignment_weights.minCoeff() < 0.0 ||
        std::abs(assignment_weights.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("weights must form a distribution");
    const int nl = static_cast<int>(assignments.size());
    if (nl > kDefaultLambdaCap) throw std::overflow_error("lambda cap exceeded");

    HiddenVariableModel h;
    h.lambda_count = nl;
    h.mu = assignment_weights;
    for (int x = 0; x < s.label_count(); ++x) {
        HvmInstrument inst;
        inst.response = Eigen::MatrixXd::Zero(nl, s.outcome_count(x));
        for (int l = 0; l < nl; ++l) inst.response(l, assignments[l][x]) = 1.0;
        inst.transfer.assign(s.outcome_count(x), Eigen::MatrixXd::Identity(nl, nl));
        h.instruments[s.labels[x]] = std::move(inst);
    }
    return h;
}

namespace {

Eigen::VectorXd random_distribution(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v / v.sum();
}

// Permutation matrix that shuffles indices only within each class.
Eigen::MatrixXd class_permutation(std::mt19937_64& rng, const std::vector<int>& class_of,
                                  int nl) {
    std::map<int, std::vector<int>> classes;
    for (int l = 0; l < nl; ++l) classes[class_of[l]].push_back(l);
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(nl, nl);
    for (auto& [c, members] : classes) {
        std::vector<int> image = members;
        std::shuffle(image.begin(), image.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i) perm(members[i], image[i]) = 1.0;
    }
    return perm;
}

}  // namespace

HiddenVariableModel random_restricted_hvm(const SequentialScenario& s,
                                          HvmRestriction restriction, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    HiddenVariableModel h;

    switch (restriction) {
        case HvmRestriction::Nd: {
            // Non-invasive transfers make every instrument non-disturbing
            // regardless of its (arbitrary stochastic) response.
            h.lambda_count = std::uniform_int_distribution<int>(2, 16)(rng);
            h.mu = random_distribution(rng, h.lambda_count);
            for (int x = 0; x < s.label_count(); ++x) {
                HvmInstrument inst;
                inst.response.resize(h.lambda_count, s.outcome_count(x));
                for (int l = 0; l < h.lambda_count; ++l)
                    inst.response.row(l) = random_distribution(rng, s.outcome_count(x)).transpose();
                inst.transfer.assign(s.outcome_count(x),
                                     Eigen::MatrixXd::Identity(h.lambda_count, h.lambda_count));
                h.instruments[s.labels[x]] = std::move(inst);
            }
            break;
        }
        case HvmRestriction::OdNd: {
            // Lambdas carry (possibly repeated) global assignments; transfers
            // permute within equal-assignment classes, which preserves every
            // downstream response row.
            std::vector<GlobalAssignment> assignments = enumerate_global_assignments(s);
            int nl = std::uniform_int_distribution<int>(2, 16)(rng);
            std::uniform_int_distribution<int> pick(0, static_cast<int>(assignments.size()) - 1);
            std::vector<int> class_of(nl);
            for (int l = 0; l < nl; ++l) class_of[l] = pick(rng);
            h.lambda_count = nl;
            h.mu = random_distribution(rng, nl);
            for (int x = 0; x < s.label_count(); ++x) {
                HvmInstrument inst;
                inst.response = Eigen::MatrixXd::Zero(nl, s.outcome_count(x));
                for (int l = 0; l < nl; ++l)
                    inst.response(l, assignments[class_of[l]][x]) = 1.0;
                for (int a = 0; a < s.outcome_count(x); ++a)
                    inst.transfer.push_back(class_permutation(rng, class_of, nl));
                h.instruments[s.labels[x]] = std::move(inst);
            }
            break;
        }
        case HvmRestriction::OiNd: {
            // Responses are constant within lambda groups; the (outcome
            // independent) transfer is any row-stochastic matrix that is
            // block diagonal over the groups.
            int groups = std::uniform_int_distribution<int>(1, 4)(rng);
            std::vector<int> class_of;
            for (int g = 0; g < groups; ++g) {
                int size = std::uniform_int_distribution<int>(1, 3)(rng);
                for (int i = 0; i < size; ++i) class_of.push_back(g);
            }
            int nl = static_cast<int>(class_of.size());
            h.lambda_count = nl;
            h.mu = random_distribution(rng, nl);
            for (int x = 0; x < s.label_count(); ++x) {
                HvmInstrument inst;
                inst.response.resize(nl, s.outcome_count(x));
                std::vector<Eigen::RowVectorXd> group_row(groups);
                for (int g = 0; g < groups; ++g)
                    group_row[g] = random_distribution(rng, s.outcome_count(x)).transpose();
                for (int l = 0; l < nl; ++l) inst.response.row(l) = group_row[class_of[l]];

                Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nl, nl);
                for (int l = 0; l < nl; ++l) {
                    std::vector<int> members;
                    for (int l2 = 0; l2 < nl; ++l2)
                        if (class_of[l2] == class_of[l]) members.push_back(l2);
                    Eigen::VectorXd row = random_distribution(rng, static_cast<int>(members.size()));
                    for (std::size_t i = 0; i < members.size(); ++i) g(l, members[i]) = row[i];
                }
                inst.transfer.assign(s.outcome_count(x), g);
                h.instruments[s.labels[x]] = std::move(inst);
            }
            break;
        }
    }
    return h;
}

double p_flip(const HiddenVariableModel& h, const std::string& a_label,
              const std::string& b_label) {
    const HvmInstrument& a = h.instrument(a_label);
    const HvmInstrument& b = h.instrument(b_label);
    if (b.response.cols() != 2) throw std::invalid_argument("p_flip requires a binary instrument");
    double total = 0.0;
    for (int l0 = 0; l0 < h.lambda_count; ++l0)
        for (int k = 0; k < 2; ++k)
            for (int kp = 0; kp < a.response.cols(); ++kp) {
                double w = h.mu[l0] * b.response(l0, k) * a.response(l0, kp);
                if (w == 0.0) continue;
                total += w * a.transfer[kp].row(l0).dot(b.response.col(1 - k));
            }
    return total;
}

double p_err(const HiddenVariableModel& h, const std::string& a_label,
             const std::string& b_label) {
    const HvmInstrument& a = h.instrument(a_label);
    const HvmInstrument& b = h.instrument(b_label);
    if (b.response.cols() != 2) throw std::invalid_argument("p_err requires a binary instrument");
    double total = 0.0;
    for (int l0 = 0; l0 < h.lambda_count; ++l0)
        for (int k = 0; k < 2; ++k) {
            double w0 = h.mu[l0] * b.response(l0, k);
            if (w0 == 0.0) continue;
            Eigen::RowVectorXd after_b = w0 * b.transfer[k].row(l0);
            Eigen::RowVectorXd after_a = Eigen::RowVectorXd::Zero(h.lambda_count);
            for (int kp = 0; kp < a.response.cols(); ++kp)
                after_a += after_b.cwiseProduct(a.response.col(kp).transpose()) * a.transfer[kp];
            total += after_a.dot(b.response.col(1 - k));
        }
    return total;
}

HiddenVariableModel epsilon_noisy_model(double eps) {
    if (eps < 0.0 || eps > 0.5)
        throw std::invalid_argument("eps must lie in [0, 0.5]");
    HiddenVariableModel h;
    h.lambda_count = 2;
    h.mu = Eigen::Vector2d(0.5, 0.5);

    Eigen::MatrixXd noisy(2, 2);
    noisy << 1.0 - eps, eps,
             eps, 1.0 - eps;

    HvmInstrument b;
    b.response = Eigen::MatrixXd::Identity(2, 2);  // B reads the hidden variable
    b.transfer.assign(2, noisy);
    h.instruments["B"] = std::move(b);

    HvmInstrument a;
    a.response.resize(2, 2);
    a.response << 1.0, 0.0,
                  1.0, 0.0;
    a.transfer.assign(2, noisy);
    h.instruments["A"] = std::move(a);
    return h;
}

}  // namespace seqctx
