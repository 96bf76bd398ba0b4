// End-to-end acceptance checks. Each numbered criterion prints one PASS or
// FAIL line; the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "seqctx/hvm.hpp"
#include "seqctx/io.hpp"
#include "seqctx/polytope.hpp"
#include "seqctx/quantum.hpp"
#include "rational_simplex.hpp"

using namespace seqctx;

#ifndef GOLDEN_DIR
#define GOLDEN_DIR "golden"
#endif

namespace {

int failures = 0;

void report(int number, bool ok, const std::string& what) {
    std::printf("[%2d] %s %s\n", number, ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::VectorXd stack_tables(const EmpiricalBehaviour& e) {
    std::int64_t total = 0;
    for (const auto& t : e.tables) total += t.size();
    Eigen::VectorXd v(total);
    std::int64_t at = 0;
    for (const auto& t : e.tables) {
        v.segment(at, t.size()) = t;
        at += t.size();
    }
    return v;
}

double oracle_ncf(const EmpiricalBehaviour& e) {
    IncidenceMatrix inc = build_incidence(e.scenario);
    return static_cast<double>(seqctx::testing::rational_ncf(inc.m, stack_tables(e)));
}

EmpiricalBehaviour random_nc_behaviour(const SequentialScenario& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto assignments = enumerate_global_assignments(s);
    std::vector<std::pair<double, EmpiricalBehaviour>> parts;
    double total = 0.0;
    for (const auto& g : assignments) {
        double w = u(rng);
        total += w;
        parts.push_back({w, deterministic_model(s, g)});
    }
    for (auto& [w, b] : parts) w /= total;
    return mix(parts);
}

SequentialScenario random_small_scenario(std::mt19937_64& rng) {
    SequentialScenario s;
    int nl = 2 + static_cast<int>(rng() % 3);
    for (int l = 0; l < nl; ++l) {
        s.labels.push_back("M" + std::to_string(l));
        s.outcomes.push_back(rng() % 2 == 0 ? OutcomeAlphabet::binary()
                                            : OutcomeAlphabet{{"0", "1", "2"}});
    }
    int ns = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < ns; ++k) {
        Sequence seq;
        int len = 1 + static_cast<int>(rng() % 3);
        for (int p = 0; p < len; ++p) seq.push_back(static_cast<int>(rng() % nl));
        s.sequences.push_back(seq);
    }
    return s;
}

// 1. Pentagon inequality value from the qutrit realization.
void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    double value = kcbs_value(kcbs_realization());
    double secs = elapsed_seconds(start);
    double target = 5.0 - 2.0 * std::sqrt(5.0);
    bool ok = std::abs(value - target) <= 1e-9 && secs < 1.0;
    std::ostringstream msg;
    msg << "pentagon value " << value << " vs 5-2*sqrt(5) within 1e-9, " << secs << " s";
    report(1, ok, msg.str());
}

// 2. Magic-square value for two input states plus the classical maximum.
void criterion_2() {
    auto start = std::chrono::steady_clock::now();
    double v_pure = pm_value(pm_realization());
    double v_mixed = pm_value(pm_realization(Cmat::Identity(4, 4) / 4.0));

    SequentialScenario s = pm_scenario();
    double best = 0.0;
    for (const auto& g : enumerate_global_assignments(s)) {
        double total = 0.0;
        for (int k = 0; k < 6; ++k) {
            int sign = 1;
            for (int i : s.sequences[k]) sign *= g[i] == 0 ? 1 : -1;
            total += sign == (k == 5 ? -1 : 1) ? 1.0 : 0.0;
        }
        best = std::max(best, total);
    }
    double secs = elapsed_seconds(start);
    bool ok = std::abs(v_pure - 6.0) <= 1e-9 && std::abs(v_mixed - 6.0) <= 1e-9 &&
              best == 5.0 && secs < 1.0;
    std::ostringstream msg;
    msg << "square value " << v_pure << " (pure), " << v_mixed
        << " (mixed), classical max " << best << ", " << secs << " s";
    report(2, ok, msg.str());
}

// 3. Quantum no-disturbance: compatible pairs pass, an incompatible pair fails.
void criterion_3() {
    bool ok = true;
    QuantumRealization kcbs = kcbs_realization();
    for (int i = 0; i < 5; ++i) {
        auto r = check_quantum_nd(kcbs, "A" + std::to_string(i),
                                  "A" + std::to_string((i + 1) % 5));
        ok = ok && r.ok && r.max_deviation <= 1e-10;
    }
    QuantumRealization pm = pm_realization();
    SequentialScenario s = pm_scenario();
    for (const Sequence& seq : s.sequences)
        for (int i : seq)
            for (int j : seq) {
                if (i == j) continue;
                auto r = check_quantum_nd(pm, s.labels[i], s.labels[j]);
                ok = ok && r.ok && r.max_deviation <= 1e-10;
            }
    auto bad = check_quantum_nd(kcbs, "A0", "A2");
    ok = ok && !bad.ok && bad.max_deviation > 1e-3;
    std::ostringstream msg;
    msg << "quantum nd: compatible pairs <= 1e-10, incompatible pair deviates "
        << bad.max_deviation;
    report(3, ok, msg.str());
}

// 4. Every generated nd model yields marginal-compatible statistics.
void criterion_4() {
    bool ok = true;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 977 + 11);
        SequentialScenario s = random_small_scenario(rng);
        HiddenVariableModel h = random_restricted_hvm(s, HvmRestriction::Nd, seed);
        ok = ok && validate_hvm(h).empty() && h.lambda_count <= 16;
        ok = ok && check_nd_hvm(h, s).ok();
        ok = ok && check_compatibility_of_marginals(behaviour(h, s), 1e-9).ok();
        ++count;
    }
    report(4, ok && count >= 100,
           "marginal compatibility for " + std::to_string(count) + " nd models within 1e-9");
}

// 5. Deterministic non-disturbing models are noncontextual, and noncontextual
//    mixtures are reproduced by the factorizable construction.
void criterion_5() {
    bool ok = true;
    SequentialScenario s = kcbs_scenario();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        HiddenVariableModel h = random_restricted_hvm(s, HvmRestriction::OdNd, seed);
        CFResult r = contextual_fraction(behaviour(h, s));
        ok = ok && r.ok() && r.cf <= 1e-7;
    }
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto assignments = enumerate_global_assignments(s);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd w(static_cast<int>(assignments.size()));
        for (int i = 0; i < w.size(); ++i) w[i] = u(rng);
        w /= w.sum();
        HiddenVariableModel h = build_factorizable_hvm(s, w);
        std::vector<std::pair<double, EmpiricalBehaviour>> parts;
        for (std::size_t c = 0; c < assignments.size(); ++c)
            parts.push_back({w[static_cast<int>(c)], deterministic_model(s, assignments[c])});
        EmpiricalBehaviour want = mix(parts);
        EmpiricalBehaviour got = behaviour(h, s);
        for (int k = 0; k < s.sequence_count(); ++k)
            ok = ok && (got.tables[k] - want.tables[k]).cwiseAbs().maxCoeff() <= 1e-9;
        for (const auto& label : s.labels) ok = ok && check_outcome_determinism(h, label);
        ok = ok && check_nd_hvm(h, s).ok();
    }
    report(5, ok, "100 deterministic nd models have cf <= 1e-7; 50 mixtures reconstructed");
}

// 6. Outcome-independent nd models on length-<=2 scenarios are noncontextual.
void criterion_6() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 331 + 7);
        // Sequences of at most two distinct instruments: with a repeated
        // instrument a strictly stochastic response puts weight on
        // inconsistent outcomes, which is contextual by definition.
        SequentialScenario s;
        int nl = 2 + static_cast<int>(rng() % 3);
        for (int l = 0; l < nl; ++l) {
            s.labels.push_back("M" + std::to_string(l));
            s.outcomes.push_back(rng() % 2 == 0 ? OutcomeAlphabet::binary()
                                                : OutcomeAlphabet{{"0", "1", "2"}});
        }
        int ns = 1 + static_cast<int>(rng() % 4);
        for (int k = 0; k < ns; ++k) {
            int a = static_cast<int>(rng() % nl);
            if (rng() % 4 == 0) {
                s.sequences.push_back({a});
            } else {
                int b = static_cast<int>(rng() % nl);
                if (b == a) b = (a + 1) % nl;
                s.sequences.push_back({a, b});
            }
        }
        HiddenVariableModel h = random_restricted_hvm(s, HvmRestriction::OiNd, seed);
        CFResult r = contextual_fraction(behaviour(h, s));
        ok = ok && r.ok() && r.cf <= 1e-7;
    }
    report(6, ok, "100 outcome-independent nd models on pair scenarios have cf <= 1e-7");
}

// 7. Fraction solver agrees with the exact-rational oracle.
void criterion_7() {
    EmpiricalBehaviour kcbs = quantum_behaviour(kcbs_realization(), kcbs_scenario());
    EmpiricalBehaviour pm = quantum_behaviour(pm_realization(), pm_scenario());
    CFResult rk = contextual_fraction(kcbs);
    CFResult rp = contextual_fraction(pm);
    bool ok = rk.ok() && rp.ok();
    ok = ok && std::abs(rk.ncf - oracle_ncf(kcbs)) <= 1e-8;
    ok = ok && std::abs(rp.ncf - oracle_ncf(pm)) <= 1e-8;
    ok = ok && std::abs(rp.cf - 1.0) <= 1e-8;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        CFResult r = contextual_fraction(random_nc_behaviour(kcbs_scenario(), rng));
        ok = ok && r.ok() && r.cf <= 1e-9;
    }
    std::ostringstream msg;
    msg << "fraction matches exact oracle within 1e-8 (square cf " << rp.cf
        << "); deterministic mixtures cf <= 1e-9";
    report(7, ok, msg.str());
}

// 8. The fraction does not depend on how contexts are ordered into sequences.
void criterion_8() {
    MeasurementScenario m = kcbs_measurement_scenario();
    SequentialScenario fwd = induce_sequential(m, OrderingPolicy::Declared);
    SequentialScenario rev = induce_sequential(m, OrderingPolicy::Reversed);
    bool ok = true;
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        EmpiricalBehaviour a{fwd, {}};
        for (int k = 0; k < fwd.sequence_count(); ++k) {
            Eigen::VectorXd t(fwd.table_size(k));
            for (int i = 0; i < t.size(); ++i) t[i] = u(rng);
            a.tables.push_back(t / t.sum());
        }
        EmpiricalBehaviour b{rev, {}};
        for (int k = 0; k < fwd.sequence_count(); ++k) {
            Eigen::VectorXd t(fwd.table_size(k));
            for (std::int64_t idx = 0; idx < fwd.table_size(k); ++idx) {
                JointOutcome o = fwd.outcome_at(k, idx);
                JointOutcome ro(o.rbegin(), o.rend());
                t[rev.linear_index(k, ro)] = a.tables[k][idx];
            }
            b.tables.push_back(t);
        }
        CFResult ra = contextual_fraction(a);
        CFResult rb = contextual_fraction(b);
        ok = ok && ra.ok() && rb.ok() && std::abs(ra.ncf - rb.ncf) <= 1e-9;
    }
    report(8, ok, "fraction invariant under context ordering for 10 random behaviours");
}

// 9. Repeating an instrument does not increase the fraction for the pentagon
//    realization.
void criterion_9() {
    QuantumRealization r = kcbs_realization();
    CFResult seq = contextual_fraction(quantum_behaviour(r, kcbs_scenario()));
    CFResult ext = contextual_fraction(quantum_behaviour(r, extended_kcbs_scenario()));
    bool ok = seq.ok() && ext.ok() && ext.cf <= seq.cf + 1e-7;
    std::ostringstream msg;
    msg << "extended-scenario cf " << ext.cf << " <= " << seq.cf << " + 1e-7";
    report(9, ok, msg.str());
}

// 10. The epsilon-noisy family separates flip and error probabilities.
void criterion_10() {
    bool ok = true;
    for (double eps : {0.0, 0.1, 0.25, 0.5}) {
        HiddenVariableModel h = epsilon_noisy_model(eps);
        double pf = p_flip(h, "A", "B");
        double pe = p_err(h, "A", "B");
        ok = ok && std::abs((pe - pf) - (1.0 - 2.0 * eps) * eps) <= 1e-12;
        ok = ok && pf <= pe + 1e-15;
    }
    report(10, ok, "p_err - p_flip = (1-2e)e within 1e-12 and p_flip <= p_err");
}

// 11. Structural properties of the restricted generators.
void criterion_11() {
    bool ok = true;
    SequentialScenario s = kcbs_scenario();
    // Deterministic non-disturbing pairs: every reachable hidden variable
    // keeps the downstream response row.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        HiddenVariableModel h = random_restricted_hvm(s, HvmRestriction::OdNd, seed);
        for (const auto& [a_label, a] : h.instruments) {
            for (int l = 0; l < h.lambda_count; ++l) {
                int al = 0;
                a.response.row(l).maxCoeff(&al);
                for (int l2 = 0; l2 < h.lambda_count; ++l2) {
                    if (a.transfer[al](l, l2) <= 0.0) continue;
                    for (const auto& [b_label, b] : h.instruments)
                        ok = ok &&
                             (b.response.row(l2) - b.response.row(l)).cwiseAbs().maxCoeff() <=
                                 1e-12;
                }
            }
        }
    }
    // Outcome-independent non-disturbing pairs: the transfer fixes every
    // downstream response row on average.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        HiddenVariableModel h = random_restricted_hvm(s, HvmRestriction::OiNd, seed);
        for (const auto& [a_label, a] : h.instruments)
            for (const auto& [b_label, b] : h.instruments) {
                Eigen::MatrixXd pushed = a.transfer[0] * b.response;
                ok = ok && (pushed - b.response).cwiseAbs().maxCoeff() <= 1e-12;
            }
    }
    report(11, ok, "transfer-support and outcome-sum properties on 100 seeds each");
}

// 12. Canonical serialization round-trips and the parser survives fuzzing.
void criterion_12() {
    bool ok = true;
    std::string base;
    for (const char* name : {"kcbs_scenario.json", "extended_kcbs_scenario.json",
                             "pm_scenario.json"}) {
        std::ifstream in(std::filesystem::path(GOLDEN_DIR) / name, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        ok = ok && in.good() && !text.empty();
        if (!ok) break;
        ok = ok && io::serialize(io::parse(text)) == text;
        base = text;
    }
    std::mt19937_64 rng(12);
    int survived = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        std::string text;
        if (trial % 2 == 0) {
            text.resize(rng() % 64);
            for (char& c : text) c = static_cast<char>(rng() % 256);
        } else {
            text = base.substr(0, rng() % base.size());
            for (int k = 0; k < 4 && !text.empty(); ++k)
                text[rng() % text.size()] = static_cast<char>(rng() % 256);
        }
        try {
            io::parse(text);
        } catch (const io::ParseError&) {
        }
        ++survived;
    }
    report(12, ok && survived == 100000,
           "golden files byte-identical; 100000 fuzzed inputs parsed without crash");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%s\n", failures == 0 ? "all criteria passed" : "criteria failed");
    return failures == 0 ? 0 : 1;
}
