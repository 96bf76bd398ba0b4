#include <CLI11.hpp>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <set>

#include "seqctx/io.hpp"
#include "seqctx/polytope.hpp"

namespace {

using namespace seqctx;

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitInputError = 2;

SequentialScenario load_scenario(const std::string& path) {
    io::Document doc = io::load_file(path);
    if (auto* s = std::get_if<SequentialScenario>(&doc)) return *s;
    throw io::ParseError(path, "expected a scenario document");
}

int cmd_validate(const std::string& path, double tol) {
    io::Document doc = io::load_file(path);
    ValidationReport report;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SequentialScenario>) {
                report = validate_scenario(d);
            } else if constexpr (std::is_same_v<T, HiddenVariableModel>) {
                report = validate_hvm(d, tol);
            } else if constexpr (std::is_same_v<T, MeasurementScenario>) {
                // Structural checks already ran during parsing.
            } else if constexpr (std::is_same_v<T, QuantumRealization>) {
                if (!is_density_matrix(d.state))
                    report.push_back({"input state is not a valid density matrix"});
            } else {
                report.push_back({"behaviour documents need --scenario; use `cf` instead"});
            }
        },
        doc);
    if (report.empty()) {
        std::cout << "valid\n";
        return kExitOk;
    }
    for (const auto& issue : report) std::cout << "violation: " << issue.message << "\n";
    return kExitDomainFailure;
}

EmpiricalBehaviour load_behaviour(const std::string& behaviour_path,
                                  const std::string& scenario_path) {
    io::Document doc = io::load_file(behaviour_path);
    auto* tables = std::get_if<io::BehaviourTables>(&doc);
    if (!tables) throw io::ParseError(behaviour_path, "expected a behaviour document");
    return io::attach_tables(load_scenario(scenario_path), *tables);
}

int cmd_cf(const std::string& behaviour_path, const std::string& scenario_path, bool as_json) {
    EmpiricalBehaviour e = load_behaviour(behaviour_path, scenario_path);
    ValidationReport report = validate_behaviour(e);
    if (!report.empty()) {
        for (const auto& issue : report) std::cerr << "violation: " << issue.message << "\n";
        return kExitInputError;
    }
    CFResult r = contextual_fraction(e);
    if (!r.ok()) {
        std::cerr << "error: contextual-fraction LP failed\n";
        return kExitDomainFailure;
    }
    if (as_json) {
        nlohmann::json out = {{"cf", r.cf}, {"ncf", r.ncf}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "non-contextual fraction: " << r.ncf << "\n";
        std::cout << "contextual fraction:     " << r.cf << "\n";
    }
    return kExitOk;
}

int cmd_nd_check(const std::string& hvm_path, const std::string& quantum_path,
                 const std::string& scenario_path, double tol) {
    SequentialScenario s = load_scenario(scenario_path);
    std::cout << "tolerance: " << tol << "\n";
    bool all_ok = true;
    if (!hvm_path.empty()) {
        io::Document doc = io::load_file(hvm_path);
        auto* h = std::get_if<HiddenVariableModel>(&doc);
        if (!h) throw io::ParseError(hvm_path, "expected an hvm document");
        NdHvmReport report = check_nd_hvm(*h, s, tol);
        all_ok = report.ok();
        std::cout << "max deviation: " << report.max_deviation << "\n";
        for (const auto& f : report.failures)
            std::cout << "DISTURBS: " << f.a_label << " -> " << f.b_label
                      << " (deviation " << f.deviation << ")\n";
    } else {
        io::Document doc = io::load_file(quantum_path);
        auto* r = std::get_if<QuantumRealization>(&doc);
        if (!r) throw io::ParseError(quantum_path, "expected a quantum_realization document");
        std::set<std::pair<int, int>> checked;
        for (const Sequence& seq : s.sequences)
            for (std::size_t i = 0; i < seq.size(); ++i)
                for (std::size_t j = i + 1; j < seq.size(); ++j) {
                    if (!checked.insert({seq[i], seq[j]}).second) continue;
                    auto res = check_quantum_nd(*r, s.labels[seq[i]], s.labels[seq[j]], tol);
                    std::cout << s.labels[seq[i]] << " -> " << s.labels[seq[j]] << ": "
                              << (res.ok ? "ND" : "DISTURBS")
                              << " (deviation " << res.max_deviation << ")\n";
                    all_ok = all_ok && res.ok;
                }
    }
    std::cout << (all_ok ? "no-disturbance holds\n" : "no-disturbance violated\n");
    return all_ok ? kExitOk : kExitDomainFailure;
}

int cmd_simulate(const std::string& hvm_path, const std::string& scenario_path) {
    SequentialScenario s = load_scenario(scenario_path);
    io::Document doc = io::load_file(hvm_path);
    auto* h = std::get_if<HiddenVariableModel>(&doc);
    if (!h) throw io::ParseError(hvm_path, "expected an hvm document");
    ValidationReport report = validate_hvm(*h);
    if (!report.empty()) {
        for (const auto& issue : report) std::cerr << "violation: " << issue.message << "\n";
        return kExitInputError;
    }
    std::cout << io::serialize(io::detach_tables(behaviour(*h, s)));
    return kExitOk;
}

int cmd_induce(const std::string& path, const std::string& order) {
    io::Document doc = io::load_file(path);
    auto* m = std::get_if<MeasurementScenario>(&doc);
    if (!m) throw io::ParseError(path, "expected a measurement_scenario document");
    OrderingPolicy policy =
        order == "reversed" ? OrderingPolicy::Reversed : OrderingPolicy::Declared;
    std::cout << io::serialize(induce_sequential(*m, policy));
    return kExitOk;
}

int cmd_demo(const std::string& which, const std::string& emit_dir) {
    const bool kcbs = which == "kcbs";
    QuantumRealization r = kcbs ? kcbs_realization() : pm_realization();
    SequentialScenario s = kcbs ? kcbs_scenario() : pm_scenario();
    double value = kcbs ? kcbs_value(r) : pm_value(r);
    double bound = kcbs ? 1.0 : 5.0;
    bool violated = kcbs ? value < bound : value > bound;

    std::cout << (kcbs ? "pentagon" : "magic square") << " inequality\n";
    std::cout << "value: " << std::setprecision(15) << value << "\n";
    std::cout << "classical bound: " << bound << (kcbs ? " (>=)" : " (<=)") << "\n";
    std::cout << (violated ? "VIOLATED" : "not violated") << "\n";

    bool nd_ok = true;
    double max_dev = 0.0;
    std::set<std::pair<int, int>> checked;
    for (const Sequence& seq : s.sequences)
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (std::size_t j = i + 1; j < seq.size(); ++j) {
                if (!checked.insert({seq[i], seq[j]}).second) continue;
                auto res = check_quantum_nd(r, s.labels[seq[i]], s.labels[seq[j]]);
                nd_ok = nd_ok && res.ok;
                max_dev = std::max(max_dev, res.max_deviation);
            }
    std::cout << "in-sequence no-disturbance: " << (nd_ok ? "holds" : "violated")
              << " (max deviation " << max_dev << ")\n";

    CFResult cf = contextual_fraction(quantum_behaviour(r, s));
    if (cf.ok()) std::cout << "contextual fraction: " << cf.cf << "\n";

    if (!emit_dir.empty()) {
        io::save_file(emit_dir + "/" + which + "_scenario.json", s);
        io::save_file(emit_dir + "/" + which + "_realization.json", r);
        io::save_file(emit_dir + "/" + which + "_behaviour.json",
                      io::detach_tables(quantum_behaviour(r, s)));
        if (kcbs)
            io::save_file(emit_dir + "/extended_kcbs_scenario.json", extended_kcbs_scenario());
        std::cout << "golden files written to " << emit_dir << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential-scenario contextuality toolkit"};
    app.require_subcommand(1);

    std::string file, scenario_path, hvm_path, quantum_path, order = "declared";
    std::string demo_which, emit_dir;
    double tol = 1e-9;
    bool as_json = false;

    auto* validate = app.add_subcommand("validate", "validate a document");
    validate->add_option("file", file)->required();
    validate->add_option("--tol", tol);

    auto* cf = app.add_subcommand("cf", "contextual fraction of a behaviour");
    cf->add_option("behaviour", file)->required();
    cf->add_option("--scenario", scenario_path)->required();
    cf->add_flag("--json", as_json);

    auto* nd = app.add_subcommand("nd-check", "check no-disturbance");
    auto* nd_hvm = nd->add_option("--hvm", hvm_path);
    auto* nd_q = nd->add_option("--quantum", quantum_path);
    nd->add_option("--scenario", scenario_path)->required();
    nd->add_option("--tol", tol);
    nd_hvm->excludes(nd_q);

    auto* simulate = app.add_subcommand("simulate", "behaviour of an hvm");
    simulate->add_option("--hvm", hvm_path)->required();
    simulate->add_option("--scenario", scenario_path)->required();

    auto* induce = app.add_subcommand("induce", "induced sequential scenario");
    induce->add_option("file", file)->required();
    induce->add_option("--order", order)->check(CLI::IsMember({"declared", "reversed"}));

    auto* demo = app.add_subcommand("demo", "built-in example realizations");
    demo->add_option("which", demo_which)->required()->check(CLI::IsMember({"kcbs", "pm"}));
    demo->add_option("--emit", emit_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(file, tol);
        if (app.got_subcommand(cf)) return cmd_cf(file, scenario_path, as_json);
        if (app.got_subcommand(nd)) {
            if (hvm_path.empty() && quantum_path.empty()) {
                std::cerr << "error: nd-check needs --hvm or --quantum\n";
                return kExitInputError;
            }
            return cmd_nd_check(hvm_path, quantum_path, scenario_path, tol);
        }
        if (app.got_subcommand(simulate)) return cmd_simulate(hvm_path, scenario_path);
        if (app.got_subcommand(induce)) return cmd_induce(file, order);
        if (app.got_subcommand(demo)) return cmd_demo(demo_which, emit_dir);
    } catch (const seqctx::io::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
