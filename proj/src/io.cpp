#include "seqctx/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace seqctx::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ParseError(path, msg);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::string string_at(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

const json& array_at(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

std::vector<double> vector_at(const json& j, const std::string& path) {
    array_at(j, path);
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Eigen::MatrixXd matrix_at(const json& j, const std::string& path) {
    array_at(j, path);
    if (j.empty()) fail(path, "empty matrix");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j.size(); ++i)
        rows.push_back(vector_at(j[i], path + "[" + std::to_string(i) + "]"));
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) fail(path, "ragged matrix rows");
        for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

std::complex<double> complex_at(const json& j, const std::string& path) {
    array_at(j, path);
    if (j.size() != 2) fail(path, "complex numbers are [re, im] pairs");
    return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

Cmat cmatrix_at(const json& j, const std::string& path) {
    array_at(j, path);
    if (j.empty()) fail(path, "empty matrix");
    Cmat m(j.size(), array_at(j[0], path + "[0]").size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& row = array_at(j[i], path + "[" + std::to_string(i) + "]");
        if (static_cast<Eigen::Index>(row.size()) != m.cols()) fail(path, "ragged matrix rows");
        for (std::size_t k = 0; k < row.size(); ++k)
            m(i, k) = complex_at(row[k], path + "[" + std::to_string(i) + "][" +
                                             std::to_string(k) + "]");
    }
    return m;
}

// ---- label blocks shared by both scenario kinds ----

void parse_labels(const json& payload, const std::string& path,
                  std::vector<std::string>& labels, std::vector<OutcomeAlphabet>& outcomes) {
    const json& jl = array_at(member(payload, path, "labels"), path + ".labels");
    for (std::size_t i = 0; i < jl.size(); ++i) {
        std::string p = path + ".labels[" + std::to_string(i) + "]";
        labels.push_back(string_at(member(jl[i], p, "name"), p + ".name"));
        const json& jo = array_at(member(jl[i], p, "outcomes"), p + ".outcomes");
        if (jo.empty()) fail(p + ".outcomes", "empty outcome set");
        OutcomeAlphabet a;
        for (std::size_t k = 0; k < jo.size(); ++k)
            a.names.push_back(string_at(jo[k], p + ".outcomes[" + std::to_string(k) + "]"));
        outcomes.push_back(std::move(a));
    }
}

std::vector<int> parse_label_list(const json& j, const std::string& path,
                                  const std::vector<std::string>& labels) {
    array_at(j, path);
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        std::string name = string_at(j[i], p);
        auto it = std::find(labels.begin(), labels.end(), name);
        if (it == labels.end()) fail(p, "undeclared instrument '" + name + "'");
        out.push_back(static_cast<int>(it - labels.begin()));
    }
    return out;
}

json labels_json(const std::vector<std::string>& labels,
                 const std::vector<OutcomeAlphabet>& outcomes) {
    json jl = json::array();
    for (std::size_t i = 0; i < labels.size(); ++i)
        jl.push_back({{"name", labels[i]}, {"outcomes", outcomes[i].names}});
    return jl;
}

// ---- per-kind payloads ----

SequentialScenario parse_scenario(const json& payload) {
    SequentialScenario s;
    parse_labels(payload, "payload", s.labels, s.outcomes);
    const json& js = array_at(member(payload, "payload", "sequences"), "payload.sequences");
    for (std::size_t k = 0; k < js.size(); ++k)
        s.sequences.push_back(
            parse_label_list(js[k], "payload.sequences[" + std::to_string(k) + "]", s.labels));
    ValidationReport report = validate_scenario(s);
    if (!report.empty()) fail("payload", report.front().message);
    return s;
}

json scenario_json(const SequentialScenario& s) {
    json seqs = json::array();
    for (const Sequence& seq : s.sequences) {
        json js = json::array();
        for (int label : seq) js.push_back(s.labels[label]);
        seqs.push_back(js);
    }
    return {{"labels", labels_json(s.labels, s.outcomes)}, {"sequences", seqs}};
}

MeasurementScenario parse_measurement_scenario(const json& payload) {
    MeasurementScenario m;
    parse_labels(payload, "payload", m.labels, m.outcomes);
    const json& jc = array_at(member(payload, "payload", "contexts"), "payload.contexts");
    for (std::size_t k = 0; k < jc.size(); ++k) {
        auto ctx = parse_label_list(jc[k], "payload.contexts[" + std::to_string(k) + "]", m.labels);
        std::sort(ctx.begin(), ctx.end());
        if (std::adjacent_find(ctx.begin(), ctx.end()) != ctx.end())
            fail("payload.contexts[" + std::to_string(k) + "]", "repeated label in context");
        m.contexts.push_back(std::move(ctx));
    }
    return m;
}

json measurement_scenario_json(const MeasurementScenario& m) {
    json ctxs = json::array();
    for (const auto& ctx : m.contexts) {
        json jc = json::array();
        for (int label : ctx) jc.push_back(m.labels[label]);
        ctxs.push_back(jc);
    }
    return {{"contexts", ctxs}, {"labels", labels_json(m.labels, m.outcomes)}};
}

BehaviourTables parse_behaviour(const json& payload) {
    BehaviourTables t;
    const json& jt = array_at(member(payload, "payload", "tables"), "payload.tables");
    for (std::size_t k = 0; k < jt.size(); ++k)
        t.tables.push_back(vector_at(jt[k], "payload.tables[" + std::to_string(k) + "]"));
    return t;
}

json behaviour_json(const BehaviourTables& t) { return {{"tables", t.tables}}; }

HiddenVariableModel parse_hvm(const json& payload) {
    HiddenVariableModel h;
    h.lambda_count = int_at(member(payload, "payload", "lambda_count"), "payload.lambda_count");
    if (h.lambda_count <= 0 || h.lambda_count > kDefaultLambdaCap)
        fail("payload.lambda_count", "out of range");
    std::vector<double> mu = vector_at(member(payload, "payload", "mu"), "payload.mu");
    if (static_cast<int>(mu.size()) != h.lambda_count)
        fail("payload.mu", "length must equal lambda_count");
    h.mu = Eigen::Map<Eigen::VectorXd>(mu.data(), mu.size());

    const json& ji = member(payload, "payload", "instruments");
    if (!ji.is_object()) fail("payload.instruments", "expected an object");
    for (auto it = ji.begin(); it != ji.end(); ++it) {
        std::string p = "payload.instruments." + it.key();
        HvmInstrument inst;
        inst.response = matrix_at(member(it.value(), p, "response"), p + ".response");
        if (inst.response.rows() != h.lambda_count)
            fail(p + ".response", "row count must equal lambda_count");
        const json& jt = array_at(member(it.value(), p, "transfer"), p + ".transfer");
        if (static_cast<Eigen::Index>(jt.size()) != inst.response.cols())
            fail(p + ".transfer", "one transfer slice per outcome required");
        for (std::size_t a = 0; a < jt.size(); ++a) {
            Eigen::MatrixXd g = matrix_at(jt[a], p + ".transfer[" + std::to_string(a) + "]");
            if (g.rows() != h.lambda_count || g.cols() != h.lambda_count)
                fail(p + ".transfer[" + std::to_string(a) + "]", "must be lambda_count square");
            inst.transfer.push_back(std::move(g));
        }
        h.instruments[it.key()] = std::move(inst);
    }
    return h;
}

json hvm_json(const HiddenVariableModel& h) {
    json insts = json::object();
    for (const auto& [label, inst] : h.instruments) {
        json resp = json::array();
        for (int l = 0; l < inst.response.rows(); ++l) {
            json row = json::array();
            for (int a = 0; a < inst.response.cols(); ++a) row.push_back(inst.response(l, a));
            resp.push_back(row);
        }
        json trans = json::array();
        for (const Eigen::MatrixXd& g : inst.transfer) {
            json jm = json::array();
            for (int l = 0; l < g.rows(); ++l) {
                json row = json::array();
                for (int l2 = 0; l2 < g.cols(); ++l2) row.push_back(g(l, l2));
                jm.push_back(row);
            }
            trans.push_back(jm);
        }
        insts[label] = {{"response", resp}, {"transfer", trans}};
    }
    std::vector<double> mu(h.mu.data(), h.mu.data() + h.mu.size());
    return {{"instruments", insts}, {"lambda_count", h.lambda_count}, {"mu", mu}};
}

QuantumRealization parse_quantum(const json& payload) {
    QuantumRealization r;
    r.dimension = int_at(member(payload, "payload", "dimension"), "payload.dimension");
    if (r.dimension <= 0 || r.dimension > kMaxDimension)
        fail("payload.dimension", "out of range");
    r.state = cmatrix_at(member(payload, "payload", "state"), "payload.state");
    if (r.state.rows() != r.dimension || r.state.cols() != r.dimension)
        fail("payload.state", "must be dimension x dimension");

    const json& ji = member(payload, "payload", "instruments");
    if (!ji.is_object()) fail("payload.instruments", "expected an object");
    for (auto it = ji.begin(); it != ji.end(); ++it) {
        std::string p = "payload.instruments." + it.key();
        QuantumInstrument inst;
        const json& jk = array_at(member(it.value(), p, "kraus"), p + ".kraus");
        for (std::size_t a = 0; a < jk.size(); ++a) {
            std::string pa = p + ".kraus[" + std::to_string(a) + "]";
            const json& ops = array_at(jk[a], pa);
            std::vector<Cmat> list;
            for (std::size_t o = 0; o < ops.size(); ++o) {
                Cmat k = cmatrix_at(ops[o], pa + "[" + std::to_string(o) + "]");
                if (k.rows() != r.dimension || k.cols() != r.dimension)
                    fail(pa + "[" + std::to_string(o) + "]", "must be dimension x dimension");
                list.push_back(std::move(k));
            }
            inst.kraus.push_back(std::move(list));
        }
        r.instruments[it.key()] = std::move(inst);
    }
    return r;
}

json cmatrix_json(const Cmat& m) {
    json jm = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k)
            row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
        jm.push_back(row);
    }
    return jm;
}

json quantum_json(const QuantumRealization& r) {
    json insts = json::object();
    for (const auto& [label, inst] : r.instruments) {
        json outcomes = json::array();
        for (const auto& ops : inst.kraus) {
            json jo = json::array();
            for (const Cmat& k : ops) jo.push_back(cmatrix_json(k));
            outcomes.push_back(jo);
        }
        insts[label] = {{"kraus", outcomes}};
    }
    return {{"dimension", r.dimension}, {"instruments", insts}, {"state", cmatrix_json(r.state)}};
}

}  // namespace

Document parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        fail("$", ex.what());
    }
    std::string kind = string_at(member(j, "$", "kind"), "$.kind");
    int version = int_at(member(j, "$", "version"), "$.version");
    if (version != kFormatVersion) fail("$.version", "unsupported version");
    const json& payload = member(j, "$", "payload");

    try {
        if (kind == "scenario") return parse_scenario(payload);
        if (kind == "measurement_scenario") return parse_measurement_scenario(payload);
        if (kind == "behaviour") return parse_behaviour(payload);
        if (kind == "hvm") return parse_hvm(payload);
        if (kind == "quantum_realization") return parse_quantum(payload);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& ex) {
        fail("payload", ex.what());
    }
    fail("$.kind", "unknown kind '" + kind + "'");
}

std::string serialize(const Document& doc) {
    json envelope;
    envelope["version"] = kFormatVersion;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, SequentialScenario>) {
                envelope["kind"] = "scenario";
                envelope["payload"] = scenario_json(d);
            } else if constexpr (std::is_same_v<T, MeasurementScenario>) {
                envelope["kind"] = "measurement_scenario";
                envelope["payload"] = measurement_scenario_json(d);
            } else if constexpr (std::is_same_v<T, BehaviourTables>) {
                envelope["kind"] = "behaviour";
                envelope["payload"] = behaviour_json(d);
            } else if constexpr (std::is_same_v<T, HiddenVariableModel>) {
                envelope["kind"] = "hvm";
                envelope["payload"] = hvm_json(d);
            } else {
                envelope["kind"] = "quantum_realization";
                envelope["payload"] = quantum_json(d);
            }
        },
        doc);
    return envelope.dump(2) + "\n";
}

EmpiricalBehaviour attach_tables(const SequentialScenario& s, const BehaviourTables& t) {
    if (static_cast<int>(t.tables.size()) != s.sequence_count())
        throw ParseError("payload.tables", "expected one table per sequence");
    EmpiricalBehaviour e{s, {}};
    for (int k = 0; k < s.sequence_count(); ++k) {
        if (static_cast<std::int64_t>(t.tables[k].size()) != s.table_size(k))
            throw ParseError("payload.tables[" + std::to_string(k) + "]",
                             "table length does not match the sequence outcome space");
        e.tables.push_back(Eigen::Map<const Eigen::VectorXd>(
            t.tables[k].data(), static_cast<Eigen::Index>(t.tables[k].size())));
    }
    return e;
}

BehaviourTables detach_tables(const EmpiricalBehaviour& e) {
    BehaviourTables t;
    for (const Eigen::VectorXd& table : e.tables)
        t.tables.emplace_back(table.data(), table.data() + table.size());
    return t;
}

Document load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void save_file(const std::string& path, const Document& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize(doc);
}

}  // namespace seqctx::io
