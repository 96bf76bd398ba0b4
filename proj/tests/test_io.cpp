#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "seqctx/io.hpp"
#include "seqctx/quantum.hpp"

using namespace seqctx;

#ifndef GOLDEN_DIR
#define GOLDEN_DIR "golden"
#endif

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

SequentialScenario random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SequentialScenario s;
    int nl = 2 + static_cast<int>(rng() % 3);
    for (int l = 0; l < nl; ++l) {
        s.labels.push_back("M" + std::to_string(l));
        OutcomeAlphabet a;
        int no = 2 + static_cast<int>(rng() % 2);
        for (int o = 0; o < no; ++o) a.names.push_back("o" + std::to_string(o));
        s.outcomes.push_back(a);
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

HiddenVariableModel random_model(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto stochastic = [&](int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
            m.row(i) /= m.row(i).sum();
        }
        return m;
    };
    HiddenVariableModel h;
    h.lambda_count = 2 + static_cast<int>(rng() % 3);
    h.mu = stochastic(1, h.lambda_count).row(0).transpose();
    int nl = 1 + static_cast<int>(rng() % 3);
    for (int l = 0; l < nl; ++l) {
        HvmInstrument inst;
        inst.response = stochastic(h.lambda_count, 2);
        for (int a = 0; a < 2; ++a) inst.transfer.push_back(stochastic(h.lambda_count, h.lambda_count));
        h.instruments["M" + std::to_string(l)] = inst;
    }
    return h;
}

}  // namespace

TEST_CASE("golden files round-trip byte for byte") {
    for (const char* name : {"kcbs_scenario.json", "extended_kcbs_scenario.json",
                             "pm_scenario.json", "kcbs_behaviour.json", "pm_behaviour.json",
                             "kcbs_realization.json", "pm_realization.json",
                             "kcbs_uniform_hvm.json"}) {
        std::filesystem::path p = std::filesystem::path(GOLDEN_DIR) / name;
        std::string text = slurp(p);
        io::Document doc = io::parse(text);
        CHECK(io::serialize(doc) == text);
    }
}

TEST_CASE("serialization is canonical") {
    std::string text = slurp(std::filesystem::path(GOLDEN_DIR) / "kcbs_scenario.json");
    io::Document doc = io::parse(text);
    std::string once = io::serialize(doc);
    std::string twice = io::serialize(io::parse(once));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
}

TEST_CASE("behaviour documents attach to their scenario") {
    std::string text = slurp(std::filesystem::path(GOLDEN_DIR) / "kcbs_behaviour.json");
    auto tables = std::get<io::BehaviourTables>(io::parse(text));
    EmpiricalBehaviour e = attach_tables(kcbs_scenario(), tables);
    CHECK(validate_behaviour(e, 1e-9).empty());
    // Detach and re-serialize reproduces the file.
    CHECK(io::serialize(io::detach_tables(e)) == text);
}

TEST_CASE("attach rejects mismatched shapes") {
    io::BehaviourTables t;
    t.tables = {{0.5, 0.5}};
    CHECK_THROWS_AS(attach_tables(kcbs_scenario(), t), io::ParseError);
}

TEST_CASE("parse errors carry a field path") {
    auto path_of = [](const std::string& text) {
        try {
            io::parse(text);
        } catch (const io::ParseError& err) {
            return err.path();
        }
        return std::string("(no error)");
    };
    CHECK(path_of("not json at all") == "$");
    CHECK(path_of("{}") == "$.kind");
    CHECK(path_of(R"({"kind": "scenario", "version": 1})") == "$.payload");
    CHECK(path_of(R"({"kind": "scenario", "version": 2, "payload": {}})") == "$.version");
    CHECK(path_of(R"({"kind": "mystery", "version": 1, "payload": {}})") == "$.kind");
    CHECK(path_of(R"({"kind": "scenario", "version": 1, "payload": {"labels": []}})") ==
          "payload.sequences");
    CHECK(path_of(
              R"({"kind": "scenario", "version": 1,
                  "payload": {"labels": [{"name": "A", "outcomes": ["0", "1"]}],
                              "sequences": [["B"]]}})") == "payload.sequences[0][0]");
    CHECK(path_of(
              R"({"kind": "behaviour", "version": 1,
                  "payload": {"tables": [[0.5, "x"]]}})") == "payload.tables[0][1]");
}

TEST_CASE("scenario round-trip preserves structure") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SequentialScenario s = random_scenario(seed);
        std::string text = io::serialize(s);
        auto back = std::get<SequentialScenario>(io::parse(text));
        CHECK(back.labels == s.labels);
        CHECK(back.sequences == s.sequences);
        for (int l = 0; l < s.label_count(); ++l)
            CHECK(back.outcomes[l].names == s.outcomes[l].names);
        CHECK(io::serialize(back) == text);
    }
}

TEST_CASE("model round-trip preserves every matrix") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        HiddenVariableModel h = random_model(seed);
        std::string text = io::serialize(h);
        auto back = std::get<HiddenVariableModel>(io::parse(text));
        CHECK(back.lambda_count == h.lambda_count);
        CHECK(back.mu == h.mu);
        REQUIRE(back.instruments.size() == h.instruments.size());
        for (const auto& [label, inst] : h.instruments) {
            const HvmInstrument& b = back.instruments.at(label);
            CHECK(b.response == inst.response);
            REQUIRE(b.transfer.size() == inst.transfer.size());
            for (std::size_t a = 0; a < inst.transfer.size(); ++a)
                CHECK(b.transfer[a] == inst.transfer[a]);
        }
    }
}

TEST_CASE("quantum round-trip preserves complex entries exactly") {
    QuantumRealization r = kcbs_realization();
    std::string text = io::serialize(r);
    auto back = std::get<QuantumRealization>(io::parse(text));
    CHECK(back.dimension == r.dimension);
    CHECK(back.state == r.state);
    for (const auto& [label, inst] : r.instruments) {
        const QuantumInstrument& b = back.instrument(label);
        REQUIRE(b.outcome_count() == inst.outcome_count());
        for (int a = 0; a < inst.outcome_count(); ++a) {
            REQUIRE(b.kraus[a].size() == inst.kraus[a].size());
            for (std::size_t k = 0; k < inst.kraus[a].size(); ++k)
                CHECK(b.kraus[a][k] == inst.kraus[a][k]);
        }
    }
}

TEST_CASE("save and load through the filesystem") {
    std::filesystem::path tmp = std::filesystem::temp_directory_path() / "seqctx_io_test.json";
    io::save_file(tmp.string(), kcbs_scenario());
    io::Document doc = io::load_file(tmp.string());
    CHECK(std::get<SequentialScenario>(doc).labels == kcbs_scenario().labels);
    std::filesystem::remove(tmp);
    CHECK_THROWS_AS(io::load_file(tmp.string()), io::ParseError);
}

TEST_CASE("mangled documents never crash the parser") {
    std::string base = slurp(std::filesystem::path(GOLDEN_DIR) / "kcbs_behaviour.json");
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        std::string text = base;
        int edits = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < edits; ++k) {
            std::size_t pos = rng() % text.size();
            switch (rng() % 3) {
                case 0: text[pos] = static_cast<char>(rng() % 256); break;
                case 1: text.erase(pos, 1); break;
                default: text.insert(pos, 1, static_cast<char>(rng() % 128)); break;
            }
        }
        try {
            io::parse(text);
        } catch (const io::ParseError&) {
            // Every failure mode must surface as ParseError.
        }
    }
}
