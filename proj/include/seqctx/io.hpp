#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "seqctx/empirical.hpp"
#include "seqctx/hvm.hpp"
#include "seqctx/quantum.hpp"
#include "seqctx/scenario.hpp"

namespace seqctx::io {

/// Raised on malformed documents; `path` locates the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Behaviour documents carry tables only; the scenario arrives separately.
struct BehaviourTables {
    std::vector<std::vector<double>> tables;
};

/// The payload of a parsed document. All documents share a
/// {"kind": ..., "version": 1, "payload": ...} envelope.
using Document = std::variant<SequentialScenario, MeasurementScenario, BehaviourTables,
                              HiddenVariableModel, QuantumRealization>;

inline constexpr int kFormatVersion = 1;

Document parse(const std::string& text);

/// Canonical form: two-space indent, sorted keys, shortest round-trip float
/// rendering, trailing newline. serialize(parse(serialize(x))) == serialize(x).
std::string serialize(const Document& doc);

/// Attaches parsed tables to a scenario, checking shapes.
EmpiricalBehaviour attach_tables(const SequentialScenario& s, const BehaviourTables& t);
BehaviourTables detach_tables(const EmpiricalBehaviour& e);

Document load_file(const std::string& path);
void save_file(const std::string& path, const Document& doc);

}  // namespace seqctx::io
