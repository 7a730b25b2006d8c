#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "histq/asymptotics.hpp"
#include "histq/consistency.hpp"
#include "histq/representations.hpp"

namespace histq {

/// One task record from a scenario file.
struct TaskRecord {
    std::string kind;
    nlohmann::json params;  ///< kind-specific parameters (includes the seed)
};

/// A fully validated scenario: the system under study plus its named
/// histories and partitions and the task list.
struct Scenario {
    HistorySpec spec;
    QuantumState state;
    Propagator prop;
    std::map<std::string, HomogeneousHistory> histories;
    std::map<std::string, BooleanPartition> partitions;
    std::vector<TaskRecord> tasks;
};

/// Builds a Scenario from parsed JSON; throws ParseError on malformed
/// structure and ValidationError (naming the object) on invariant failures.
Scenario parse_scenario(const nlohmann::json& j);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

/// Executes every task in order, writing one JSON report per task (and CSV
/// for sweep tasks) into out_dir.  Returns the exit status: 0 when all
/// tasks succeed and all verification tasks pass, 2 on verification
/// failure, 1 on input error.
int run_scenario(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                 bool parallel = false);

/// Dimension list parser: "2..8" (inclusive range) or "2,3,5".
std::vector<int> parse_dims(const std::string& text);

/// Named state families for sweeps: "pure", "maximally_mixed",
/// "geometric:<r>".
StateFamily make_state_family(const std::string& name);

/// CSV emitters, 12 significant digits, locale independent.
std::string sweep_csv(const SweepResult& result);
std::string divergence_csv(const DivergenceResult& result);

/// Formats one number with 12 significant digits.
std::string format_sig(double v);

/// Writes content to path atomically (temp file + rename).
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// JSON encoding helpers shared by reports and the scenario format.
nlohmann::json complex_to_json(const Complex& z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);

}  // namespace histq
