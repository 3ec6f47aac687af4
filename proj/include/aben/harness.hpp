#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aben/config_space.hpp"
#include "aben/data.hpp"
#include "aben/eval.hpp"
#include "aben/tuners.hpp"

namespace aben {

enum class Method { Abe0, Atlm, De2, De8, Rd40, Rd160 };

std::string method_name(Method method);
Method method_from_string(const std::string& name);
bool method_is_search(Method method);

struct ExperimentSpec {
    std::vector<std::string> dataset_paths;
    std::vector<Method> methods;
    std::size_t repeats = 20;
    std::uint64_t seed = 1;
    Goal goal;
    std::string output_dir;
    std::size_t jobs = 1;

    void validate() const;
    std::uint64_t hash() const;
};

struct FoldRecord {
    std::string dataset;
    Method method = Method::Abe0;
    std::size_t repeat = 0;
    std::size_t fold = 0;
    EvalResult result;
    double seconds = 0.0;
    std::optional<Configuration> winner;  // search methods only
};

struct RunRecord {
    std::uint64_t spec_hash = 0;
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    GoalKind goal = GoalKind::MinimizeMedianMre;
    std::vector<FoldRecord> records;
    // Datasets that failed to load, with the reason; their work is skipped.
    std::vector<std::string> dataset_errors;
};

// Runs the full repeated cross-validation protocol. Deterministic given the
// spec seed, regardless of the jobs setting. Completed folds are appended to
// <output_dir>/record.jsonl as they finish; the full record is written to
// <output_dir>/record.json at the end.
RunRecord run_experiment(const ExperimentSpec& spec);

std::string run_record_json(const RunRecord& record);
RunRecord load_run_record(const std::string& path);

// Writes per-dataset rank tables (markdown + CSV), selection-frequency CSV
// for the search methods, a runtime table, and a metadata sidecar.
void emit_reports(const RunRecord& record, const std::string& out_dir);

}  // namespace aben
