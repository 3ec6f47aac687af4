#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aben/common.hpp"

namespace aben {

// A dataset of past projects: numeric feature columns plus one positive
// effort column. Immutable after construction; validate() enforces the
// shape invariants.
struct ProjectTable {
    std::string name;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<double> effort;

    std::size_t row_count() const { return rows.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
    void validate() const;
};

// Per-column min/max captured at normalization time so later queries can be
// mapped into the same [0,1] frame.
struct NormalizationSpec {
    std::vector<double> mins;
    std::vector<double> maxs;
};

enum class DiscretizePolicy { None, EqualFrequency, EqualWidth };

struct DiscretizedColumn {
    std::size_t source_column = 0;
    DiscretizePolicy policy = DiscretizePolicy::None;
    std::size_t bin_count = 10;
    std::vector<std::size_t> bin_labels;  // empty when policy == None
};

struct FoldPlan {
    std::size_t dataset_size = 0;
    std::size_t fold_count = 0;  // 3 when dataset_size < 40, else 10
    std::size_t repeats = 0;
    std::uint64_t seed = 0;
    // assignments[repeat][fold] -> row indices
    std::vector<std::vector<std::vector<std::size_t>>> assignments;
};

// CSV ingestion. Header row required; the effort column is the one named
// "effort" (case-insensitive), else the last column.
ProjectTable load_csv(const std::string& path);
ProjectTable parse_csv(const std::string& text, const std::string& name);
std::string write_csv(const ProjectTable& table);

std::pair<ProjectTable, NormalizationSpec> normalize(const ProjectTable& table);

// Maps one raw value into [0,1] under the spec, clamping out-of-range
// queries. Constant columns (min == max) map to 0.
double normalize_value(const NormalizationSpec& spec, std::size_t column, double value);

DiscretizedColumn discretize(const std::vector<double>& column,
                             DiscretizePolicy policy,
                             std::size_t bins);

// Ten equal-width bins over the effort column; consumed by the symbolic
// feature-weighting schemes. Error measures always use raw efforts.
DiscretizedColumn effort_to_classes(const ProjectTable& table);

FoldPlan make_folds(const ProjectTable& table, std::size_t repeats, std::uint64_t seed);

std::string fold_plan_csv(const FoldPlan& plan);

// Splits a training partition into train and tune (1/3 tune, uniformly
// without replacement).
std::pair<ProjectTable, ProjectTable> split_train_tune(const ProjectTable& train_rows,
                                                       std::uint64_t seed);

ProjectTable select_rows(const ProjectTable& table, const std::vector<std::size_t>& indices);

}  // namespace aben
