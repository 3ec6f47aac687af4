#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aben/common.hpp"
#include "aben/data.hpp"

namespace aben {

enum class SubsetPolicy { RemoveNothing, OutlierPrune };
enum class WeightingScheme { Uniform, Genetic, GainRank, Relief, Pca, Cfs, Cns, Wrapper };
enum class SimilarityMeasure {
    Euclidean,
    WeightedEuclidean,
    MaxMeasure,
    TriangularLocal,
    Minkowski,
    FeatureRankMean
};
enum class AdaptationStrategy { Median, Mean, SecondLearner, WeightedMean };

constexpr double kMinkowskiDefaultP = 3.0;
constexpr double kMinkowskiMinP = 1.0;
constexpr double kMinkowskiMaxP = 5.0;

// One point in the estimator option space. k == 0 means dynamic analogy
// selection; otherwise k in 1..5.
struct Configuration {
    SubsetPolicy subset = SubsetPolicy::RemoveNothing;
    WeightingScheme weighting = WeightingScheme::Uniform;
    DiscretizePolicy discretization = DiscretizePolicy::None;
    SimilarityMeasure similarity = SimilarityMeasure::WeightedEuclidean;
    double minkowski_p = kMinkowskiDefaultP;
    AdaptationStrategy adaptation = AdaptationStrategy::Median;
    std::size_t k = 1;  // 0 = dynamic
    bool dynamic_k() const { return k == 0; }

    bool operator==(const Configuration&) const = default;

    std::string to_string() const;
};

// The fixed non-searched baseline configuration: all rows, uniform weights,
// weighted Euclidean with unit weights, k=1, median adaptation.
Configuration abe0_configuration();

bool scheme_needs_classes(WeightingScheme scheme);

// Tree-structured option model: alternative (xor) groups of leaves under
// mandatory or optional axes, plus requires/excludes constraints.
struct FeatureModel {
    struct Axis {
        std::string name;
        bool mandatory = true;
        std::vector<std::string> leaves;  // exactly one selected per axis
    };
    enum class ConstraintKind { Requires, Excludes };
    struct Constraint {
        ConstraintKind kind;
        std::string a;
        std::string b;
    };

    std::string root;
    std::vector<Axis> axes;
    std::vector<Constraint> constraints;

    std::size_t axis_index(const std::string& name) const;
    // Axis owning a leaf; throws DanglingConstraint for unknown leaves.
    std::size_t owning_axis(const std::string& leaf) const;
    bool selection_satisfies(const std::vector<std::size_t>& choice) const;
};

FeatureModel default_feature_model();

// Minimal indented source grammar:
//   feature <name> [mandatory|optional]
//     one-of:
//       <leaf>
//       ...
//   requires <a> <b>
//   excludes <a> <b>
FeatureModel parse_feature_model(const std::string& text);
std::string serialize_feature_model(const FeatureModel& model);

// Raw cross-product when respect_constraints is false; otherwise the number
// of distinct valid canonical selections found by exhaustive enumeration.
std::uint64_t enumerate_size(const FeatureModel& model, bool respect_constraints);

// Rejection-samples leaf choices per axis until the constraint set holds.
Configuration sample_valid(const FeatureModel& model, std::uint64_t rng_seed);
Configuration sample_valid(const FeatureModel& model, Rng& rng);

bool is_valid(const Configuration& config);
Configuration canonicalize(Configuration config);

// Maps a leaf-choice vector of the default model onto a Configuration.
Configuration configuration_from_choice(const FeatureModel& model,
                                        const std::vector<std::size_t>& choice);

// Tuner genome: six categorical slots plus one continuous slot for the
// Minkowski exponent.
struct DecisionVector {
    std::size_t subset = 0;
    std::size_t weighting = 0;
    std::size_t discretization = 0;
    std::size_t similarity = 0;
    double minkowski_p = kMinkowskiDefaultP;
    std::size_t adaptation = 0;
    std::size_t analogies = 0;  // 0..4 = k 1..5, 5 = dynamic

    static constexpr std::size_t kSlotCount = 7;
    static constexpr std::array<std::size_t, kSlotCount> kCardinalities = {2, 8, 3, 6, 0, 4, 6};
    static constexpr std::size_t kContinuousSlot = 4;
};

// Axis labels and the option a configuration selects on each, in the fixed
// axis order (subset, weighting, discretization, similarity, adaptation,
// analogies). Used by selection-frequency reporting.
std::vector<std::string> configuration_axis_names();
std::vector<std::string> configuration_axis_values(const Configuration& config);

DecisionVector encode(const Configuration& config);
// Clamps the continuous slot into range, then canonicalizes. Out-of-range
// categorical indices raise InvalidSlotIndex.
Configuration decode(const DecisionVector& vec);

}  // namespace aben
