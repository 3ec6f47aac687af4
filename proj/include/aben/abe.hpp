#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aben/common.hpp"
#include "aben/config_space.hpp"
#include "aben/data.hpp"

namespace aben {

struct WeightVector {
    std::vector<double> weights;
};

struct WeightingResult {
    WeightVector weights;
    // Set when a scheme could not produce usable weights (degenerate effort
    // classes, or all-zero scores) and uniform weights were substituted.
    bool fell_back_uniform = false;
};

struct Neighbor {
    std::size_t row_index = 0;
    double distance = 0.0;
    double effort = 0.0;
};

// Immutable prediction engine for one configuration on one training set.
// predict() is pure and safe to call from many threads.
struct AbeEstimator {
    Configuration config;
    ProjectTable train;  // post subset-selection, features normalized to [0,1]
    WeightVector weights;
    NormalizationSpec norm;
    std::size_t chosen_k = 1;
    std::size_t dynamic_k_cap = 16;
    bool weighting_fell_back_uniform = false;
};

// Drops rows whose effort exceeds Q3 + 1.5*IQR, removing at most 20% of the
// table (largest efforts first when the rule over-fires).
ProjectTable prune_outliers(const ProjectTable& table);

// table must be feature-normalized. classes is required by the symbolic
// schemes and ignored by Uniform/PCA; policy is the discretizer applied to
// feature columns where a scheme needs symbolic features.
WeightingResult weight_features(const ProjectTable& table,
                                WeightingScheme scheme,
                                DiscretizePolicy policy,
                                const DiscretizedColumn& classes,
                                std::uint64_t rng_seed);

// Pairwise distance. x and y must be normalized to [0,1] and equal length.
// FeatureRankMean is rank-based against a candidate pool; the pairwise form
// degenerates to a single-candidate pool (use pool_distances for real use).
double distance(std::span<const double> x,
                std::span<const double> y,
                const WeightVector& w,
                SimilarityMeasure measure,
                double minkowski_p = kMinkowskiDefaultP);

// Distance from a query to every row of the pool under the given measure.
std::vector<double> pool_distances(std::span<const double> query,
                                   const std::vector<std::vector<double>>& pool,
                                   const WeightVector& w,
                                   SimilarityMeasure measure,
                                   double minkowski_p = kMinkowskiDefaultP);

// The chosen_k nearest training rows, ascending distance, ties broken by
// lower row index. query must already be normalized.
std::vector<Neighbor> select_analogies(std::span<const double> query,
                                       const AbeEstimator& est);

// Leave-one-out search for the best neighbor count in 1..min(N-1, cap).
std::size_t resolve_dynamic_k(const ProjectTable& normalized_train,
                              const WeightVector& weights,
                              const Configuration& config,
                              std::size_t cap = 16);

// Combines neighbor efforts into one estimate. The second-learner strategy
// fits least squares on the neighbors and predicts the (normalized) query,
// falling back to the mean when the system is underdetermined.
double adapt(const std::vector<Neighbor>& neighbors,
             AdaptationStrategy strategy,
             const ProjectTable& train_context,
             std::span<const double> query);

AbeEstimator build_estimator(const Configuration& config,
                             const ProjectTable& train,
                             std::uint64_t rng_seed);

// query is raw (unnormalized); it is mapped with the estimator's stored
// normalization, clamping outside [0,1]. Result is always positive.
double predict(const AbeEstimator& est, std::span<const double> query);

std::string estimator_to_json(const AbeEstimator& est);

// Mean leave-one-out MRE of a k=1 median estimator with the given weights.
// Shared by the wrapper and genetic weighting schemes.
double loo_mean_mre(const ProjectTable& normalized_train, const WeightVector& weights);

}  // namespace aben
