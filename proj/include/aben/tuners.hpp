#pragma once

#include <cstdint>
#include <vector>

#include "aben/abe.hpp"
#include "aben/config_space.hpp"
#include "aben/data.hpp"
#include "aben/eval.hpp"

namespace aben {

struct DeParams {
    std::size_t np = 20;    // population size
    std::size_t gen = 2;    // generations; the initial population counts as one
    double f = 0.8;         // differential weight
    double cr = 0.7;        // crossover probability

    void validate() const;
};

enum class GoalKind { MinimizeMedianMre, MaximizeSa };

struct Goal {
    GoalKind kind = GoalKind::MinimizeMedianMre;
    // True when `a` is strictly preferred to `b`.
    bool better(double a, double b) const {
        return kind == GoalKind::MinimizeMedianMre ? a < b : a > b;
    }
};

struct Candidate {
    DecisionVector vector;
    Configuration config;
    double score = 0.0;
    bool evaluated = false;
};

struct SearchOutcome {
    Candidate best;
    std::vector<Candidate> history;  // every scored candidate, in order
};

// Builds an estimator on train, scores every tune row, returns the goal
// statistic (median MRE, or SA over the tune predictions).
double evaluate_config(const Configuration& config,
                       const ProjectTable& train,
                       const ProjectTable& tune,
                       const Goal& goal,
                       std::uint64_t rng_seed);

// One DE mutation step: per slot, with probability cr, continuous slots get
// a + f*(b - c) clamped into range and categorical slots a coin flip between
// b and c; otherwise the slot keeps a. One slot is always mutated.
DecisionVector de_mutate(const DecisionVector& a,
                         const DecisionVector& b,
                         const DecisionVector& c,
                         const DeParams& params,
                         std::uint64_t rng_seed);

SearchOutcome de_optimize(const FeatureModel& model,
                          const ProjectTable& train,
                          const ProjectTable& tune,
                          const Goal& goal,
                          const DeParams& params,
                          std::uint64_t rng_seed);

SearchOutcome random_search(const FeatureModel& model,
                            const ProjectTable& train,
                            const ProjectTable& tune,
                            const Goal& goal,
                            std::size_t n,
                            std::uint64_t rng_seed);

std::string history_csv(const std::vector<Candidate>& history);

}  // namespace aben
