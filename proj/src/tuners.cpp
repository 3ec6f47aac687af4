#include "aben/tuners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace aben {

namespace {

constexpr std::size_t kRepairRetries = 100;
constexpr std::size_t kSaGuessRuns = 1000;

double get_slot(const DecisionVector& v, std::size_t i) {
    switch (i) {
        case 0: return static_cast<double>(v.subset);
        case 1: return static_cast<double>(v.weighting);
        case 2: return static_cast<double>(v.discretization);
        case 3: return static_cast<double>(v.similarity);
        case 4: return v.minkowski_p;
        case 5: return static_cast<double>(v.adaptation);
        case 6: return static_cast<double>(v.analogies);
    }
    throw InvalidSlotIndex("slot index out of range");
}

void set_slot(DecisionVector& v, std::size_t i, double value) {
    const auto idx = static_cast<std::size_t>(value);
    switch (i) {
        case 0: v.subset = idx; return;
        case 1: v.weighting = idx; return;
        case 2: v.discretization = idx; return;
        case 3: v.similarity = idx; return;
        case 4: v.minkowski_p = value; return;
        case 5: v.adaptation = idx; return;
        case 6: v.analogies = idx; return;
    }
    throw InvalidSlotIndex("slot index out of range");
}

Candidate make_scored(const Configuration& config,
                      const ProjectTable& train,
                      const ProjectTable& tune,
                      const Goal& goal,
                      std::uint64_t seed) {
    Candidate c;
    c.config = config;
    c.vector = encode(config);
    c.score = evaluate_config(config, train, tune, goal, seed);
    c.evaluated = true;
    return c;
}

// After decode() the only reachable invalidity is a symbolic weighting
// scheme paired with no discretization; resample that slot until valid.
Configuration repair(DecisionVector vec, Rng& rng, bool& ok) {
    for (std::size_t attempt = 0; attempt < kRepairRetries; ++attempt) {
        Configuration config = decode(vec);
        if (is_valid(config)) {
            ok = true;
            return config;
        }
        vec.discretization = static_cast<std::size_t>(
            rng.below(DecisionVector::kCardinalities[2]));
    }
    ok = false;
    return {};
}

}  // namespace

void DeParams::validate() const {
    if (np < 4) throw AbenError("DeParams: np must be >= 4");
    if (gen < 1) throw AbenError("DeParams: gen must be >= 1");
    if (!(cr > 0.0 && cr <= 1.0)) throw AbenError("DeParams: cr must be in (0,1]");
    if (!(f > 0.0)) throw AbenError("DeParams: f must be > 0");
}

double evaluate_config(const Configuration& config,
                       const ProjectTable& train,
                       const ProjectTable& tune,
                       const Goal& goal,
                       std::uint64_t rng_seed) {
    const AbeEstimator est = build_estimator(config, train, derive_seed(rng_seed, "build"));
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(tune.row_count());
    for (std::size_t r = 0; r < tune.row_count(); ++r) {
        pairs.emplace_back(tune.effort[r], predict(est, tune.rows[r]));
    }
    if (goal.kind == GoalKind::MinimizeMedianMre) {
        std::vector<double> mres;
        mres.reserve(pairs.size());
        for (const auto& [actual, predicted] : pairs) mres.push_back(mre(actual, predicted));
        return median(std::move(mres));
    }
    return sa(pairs, kSaGuessRuns, derive_seed(rng_seed, "sa"));
}

DecisionVector de_mutate(const DecisionVector& a,
                         const DecisionVector& b,
                         const DecisionVector& c,
                         const DeParams& params,
                         std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    DecisionVector m = a;
    const std::size_t forced =
        static_cast<std::size_t>(rng.below(DecisionVector::kSlotCount));
    for (std::size_t slot = 0; slot < DecisionVector::kSlotCount; ++slot) {
        const bool mutate = slot == forced || rng.next_double() < params.cr;
        if (!mutate) continue;
        if (slot == DecisionVector::kContinuousSlot) {
            const double value = get_slot(a, slot) + params.f * (get_slot(b, slot) -
                                                                 get_slot(c, slot));
            set_slot(m, slot, std::clamp(value, kMinkowskiMinP, kMinkowskiMaxP));
        } else {
            set_slot(m, slot, rng.below(2) == 0 ? get_slot(b, slot) : get_slot(c, slot));
        }
    }
    return m;
}

SearchOutcome de_optimize(const FeatureModel& model,
                          const ProjectTable& train,
                          const ProjectTable& tune,
                          const Goal& goal,
                          const DeParams& params,
                          std::uint64_t rng_seed) {
    params.validate();
    SearchOutcome out;
    out.history.reserve(params.np * params.gen);

    std::vector<Candidate> pop;
    pop.reserve(params.np);
    for (std::size_t i = 0; i < params.np; ++i) {
        const Configuration config =
            sample_valid(model, derive_seed(rng_seed, derive_seed(0, i)));
        pop.push_back(make_scored(config, train, tune, goal,
                                  derive_seed(rng_seed, 1000 + i)));
        out.history.push_back(pop.back());
    }

    // The initial population counts as generation 1, so the total budget is
    // exactly np * gen scored candidates.
    for (std::size_t gen = 1; gen < params.gen; ++gen) {
        for (std::size_t i = 0; i < params.np; ++i) {
            const std::uint64_t unit = gen * params.np + i;
            Rng rng(derive_seed(rng_seed, 2000 + unit));
            std::size_t ia;
            std::size_t ib;
            std::size_t ic;
            do {
                ia = static_cast<std::size_t>(rng.below(params.np));
            } while (ia == i);
            do {
                ib = static_cast<std::size_t>(rng.below(params.np));
            } while (ib == i || ib == ia);
            do {
                ic = static_cast<std::size_t>(rng.below(params.np));
            } while (ic == i || ic == ia || ic == ib);

            const DecisionVector mutant_vec =
                de_mutate(pop[ia].vector, pop[ib].vector, pop[ic].vector, params,
                          derive_seed(rng_seed, 3000 + unit));
            bool ok = false;
            const Configuration mutant_config = repair(mutant_vec, rng, ok);

            if (!ok) {
                // Unrepairable mutant: the parent keeps its slot and its
                // existing score fills this budget entry.
                out.history.push_back(pop[i]);
                continue;
            }
            Candidate mutant = make_scored(mutant_config, train, tune, goal,
                                           derive_seed(rng_seed, 4000 + unit));
            out.history.push_back(mutant);
            if (goal.better(mutant.score, pop[i].score)) pop[i] = std::move(mutant);
        }
    }

    out.best = out.history.front();
    for (const auto& candidate : out.history) {
        if (goal.better(candidate.score, out.best.score)) out.best = candidate;
    }
    return out;
}

SearchOutcome random_search(const FeatureModel& model,
                            const ProjectTable& train,
                            const ProjectTable& tune,
                            const Goal& goal,
                            std::size_t n,
                            std::uint64_t rng_seed) {
    if (n < 1) throw AbenError("random_search: n must be >= 1");
    SearchOutcome out;
    out.history.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Configuration config =
            sample_valid(model, derive_seed(rng_seed, derive_seed(1, i)));
        out.history.push_back(make_scored(config, train, tune, goal,
                                          derive_seed(rng_seed, 5000 + i)));
        if (i == 0 || goal.better(out.history.back().score, out.best.score)) {
            out.best = out.history.back();
        }
    }
    return out;
}

std::string history_csv(const std::vector<Candidate>& history) {
    std::string out = "iteration,configuration,score\n";
    char buf[64];
    for (std::size_t i = 0; i < history.size(); ++i) {
        std::snprintf(buf, sizeof(buf), ",%.6f\n", history[i].score);
        out += std::to_string(i) + ',' + history[i].config.to_string() + buf;
    }
    return out;
}

}  // namespace aben
