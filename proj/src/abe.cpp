#include "aben/abe.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nlohmann/json.hpp"

namespace aben {

namespace {

constexpr double kWeightedMeanEpsilon = 1e-8;
constexpr double kPredictionFloor = 1e-6;
constexpr double kFloorWeight = 0.1;  // non-selected features in subset schemes

WeightVector uniform_weights(std::size_t n) {
    return WeightVector{std::vector<double>(n, 1.0)};
}

bool all_near_zero(const std::vector<double>& w) {
    for (double v : w) {
        if (v > 1e-12) return false;
    }
    return true;
}

double entropy(const std::map<std::size_t, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<std::vector<std::size_t>> discretize_features(const ProjectTable& table,
                                                          DiscretizePolicy policy) {
    const std::size_t f = table.feature_count();
    std::vector<std::vector<std::size_t>> labels(f);
    std::vector<double> column(table.row_count());
    for (std::size_t c = 0; c < f; ++c) {
        for (std::size_t r = 0; r < table.row_count(); ++r) column[r] = table.rows[r][c];
        labels[c] = discretize(column, policy, 10).bin_labels;
    }
    return labels;
}

std::vector<double> gain_rank_weights(const ProjectTable& table,
                                      DiscretizePolicy policy,
                                      const DiscretizedColumn& classes) {
    const std::size_t n = table.row_count();
    const auto features = discretize_features(table, policy);

    std::map<std::size_t, std::size_t> class_counts;
    for (std::size_t label : classes.bin_labels) ++class_counts[label];
    const double h_class = entropy(class_counts, n);

    std::vector<double> weights(table.feature_count(), 0.0);
    for (std::size_t c = 0; c < table.feature_count(); ++c) {
        std::map<std::size_t, std::map<std::size_t, std::size_t>> by_value;
        std::map<std::size_t, std::size_t> value_counts;
        for (std::size_t r = 0; r < n; ++r) {
            ++by_value[features[c][r]][classes.bin_labels[r]];
            ++value_counts[features[c][r]];
        }
        double conditional = 0.0;
        for (const auto& [value, counts] : by_value) {
            const std::size_t total = value_counts[value];
            conditional +=
                (static_cast<double>(total) / static_cast<double>(n)) * entropy(counts, total);
        }
        weights[c] = std::max(0.0, h_class - conditional);
    }
    return weights;
}

std::vector<double> relief_weights(const ProjectTable& table,
                                   const DiscretizedColumn& classes,
                                   std::uint64_t seed) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.feature_count();
    std::vector<double> weights(f, 0.0);
    Rng rng(seed);
    const std::size_t samples = n;  // m = table size
    const WeightVector unit = uniform_weights(f);

    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t r = static_cast<std::size_t>(rng.below(n));
        std::size_t hit = n;
        std::size_t miss = n;
        double hit_d = 0.0;
        double miss_d = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == r) continue;
            const double d = distance(table.rows[r], table.rows[o], unit,
                                      SimilarityMeasure::Euclidean);
            if (classes.bin_labels[o] == classes.bin_labels[r]) {
                if (hit == n || d < hit_d) {
                    hit = o;
                    hit_d = d;
                }
            } else if (miss == n || d < miss_d) {
                miss = o;
                miss_d = d;
            }
        }
        for (std::size_t c = 0; c < f; ++c) {
            const double x = table.rows[r][c];
            if (miss < n) weights[c] += std::abs(x - table.rows[miss][c]) / samples;
            if (hit < n) weights[c] -= std::abs(x - table.rows[hit][c]) / samples;
        }
    }
    for (double& w : weights) w = std::max(0.0, w);
    return weights;
}

std::vector<double> pca_weights(const ProjectTable& table) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.feature_count();
    Eigen::MatrixXd x(n, f);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < f; ++c) x(r, c) = table.rows[r][c];
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    const Eigen::MatrixXd cov = (x.transpose() * x) / std::max<double>(1.0, n - 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::VectorXd values = solver.eigenvalues().cwiseMax(0.0);
    const double total = values.sum();
    std::vector<double> weights(f, 0.0);
    if (total <= 0.0) return weights;
    for (std::size_t c = 0; c < f; ++c) {
        double w = 0.0;
        for (std::size_t comp = 0; comp < f; ++comp) {
            w += std::abs(solver.eigenvectors()(c, comp)) * (values(comp) / total);
        }
        weights[c] = w;
    }
    return weights;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double num = 0.0;
    double va = 0.0;
    double vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return num / std::sqrt(va * vb);
}

std::vector<double> cfs_weights(const ProjectTable& table, const DiscretizedColumn& classes) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.feature_count();
    std::vector<double> class_values(n);
    for (std::size_t r = 0; r < n; ++r) {
        class_values[r] = static_cast<double>(classes.bin_labels[r]);
    }
    std::vector<std::vector<double>> columns(f, std::vector<double>(n));
    for (std::size_t c = 0; c < f; ++c) {
        for (std::size_t r = 0; r < n; ++r) columns[c][r] = table.rows[r][c];
    }
    std::vector<double> weights(f, 0.0);
    for (std::size_t c = 0; c < f; ++c) {
        const double fc = std::abs(pearson(columns[c], class_values));
        double ff = 0.0;
        for (std::size_t o = 0; o < f; ++o) {
            if (o != c) ff += std::abs(pearson(columns[c], columns[o]));
        }
        const double mean_ff = f > 1 ? ff / static_cast<double>(f - 1) : 0.0;
        weights[c] = fc / std::max(mean_ff, kFloorWeight);
    }
    return weights;
}

double subset_consistency(const std::vector<std::vector<std::size_t>>& features,
                          const DiscretizedColumn& classes,
                          const std::vector<std::size_t>& subset,
                          std::size_t n) {
    std::map<std::vector<std::size_t>, std::map<std::size_t, std::size_t>> groups;
    std::vector<std::size_t> key(subset.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < subset.size(); ++i) key[i] = features[subset[i]][r];
        ++groups[key][classes.bin_labels[r]];
    }
    std::size_t inconsistent = 0;
    for (const auto& [group_key, counts] : groups) {
        std::size_t total = 0;
        std::size_t top = 0;
        for (const auto& [label, count] : counts) {
            total += count;
            top = std::max(top, count);
        }
        inconsistent += total - top;
    }
    return 1.0 - static_cast<double>(inconsistent) / static_cast<double>(n);
}

std::vector<double> cns_weights(const ProjectTable& table,
                                DiscretizePolicy policy,
                                const DiscretizedColumn& classes) {
    const std::size_t n = table.row_count();
    const std::size_t f = table.feature_count();
    const auto features = discretize_features(table, policy);

    std::vector<std::size_t> chosen;
    std::vector<bool> in_subset(f, false);
    double best = subset_consistency(features, classes, chosen, n);
    for (;;) {
        std::size_t pick = f;
        double pick_score = best;
        for (std::size_t c = 0; c < f; ++c) {
            if (in_subset[c]) continue;
            auto trial = chosen;
            trial.push_back(c);
            const double score = subset_consistency(features, classes, trial, n);
            if (score > pick_score) {
                pick = c;
                pick_score = score;
            }
        }
        if (pick == f) break;
        chosen.push_back(pick);
        in_subset[pick] = true;
        best = pick_score;
    }

    std::vector<double> weights(f, kFloorWeight);
    for (std::size_t c : chosen) weights[c] = 1.0;
    return weights;
}

double loo_mre_with_mask(const ProjectTable& table, const std::vector<double>& weights) {
    WeightVector w{weights};
    return loo_mean_mre(table, w);
}

std::vector<double> wrapper_weights(const ProjectTable& table) {
    const std::size_t f = table.feature_count();
    std::vector<double> mask(f, 0.0);
    std::vector<bool> in_subset(f, false);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        std::size_t pick = f;
        double pick_score = best;
        for (std::size_t c = 0; c < f; ++c) {
            if (in_subset[c]) continue;
            mask[c] = 1.0;
            const double score = loo_mre_with_mask(table, mask);
            mask[c] = 0.0;
            if (score < pick_score) {
                pick = c;
                pick_score = score;
            }
        }
        if (pick == f) break;
        mask[pick] = 1.0;
        in_subset[pick] = true;
        best = pick_score;
    }
    std::vector<double> weights(f, kFloorWeight);
    for (std::size_t c = 0; c < f; ++c) {
        if (in_subset[c]) weights[c] = 1.0;
    }
    return weights;
}

std::vector<double> genetic_weights(const ProjectTable& table, std::uint64_t seed) {
    constexpr std::size_t kPopulation = 20;
    constexpr std::size_t kGenerations = 10;
    const std::size_t f = table.feature_count();
    Rng rng(seed);

    auto fitness = [&](const std::vector<double>& genes) {
        return loo_mre_with_mask(table, genes);
    };

    std::vector<std::vector<double>> pop(kPopulation, std::vector<double>(f));
    std::vector<double> scores(kPopulation);
    for (auto& genes : pop) {
        for (double& g : genes) g = rng.next_double();
    }
    for (std::size_t i = 0; i < kPopulation; ++i) scores[i] = fitness(pop[i]);

    std::vector<double> best = pop[0];
    double best_score = scores[0];
    for (std::size_t i = 1; i < kPopulation; ++i) {
        if (scores[i] < best_score) {
            best = pop[i];
            best_score = scores[i];
        }
    }

    auto tournament = [&]() -> const std::vector<double>& {
        const std::size_t a = static_cast<std::size_t>(rng.below(kPopulation));
        const std::size_t b = static_cast<std::size_t>(rng.below(kPopulation));
        return scores[a] <= scores[b] ? pop[a] : pop[b];
    };

    for (std::size_t gen = 1; gen < kGenerations; ++gen) {
        std::vector<std::vector<double>> next(kPopulation);
        for (std::size_t i = 0; i < kPopulation; ++i) {
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            std::vector<double> child(f);
            const std::size_t cut = f > 1 ? static_cast<std::size_t>(rng.below(f)) : 0;
            for (std::size_t c = 0; c < f; ++c) child[c] = c < cut ? p1[c] : p2[c];
            for (std::size_t c = 0; c < f; ++c) {
                if (rng.next_double() < 1.0 / static_cast<double>(f)) {
                    child[c] = rng.next_double();
                }
            }
            next[i] = std::move(child);
        }
        pop = std::move(next);
        for (std::size_t i = 0; i < kPopulation; ++i) {
            scores[i] = fitness(pop[i]);
            if (scores[i] < best_score) {
                best = pop[i];
                best_score = scores[i];
            }
        }
    }
    return best;
}

bool classes_degenerate(const DiscretizedColumn& classes) {
    if (classes.bin_labels.empty()) return true;
    const std::size_t first = classes.bin_labels.front();
    return std::all_of(classes.bin_labels.begin(), classes.bin_labels.end(),
                       [&](std::size_t l) { return l == first; });
}

}  // namespace

ProjectTable prune_outliers(const ProjectTable& table) {
    const std::size_t n = table.row_count();
    const double q1 = quantile(table.effort, 0.25);
    const double q3 = quantile(table.effort, 0.75);
    const double threshold = q3 + 1.5 * (q3 - q1);
    const std::size_t cap = n / 5;  // remove at most 20% of rows

    std::vector<std::size_t> flagged;
    for (std::size_t r = 0; r < n; ++r) {
        if (table.effort[r] > threshold) flagged.push_back(r);
    }
    if (flagged.size() > cap) {
        // Keep only the largest-effort offenders up to the cap.
        std::sort(flagged.begin(), flagged.end(), [&](std::size_t a, std::size_t b) {
            if (table.effort[a] != table.effort[b]) return table.effort[a] > table.effort[b];
            return a < b;
        });
        flagged.resize(cap);
    }

    std::vector<bool> drop(n, false);
    for (std::size_t r : flagged) drop[r] = true;
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < n; ++r) {
        if (!drop[r]) keep.push_back(r);
    }
    return select_rows(table, keep);
}

WeightingResult weight_features(const ProjectTable& table,
                                WeightingScheme scheme,
                                DiscretizePolicy policy,
                                const DiscretizedColumn& classes,
                                std::uint64_t rng_seed) {
    const std::size_t f = table.feature_count();
    if (scheme == WeightingScheme::Uniform) {
        return {uniform_weights(f), false};
    }
    if (scheme_needs_classes(scheme) && classes_degenerate(classes)) {
        return {uniform_weights(f), true};
    }

    std::vector<double> weights;
    switch (scheme) {
        case WeightingScheme::GainRank:
            weights = gain_rank_weights(table, policy, classes);
            break;
        case WeightingScheme::Relief:
            weights = relief_weights(table, classes, rng_seed);
            break;
        case WeightingScheme::Pca:
            weights = pca_weights(table);
            break;
        case WeightingScheme::Cfs:
            weights = cfs_weights(table, classes);
            break;
        case WeightingScheme::Cns:
            weights = cns_weights(table, policy, classes);
            break;
        case WeightingScheme::Wrapper:
            weights = wrapper_weights(table);
            break;
        case WeightingScheme::Genetic:
            weights = genetic_weights(table, rng_seed);
            break;
        case WeightingScheme::Uniform:
            break;
    }
    if (all_near_zero(weights)) {
        return {uniform_weights(f), true};
    }
    return {WeightVector{std::move(weights)}, false};
}

double distance(std::span<const double> x,
                std::span<const double> y,
                const WeightVector& w,
                SimilarityMeasure measure,
                double minkowski_p) {
    if (x.size() != y.size()) throw LengthMismatch("distance: vector lengths differ");
    switch (measure) {
        case SimilarityMeasure::Euclidean: {
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                sum += d * d;
            }
            return std::sqrt(sum);
        }
        case SimilarityMeasure::WeightedEuclidean:
        case SimilarityMeasure::TriangularLocal: {
            if (w.weights.size() != x.size()) {
                throw LengthMismatch("distance: weight length differs");
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                sum += w.weights[i] * d * d;
            }
            return std::sqrt(sum);
        }
        case SimilarityMeasure::MaxMeasure: {
            double best = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                best = std::max(best, std::abs(x[i] - y[i]));
            }
            return best;
        }
        case SimilarityMeasure::Minkowski: {
            if (w.weights.size() != x.size()) {
                throw LengthMismatch("distance: weight length differs");
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                sum += w.weights[i] * std::pow(std::abs(x[i] - y[i]), minkowski_p);
            }
            return std::pow(sum, 1.0 / minkowski_p);
        }
        case SimilarityMeasure::FeatureRankMean: {
            const std::vector<std::vector<double>> pool{{y.begin(), y.end()}};
            return pool_distances(x, pool, w, measure, minkowski_p)[0];
        }
    }
    throw AbenError("unknown similarity measure");
}

std::vector<double> pool_distances(std::span<const double> query,
                                   const std::vector<std::vector<double>>& pool,
                                   const WeightVector& w,
                                   SimilarityMeasure measure,
                                   double minkowski_p) {
    const std::size_t n = pool.size();
    std::vector<double> out(n, 0.0);
    if (measure != SimilarityMeasure::FeatureRankMean) {
        for (std::size_t r = 0; r < n; ++r) {
            out[r] = distance(query, pool[r], w, measure, minkowski_p);
        }
        return out;
    }
    // Rank of each row's per-feature gap among all candidates (count of
    // strictly smaller gaps), averaged across features.
    if (n == 0) return out;
    const std::size_t f = query.size();
    std::vector<double> gaps(n);
    std::vector<std::size_t> order(n);
    for (std::size_t c = 0; c < f; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            if (pool[r].size() != f) throw LengthMismatch("pool_distances: row arity differs");
            gaps[r] = std::abs(query[c] - pool[r][c]);
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return gaps[a] < gaps[b]; });
        std::size_t pos = 0;
        while (pos < n) {
            std::size_t end = pos;
            while (end + 1 < n && gaps[order[end + 1]] == gaps[order[pos]]) ++end;
            for (std::size_t i = pos; i <= end; ++i) {
                out[order[i]] += static_cast<double>(pos) / static_cast<double>(f);
            }
            pos = end + 1;
        }
    }
    return out;
}

std::vector<Neighbor> select_analogies(std::span<const double> query,
                                       const AbeEstimator& est) {
    const auto dists = pool_distances(query, est.train.rows, est.weights,
                                      est.config.similarity, est.config.minkowski_p);
    std::vector<std::size_t> order(dists.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t k = std::min(est.chosen_k, dists.size());
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (dists[a] != dists[b]) return dists[a] < dists[b];
                          return a < b;
                      });
    std::vector<Neighbor> neighbors;
    neighbors.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        neighbors.push_back({order[i], dists[order[i]], est.train.effort[order[i]]});
    }
    return neighbors;
}

double adapt(const std::vector<Neighbor>& neighbors,
             AdaptationStrategy strategy,
             const ProjectTable& train_context,
             std::span<const double> query) {
    if (neighbors.empty()) throw EmptyInput("adapt: no neighbors");
    std::vector<double> efforts;
    efforts.reserve(neighbors.size());
    for (const auto& nb : neighbors) efforts.push_back(nb.effort);

    switch (strategy) {
        case AdaptationStrategy::Median:
            return median(efforts);
        case AdaptationStrategy::Mean:
            return std::accumulate(efforts.begin(), efforts.end(), 0.0) / efforts.size();
        case AdaptationStrategy::WeightedMean: {
            double num = 0.0;
            double den = 0.0;
            for (const auto& nb : neighbors) {
                const double w = 1.0 / (nb.distance + kWeightedMeanEpsilon);
                num += w * nb.effort;
                den += w;
            }
            return num / den;
        }
        case AdaptationStrategy::SecondLearner: {
            const std::size_t f = train_context.feature_count();
            if (neighbors.size() < f + 1) {
                return std::accumulate(efforts.begin(), efforts.end(), 0.0) / efforts.size();
            }
            Eigen::MatrixXd x(neighbors.size(), f + 1);
            Eigen::VectorXd y(neighbors.size());
            for (std::size_t i = 0; i < neighbors.size(); ++i) {
                x(i, 0) = 1.0;
                const auto& row = train_context.rows[neighbors[i].row_index];
                for (std::size_t c = 0; c < f; ++c) x(i, c + 1) = row[c];
                y(i) = neighbors[i].effort;
            }
            const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
            if (qr.rank() < static_cast<Eigen::Index>(f + 1)) {
                return std::accumulate(efforts.begin(), efforts.end(), 0.0) / efforts.size();
            }
            const Eigen::VectorXd beta = qr.solve(y);
            double pred = beta(0);
            for (std::size_t c = 0; c < f; ++c) pred += beta(c + 1) * query[c];
            return std::max(pred, kPredictionFloor);
        }
    }
    throw AbenError("unknown adaptation strategy");
}

double loo_mean_mre(const ProjectTable& normalized_train, const WeightVector& weights) {
    const std::size_t n = normalized_train.row_count();
    if (n < 2) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double best_d = std::numeric_limits<double>::infinity();
        std::size_t best = n;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == r) continue;
            const double d = distance(normalized_train.rows[r], normalized_train.rows[o],
                                      weights, SimilarityMeasure::WeightedEuclidean);
            if (d < best_d) {
                best_d = d;
                best = o;
            }
        }
        const double actual = normalized_train.effort[r];
        total += std::abs(actual - normalized_train.effort[best]) / actual;
    }
    return total / static_cast<double>(n);
}

std::size_t resolve_dynamic_k(const ProjectTable& normalized_train,
                              const WeightVector& weights,
                              const Configuration& config,
                              std::size_t cap) {
    const std::size_t n = normalized_train.row_count();
    if (n < 3) return 1;
    const std::size_t k_max = std::min(n - 1, cap);

    // Per-row neighbor orderings computed once; every k reuses them.
    std::vector<std::vector<Neighbor>> sorted(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::vector<double>> others;
        std::vector<std::size_t> index_map;
        others.reserve(n - 1);
        for (std::size_t o = 0; o < n; ++o) {
            if (o == r) continue;
            others.push_back(normalized_train.rows[o]);
            index_map.push_back(o);
        }
        const auto dists = pool_distances(normalized_train.rows[r], others, weights,
                                          config.similarity, config.minkowski_p);
        std::vector<std::size_t> order(others.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dists[a] != dists[b]) return dists[a] < dists[b];
            return index_map[a] < index_map[b];
        });
        sorted[r].reserve(k_max);
        for (std::size_t i = 0; i < std::min(k_max, order.size()); ++i) {
            sorted[r].push_back({index_map[order[i]], dists[order[i]],
                                 normalized_train.effort[index_map[order[i]]]});
        }
    }

    std::size_t best_k = 1;
    double best_mre = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= k_max; ++k) {
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            std::vector<Neighbor> top(sorted[r].begin(),
                                      sorted[r].begin() + std::min(k, sorted[r].size()));
            const double pred = adapt(top, config.adaptation, normalized_train,
                                      normalized_train.rows[r]);
            total += std::abs(normalized_train.effort[r] - pred) / normalized_train.effort[r];
        }
        const double mean_mre = total / static_cast<double>(n);
        if (mean_mre < best_mre) {
            best_mre = mean_mre;
            best_k = k;
        }
    }
    return best_k;
}

AbeEstimator build_estimator(const Configuration& config,
                             const ProjectTable& train,
                             std::uint64_t rng_seed) {
    AbeEstimator est;
    est.config = canonicalize(config);

    ProjectTable subset =
        est.config.subset == SubsetPolicy::OutlierPrune ? prune_outliers(train) : train;

    auto [normalized, spec] = normalize(subset);
    est.norm = std::move(spec);

    DiscretizedColumn classes;
    if (scheme_needs_classes(est.config.weighting)) {
        classes = effort_to_classes(normalized);
    }
    auto weighting = weight_features(normalized, est.config.weighting,
                                     est.config.discretization, classes,
                                     derive_seed(rng_seed, "weighting"));
    est.weights = std::move(weighting.weights);
    est.weighting_fell_back_uniform = weighting.fell_back_uniform;

    if (est.config.dynamic_k()) {
        est.chosen_k =
            resolve_dynamic_k(normalized, est.weights, est.config, est.dynamic_k_cap);
    } else {
        est.chosen_k = std::min(est.config.k, normalized.row_count());
    }
    est.train = std::move(normalized);
    return est;
}

double predict(const AbeEstimator& est, std::span<const double> query) {
    if (query.size() != est.train.feature_count()) {
        throw LengthMismatch("predict: query arity mismatch");
    }
    std::vector<double> normalized(query.size());
    for (std::size_t c = 0; c < query.size(); ++c) {
        normalized[c] = normalize_value(est.norm, c, query[c]);
    }
    const auto neighbors = select_analogies(normalized, est);
    const double value = adapt(neighbors, est.config.adaptation, est.train, normalized);
    return std::max(value, kPredictionFloor);
}

std::string estimator_to_json(const AbeEstimator& est) {
    nlohmann::json j;
    j["configuration"] = est.config.to_string();
    j["weights"] = est.weights.weights;
    j["normalization"] = {{"mins", est.norm.mins}, {"maxs", est.norm.maxs}};
    j["chosen_k"] = est.chosen_k;
    j["dynamic_k_cap"] = est.dynamic_k_cap;
    j["weighting_fell_back_uniform"] = est.weighting_fell_back_uniform;
    j["training_rows"] = est.train.row_count();
    return j.dump(2);
}

}  // namespace aben
