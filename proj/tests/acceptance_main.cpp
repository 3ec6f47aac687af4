// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The heavyweight cross-validation protocol (criterion 8) is run
// once and reused for the determinism check (criterion 11).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "aben/baselines.hpp"
#include "aben/harness.hpp"

using namespace aben;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = ABEN_DATA_DIR;
const char* const kDatasetNames[] = {"kemerer",  "albrecht",   "isbsg10",
                                     "finnish",  "miyazaki",   "maxwell",
                                     "desharnais", "kitchenham", "china"};

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::vector<ProjectTable> load_all_datasets() {
    std::vector<ProjectTable> tables;
    for (const char* name : kDatasetNames) {
        tables.push_back(load_csv(kDataDir + "/" + name + ".csv"));
    }
    return tables;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- criterion 1: configuration-space cardinality ---------------------------

void criterion_1() {
    const auto model = default_feature_model();
    const auto raw = enumerate_size(model, false);
    report(1, raw == 6912,
           "raw option-space cross-product == 6912 (got " + std::to_string(raw) + ")");
}

// --- criterion 2: search budget exactness ------------------------------------

void criterion_2() {
    const auto model = default_feature_model();
    const auto kemerer = load_csv(kDataDir + "/kemerer.csv");
    const auto [train, tune] = split_train_tune(kemerer, 7);
    Goal goal{GoalKind::MinimizeMedianMre};

    const auto de2 = de_optimize(model, train, tune, goal, DeParams{20, 2, 0.8, 0.7}, 1);
    const auto de8 = de_optimize(model, train, tune, goal, DeParams{20, 8, 0.8, 0.7}, 1);
    const auto rd40 = random_search(model, train, tune, goal, 40, 1);
    const auto rd160 = random_search(model, train, tune, goal, 160, 1);

    const bool pass = de2.history.size() == 40 && de8.history.size() == 160 &&
                      rd40.history.size() == 40 && rd160.history.size() == 160;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "budgets DE2=%zu DE8=%zu RD40=%zu RD160=%zu",
                  de2.history.size(), de8.history.size(), rd40.history.size(),
                  rd160.history.size());
    report(2, pass, buf);
}

// --- criterion 3: metric unit suite ------------------------------------------

void criterion_3() {
    bool pass = true;
    std::string why = "mre/mae/sa/a12 spot values";

    try {
        pass = pass && mre(100, 80) == 0.20 && mre(42, 42) == 0.0 && mre(50, 125) == 1.5;
        pass = pass && mae({{10, 10}, {20, 20}}) == 0.0 && mae({{10, 20}}) == 10.0 &&
               mae({{10, 12}, {20, 16}}) == 3.0;
        pass = pass && sa({{10, 10}, {20, 20}, {30, 30}}, 1000, 1) == 100.0;
        const std::vector<double> s{3, 1, 2};
        pass = pass && a12(s, s) == 0.5;
        pass = pass && a12({10, 11, 12}, {1, 2, 3}) == 1.0;
        pass = pass && std::abs(a12({1, 2, 3}, {2, 3, 4}) - 2.0 / 9.0) < 1e-12;
    } catch (const std::exception& e) {
        pass = false;
        why += std::string(" (threw: ") + e.what() + ")";
    }
    report(3, pass, why);
}

// --- criterion 4: SA calibration against the mean predictor ------------------

void criterion_4() {
    // The convergence argument equates random guessing with the sample-mean
    // predictor, which holds when E|X - Y| == E|X - mean| over the pool; a
    // symmetric two-valued pool satisfies that identity.
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 50; ++i) {
        pairs.emplace_back(10.0, 50.0);
        pairs.emplace_back(90.0, 50.0);
    }
    const double score = sa(pairs, 1000, 11);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean predictor SA on 100-point pool = %.3f in [-5, 5]",
                  score);
    report(4, score > -5.0 && score < 5.0, buf);
}

// --- criterion 5: baseline equals the engine at its fixed configuration ------

void criterion_5() {
    const auto tables = load_all_datasets();
    bool pass = true;
    std::size_t queries = 0;
    for (const auto& table : tables) {
        const std::size_t n = table.row_count();
        for (std::size_t held = 0; held < n && pass; ++held) {
            std::vector<std::size_t> train_idx;
            for (std::size_t r = 0; r < n; ++r) {
                if (r != held) train_idx.push_back(r);
            }
            const ProjectTable train = select_rows(table, train_idx);
            const AbeEstimator via_baseline = abe0(train);
            const AbeEstimator via_engine = build_estimator(abe0_configuration(), train, 0);
            const double a = predict(via_baseline, table.rows[held]);
            const double b = predict(via_engine, table.rows[held]);
            ++queries;
            if (a != b) pass = false;  // byte-identical doubles required
        }
    }
    report(5, pass,
           "baseline vs engine leave-one-out predictions byte-identical over " +
               std::to_string(queries) + " queries across 9 datasets");
}

// --- criterion 6: leave-in exactness over random k=1 configurations ----------

void criterion_6() {
    const auto tables = load_all_datasets();
    const auto model = default_feature_model();
    Rng rng(606);

    std::size_t checked = 0;
    std::size_t failures = 0;
    std::size_t skipped_conflicts = 0;
    // 100 sampled configurations, each probed with 10 training-row queries:
    // 1000 (dataset, row, configuration) triples in total.
    while (checked + failures < 1000) {
        const auto& table = tables[static_cast<std::size_t>(rng.below(tables.size()))];
        Configuration config = sample_valid(model, rng);
        config.k = 1;
        config = canonicalize(config);

        // Rows surviving subset selection are guaranteed to sit in training.
        const ProjectTable pool =
            config.subset == SubsetPolicy::OutlierPrune ? prune_outliers(table) : table;
        const AbeEstimator est = build_estimator(config, pool, rng.next_u64());
        if (est.train.row_count() != pool.row_count()) {
            continue;  // defensive; subset policy already applied above
        }

        for (int q = 0; q < 10 && checked + failures < 1000; ++q) {
            const std::size_t row =
                static_cast<std::size_t>(rng.below(pool.row_count()));
            // Exactness cannot hold when another training row sits at
            // distance zero with a different effort; those rows are excluded
            // (duplicate-feature fixtures and zero-weight collisions).
            std::vector<double> normalized(pool.feature_count());
            for (std::size_t c = 0; c < pool.feature_count(); ++c) {
                normalized[c] = normalize_value(est.norm, c, pool.rows[row][c]);
            }
            const auto dists = pool_distances(normalized, est.train.rows, est.weights,
                                              est.config.similarity, est.config.minkowski_p);
            bool conflict = false;
            for (std::size_t o = 0; o < dists.size(); ++o) {
                if (dists[o] == 0.0 && est.train.effort[o] != pool.effort[row]) {
                    conflict = true;
                    break;
                }
            }
            if (conflict) {
                ++skipped_conflicts;
                continue;
            }
            if (predict(est, pool.rows[row]) == pool.effort[row]) {
                ++checked;
            } else {
                ++failures;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "leave-in exactness on %zu random k=1 triples (%zu zero-distance "
                  "conflicts excluded, %zu failures)",
                  checked, skipped_conflicts, failures);
    report(6, failures == 0, buf);
}

// --- criterion 7: DE monotonicity over 100 seeded runs -----------------------

void criterion_7() {
    const auto model = default_feature_model();
    const auto albrecht = load_csv(kDataDir + "/albrecht.csv");
    Goal goal{GoalKind::MinimizeMedianMre};

    bool pass = true;
    for (std::uint64_t seed = 1; seed <= 100 && pass; ++seed) {
        const auto [train, tune] = split_train_tune(albrecht, derive_seed(seed, "split"));
        const auto out =
            de_optimize(model, train, tune, goal, DeParams{20, 2, 0.8, 0.7}, seed);
        if (out.history.size() != 40) pass = false;
        double running = std::numeric_limits<double>::infinity();
        for (const auto& cand : out.history) {
            running = std::min(running, cand.score);
        }
        if (out.best.score != running) pass = false;
        // The returned best never trails the initial population's best.
        double initial = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < 20; ++i) initial = std::min(initial, out.history[i].score);
        if (out.best.score > initial) pass = false;
    }
    report(7, pass, "running-best non-worsening across 100 seeded DE2 runs on albrecht");
}

// --- criteria 8 and 11: full protocol, directional result, determinism -------

// Rank position of a method on one dataset's per-fold median-MRE samples,
// mirroring the report pipeline.
std::map<std::string, std::size_t> mre_ranks(const std::vector<const FoldRecord*>& records) {
    std::map<std::string, std::vector<double>> samples;
    for (const auto* rec : records) {
        samples[method_name(rec->method)].push_back(100.0 * median(rec->result.mre_values));
    }
    const auto report = rank_methods(samples, Metric::Mre);
    std::map<std::string, std::size_t> ranks;
    for (const auto& entry : report.entries) ranks[entry.method] = entry.rank;
    return ranks;
}

void criteria_8_and_11() {
    ExperimentSpec spec;
    for (const char* name : kDatasetNames) {
        spec.dataset_paths.push_back(kDataDir + "/" + name + ".csv");
    }
    spec.methods = {Method::Abe0, Method::Atlm, Method::De2};
    spec.repeats = 20;
    spec.seed = 1;
    spec.goal = Goal{GoalKind::MinimizeMedianMre};

    const fs::path out_a = fs::temp_directory_path() / "aben_acceptance_a";
    const fs::path out_b = fs::temp_directory_path() / "aben_acceptance_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);

    spec.output_dir = out_a.string();
    spec.jobs = 4;
    const RunRecord run_a = run_experiment(spec);
    emit_reports(run_a, out_a.string());

    spec.output_dir = out_b.string();
    spec.jobs = 1;
    const RunRecord run_b = run_experiment(spec);
    emit_reports(run_b, out_b.string());

    // Criterion 8: DE2 ranked no worse than each baseline on >= 6/9 datasets.
    std::map<std::string, std::vector<const FoldRecord*>> by_dataset;
    for (const auto& rec : run_a.records) by_dataset[rec.dataset].push_back(&rec);

    std::size_t datasets = 0;
    std::size_t beats_abe0 = 0;
    std::size_t beats_atlm = 0;
    for (const auto& [dataset, records] : by_dataset) {
        const auto ranks = mre_ranks(records);
        ++datasets;
        if (ranks.at("DE2") <= ranks.at("ABE0")) ++beats_abe0;
        if (ranks.at("DE2") <= ranks.at("ATLM")) ++beats_atlm;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "DE2 median-MRE rank <= ABE0 on %zu/%zu and <= ATLM on %zu/%zu datasets "
                  "(need >= 6/9 each)",
                  beats_abe0, datasets, beats_atlm, datasets);
    report(8, datasets == 9 && beats_abe0 >= 6 && beats_atlm >= 6, buf);

    // Criterion 11: metric CSVs byte-identical across differing --jobs runs.
    // The markdown rank tables are excluded: their star marks the fastest
    // rank-1 method, which depends on measured wall-clock time, not on the
    // metric values.
    bool identical = true;
    std::string mismatch;
    for (const char* name : kDatasetNames) {
        for (const char* file : {"ranks.csv", "frequency.csv"}) {
            const auto a = slurp(out_a / name / file);
            const auto b = slurp(out_b / name / file);
            if (a != b) {
                identical = false;
                mismatch = std::string(name) + "/" + file;
            }
        }
    }
    report(11, identical,
           identical ? "metric reports byte-identical for --jobs 4 vs --jobs 1"
                     : "metric reports differ at " + mismatch);
}

// --- criterion 9: statistical-test calibration -------------------------------

void criterion_9() {
    std::size_t fires = 0;
    Rng rng(909);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 20; ++i) {
            // Same distribution for both samples: sum of three uniforms.
            a.push_back(rng.next_double() + rng.next_double() + rng.next_double());
            b.push_back(rng.next_double() + rng.next_double() + rng.next_double());
        }
        if (bootstrap_different(a, b, 0.95, 1000, derive_seed(909, trial))) ++fires;
    }
    const double rate = 100.0 * fires / 200.0;

    bool symmetric = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 15; ++i) {
            a.push_back(rng.next_double());
            b.push_back(rng.next_double());
        }
        if (std::abs(a12(a, b) + a12(b, a) - 1.0) > 1e-12) symmetric = false;
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "bootstrap false-positive rate %.1f%% in [1%%, 9%%]; a12 symmetry %s", rate,
                  symmetric ? "holds" : "broken");
    report(9, rate >= 1.0 && rate <= 9.0 && symmetric, buf);
}

// --- criterion 10: ATLM recovery ----------------------------------------------

void criterion_10() {
    ProjectTable t;
    t.name = "linear";
    t.feature_names = {"x"};
    for (int x = 1; x <= 7; ++x) {
        t.rows.push_back({static_cast<double>(x)});
        t.effort.push_back(2.0 + 3.0 * x);
    }
    const auto model = atlm_fit(t);
    const bool coefficients_ok = std::abs(model.intercept - 2.0) < 1e-9 &&
                                 std::abs(model.coefficients[0] - 3.0) < 1e-9;
    const bool log_selected =
        choose_transform({1, 10, 100, 1000}) == ColumnTransform::Log;
    report(10, coefficients_ok && log_selected,
           "exact linear recovery within 1e-9 and Log transform on the geometric column");
}

}  // namespace

int main() {
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criteria_8_and_11();
        criterion_9();
        criterion_10();
    } catch (const std::exception& e) {
        std::printf("FAIL suite aborted: %s\n", e.what());
        return 1;
    }
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
