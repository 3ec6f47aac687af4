#include "aben/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "aben/abe.hpp"
#include "aben/baselines.hpp"
#include "nlohmann/json.hpp"

namespace aben {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr std::size_t kSaGuessRuns = 1000;

json config_to_json(const Configuration& c) {
    return json{{"subset", static_cast<int>(c.subset)},
                {"weighting", static_cast<int>(c.weighting)},
                {"discretization", static_cast<int>(c.discretization)},
                {"similarity", static_cast<int>(c.similarity)},
                {"minkowski_p", c.minkowski_p},
                {"adaptation", static_cast<int>(c.adaptation)},
                {"k", c.k}};
}

Configuration config_from_json(const json& j) {
    Configuration c;
    c.subset = static_cast<SubsetPolicy>(j.at("subset").get<int>());
    c.weighting = static_cast<WeightingScheme>(j.at("weighting").get<int>());
    c.discretization = static_cast<DiscretizePolicy>(j.at("discretization").get<int>());
    c.similarity = static_cast<SimilarityMeasure>(j.at("similarity").get<int>());
    c.minkowski_p = j.at("minkowski_p").get<double>();
    c.adaptation = static_cast<AdaptationStrategy>(j.at("adaptation").get<int>());
    c.k = j.at("k").get<std::size_t>();
    return c;
}

json fold_record_to_json(const FoldRecord& rec) {
    json pairs = json::array();
    for (const auto& [actual, predicted] : rec.result.pairs) {
        pairs.push_back({actual, predicted});
    }
    json j{{"dataset", rec.dataset},
           {"method", method_name(rec.method)},
           {"repeat", rec.repeat},
           {"fold", rec.fold},
           {"pairs", pairs},
           {"sa", rec.result.sa_value},
           {"seconds", rec.seconds}};
    if (rec.winner) j["winner"] = config_to_json(*rec.winner);
    return j;
}

FoldRecord fold_record_from_json(const json& j) {
    FoldRecord rec;
    rec.dataset = j.at("dataset").get<std::string>();
    rec.method = method_from_string(j.at("method").get<std::string>());
    rec.repeat = j.at("repeat").get<std::size_t>();
    rec.fold = j.at("fold").get<std::size_t>();
    rec.result.method = method_name(rec.method);
    rec.result.dataset = rec.dataset;
    rec.result.repeat = rec.repeat;
    rec.result.fold = rec.fold;
    for (const auto& pair : j.at("pairs")) {
        const double actual = pair.at(0).get<double>();
        const double predicted = pair.at(1).get<double>();
        rec.result.pairs.emplace_back(actual, predicted);
        rec.result.mre_values.push_back(mre(actual, predicted));
    }
    rec.result.sa_value = j.at("sa").get<double>();
    rec.seconds = j.at("seconds").get<double>();
    if (j.contains("winner")) rec.winner = config_from_json(j.at("winner"));
    return rec;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
}

struct WorkUnit {
    std::size_t dataset_index;
    Method method;
    std::size_t repeat;
    std::size_t fold;
};

std::uint64_t unit_seed(const ExperimentSpec& spec,
                        const std::string& dataset,
                        Method method,
                        std::size_t repeat,
                        std::size_t fold) {
    std::uint64_t s = derive_seed(spec.seed, dataset);
    s = derive_seed(s, method_name(method));
    s = derive_seed(s, repeat);
    return derive_seed(s, fold);
}

FoldRecord run_fold(const ProjectTable& table,
                    const FoldPlan& plan,
                    const ExperimentSpec& spec,
                    const FeatureModel& model,
                    Method method,
                    std::size_t repeat,
                    std::size_t fold) {
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t seed = unit_seed(spec, table.name, method, repeat, fold);

    std::vector<std::size_t> train_idx;
    for (std::size_t f = 0; f < plan.fold_count; ++f) {
        if (f == fold) continue;
        train_idx.insert(train_idx.end(), plan.assignments[repeat][f].begin(),
                         plan.assignments[repeat][f].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const ProjectTable train_part = select_rows(table, train_idx);
    const ProjectTable test_part = select_rows(table, plan.assignments[repeat][fold]);

    FoldRecord rec;
    rec.dataset = table.name;
    rec.method = method;
    rec.repeat = repeat;
    rec.fold = fold;

    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(test_part.row_count());

    if (method == Method::Atlm) {
        const AtlmModel atlm = atlm_fit(train_part);
        for (std::size_t r = 0; r < test_part.row_count(); ++r) {
            pairs.emplace_back(test_part.effort[r], atlm_predict(atlm, test_part.rows[r]));
        }
    } else {
        AbeEstimator est;
        if (method == Method::Abe0) {
            est = abe0(train_part);
        } else {
            const auto [train, tune] =
                split_train_tune(train_part, derive_seed(seed, "tune-split"));
            SearchOutcome outcome;
            const std::uint64_t search_seed = derive_seed(seed, "search");
            switch (method) {
                case Method::De2:
                    outcome = de_optimize(model, train, tune, spec.goal,
                                          DeParams{20, 2, 0.8, 0.7}, search_seed);
                    break;
                case Method::De8:
                    outcome = de_optimize(model, train, tune, spec.goal,
                                          DeParams{20, 8, 0.8, 0.7}, search_seed);
                    break;
                case Method::Rd40:
                    outcome = random_search(model, train, tune, spec.goal, 40, search_seed);
                    break;
                case Method::Rd160:
                    outcome = random_search(model, train, tune, spec.goal, 160, search_seed);
                    break;
                default:
                    break;
            }
            rec.winner = outcome.best.config;
            // The winning configuration is retrained on the full training
            // partition before scoring the held-out fold.
            est = build_estimator(outcome.best.config, train_part,
                                  derive_seed(seed, "final-build"));
        }
        for (std::size_t r = 0; r < test_part.row_count(); ++r) {
            pairs.emplace_back(test_part.effort[r], predict(est, test_part.rows[r]));
        }
    }

    rec.result.method = method_name(method);
    rec.result.dataset = table.name;
    rec.result.repeat = repeat;
    rec.result.fold = fold;
    rec.result.pairs = pairs;
    for (const auto& [actual, predicted] : pairs) {
        rec.result.mre_values.push_back(mre(actual, predicted));
    }
    rec.result.sa_value = sa(pairs, kSaGuessRuns, derive_seed(seed, "sa"));

    const auto finished = std::chrono::steady_clock::now();
    rec.seconds = std::chrono::duration<double>(finished - started).count();
    return rec;
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::Abe0: return "ABE0";
        case Method::Atlm: return "ATLM";
        case Method::De2: return "DE2";
        case Method::De8: return "DE8";
        case Method::Rd40: return "RD40";
        case Method::Rd160: return "RD160";
    }
    throw AbenError("unknown method");
}

Method method_from_string(const std::string& name) {
    if (name == "ABE0") return Method::Abe0;
    if (name == "ATLM") return Method::Atlm;
    if (name == "DE2") return Method::De2;
    if (name == "DE8") return Method::De8;
    if (name == "RD40") return Method::Rd40;
    if (name == "RD160") return Method::Rd160;
    throw AbenError("unknown method: " + name);
}

bool method_is_search(Method method) {
    return method == Method::De2 || method == Method::De8 || method == Method::Rd40 ||
           method == Method::Rd160;
}

void ExperimentSpec::validate() const {
    if (dataset_paths.empty()) throw AbenError("experiment needs at least one dataset");
    if (methods.empty()) throw AbenError("experiment needs at least one method");
    if (repeats < 1) throw AbenError("experiment needs repeats >= 1");
}

std::uint64_t ExperimentSpec::hash() const {
    std::uint64_t h = derive_seed(seed, repeats);
    h = derive_seed(h, goal.kind == GoalKind::MinimizeMedianMre ? "mre" : "sa");
    for (const auto& path : dataset_paths) h = derive_seed(h, path);
    for (const auto method : methods) h = derive_seed(h, method_name(method));
    return h;
}

RunRecord run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const FeatureModel model = default_feature_model();

    RunRecord record;
    record.spec_hash = spec.hash();
    record.repeats = spec.repeats;
    record.seed = spec.seed;
    record.goal = spec.goal.kind;

    std::vector<ProjectTable> tables;
    std::vector<FoldPlan> plans;
    for (const auto& path : spec.dataset_paths) {
        try {
            ProjectTable table = load_csv(path);
            FoldPlan plan =
                make_folds(table, spec.repeats, derive_seed(spec.seed, table.name));
            tables.push_back(std::move(table));
            plans.push_back(std::move(plan));
        } catch (const AbenError& e) {
            record.dataset_errors.push_back(path + ": " + e.what());
        }
    }

    std::vector<WorkUnit> units;
    for (std::size_t d = 0; d < tables.size(); ++d) {
        for (const auto method : spec.methods) {
            for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
                for (std::size_t fold = 0; fold < plans[d].fold_count; ++fold) {
                    units.push_back({d, method, rep, fold});
                }
            }
        }
    }
    std::vector<FoldRecord> results(units.size());

    std::ofstream flush_stream;
    std::mutex flush_mutex;
    if (!spec.output_dir.empty()) {
        fs::create_directories(spec.output_dir);
        flush_stream.open(fs::path(spec.output_dir) / "record.jsonl",
                          std::ios::binary | std::ios::trunc);
    }

    const std::size_t workers = std::max<std::size_t>(1, spec.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= units.size()) return;
            const WorkUnit& unit = units[idx];
            results[idx] = run_fold(tables[unit.dataset_index], plans[unit.dataset_index],
                                    spec, model, unit.method, unit.repeat, unit.fold);
            if (flush_stream.is_open()) {
                const std::string line = fold_record_to_json(results[idx]).dump();
                const std::lock_guard<std::mutex> lock(flush_mutex);
                flush_stream << line << '\n';
                flush_stream.flush();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    record.records = std::move(results);
    if (!spec.output_dir.empty()) {
        write_file(fs::path(spec.output_dir) / "record.json", run_record_json(record));
    }
    return record;
}

std::string run_record_json(const RunRecord& record) {
    json j;
    j["spec_hash"] = record.spec_hash;
    j["repeats"] = record.repeats;
    j["seed"] = record.seed;
    j["goal"] = record.goal == GoalKind::MinimizeMedianMre ? "mre" : "sa";
    j["dataset_errors"] = record.dataset_errors;
    json recs = json::array();
    for (const auto& rec : record.records) recs.push_back(fold_record_to_json(rec));
    j["records"] = std::move(recs);
    return j.dump();
}

RunRecord load_run_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    json j;
    in >> j;
    RunRecord record;
    record.spec_hash = j.at("spec_hash").get<std::uint64_t>();
    record.repeats = j.at("repeats").get<std::size_t>();
    record.seed = j.at("seed").get<std::uint64_t>();
    record.goal = j.at("goal").get<std::string>() == "sa" ? GoalKind::MaximizeSa
                                                          : GoalKind::MinimizeMedianMre;
    record.dataset_errors = j.at("dataset_errors").get<std::vector<std::string>>();
    for (const auto& rec : j.at("records")) {
        record.records.push_back(fold_record_from_json(rec));
    }
    return record;
}

namespace {

// Per-method metric samples for one dataset: the fold's median MRE (or its
// SA value) is the sample unit entering rank_methods.
std::map<std::string, std::vector<double>> metric_samples(
    const std::vector<const FoldRecord*>& records, Metric metric) {
    std::map<std::string, std::vector<double>> samples;
    for (const auto* rec : records) {
        const double value = metric == Metric::Mre ? 100.0 * median(rec->result.mre_values)
                                                   : rec->result.sa_value;
        samples[method_name(rec->method)].push_back(value);
    }
    return samples;
}

// Runtime samples per method: total seconds per repeat.
std::map<std::string, std::vector<double>> runtime_samples(
    const std::vector<const FoldRecord*>& records) {
    std::map<std::string, std::map<std::size_t, double>> per_repeat;
    for (const auto* rec : records) {
        per_repeat[method_name(rec->method)][rec->repeat] += rec->seconds;
    }
    std::map<std::string, std::vector<double>> samples;
    for (const auto& [method, repeats] : per_repeat) {
        for (const auto& [repeat, seconds] : repeats) samples[method].push_back(seconds);
    }
    return samples;
}

// Annotates the fastest top-ranked methods with "1*". Runtime ties are
// judged by the same bootstrap test as the metric ranks.
std::set<std::string> starred_methods(const RankReport& report,
                                      const std::map<std::string, std::vector<double>>& runtimes) {
    std::vector<std::string> top;
    for (const auto& entry : report.entries) {
        if (entry.rank == 1) top.push_back(entry.method);
    }
    if (top.size() <= 1) return {top.begin(), top.end()};

    std::string fastest = top.front();
    double fastest_mean = 0.0;
    bool first = true;
    for (const auto& method : top) {
        const auto& sample = runtimes.at(method);
        const double mean =
            std::accumulate(sample.begin(), sample.end(), 0.0) / sample.size();
        if (first || mean < fastest_mean) {
            fastest = method;
            fastest_mean = mean;
            first = false;
        }
    }
    std::set<std::string> starred{fastest};
    for (const auto& method : top) {
        if (method == fastest) continue;
        const auto& a = runtimes.at(fastest);
        const auto& b = runtimes.at(method);
        if (a.size() >= 3 && b.size() >= 3 && !bootstrap_different(a, b)) {
            starred.insert(method);
        }
    }
    return starred;
}

std::string ranks_markdown(const RankReport& report,
                           const std::string& title,
                           const std::set<std::string>& starred) {
    std::string out = "### " + title + "\n\n";
    out += "| Rank | Method | Median | IQR |\n";
    out += "|-----:|:-------|-------:|----:|\n";
    char buf[160];
    for (const auto& entry : report.entries) {
        const bool star = entry.rank == 1 && starred.count(entry.method) > 0;
        std::snprintf(buf, sizeof(buf), "| %zu%s | %s | %.2f | %.2f |\n", entry.rank,
                      star ? "*" : "", entry.method.c_str(), entry.median, entry.iqr);
        out += buf;
    }
    return out;
}

}  // namespace

void emit_reports(const RunRecord& record, const std::string& out_dir) {
    if (record.records.empty()) throw EmptyInput("emit_reports: empty record");
    fs::create_directories(out_dir);

    std::map<std::string, std::vector<const FoldRecord*>> by_dataset;
    for (const auto& rec : record.records) by_dataset[rec.dataset].push_back(&rec);

    for (const auto& [dataset, records] : by_dataset) {
        const fs::path dir = fs::path(out_dir) / dataset;
        fs::create_directories(dir);

        const auto runtimes = runtime_samples(records);
        std::string ranks_csv = "metric,rank,method,median,iqr\n";
        for (const Metric metric : {Metric::Mre, Metric::Sa}) {
            const auto samples = metric_samples(records, metric);
            const std::string metric_name = metric == Metric::Mre ? "mre" : "sa";

            RankReport report;
            if (samples.size() >= 2) {
                report = rank_methods(samples, metric);
            } else {
                // Singleton method set: a one-row rank-1 table.
                const auto& [method, sample] = *samples.begin();
                report.metric = metric;
                report.entries.push_back({method, 1, median(sample),
                                          quantile(sample, 0.75) - quantile(sample, 0.25)});
            }
            const auto starred = starred_methods(report, runtimes);
            write_file(dir / (metric_name + "_ranks.md"),
                       ranks_markdown(report, dataset + " % " +
                                      (metric == Metric::Mre ? std::string("MRE")
                                                             : std::string("SA")),
                                      starred));
            char buf[160];
            for (const auto& entry : report.entries) {
                std::snprintf(buf, sizeof(buf), "%s,%zu,%s,%.6f,%.6f\n", metric_name.c_str(),
                              entry.rank, entry.method.c_str(), entry.median, entry.iqr);
                ranks_csv += buf;
            }
        }
        write_file(dir / "ranks.csv", ranks_csv);

        std::string frequency_csv = "method,axis,option,percent\n";
        std::map<std::string, std::vector<Configuration>> winners;
        for (const auto* rec : records) {
            if (rec->winner) winners[method_name(rec->method)].push_back(*rec->winner);
        }
        for (const auto& [method, configs] : winners) {
            const FrequencyTable table = selection_frequency(configs);
            for (const auto& [axis, options] : table.axes) {
                for (const auto& [option, percent] : options) {
                    frequency_csv += method + ',' + axis + ',' + option + ',' +
                                     std::to_string(percent) + '\n';
                }
            }
        }
        write_file(dir / "frequency.csv", frequency_csv);

        std::string runtime_csv = "method,mean_minutes\n";
        char buf[96];
        for (const auto& [method, sample] : runtimes) {
            const double mean_minutes =
                std::accumulate(sample.begin(), sample.end(), 0.0) / sample.size() / 60.0;
            std::snprintf(buf, sizeof(buf), "%s,%.4f\n", method.c_str(), mean_minutes);
            runtime_csv += buf;
        }
        write_file(dir / "runtime.csv", runtime_csv);

        json metadata{{"spec_hash", record.spec_hash},
                      {"seed", record.seed},
                      {"repeats", record.repeats},
                      {"generated_unix_time",
                       std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count()}};
        write_file(dir / "metadata.json", metadata.dump(2));
    }
}

}  // namespace aben
