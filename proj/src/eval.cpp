#include "aben/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace aben {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double mre(double actual, double predicted) {
    if (!(actual > 0.0)) throw NonPositiveActual("mre: actual must be positive");
    return std::abs(actual - predicted) / actual;
}

double mae(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.empty()) throw EmptyInput("mae: empty input");
    double total = 0.0;
    for (const auto& [actual, predicted] : pairs) total += std::abs(actual - predicted);
    return total / static_cast<double>(pairs.size());
}

double sa(const std::vector<std::pair<double, double>>& pairs,
          std::size_t guess_runs,
          std::uint64_t rng_seed) {
    if (pairs.empty()) throw EmptyInput("sa: empty input");
    if (guess_runs < 1) throw AbenError("sa: guess_runs must be >= 1");
    const double model_mae = mae(pairs);
    if (model_mae == 0.0) return 100.0;

    const std::size_t n = pairs.size();
    Rng rng(rng_seed);
    double guess_total = 0.0;
    for (std::size_t run = 0; run < guess_runs; ++run) {
        double run_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // Guess each actual with a uniformly drawn other actual.
            std::size_t j = i;
            if (n > 1) {
                j = static_cast<std::size_t>(rng.below(n - 1));
                if (j >= i) ++j;
            }
            run_total += std::abs(pairs[i].first - pairs[j].first);
        }
        guess_total += run_total / static_cast<double>(n);
    }
    const double guess_mae = guess_total / static_cast<double>(guess_runs);
    return (1.0 - model_mae / guess_mae) * 100.0;
}

bool bootstrap_different(const std::vector<double>& a,
                         const std::vector<double>& b,
                         double confidence,
                         std::size_t resamples,
                         std::uint64_t rng_seed) {
    if (a.size() < 3 || b.size() < 3) throw SampleTooSmall("bootstrap: samples need >= 3 values");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw AbenError("bootstrap: confidence must be in (0,1)");
    }
    const double mean_a = mean_of(a);
    const double mean_b = mean_of(b);
    const double observed = std::abs(mean_a - mean_b);
    if (observed == 0.0) return false;

    // Shift both samples onto the pooled mean so the null hypothesis holds,
    // then count resampled differences at least as large as the observed one.
    const double pooled =
        (std::accumulate(a.begin(), a.end(), 0.0) + std::accumulate(b.begin(), b.end(), 0.0)) /
        static_cast<double>(a.size() + b.size());
    std::vector<double> null_a(a);
    std::vector<double> null_b(b);
    for (double& v : null_a) v += pooled - mean_a;
    for (double& v : null_b) v += pooled - mean_b;

    Rng rng(rng_seed);
    std::size_t extreme = 0;
    for (std::size_t rep = 0; rep < resamples; ++rep) {
        double sum_a = 0.0;
        for (std::size_t i = 0; i < null_a.size(); ++i) {
            sum_a += null_a[static_cast<std::size_t>(rng.below(null_a.size()))];
        }
        double sum_b = 0.0;
        for (std::size_t i = 0; i < null_b.size(); ++i) {
            sum_b += null_b[static_cast<std::size_t>(rng.below(null_b.size()))];
        }
        const double diff = std::abs(sum_a / static_cast<double>(null_a.size()) -
                                     sum_b / static_cast<double>(null_b.size()));
        if (diff >= observed) ++extreme;
    }
    const double p = static_cast<double>(extreme) / static_cast<double>(resamples);
    return p < 1.0 - confidence;
}

double a12(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw EmptyInput("a12: empty sample");
    double wins = 0.0;
    for (double x : a) {
        for (double y : b) {
            if (x > y) {
                wins += 1.0;
            } else if (x == y) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

RankReport rank_methods(const std::map<std::string, std::vector<double>>& results,
                        Metric metric) {
    if (results.size() < 2) throw AbenError("rank_methods: need at least two methods");
    for (const auto& [method, sample] : results) {
        if (sample.size() < 3) {
            throw SampleTooSmall("rank_methods: sample for " + method + " needs >= 3 values");
        }
    }

    struct Item {
        std::string method;
        const std::vector<double>* sample;
        double med;
        double iqr;
    };
    std::vector<Item> items;
    items.reserve(results.size());
    for (const auto& [method, sample] : results) {
        items.push_back({method, &sample, median(sample),
                         quantile(sample, 0.75) - quantile(sample, 0.25)});
    }
    const bool ascending = metric == Metric::Mre;  // smaller MRE / larger SA is better
    std::stable_sort(items.begin(), items.end(), [&](const Item& x, const Item& y) {
        if (x.med != y.med) return ascending ? x.med < y.med : x.med > y.med;
        return x.method < y.method;
    });

    RankReport report;
    report.metric = metric;
    std::size_t rank = 1;
    const std::vector<double>* representative = items.front().sample;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            const bool boot = bootstrap_different(*representative, *items[i].sample);
            const double effect = a12(*representative, *items[i].sample);
            if (boot && std::abs(effect - 0.5) >= 0.1) {
                ++rank;
                representative = items[i].sample;
            }
        }
        report.entries.push_back({items[i].method, rank, items[i].med, items[i].iqr});
    }
    return report;
}

FrequencyTable selection_frequency(const std::vector<Configuration>& winners) {
    if (winners.empty()) throw EmptyInput("selection_frequency: no winners");
    const auto axis_names = configuration_axis_names();
    std::vector<std::map<std::string, std::size_t>> counts(axis_names.size());
    for (const auto& config : winners) {
        const auto values = configuration_axis_values(config);
        for (std::size_t a = 0; a < values.size(); ++a) ++counts[a][values[a]];
    }
    FrequencyTable table;
    const double total = static_cast<double>(winners.size());
    for (std::size_t a = 0; a < axis_names.size(); ++a) {
        for (const auto& [option, count] : counts[a]) {
            table.axes[axis_names[a]][option] =
                static_cast<int>(std::lround(100.0 * static_cast<double>(count) / total));
        }
    }
    return table;
}

std::string rank_report_markdown(const RankReport& report, const std::string& title) {
    std::string out = "### " + title + "\n\n";
    out += "| Rank | Method | Median | IQR |\n";
    out += "|-----:|:-------|-------:|----:|\n";
    char buf[128];
    for (const auto& entry : report.entries) {
        std::snprintf(buf, sizeof(buf), "| %zu | %s | %.2f | %.2f |\n", entry.rank,
                      entry.method.c_str(), entry.median, entry.iqr);
        out += buf;
    }
    return out;
}

std::string rank_report_csv(const RankReport& report) {
    std::string out = "rank,method,median,iqr\n";
    char buf[128];
    for (const auto& entry : report.entries) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f,%.6f\n", entry.rank,
                      entry.method.c_str(), entry.median, entry.iqr);
        out += buf;
    }
    return out;
}

std::string frequency_table_csv(const FrequencyTable& table) {
    std::string out = "axis,option,percent\n";
    for (const auto& [axis, options] : table.axes) {
        for (const auto& [option, percent] : options) {
            out += axis + ',' + option + ',' + std::to_string(percent) + '\n';
        }
    }
    return out;
}

}  // namespace aben
