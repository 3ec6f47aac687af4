#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aben/common.hpp"
#include "aben/config_space.hpp"

namespace aben {

enum class Metric { Mre, Sa };

// Per-fold outcome of one method: the raw (actual, predicted) pairs with the
// derived error statistics.
struct EvalResult {
    std::string method;
    std::string dataset;
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::vector<std::pair<double, double>> pairs;  // (actual, predicted)
    std::vector<double> mre_values;
    double sa_value = 0.0;
};

struct RankEntry {
    std::string method;
    std::size_t rank = 0;  // starts at 1
    double median = 0.0;
    double iqr = 0.0;
};

struct RankReport {
    Metric metric = Metric::Mre;
    std::vector<RankEntry> entries;
};

double mre(double actual, double predicted);

double mae(const std::vector<std::pair<double, double>>& pairs);

// Standardized accuracy: 100 * (1 - MAE / MAE of random guessing), where the
// random-guess MAE averages guess_runs passes of predicting each actual by a
// uniformly drawn other actual from the same pool.
double sa(const std::vector<std::pair<double, double>>& pairs,
          std::size_t guess_runs,
          std::uint64_t rng_seed);

// Two-sided bootstrap test on the difference in means.
bool bootstrap_different(const std::vector<double>& a,
                         const std::vector<double>& b,
                         double confidence = 0.95,
                         std::size_t resamples = 1000,
                         std::uint64_t rng_seed = 1);

// P(a > b) + 0.5 * P(a == b) by exhaustive pair counting.
double a12(const std::vector<double>& a, const std::vector<double>& b);

// Clusters methods into ranks of statistically indistinguishable results.
// A new rank opens only when a method differs from the current rank's best
// member by BOTH the bootstrap test and a non-small A12 (|A12 - 0.5| >= 0.1).
RankReport rank_methods(const std::map<std::string, std::vector<double>>& results,
                        Metric metric);

struct FrequencyTable {
    // axis name -> (option name -> integer percentage); each axis sums to
    // 100 +- 1 after rounding.
    std::map<std::string, std::map<std::string, int>> axes;
};

FrequencyTable selection_frequency(const std::vector<Configuration>& winners);

std::string rank_report_markdown(const RankReport& report, const std::string& title);
std::string rank_report_csv(const RankReport& report);
std::string frequency_table_csv(const FrequencyTable& table);

}  // namespace aben
