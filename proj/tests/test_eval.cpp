#include "doctest.h"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "aben/common.hpp"
#include "aben/eval.hpp"

using namespace aben;

TEST_CASE("mre computes the relative error") {
    CHECK(mre(100, 80) == doctest::Approx(0.20));
    CHECK(mre(42, 42) == 0.0);
    CHECK(mre(50, 125) == doctest::Approx(1.5));
    CHECK_THROWS_AS(mre(0, 10), NonPositiveActual);
    CHECK_THROWS_AS(mre(-5, 10), NonPositiveActual);
}

TEST_CASE("mre is scale invariant") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const double actual = 1.0 + rng.next_double() * 100.0;
        const double predicted = rng.next_double() * 200.0;
        const double c = 0.01 + rng.next_double() * 50.0;
        CHECK(mre(actual, predicted) == doctest::Approx(mre(actual * c, predicted * c)));
    }
}

TEST_CASE("mae averages absolute residuals") {
    CHECK(mae({{10, 10}, {20, 20}}) == 0.0);
    CHECK(mae({{10, 20}}) == 10.0);
    CHECK(mae({{10, 12}, {20, 16}}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(mae({}), EmptyInput);
}

TEST_CASE("sa rewards beating the random guesser") {
    std::vector<std::pair<double, double>> perfect{{10, 10}, {20, 20}, {30, 30}};
    CHECK(sa(perfect, 1000, 1) == 100.0);

    // sa is deterministic per seed and never exceeds 100.
    std::vector<std::pair<double, double>> rough{{10, 15}, {20, 40}, {30, 5}, {40, 90}};
    CHECK(sa(rough, 1000, 7) == sa(rough, 1000, 7));
    CHECK(sa(rough, 1000, 7) <= 100.0);
    CHECK_THROWS_AS(sa({}, 1000, 1), EmptyInput);
}

TEST_CASE("sa of the mean-guess predictor converges near zero") {
    // Random guessing converges on the mean absolute gap between two pool
    // draws, which matches the mean predictor's error when E|X - Y| equals
    // E|X - mean|. A symmetric two-valued pool satisfies that identity
    // exactly (for a uniform pool the ratio is 4/3, i.e. SA near 25).
    std::vector<double> actuals;
    for (int i = 0; i < 50; ++i) {
        actuals.push_back(10.0);
        actuals.push_back(90.0);
    }
    const double mean = 50.0;

    std::vector<std::pair<double, double>> pairs;
    for (double a : actuals) pairs.emplace_back(a, mean);
    const double score = sa(pairs, 1000, 11);
    CHECK(score > -5.0);
    CHECK(score < 5.0);
}

TEST_CASE("bootstrap flags clearly separated samples only") {
    const std::vector<double> base{1.0, 1.1, 0.9, 1.05, 0.95, 1.02, 0.98, 1.01};
    CHECK_FALSE(bootstrap_different(base, base));

    std::vector<double> low;
    std::vector<double> high;
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        low.push_back(rng.next_double());
        high.push_back(100.0 + rng.next_double());
    }
    CHECK(bootstrap_different(low, high));

    CHECK_THROWS_AS(bootstrap_different({1.0, 2.0}, base), SampleTooSmall);
}

TEST_CASE("a12 counts pairwise wins") {
    const std::vector<double> same{3, 1, 2};
    CHECK(a12(same, same) == 0.5);
    CHECK(a12({10, 11, 12}, {1, 2, 3}) == 1.0);
    CHECK(a12({1, 2, 3}, {10, 11, 12}) == 0.0);

    // Brute-force oracle over the nine pairs: wins {} plus ties at 2==2 and
    // 3==3 give 2/9.
    double wins = 0.0;
    for (double x : {1.0, 2.0, 3.0}) {
        for (double y : {2.0, 3.0, 4.0}) {
            if (x > y) wins += 1.0;
            if (x == y) wins += 0.5;
        }
    }
    CHECK(std::abs(wins / 9.0 - 2.0 / 9.0) < 1e-15);
    CHECK(std::abs(a12({1, 2, 3}, {2, 3, 4}) - 2.0 / 9.0) < 1e-12);

    CHECK_THROWS_AS(a12({}, same), EmptyInput);
}

TEST_CASE("a12 is symmetric on tie-free samples") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a;
        std::vector<double> b;
        for (int i = 0; i < 15; ++i) {
            a.push_back(rng.next_double());
            b.push_back(rng.next_double());
        }
        CHECK(a12(a, b) + a12(b, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("rank_methods clusters indistinguishable methods") {
    const std::vector<double> shared{5, 6, 7, 8, 9};
    std::map<std::string, std::vector<double>> tied{{"alpha", shared}, {"beta", shared}};
    const auto same = rank_methods(tied, Metric::Mre);
    CHECK(same.entries[0].rank == 1);
    CHECK(same.entries[1].rank == 1);

    std::map<std::string, std::vector<double>> separated;
    Rng rng(4);
    for (const auto& [name, base] : std::map<std::string, double>{
             {"near", 10.0}, {"mid", 50.0}, {"far", 90.0}}) {
        std::vector<double> sample;
        for (int i = 0; i < 20; ++i) sample.push_back(base + rng.next_double());
        separated[name] = sample;
    }
    const auto three = rank_methods(separated, Metric::Mre);
    REQUIRE(three.entries.size() == 3);
    CHECK(three.entries[0].method == "near");
    CHECK(three.entries[0].rank == 1);
    CHECK(three.entries[1].method == "mid");
    CHECK(three.entries[1].rank == 2);
    CHECK(three.entries[2].method == "far");
    CHECK(three.entries[2].rank == 3);

    // For SA the ordering flips: bigger is better.
    const auto sa_ranks = rank_methods(separated, Metric::Sa);
    CHECK(sa_ranks.entries[0].method == "far");
    CHECK(sa_ranks.entries[0].rank == 1);
    CHECK(sa_ranks.entries[2].method == "near");
    CHECK(sa_ranks.entries[2].rank == 3);
}

TEST_CASE("rank numbering is contiguous and medians are reported") {
    std::map<std::string, std::vector<double>> results;
    Rng rng(21);
    for (int m = 0; m < 5; ++m) {
        std::vector<double> sample;
        const double base = (m < 2) ? 10.0 : 80.0;  // two clusters
        for (int i = 0; i < 20; ++i) sample.push_back(base + rng.next_double());
        results["m" + std::to_string(m)] = sample;
    }
    const auto report = rank_methods(results, Metric::Mre);
    std::size_t previous = 1;
    for (const auto& entry : report.entries) {
        CHECK(entry.rank >= previous);
        CHECK(entry.rank - previous <= 1);
        previous = entry.rank;
        CHECK(entry.iqr >= 0.0);
    }
    CHECK(report.entries.front().rank == 1);
    CHECK(report.entries.back().rank == 2);
}

TEST_CASE("rank_methods rejects undersized input") {
    std::map<std::string, std::vector<double>> one{{"solo", {1, 2, 3}}};
    CHECK_THROWS_AS(rank_methods(one, Metric::Mre), AbenError);
    std::map<std::string, std::vector<double>> thin{{"a", {1, 2}}, {"b", {1, 2, 3}}};
    CHECK_THROWS_AS(rank_methods(thin, Metric::Mre), SampleTooSmall);
}

TEST_CASE("selection_frequency reports per-axis percentages") {
    Configuration base = abe0_configuration();
    const auto all_same = selection_frequency({base, base, base});
    CHECK(all_same.axes.at("subset").at("remove_nothing") == 100);

    Configuration k2 = base;
    k2.k = 2;
    std::vector<Configuration> half;
    for (int i = 0; i < 10; ++i) half.push_back(base);
    for (int i = 0; i < 10; ++i) half.push_back(k2);
    const auto split = selection_frequency(half);
    CHECK(split.axes.at("analogies").at("k1") == 50);
    CHECK(split.axes.at("analogies").at("k2") == 50);

    // Percentages on every axis sum to 100 give or take rounding.
    std::vector<Configuration> mixed;
    const auto model = default_feature_model();
    for (std::uint64_t seed = 0; seed < 33; ++seed) mixed.push_back(sample_valid(model, seed));
    const auto table = selection_frequency(mixed);
    for (const auto& [axis, options] : table.axes) {
        int total = 0;
        for (const auto& [option, percent] : options) total += percent;
        CHECK(total >= 99);
        CHECK(total <= 101);
    }
}

TEST_CASE("reports serialize to markdown and csv") {
    RankReport report;
    report.metric = Metric::Mre;
    report.entries = {{"alpha", 1, 0.25, 0.10}, {"beta", 2, 0.50, 0.20}};
    const auto md = rank_report_markdown(report, "demo");
    CHECK(md.find("### demo") != std::string::npos);
    CHECK(md.find("| 1 | alpha |") != std::string::npos);
    const auto csv = rank_report_csv(report);
    CHECK(csv.rfind("rank,method,median,iqr\n", 0) == 0);
    CHECK(csv.find("2,beta,") != std::string::npos);

    FrequencyTable table;
    table.axes["subset"]["remove_nothing"] = 100;
    const auto fcsv = frequency_table_csv(table);
    CHECK(fcsv.find("subset,remove_nothing,100") != std::string::npos);
}
