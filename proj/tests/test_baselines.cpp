#include "doctest.h"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "aben/baselines.hpp"
#include "aben/common.hpp"

using namespace aben;

namespace {

ProjectTable table_of(std::vector<std::vector<double>> rows, std::vector<double> effort) {
    ProjectTable t;
    t.name = "fixture";
    t.feature_names.resize(rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < t.feature_names.size(); ++i) {
        t.feature_names[i] = "f" + std::to_string(i);
    }
    t.rows = std::move(rows);
    t.effort = std::move(effort);
    return t;
}

// A symmetric feature keeps its skewness at zero so Identity wins the
// transform contest and the coefficients are directly comparable.
ProjectTable exact_linear_fixture() {
    std::vector<std::vector<double>> rows;
    std::vector<double> efforts;
    for (int x = 1; x <= 7; ++x) {
        rows.push_back({static_cast<double>(x)});
        efforts.push_back(2.0 + 3.0 * x);
    }
    return table_of(std::move(rows), std::move(efforts));
}

}  // namespace

TEST_CASE("atlm recovers exact linear data") {
    const auto model = atlm_fit(exact_linear_fixture());
    CHECK(std::abs(model.intercept - 2.0) < 1e-9);
    REQUIRE(model.coefficients.size() == 1);
    CHECK(std::abs(model.coefficients[0] - 3.0) < 1e-9);
    CHECK(model.transforms[0] == ColumnTransform::Identity);
    CHECK_FALSE(model.used_ridge_fallback);
    for (double r : model.residuals) CHECK(std::abs(r) < 1e-9);

    // Training rows reproduce their own efforts.
    const auto t = exact_linear_fixture();
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        CHECK(std::abs(atlm_predict(model, t.rows[r]) - t.effort[r]) < 1e-9);
    }
    CHECK(atlm_predict(model, std::vector<double>{4.0}) == doctest::Approx(14.0));
}

TEST_CASE("atlm is deterministic") {
    const auto a = atlm_fit(exact_linear_fixture());
    const auto b = atlm_fit(exact_linear_fixture());
    CHECK(a.intercept == b.intercept);
    CHECK(a.coefficients == b.coefficients);
    CHECK(a.residuals == b.residuals);
}

TEST_CASE("atlm requires more rows than features") {
    auto t = table_of({{1, 2}, {3, 4}, {5, 6}}, {1, 2, 3});
    CHECK_THROWS_AS(atlm_fit(t), InsufficientRows);
}

TEST_CASE("constant feature columns do not disturb predictions") {
    std::vector<std::vector<double>> rows;
    std::vector<double> efforts;
    for (int x = 1; x <= 7; ++x) {
        rows.push_back({static_cast<double>(x), 4.0});
        efforts.push_back(2.0 + 3.0 * x);
    }
    const auto model = atlm_fit(table_of(rows, efforts));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        CHECK(std::abs(atlm_predict(model, rows[r]) - efforts[r]) < 1e-6);
    }
}

TEST_CASE("geometric columns select the log transform") {
    const std::vector<double> column{1, 10, 100, 1000};

    // Skewness oracle: compute |skew| under each admissible transform and
    // confirm Log is the strict minimizer before asking choose_transform.
    std::vector<double> logged;
    std::vector<double> rooted;
    for (double v : column) {
        logged.push_back(std::log(v));
        rooted.push_back(std::sqrt(v));
    }
    const double s_id = std::abs(skewness(column));
    const double s_log = std::abs(skewness(logged));
    const double s_sqrt = std::abs(skewness(rooted));
    CHECK(s_log < s_id);
    CHECK(s_log < s_sqrt);
    CHECK(choose_transform(column) == ColumnTransform::Log);
}

TEST_CASE("transform admissibility respects the column sign") {
    // A zero forbids Log; a negative value forbids both Log and Sqrt.
    CHECK(choose_transform({0, 10, 100, 1000}) != ColumnTransform::Log);
    CHECK(choose_transform({-1, 10, 100, 1000}) == ColumnTransform::Identity);
}

TEST_CASE("skewness of degenerate or symmetric samples is zero") {
    CHECK(skewness({5, 5, 5, 5}) == 0.0);
    CHECK(std::abs(skewness({1, 2, 3, 4, 5})) < 1e-12);
}

TEST_CASE("negative raw predictions are floored") {
    AtlmModel model;
    model.intercept = -5.0;
    model.coefficients = {0.0};
    model.transforms = {ColumnTransform::Identity};
    CHECK(atlm_predict(model, std::vector<double>{1.0}) == 1e-6);
}

TEST_CASE("residuals are orthogonal to the transformed design") {
    std::vector<std::vector<double>> rows;
    std::vector<double> efforts;
    Rng rng(13);
    for (int x = 1; x <= 30; ++x) {
        rows.push_back({static_cast<double>(x)});
        efforts.push_back(2.0 + 3.0 * x + (rng.next_double() - 0.5));
    }
    const auto model = atlm_fit(table_of(rows, efforts));
    REQUIRE(model.transforms[0] == ColumnTransform::Identity);
    double dot = 0.0;
    double dot_ones = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        dot += model.residuals[r] * rows[r][0];
        dot_ones += model.residuals[r];
    }
    CHECK(std::abs(dot) < 1e-6);
    CHECK(std::abs(dot_ones) < 1e-6);
}

TEST_CASE("atlm serializes to json") {
    const auto model = atlm_fit(exact_linear_fixture());
    const auto j = atlm_to_json(model);
    CHECK(j.find("\"intercept\"") != std::string::npos);
    CHECK(j.find("identity") != std::string::npos);
}

TEST_CASE("abe0 baseline is the fixed configuration") {
    CHECK(decode(encode(abe0_configuration())) == abe0_configuration());

    auto t = table_of({{1}, {2}, {3}, {4}, {5}}, {1, 2, 3, 4, 100});
    const auto est = abe0(t);
    CHECK(est.train.row_count() == 5);  // no pruning in the baseline
    CHECK(est.chosen_k == 1);
    CHECK(est.weights.weights == std::vector<double>(1, 1.0));
    for (std::size_t r = 0; r < t.row_count(); ++r) {
        CHECK(predict(est, t.rows[r]) == t.effort[r]);
    }
}
