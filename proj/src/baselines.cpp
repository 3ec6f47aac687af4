#include "aben/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlohmann/json.hpp"

namespace aben {

namespace {

constexpr double kRidgeLambda = 1e-8;
constexpr double kPredictionFloor = 1e-6;

double apply_transform(ColumnTransform t, double v) {
    switch (t) {
        case ColumnTransform::Identity:
            return v;
        case ColumnTransform::Log:
            return std::log(v);
        case ColumnTransform::Sqrt:
            return std::sqrt(std::max(v, 0.0));
    }
    return v;
}

const char* transform_name(ColumnTransform t) {
    switch (t) {
        case ColumnTransform::Identity:
            return "identity";
        case ColumnTransform::Log:
            return "log";
        case ColumnTransform::Sqrt:
            return "sqrt";
    }
    return "identity";
}

}  // namespace

double skewness(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 1e-24) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

ColumnTransform choose_transform(const std::vector<double>& column) {
    const bool strictly_positive =
        std::all_of(column.begin(), column.end(), [](double v) { return v > 0.0; });
    const bool non_negative =
        std::all_of(column.begin(), column.end(), [](double v) { return v >= 0.0; });

    ColumnTransform best = ColumnTransform::Identity;
    double best_skew = std::abs(skewness(column));
    const auto consider = [&](ColumnTransform t) {
        std::vector<double> transformed(column.size());
        for (std::size_t i = 0; i < column.size(); ++i) {
            transformed[i] = apply_transform(t, column[i]);
        }
        const double s = std::abs(skewness(transformed));
        if (s < best_skew) {
            best_skew = s;
            best = t;
        }
    };
    if (strictly_positive) consider(ColumnTransform::Log);
    if (non_negative) consider(ColumnTransform::Sqrt);
    return best;
}

AtlmModel atlm_fit(const ProjectTable& train) {
    const std::size_t n = train.row_count();
    const std::size_t f = train.feature_count();
    if (n <= f + 1) throw InsufficientRows(train.name + ": need more rows than features + 1");

    AtlmModel model;
    model.transforms.resize(f);
    std::vector<double> column(n);
    for (std::size_t c = 0; c < f; ++c) {
        for (std::size_t r = 0; r < n; ++r) column[r] = train.rows[r][c];
        model.transforms[c] = choose_transform(column);
    }

    Eigen::MatrixXd x(n, f + 1);
    Eigen::VectorXd y(n);
    for (std::size_t r = 0; r < n; ++r) {
        x(r, 0) = 1.0;
        for (std::size_t c = 0; c < f; ++c) {
            x(r, c + 1) = apply_transform(model.transforms[c], train.rows[r][c]);
        }
        y(r) = train.effort[r];
    }

    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd xty = x.transpose() * y;
    Eigen::VectorXd beta;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xtx);
    if (qr.rank() == static_cast<Eigen::Index>(f + 1)) {
        beta = qr.solve(xty);
    } else {
        Eigen::MatrixXd ridge = xtx;
        ridge.diagonal().array() += kRidgeLambda;
        beta = ridge.ldlt().solve(xty);
        model.used_ridge_fallback = true;
    }

    model.intercept = beta(0);
    model.coefficients.assign(f, 0.0);
    for (std::size_t c = 0; c < f; ++c) model.coefficients[c] = beta(c + 1);

    model.residuals.resize(n);
    const Eigen::VectorXd fitted = x * beta;
    for (std::size_t r = 0; r < n; ++r) model.residuals[r] = y(r) - fitted(r);
    return model;
}

double atlm_predict(const AtlmModel& model, std::span<const double> query) {
    if (query.size() != model.coefficients.size()) {
        throw LengthMismatch("atlm_predict: query arity mismatch");
    }
    double value = model.intercept;
    for (std::size_t c = 0; c < query.size(); ++c) {
        double v = query[c];
        // Log of a non-positive query value is undefined; clamp first.
        if (model.transforms[c] == ColumnTransform::Log) v = std::max(v, kPredictionFloor);
        value += model.coefficients[c] * apply_transform(model.transforms[c], v);
    }
    return std::max(value, kPredictionFloor);
}

std::string atlm_to_json(const AtlmModel& model) {
    nlohmann::json j;
    j["intercept"] = model.intercept;
    j["coefficients"] = model.coefficients;
    std::vector<std::string> names;
    names.reserve(model.transforms.size());
    for (auto t : model.transforms) names.emplace_back(transform_name(t));
    j["transforms"] = names;
    const double sse = std::inner_product(model.residuals.begin(), model.residuals.end(),
                                          model.residuals.begin(), 0.0);
    j["residuals"] = {{"count", model.residuals.size()}, {"sum_squared", sse}};
    j["used_ridge_fallback"] = model.used_ridge_fallback;
    return j.dump(2);
}

AbeEstimator abe0(const ProjectTable& train) {
    return build_estimator(abe0_configuration(), train, 0);
}

}  // namespace aben
