#pragma once

#include <span>
#include <string>
#include <vector>

#include "aben/abe.hpp"
#include "aben/data.hpp"

namespace aben {

enum class ColumnTransform { Identity, Log, Sqrt };

// Multiple linear regression with per-column transforms chosen to minimize
// skewness, fit by least squares.
struct AtlmModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    std::vector<ColumnTransform> transforms;
    std::vector<double> residuals;  // training residuals, retained for audit
    bool used_ridge_fallback = false;
};

AtlmModel atlm_fit(const ProjectTable& train);

// Applies the stored transforms then the linear form; floored at a small
// positive value so relative errors stay defined.
double atlm_predict(const AtlmModel& model, std::span<const double> query);

std::string atlm_to_json(const AtlmModel& model);

// The fixed analogy baseline: all rows, uniform weights, weighted Euclidean
// with unit weights, k=1, median adaptation.
AbeEstimator abe0(const ProjectTable& train);

// Sample skewness of a vector; 0 for degenerate spread.
double skewness(const std::vector<double>& values);

ColumnTransform choose_transform(const std::vector<double>& column);

}  // namespace aben
