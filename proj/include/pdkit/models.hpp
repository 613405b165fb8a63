#pragma once

#include <string>
#include <vector>

#include "pdkit/preprocess.hpp"

namespace pdkit {

enum class ModelKind { Ols, Logistic };

struct FitDiagnostics {
    double final_loss = 0.0;
    std::size_t iterations = 0;
    std::vector<double> residuals;  // OLS only
    bool converged = true;
    double final_gradient_norm = 0.0;  // logistic only
};

struct TrainedModel {
    ModelKind kind = ModelKind::Ols;
    std::vector<double> weights;
    double intercept = 0.0;
    FitDiagnostics diagnostics;

    std::string to_json() const;
    static TrainedModel from_json(const std::string& text);
};

// Ridge-jittered normal equations: (X^T W X + lambda I) beta = X^T W y with
// lambda = 1e-8 * trace(X^T X) / d. pos_weight reweights class-1 rows.
TrainedModel fit_ols(const DesignMatrix& X, const std::vector<int>& y, double pos_weight = 1.0);

// Mean negative log-likelihood with L2 penalty 1e-6 on the weights,
// minimized by gradient descent with backtracking line search.
TrainedModel fit_logistic(const DesignMatrix& X, const std::vector<int>& y,
                          std::size_t max_iters = 500, double tol = 1e-7,
                          double pos_weight = 1.0);

// Logistic: sigmoid(X beta + b). OLS: X beta + b clipped to [0,1].
std::vector<double> predict_proba(const TrainedModel& model, const DesignMatrix& X);

// Label 1 iff score >= threshold.
std::vector<int> predict_label(const std::vector<double>& scores, double threshold);

// Mean penalized negative log-likelihood and its gradient, exposed so the
// finite-difference check exercises exactly what the optimizer descends.
double logistic_loss(const DesignMatrix& X, const std::vector<int>& y,
                     const std::vector<double>& weights, double intercept,
                     double pos_weight = 1.0);
void logistic_gradient(const DesignMatrix& X, const std::vector<int>& y,
                       const std::vector<double>& weights, double intercept,
                       std::vector<double>& grad_w, double& grad_b, double pos_weight = 1.0);

}  // namespace pdkit
