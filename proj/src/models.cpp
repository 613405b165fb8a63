#include "pdkit/models.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace pdkit {

namespace {

constexpr double kRidgeScale = 1e-8;
constexpr double kL2Penalty = 1e-6;

double stable_log1pexp(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

// Gaussian elimination with partial pivoting on an n x (n+1) augmented system.
std::vector<double> solve_linear(std::vector<std::vector<double>> aug) {
    const std::size_t n = aug.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        if (std::abs(aug[pivot][col]) < 1e-300)
            throw NumericError("SingularSystem: normal equations singular despite ridge jitter");
        std::swap(aug[col], aug[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = aug[r][col] / aug[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = aug[i][n];
        for (std::size_t c = i + 1; c < n; ++c) s -= aug[i][c] * x[c];
        x[i] = s / aug[i][i];
    }
    return x;
}

void check_classes(const std::vector<int>& y) {
    bool has0 = false, has1 = false;
    for (int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("SingleClass: both classes must be present");
}

}  // namespace

TrainedModel fit_ols(const DesignMatrix& X, const std::vector<int>& y, double pos_weight) {
    const std::size_t n = X.row_count(), d = X.col_count();
    if (n != y.size()) throw UsageError("fit_ols: row/label length mismatch");
    if (n < d + 1) throw UsageError("fit_ols: need at least d+1 rows");

    // Augmented system over [X | 1]; jitter scaled by the feature Gram trace.
    const std::size_t p = d + 1;
    std::vector<std::vector<double>> aug(p, std::vector<double>(p + 1, 0.0));
    double weight_sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double w = y[r] ? pos_weight : 1.0;
        weight_sum += w;
        for (std::size_t i = 0; i < d; ++i) {
            double xi = X.values(r, i);
            if (xi == 0.0) continue;
            for (std::size_t j = i; j < d; ++j) aug[i][j] += w * xi * X.values(r, j);
            aug[i][d] += w * xi;
            aug[i][p] += w * xi * y[r];
        }
        aug[d][p] += w * y[r];
    }
    aug[d][d] = weight_sum;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) aug[i][j] = aug[j][i];
    for (std::size_t j = 0; j < d; ++j) aug[d][j] = aug[j][d];

    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += aug[i][i];
    const double lambda = d > 0 ? kRidgeScale * trace / static_cast<double>(d) : 0.0;
    for (std::size_t i = 0; i < d; ++i) aug[i][i] += lambda;

    std::vector<double> beta = solve_linear(std::move(aug));

    TrainedModel model;
    model.kind = ModelKind::Ols;
    model.weights.assign(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(d));
    model.intercept = beta[d];
    model.diagnostics.residuals.resize(n);
    double sse = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double pred = model.intercept;
        for (std::size_t i = 0; i < d; ++i) pred += model.weights[i] * X.values(r, i);
        model.diagnostics.residuals[r] = y[r] - pred;
        sse += model.diagnostics.residuals[r] * model.diagnostics.residuals[r];
    }
    model.diagnostics.final_loss = sse / static_cast<double>(n);
    model.diagnostics.iterations = 1;
    for (double w : model.weights)
        if (!std::isfinite(w)) throw NumericError("fit_ols: non-finite coefficients");
    return model;
}

double logistic_loss(const DesignMatrix& X, const std::vector<int>& y,
                     const std::vector<double>& weights, double intercept, double pos_weight) {
    const std::size_t n = X.row_count(), d = X.col_count();
    double loss = 0.0;
    double weight_sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double w = y[r] ? pos_weight : 1.0;
        weight_sum += w;
        double t = intercept;
        for (std::size_t i = 0; i < d; ++i) t += weights[i] * X.values(r, i);
        loss += w * (stable_log1pexp(t) - y[r] * t);
    }
    loss /= weight_sum;
    double pen = 0.0;
    for (double w : weights) pen += w * w;
    return loss + 0.5 * kL2Penalty * pen;
}

void logistic_gradient(const DesignMatrix& X, const std::vector<int>& y,
                       const std::vector<double>& weights, double intercept,
                       std::vector<double>& grad_w, double& grad_b, double pos_weight) {
    const std::size_t n = X.row_count(), d = X.col_count();
    grad_w.assign(d, 0.0);
    grad_b = 0.0;
    double weight_sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double w = y[r] ? pos_weight : 1.0;
        weight_sum += w;
        double t = intercept;
        for (std::size_t i = 0; i < d; ++i) t += weights[i] * X.values(r, i);
        double err = w * (sigmoid(t) - y[r]);
        for (std::size_t i = 0; i < d; ++i) grad_w[i] += err * X.values(r, i);
        grad_b += err;
    }
    for (std::size_t i = 0; i < d; ++i)
        grad_w[i] = grad_w[i] / weight_sum + kL2Penalty * weights[i];
    grad_b /= weight_sum;
}

TrainedModel fit_logistic(const DesignMatrix& X, const std::vector<int>& y,
                          std::size_t max_iters, double tol, double pos_weight) {
    const std::size_t n = X.row_count(), d = X.col_count();
    if (n != y.size()) throw UsageError("fit_logistic: row/label length mismatch");
    check_classes(y);

    std::vector<double> w(d, 0.0), grad_w;
    double b = 0.0, grad_b = 0.0;
    double loss = logistic_loss(X, y, w, b, pos_weight);
    double step = 1.0;
    std::size_t iters = 0;
    double grad_norm = 0.0;

    for (; iters < max_iters; ++iters) {
        logistic_gradient(X, y, w, b, grad_w, grad_b, pos_weight);
        grad_norm = std::abs(grad_b);
        double grad_sq = grad_b * grad_b;
        for (double g : grad_w) {
            grad_norm = std::max(grad_norm, std::abs(g));
            grad_sq += g * g;
        }
        if (grad_norm < tol) break;

        // Backtracking line search (Armijo condition).
        step = std::min(step * 2.0, 1e4);
        bool accepted = false;
        std::vector<double> w_new(d);
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < d; ++i) w_new[i] = w[i] - step * grad_w[i];
            double b_new = b - step * grad_b;
            double loss_new = logistic_loss(X, y, w_new, b_new, pos_weight);
            if (loss_new <= loss - 1e-4 * step * grad_sq) {
                w = w_new;
                b = b_new;
                loss = loss_new;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }

    TrainedModel model;
    model.kind = ModelKind::Logistic;
    model.weights = std::move(w);
    model.intercept = b;
    model.diagnostics.final_loss = loss;
    model.diagnostics.iterations = iters;
    model.diagnostics.final_gradient_norm = grad_norm;
    model.diagnostics.converged = grad_norm < tol;
    return model;
}

std::vector<double> predict_proba(const TrainedModel& model, const DesignMatrix& X) {
    if (X.col_count() != model.weights.size())
        throw UsageError("predict_proba: DimensionMismatch, model expects " +
                         std::to_string(model.weights.size()) + " features, got " +
                         std::to_string(X.col_count()));
    std::vector<double> scores(X.row_count());
    for (std::size_t r = 0; r < X.row_count(); ++r) {
        double t = model.intercept;
        for (std::size_t i = 0; i < X.col_count(); ++i) t += model.weights[i] * X.values(r, i);
        scores[r] = model.kind == ModelKind::Logistic ? sigmoid(t) : std::clamp(t, 0.0, 1.0);
    }
    return scores;
}

std::vector<int> predict_label(const std::vector<double>& scores, double threshold) {
    std::vector<int> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] >= threshold ? 1 : 0;
    return labels;
}

std::string TrainedModel::to_json() const {
    nlohmann::ordered_json doc;
    doc["kind"] = kind == ModelKind::Ols ? "ols" : "logistic";
    doc["weights"] = weights;
    doc["intercept"] = intercept;
    doc["final_loss"] = diagnostics.final_loss;
    doc["iterations"] = diagnostics.iterations;
    doc["converged"] = diagnostics.converged;
    return doc.dump(2);
}

TrainedModel TrainedModel::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    TrainedModel model;
    model.kind = doc.at("kind") == "ols" ? ModelKind::Ols : ModelKind::Logistic;
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.intercept = doc.at("intercept").get<double>();
    model.diagnostics.final_loss = doc.at("final_loss").get<double>();
    model.diagnostics.iterations = doc.at("iterations").get<std::size_t>();
    model.diagnostics.converged = doc.at("converged").get<bool>();
    return model;
}

}  // namespace pdkit
