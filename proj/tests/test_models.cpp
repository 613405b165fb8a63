#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pdkit/models.hpp"

using namespace pdkit;

namespace {

DesignMatrix make_design(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    DesignMatrix x;
    x.values = Matrix(rows, cols);
    for (auto& v : x.values.data()) v = gauss(rng);
    for (std::size_t c = 0; c < cols; ++c) x.column_names.push_back("f" + std::to_string(c));
    return x;
}

}  // namespace

TEST_CASE("ols recovers a noiseless linear relation") {
    std::mt19937_64 rng(1);
    DesignMatrix x = make_design(30, 1, rng);
    std::vector<int> y(30);
    // y = 1 exactly when the feature clears 0; fit on the 0/1 target directly
    // against a single binary-valued regressor for exact recovery.
    DesignMatrix xb;
    xb.values = Matrix(30, 1);
    xb.column_names = {"f0"};
    for (std::size_t r = 0; r < 30; ++r) {
        int label = x.values(r, 0) > 0 ? 1 : 0;
        xb.values(r, 0) = label;
        y[r] = label;
    }
    TrainedModel model = fit_ols(xb, y);
    CHECK(model.weights[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(model.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("ols on an all-zero target is the zero model") {
    std::mt19937_64 rng(2);
    DesignMatrix x = make_design(20, 3, rng);
    std::vector<int> y(20, 0);
    TrainedModel model = fit_ols(x, y);
    for (double w : model.weights) CHECK(std::abs(w) < 1e-8);
    CHECK(std::abs(model.intercept) < 1e-8);
}

TEST_CASE("ols matches an independent elimination solve of the normal equations") {
    std::mt19937_64 rng(3);
    DesignMatrix x = make_design(6, 2, rng);
    std::vector<int> y = {1, 0, 1, 1, 0, 0};

    // Oracle: build the 3x3 augmented normal equations (with intercept) and
    // solve by a separate dense eliminator, including the same jitter.
    std::vector<std::vector<double>> gram(3, std::vector<double>(3, 0.0));
    std::vector<double> rhs(3, 0.0);
    for (std::size_t r = 0; r < 6; ++r) {
        double row[3] = {x.values(r, 0), x.values(r, 1), 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) gram[i][j] += row[i] * row[j];
            rhs[i] += row[i] * y[r];
        }
    }
    double lambda = 1e-8 * (gram[0][0] + gram[1][1]) / 2.0;
    gram[0][0] += lambda;
    gram[1][1] += lambda;
    auto beta = oracles::solve_dense(gram, rhs);

    TrainedModel model = fit_ols(x, y);
    CHECK(model.weights[0] == doctest::Approx(beta[0]).epsilon(1e-8));
    CHECK(model.weights[1] == doctest::Approx(beta[1]).epsilon(1e-8));
    CHECK(model.intercept == doctest::Approx(beta[2]).epsilon(1e-8));
}

TEST_CASE("ols residuals are orthogonal to the design columns") {
    std::mt19937_64 rng(4);
    DesignMatrix x = make_design(40, 4, rng);
    std::bernoulli_distribution coin(0.4);
    std::vector<int> y(40);
    for (auto& v : y) v = coin(rng);
    TrainedModel model = fit_ols(x, y);

    double xty_max = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < 40; ++r) s += x.values(r, c) * y[r];
        xty_max = std::max(xty_max, std::abs(s));
    }
    for (std::size_t c = 0; c < 4; ++c) {
        double dot = 0.0;
        for (std::size_t r = 0; r < 40; ++r)
            dot += x.values(r, c) * model.diagnostics.residuals[r];
        CHECK(std::abs(dot) <= 1e-6 * xty_max);
    }
}

TEST_CASE("logistic separates separable 1-D data") {
    DesignMatrix x;
    x.values = Matrix(8, 1);
    x.column_names = {"f0"};
    std::vector<int> y;
    for (int i = 0; i < 8; ++i) {
        x.values(static_cast<std::size_t>(i), 0) = i < 4 ? -2.0 + 0.2 * i : 1.0 + 0.2 * i;
        y.push_back(i < 4 ? 0 : 1);
    }
    TrainedModel model = fit_logistic(x, y, 300, 1e-7);
    auto scores = predict_proba(model, x);
    for (int i = 0; i < 4; ++i)
        for (int j = 4; j < 8; ++j)
            CHECK(scores[static_cast<std::size_t>(j)] > scores[static_cast<std::size_t>(i)]);
}

TEST_CASE("logistic null model on target-independent features") {
    std::mt19937_64 rng(5);
    DesignMatrix x = make_design(400, 2, rng);
    std::vector<int> y(400);
    for (std::size_t i = 0; i < 400; ++i) y[i] = i % 2;  // balanced, independent of x
    TrainedModel model = fit_logistic(x, y, 500, 1e-8);
    CHECK(std::abs(model.intercept) < 1e-2);
    for (double w : model.weights) CHECK(std::abs(w) < 0.2);
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 rng(6);
    DesignMatrix x = make_design(50, 5, rng);
    std::bernoulli_distribution coin(0.5);
    std::vector<int> y(50);
    for (auto& v : y) v = coin(rng);
    y[0] = 1;
    y[1] = 0;

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double h = 1e-5;
    for (int point = 0; point < 10; ++point) {
        std::vector<double> w(5);
        for (auto& v : w) v = gauss(rng);
        double b = gauss(rng);

        std::vector<double> grad_w;
        double grad_b;
        logistic_gradient(x, y, w, b, grad_w, grad_b);

        for (std::size_t i = 0; i < 5; ++i) {
            auto wp = w, wm = w;
            wp[i] += h;
            wm[i] -= h;
            double fd = (logistic_loss(x, y, wp, b) - logistic_loss(x, y, wm, b)) / (2 * h);
            CHECK(std::abs(grad_w[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
        }
        double fd_b = (logistic_loss(x, y, w, b + h) - logistic_loss(x, y, w, b - h)) / (2 * h);
        CHECK(std::abs(grad_b - fd_b) <= 1e-4 * std::max(1.0, std::abs(fd_b)));
    }
}

TEST_CASE("logistic requires both classes") {
    std::mt19937_64 rng(7);
    DesignMatrix x = make_design(10, 2, rng);
    std::vector<int> y(10, 1);
    CHECK_THROWS_WITH_AS(fit_logistic(x, y), doctest::Contains("SingleClass"), DataError);
}

TEST_CASE("predict_proba conventions") {
    DesignMatrix x;
    x.values = Matrix(3, 1);
    x.values(0, 0) = -0.3;
    x.values(1, 0) = 0.0;
    x.values(2, 0) = 2.0;
    x.column_names = {"f0"};

    TrainedModel zero;
    zero.kind = ModelKind::Logistic;
    zero.weights = {0.0};
    for (double s : predict_proba(zero, x)) CHECK(s == 0.5);

    TrainedModel ols;
    ols.kind = ModelKind::Ols;
    ols.weights = {1.0};
    ols.intercept = 0.1;
    auto scores = predict_proba(ols, x);
    CHECK(scores[0] == doctest::Approx(0.0));  // clipped from -0.2
    CHECK(scores[1] == doctest::Approx(0.1));
    CHECK(scores[2] == doctest::Approx(1.0));  // clipped from 2.1

    TrainedModel logit;
    logit.kind = ModelKind::Logistic;
    logit.weights = {2.0};
    logit.intercept = -0.5;
    auto probs = predict_proba(logit, x);
    for (std::size_t i = 0; i < 3; ++i) {
        double t = 2.0 * x.values(i, 0) - 0.5;
        CHECK(probs[i] == doctest::Approx(1.0 / (1.0 + std::exp(-t))).epsilon(1e-12));
    }

    TrainedModel wrong;
    wrong.weights = {1.0, 2.0};
    CHECK_THROWS_AS(predict_proba(wrong, x), UsageError);
}

TEST_CASE("predict_label boundary and monotonicity") {
    std::vector<double> scores = {0.49, 0.50, 0.51};
    CHECK(predict_label(scores, 0.5) == std::vector<int>{0, 1, 1});
    CHECK(predict_label(scores, 0.0) == std::vector<int>{1, 1, 1});

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> random_scores(50);
    for (auto& s : random_scores) s = unit(rng);
    std::size_t prev = 51;
    for (double threshold : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        auto labels = predict_label(random_scores, threshold);
        std::size_t positives = static_cast<std::size_t>(
            std::count(labels.begin(), labels.end(), 1));
        CHECK(positives <= prev);
        prev = positives;
    }
}

TEST_CASE("scores invariant under feature permutation with matching weights") {
    std::mt19937_64 rng(9);
    DesignMatrix x = make_design(15, 3, rng);
    std::bernoulli_distribution coin(0.5);
    std::vector<int> y(15);
    for (auto& v : y) v = coin(rng);
    y[0] = 1;
    y[1] = 0;
    TrainedModel model = fit_logistic(x, y);

    DesignMatrix permuted = x;
    for (std::size_t r = 0; r < 15; ++r) {
        permuted.values(r, 0) = x.values(r, 2);
        permuted.values(r, 1) = x.values(r, 0);
        permuted.values(r, 2) = x.values(r, 1);
    }
    TrainedModel shuffled = model;
    shuffled.weights = {model.weights[2], model.weights[0], model.weights[1]};

    auto a = predict_proba(model, x);
    auto b = predict_proba(shuffled, permuted);
    for (std::size_t i = 0; i < 15; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("class weighting shifts predictions toward the positive class") {
    std::mt19937_64 rng(10);
    DesignMatrix x = make_design(300, 2, rng);
    std::vector<int> y(300);
    for (std::size_t i = 0; i < 300; ++i)
        y[i] = (x.values(i, 0) + 0.3 * x.values(i, 1) + 2.0 > 0) ? 0 : 1;  // imbalanced
    if (std::count(y.begin(), y.end(), 1) < 2) y[0] = y[1] = 1;
    TrainedModel plain = fit_logistic(x, y, 400, 1e-7, 1.0);
    TrainedModel weighted = fit_logistic(x, y, 400, 1e-7, 8.0);
    auto count_pos = [&](const TrainedModel& m) {
        auto labels = predict_label(predict_proba(m, x), 0.5);
        return std::count(labels.begin(), labels.end(), 1);
    };
    CHECK(count_pos(weighted) >= count_pos(plain));
}

TEST_CASE("model JSON round-trips") {
    std::mt19937_64 rng(11);
    DesignMatrix x = make_design(20, 2, rng);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < 20; ++i) y[i] = i % 3 == 0;
    TrainedModel model = fit_logistic(x, y);
    TrainedModel back = TrainedModel::from_json(model.to_json());
    CHECK(back.kind == model.kind);
    CHECK(back.weights == model.weights);
    CHECK(back.intercept == model.intercept);
}
