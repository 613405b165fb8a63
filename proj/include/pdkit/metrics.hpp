#pragma once

#include <iosfwd>
#include <vector>

#include "pdkit/errors.hpp"

namespace pdkit {

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct AverageMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassificationReport {
    ClassMetrics class0;
    ClassMetrics class1;
    double accuracy = 0.0;
    AverageMetrics macro_avg;
    AverageMetrics weighted_avg;
    std::size_t total_support = 0;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // includes (0,0) and (1,1)
    double auc = 0.0;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// FP / (FP + TN); 0 when the denominator is 0.
double type1_rate(const ConfusionMatrix& cm);
// FN / (FN + TP); 0 when the denominator is 0.
double type2_rate(const ConfusionMatrix& cm);

// Zero-division convention: precision = 0 when a class has no predictions.
ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred);

// Threshold sweep over distinct scores descending, ties grouped; AUC by the
// trapezoidal rule (equivalent to Mann-Whitney with 0.5 tie credit).
RocCurve roc_curve(const std::vector<int>& y_true, const std::vector<double>& scores);

// threshold,fpr,tpr rows for external plotting.
void write_roc_csv(const RocCurve& curve, std::ostream& out);

}  // namespace pdkit
