#include "pdkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

namespace pdkit {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.empty())
        throw UsageError("confusion: LengthMismatch or empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i]) {
            if (y_pred[i])
                ++cm.tp;
            else
                ++cm.fn;
        } else {
            if (y_pred[i])
                ++cm.fp;
            else
                ++cm.tn;
        }
    }
    return cm;
}

double type1_rate(const ConfusionMatrix& cm) {
    return safe_div(static_cast<double>(cm.fp), static_cast<double>(cm.fp + cm.tn));
}

double type2_rate(const ConfusionMatrix& cm) {
    return safe_div(static_cast<double>(cm.fn), static_cast<double>(cm.fn + cm.tp));
}

ClassificationReport classification_report(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred) {
    ConfusionMatrix cm = confusion(y_true, y_pred);
    ClassificationReport rep;
    rep.total_support = cm.total();

    // Class 1 is the positive class; class 0 metrics come from the mirrored matrix.
    rep.class1.support = cm.tp + cm.fn;
    rep.class1.precision = safe_div(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
    rep.class1.recall = safe_div(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
    rep.class1.f1 = f1_of(rep.class1.precision, rep.class1.recall);

    rep.class0.support = cm.tn + cm.fp;
    rep.class0.precision = safe_div(static_cast<double>(cm.tn), static_cast<double>(cm.tn + cm.fn));
    rep.class0.recall = safe_div(static_cast<double>(cm.tn), static_cast<double>(cm.tn + cm.fp));
    rep.class0.f1 = f1_of(rep.class0.precision, rep.class0.recall);

    rep.accuracy =
        static_cast<double>(cm.tp + cm.tn) / static_cast<double>(rep.total_support);

    rep.macro_avg.precision = 0.5 * (rep.class0.precision + rep.class1.precision);
    rep.macro_avg.recall = 0.5 * (rep.class0.recall + rep.class1.recall);
    rep.macro_avg.f1 = 0.5 * (rep.class0.f1 + rep.class1.f1);

    const double w0 = static_cast<double>(rep.class0.support) / rep.total_support;
    const double w1 = static_cast<double>(rep.class1.support) / rep.total_support;
    rep.weighted_avg.precision = w0 * rep.class0.precision + w1 * rep.class1.precision;
    rep.weighted_avg.recall = w0 * rep.class0.recall + w1 * rep.class1.recall;
    rep.weighted_avg.f1 = w0 * rep.class0.f1 + w1 * rep.class1.f1;
    return rep;
}

RocCurve roc_curve(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size() || y_true.empty())
        throw UsageError("roc_curve: LengthMismatch or empty input");
    const std::size_t n = y_true.size();
    std::size_t n_pos = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DataError("SingleClass: ROC needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0;
    double auc = 0.0;
    std::size_t i = 0;
    while (i < n) {
        const double s = scores[order[i]];
        std::size_t tp_prev = tp, fp_prev = fp;
        // All rows tied at this score move together.
        while (i < n && scores[order[i]] == s) {
            if (y_true[order[i]])
                ++tp;
            else
                ++fp;
            ++i;
        }
        double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        double fpr_prev = static_cast<double>(fp_prev) / static_cast<double>(n_neg);
        double tpr_prev = static_cast<double>(tp_prev) / static_cast<double>(n_pos);
        auc += 0.5 * (tpr + tpr_prev) * (fpr - fpr_prev);
        curve.points.push_back({fpr, tpr, s});
    }
    curve.auc = auc;
    return curve;
}

void write_roc_csv(const RocCurve& curve, std::ostream& out) {
    out << "threshold,fpr,tpr\n";
    char buf[128];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr);
        out << buf;
    }
}

}  // namespace pdkit
