#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdkit/dataset.hpp"
#include "pdkit/metrics.hpp"

namespace pdkit {

struct GroupSlice {
    std::string attribute;
    std::string group_label;  // "Married", "51-60", "unknown", ...
    std::vector<std::size_t> row_indices;
};

struct GroupMetrics {
    GroupSlice slice;
    ConfusionMatrix cm;
    double fpr = 0.0;
    double fnr = 0.0;
    double selection_rate = 0.0;  // predicted-positive fraction
    double base_rate = 0.0;       // actual-positive fraction
    std::size_t n = 0;
};

struct FairnessReport {
    std::string attribute;
    std::vector<GroupMetrics> groups;
    std::string reference_group;
    // Group -> selection-rate ratio vs reference; nullopt when undefined
    // (reference selection rate 0).
    std::map<std::string, std::optional<double>> disparate_impact;
    std::vector<std::string> four_fifths_flags;  // DI < 0.8
    double eq_odds_fpr_gap = 0.0;
    double eq_odds_fnr_gap = 0.0;
    std::vector<std::string> gap_excluded_groups;  // missing a class, left out of gaps
    bool degenerate_predictor = false;             // reference selects nobody
};

struct NumericBand {
    double lo = 0.0;
    double hi = 0.0;  // inclusive both ends
    std::string label;
};

// 18-30, 31-40, 41-50, 51-60, 61+.
std::vector<NumericBand> default_age_bands();

// Slices of one attribute partition the rows; missing or out-of-band values
// land in an explicit "unknown" slice.
std::vector<GroupSlice> slice_by(const FeatureFrame& frame, const std::string& attribute,
                                 const std::vector<NumericBand>& bins = {});

std::vector<GroupMetrics> group_confusions(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred,
                                           const std::vector<GroupSlice>& slices);

std::map<std::string, std::optional<double>> disparate_impact(
    const std::vector<GroupMetrics>& group_metrics, const std::string& reference);

struct EqualizedOddsGap {
    double fpr_gap = 0.0;
    double fnr_gap = 0.0;
    std::vector<std::string> excluded_groups;
};

// Max pairwise |FPR_i - FPR_j| and |FNR_i - FNR_j| over groups that contain
// both classes.
EqualizedOddsGap equalized_odds_gap(const std::vector<GroupMetrics>& group_metrics);

// Full per-attribute report. Empty `reference` selects the largest group.
FairnessReport build_fairness_report(const FeatureFrame& frame, const std::string& attribute,
                                     const std::vector<int>& y_true,
                                     const std::vector<int>& y_pred,
                                     const std::vector<NumericBand>& bins = {},
                                     const std::string& reference = "");

}  // namespace pdkit
