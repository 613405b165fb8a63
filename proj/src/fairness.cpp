#include "pdkit/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pdkit {

namespace {

std::string band_label(const NumericBand& band) {
    if (!band.label.empty()) return band.label;
    std::ostringstream os;
    os << band.lo << "-" << band.hi;
    return os.str();
}

bool group_has_both_classes(const GroupMetrics& g) {
    return (g.cm.tp + g.cm.fn) > 0 && (g.cm.fp + g.cm.tn) > 0;
}

}  // namespace

std::vector<NumericBand> default_age_bands() {
    return {{18, 30, "18-30"},
            {31, 40, "31-40"},
            {41, 50, "41-50"},
            {51, 60, "51-60"},
            {61, std::numeric_limits<double>::infinity(), "61+"}};
}

std::vector<GroupSlice> slice_by(const FeatureFrame& frame, const std::string& attribute,
                                 const std::vector<NumericBand>& bins) {
    int ci = frame.column_index(attribute);
    if (ci < 0) throw DataError("UnknownAttribute: '" + attribute + "' not in schema");
    const std::size_t c = static_cast<std::size_t>(ci);
    const ColumnSpec& spec = frame.schema[c];

    std::vector<GroupSlice> slices;
    GroupSlice unknown{attribute, "unknown", {}};

    if (spec.kind == ColumnKind::Numeric) {
        if (bins.empty())
            throw DataError("EmptyBins: numeric attribute '" + attribute + "' needs bands");
        for (const auto& band : bins) slices.push_back({attribute, band_label(band), {}});
        for (std::size_t r = 0; r < frame.n_rows; ++r) {
            const auto& v = frame.numeric[c][r];
            bool placed = false;
            if (v) {
                for (std::size_t b = 0; b < bins.size(); ++b) {
                    if (*v >= bins[b].lo && *v <= bins[b].hi) {
                        slices[b].row_indices.push_back(r);
                        placed = true;
                        break;
                    }
                }
            }
            if (!placed) unknown.row_indices.push_back(r);
        }
    } else if (frame.is_categorical_kind(c)) {
        for (const auto& cat : spec.categories) slices.push_back({attribute, cat, {}});
        for (std::size_t r = 0; r < frame.n_rows; ++r) {
            const auto& v = frame.categorical[c][r];
            if (v)
                slices[static_cast<std::size_t>(*v)].row_indices.push_back(r);
            else
                unknown.row_indices.push_back(r);
        }
    } else {
        throw DataError("UnknownAttribute: '" + attribute + "' is the target column");
    }

    if (!unknown.row_indices.empty()) slices.push_back(std::move(unknown));
    return slices;
}

std::vector<GroupMetrics> group_confusions(const std::vector<int>& y_true,
                                           const std::vector<int>& y_pred,
                                           const std::vector<GroupSlice>& slices) {
    if (y_true.size() != y_pred.size()) throw UsageError("group_confusions: length mismatch");
    std::vector<char> seen(y_true.size(), 0);
    std::size_t covered = 0;
    for (const auto& s : slices) {
        for (auto i : s.row_indices) {
            if (i >= y_true.size() || seen[i])
                throw DataError("PartitionViolation: row " + std::to_string(i) +
                                " out of range or assigned twice");
            seen[i] = 1;
            ++covered;
        }
    }
    if (covered != y_true.size())
        throw DataError("PartitionViolation: slices cover " + std::to_string(covered) +
                        " of " + std::to_string(y_true.size()) + " rows");

    std::vector<GroupMetrics> out;
    for (const auto& s : slices) {
        GroupMetrics g;
        g.slice = s;
        g.n = s.row_indices.size();
        for (auto i : s.row_indices) {
            if (y_true[i]) {
                if (y_pred[i])
                    ++g.cm.tp;
                else
                    ++g.cm.fn;
            } else {
                if (y_pred[i])
                    ++g.cm.fp;
                else
                    ++g.cm.tn;
            }
        }
        g.fpr = type1_rate(g.cm);
        g.fnr = type2_rate(g.cm);
        if (g.n > 0) {
            g.selection_rate = static_cast<double>(g.cm.tp + g.cm.fp) / static_cast<double>(g.n);
            g.base_rate = static_cast<double>(g.cm.tp + g.cm.fn) / static_cast<double>(g.n);
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::map<std::string, std::optional<double>> disparate_impact(
    const std::vector<GroupMetrics>& group_metrics, const std::string& reference) {
    const GroupMetrics* ref = nullptr;
    for (const auto& g : group_metrics)
        if (g.slice.group_label == reference) ref = &g;
    if (!ref) throw DataError("UnknownReference: no group named '" + reference + "'");

    std::map<std::string, std::optional<double>> ratios;
    for (const auto& g : group_metrics) {
        if (ref->selection_rate > 0.0)
            ratios[g.slice.group_label] = g.selection_rate / ref->selection_rate;
        else
            ratios[g.slice.group_label] = std::nullopt;
    }
    return ratios;
}

EqualizedOddsGap equalized_odds_gap(const std::vector<GroupMetrics>& group_metrics) {
    EqualizedOddsGap gap;
    std::vector<const GroupMetrics*> usable;
    for (const auto& g : group_metrics) {
        if (group_has_both_classes(g))
            usable.push_back(&g);
        else
            gap.excluded_groups.push_back(g.slice.group_label);
    }
    if (usable.size() < 2)
        throw DataError("InsufficientGroups: need at least 2 groups with both classes");
    for (std::size_t i = 0; i < usable.size(); ++i) {
        for (std::size_t j = i + 1; j < usable.size(); ++j) {
            gap.fpr_gap = std::max(gap.fpr_gap, std::abs(usable[i]->fpr - usable[j]->fpr));
            gap.fnr_gap = std::max(gap.fnr_gap, std::abs(usable[i]->fnr - usable[j]->fnr));
        }
    }
    return gap;
}

FairnessReport build_fairness_report(const FeatureFrame& frame, const std::string& attribute,
                                     const std::vector<int>& y_true,
                                     const std::vector<int>& y_pred,
                                     const std::vector<NumericBand>& bins,
                                     const std::string& reference) {
    FairnessReport rep;
    rep.attribute = attribute;
    auto slices = slice_by(frame, attribute, bins);
    rep.groups = group_confusions(y_true, y_pred, slices);

    if (!reference.empty()) {
        rep.reference_group = reference;
    } else {
        // Largest group by count, label order breaking ties.
        std::size_t best = 0;
        for (std::size_t i = 1; i < rep.groups.size(); ++i) {
            if (rep.groups[i].n > rep.groups[best].n ||
                (rep.groups[i].n == rep.groups[best].n &&
                 rep.groups[i].slice.group_label < rep.groups[best].slice.group_label))
                best = i;
        }
        rep.reference_group = rep.groups.empty() ? "" : rep.groups[best].slice.group_label;
    }

    rep.disparate_impact = disparate_impact(rep.groups, rep.reference_group);
    for (const auto& [label, ratio] : rep.disparate_impact)
        if (ratio && *ratio < 0.8) rep.four_fifths_flags.push_back(label);
    for (const auto& g : rep.groups)
        if (g.slice.group_label == rep.reference_group && g.selection_rate == 0.0)
            rep.degenerate_predictor = true;

    try {
        auto gap = equalized_odds_gap(rep.groups);
        rep.eq_odds_fpr_gap = gap.fpr_gap;
        rep.eq_odds_fnr_gap = gap.fnr_gap;
        rep.gap_excluded_groups = std::move(gap.excluded_groups);
    } catch (const DataError&) {
        // Fewer than 2 usable groups: gaps stay 0, every group listed excluded.
        for (const auto& g : rep.groups)
            if (!group_has_both_classes(g))
                rep.gap_excluded_groups.push_back(g.slice.group_label);
    }
    return rep;
}

}  // namespace pdkit
