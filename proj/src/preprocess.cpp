#include "pdkit/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace pdkit {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PreprocessPlan fit_plan(const FeatureFrame& train, bool include_sensitive) {
    if (train.n_rows < 2) throw UsageError("fit_plan: need at least 2 training rows");
    PreprocessPlan plan;
    plan.include_sensitive = include_sensitive;

    for (std::size_t c = 0; c < train.schema.size(); ++c) {
        const ColumnSpec& spec = train.schema[c];
        if (spec.kind == ColumnKind::Target) continue;
        if (spec.kind == ColumnKind::SensitiveCategorical && !include_sensitive) continue;
        plan.source_columns.push_back(spec.name);

        if (spec.kind == ColumnKind::Numeric) {
            std::vector<double> observed;
            for (const auto& v : train.numeric[c])
                if (v) observed.push_back(*v);
            if (observed.empty())
                throw DataError("AllMissingColumn: numeric column '" + spec.name +
                                "' has no observed values");
            NumericStats stats;
            stats.name = spec.name;
            stats.median = median_of(observed);
            // Mean/stddev are taken over the imputed column so that applying
            // the plan back to the training frame z-scores it exactly.
            double sum = 0.0;
            for (const auto& v : train.numeric[c]) sum += v ? *v : stats.median;
            stats.mean = sum / static_cast<double>(train.n_rows);
            double ss = 0.0;
            for (const auto& v : train.numeric[c]) {
                double d = (v ? *v : stats.median) - stats.mean;
                ss += d * d;
            }
            stats.stddev = std::sqrt(ss / static_cast<double>(train.n_rows));
            if (stats.stddev == 0.0) {
                plan.dropped_columns.push_back(spec.name);
            } else {
                plan.numeric_cols.push_back(stats);
            }
        } else {
            std::map<int, std::size_t> counts;
            for (const auto& v : train.categorical[c])
                if (v) ++counts[*v];
            if (counts.empty())
                throw DataError("AllMissingColumn: categorical column '" + spec.name +
                                "' has no observed values");
            int mode = counts.begin()->first;
            std::size_t best = counts.begin()->second;
            for (const auto& [idx, cnt] : counts) {
                if (cnt > best) {
                    mode = idx;
                    best = cnt;
                }
            }
            // Constant after imputation: a single observed category carries no signal.
            if (counts.size() <= 1) {
                plan.dropped_columns.push_back(spec.name);
            } else {
                plan.categorical_cols.push_back({spec.name, mode, spec.categories});
            }
        }
    }

    for (const auto& nc : plan.numeric_cols) plan.output_roster.push_back(nc.name);
    for (const auto& cc : plan.categorical_cols)
        for (const auto& cat : cc.categories)
            plan.output_roster.push_back(cc.name + "=" + cat);
    return plan;
}

DesignMatrix apply_plan(const PreprocessPlan& plan, const FeatureFrame& frame,
                        ApplyStats* stats) {
    DesignMatrix out;
    out.column_names = plan.output_roster;
    out.values = Matrix(frame.n_rows, plan.output_roster.size());

    std::size_t col_offset = 0;
    for (const auto& nc : plan.numeric_cols) {
        int c = frame.column_index(nc.name);
        if (c < 0 || frame.schema[static_cast<std::size_t>(c)].kind != ColumnKind::Numeric)
            throw DataError("SchemaMismatch: numeric column '" + nc.name +
                            "' missing from frame");
        const auto& col = frame.numeric[static_cast<std::size_t>(c)];
        for (std::size_t r = 0; r < frame.n_rows; ++r) {
            double v = col[r] ? *col[r] : nc.median;
            out.values(r, col_offset) = (v - nc.mean) / nc.stddev;
        }
        ++col_offset;
    }
    for (const auto& cc : plan.categorical_cols) {
        int c = frame.column_index(cc.name);
        if (c < 0 || !frame.is_categorical_kind(static_cast<std::size_t>(c)))
            throw DataError("SchemaMismatch: categorical column '" + cc.name +
                            "' missing from frame");
        const auto& col = frame.categorical[static_cast<std::size_t>(c)];
        for (std::size_t r = 0; r < frame.n_rows; ++r) {
            int idx = col[r] ? *col[r] : cc.mode_index;
            if (idx < 0 || static_cast<std::size_t>(idx) >= cc.categories.size()) {
                if (stats) ++stats->unseen_category_cells;
            } else {
                out.values(r, col_offset + static_cast<std::size_t>(idx)) = 1.0;
            }
        }
        col_offset += cc.categories.size();
    }
    return out;
}

std::string PreprocessPlan::to_json() const {
    nlohmann::ordered_json doc;
    doc["include_sensitive"] = include_sensitive;
    doc["numeric"] = nlohmann::ordered_json::array();
    for (const auto& nc : numeric_cols)
        doc["numeric"].push_back({{"name", nc.name},
                                  {"median", nc.median},
                                  {"mean", nc.mean},
                                  {"stddev", nc.stddev}});
    doc["categorical"] = nlohmann::ordered_json::array();
    for (const auto& cc : categorical_cols)
        doc["categorical"].push_back({{"name", cc.name},
                                      {"mode_index", cc.mode_index},
                                      {"categories", cc.categories}});
    doc["dropped_columns"] = dropped_columns;
    doc["source_columns"] = source_columns;
    doc["output_roster"] = output_roster;
    return doc.dump(2);
}

PreprocessPlan PreprocessPlan::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    PreprocessPlan plan;
    plan.include_sensitive = doc.at("include_sensitive").get<bool>();
    for (const auto& item : doc.at("numeric"))
        plan.numeric_cols.push_back({item.at("name").get<std::string>(),
                                     item.at("median").get<double>(),
                                     item.at("mean").get<double>(),
                                     item.at("stddev").get<double>()});
    for (const auto& item : doc.at("categorical"))
        plan.categorical_cols.push_back({item.at("name").get<std::string>(),
                                         item.at("mode_index").get<int>(),
                                         item.at("categories").get<std::vector<std::string>>()});
    plan.dropped_columns = doc.at("dropped_columns").get<std::vector<std::string>>();
    plan.source_columns = doc.at("source_columns").get<std::vector<std::string>>();
    plan.output_roster = doc.at("output_roster").get<std::vector<std::string>>();
    return plan;
}

}  // namespace pdkit
