#pragma once

#include <string>
#include <vector>

#include "pdkit/dataset.hpp"
#include "pdkit/matrix.hpp"

namespace pdkit {

// Numeric design matrix fed to SVD and the models. No missing entries.
struct DesignMatrix {
    Matrix values;
    std::vector<std::string> column_names;
    std::size_t row_count() const { return values.rows(); }
    std::size_t col_count() const { return values.cols(); }
};

struct NumericStats {
    std::string name;
    double median = 0.0;
    double mean = 0.0;
    double stddev = 1.0;
};

struct CategoricalStats {
    std::string name;
    int mode_index = 0;
    std::vector<std::string> categories;
};

// Train-fitted imputation/encoding/scaling statistics. Applying the plan to
// any frame uses only these numbers, never the frame's own statistics.
struct PreprocessPlan {
    std::vector<NumericStats> numeric_cols;          // kept numeric columns, frame order
    std::vector<CategoricalStats> categorical_cols;  // kept categorical columns, frame order
    std::vector<std::string> dropped_columns;        // constant after imputation
    std::vector<std::string> source_columns;         // non-target schema names, for matching
    std::vector<std::string> output_roster;          // design-matrix column names
    bool include_sensitive = false;

    std::string to_json() const;
    static PreprocessPlan from_json(const std::string& text);
};

struct ApplyStats {
    std::size_t unseen_category_cells = 0;  // cells mapped to an all-zero one-hot block
};

PreprocessPlan fit_plan(const FeatureFrame& train, bool include_sensitive = false);
DesignMatrix apply_plan(const PreprocessPlan& plan, const FeatureFrame& frame,
                        ApplyStats* stats = nullptr);

}  // namespace pdkit
