#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdkit/errors.hpp"

namespace pdkit {

enum class ColumnKind { Numeric, Categorical, Target, SensitiveCategorical };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> categories;  // categorical / sensitive only
    std::vector<std::string> na_tokens = {"", "NA", "N/A", "null"};
};

// Typed tabular dataset. Column storage is parallel to the schema: each
// schema index owns either a numeric or a categorical vector, the other
// stays empty. Immutable by convention after construction.
struct FeatureFrame {
    std::vector<ColumnSpec> schema;
    std::size_t n_rows = 0;
    std::vector<std::vector<std::optional<double>>> numeric;   // per schema column
    std::vector<std::vector<std::optional<int>>> categorical;  // per schema column
    std::vector<int> target;                                   // 0/1, no missing

    int column_index(const std::string& name) const;
    bool is_categorical_kind(std::size_t col) const {
        return schema[col].kind == ColumnKind::Categorical ||
               schema[col].kind == ColumnKind::SensitiveCategorical;
    }
    // Row subset, preserving order of `indices`.
    FeatureFrame take(const std::vector<std::size_t>& indices) const;
};

struct SplitPair {
    FeatureFrame train;
    FeatureFrame test;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
};

struct CsvOptions {
    char delimiter = ',';
};

std::vector<ColumnSpec> load_schema_json(const std::string& path);
void save_schema_json(const std::vector<ColumnSpec>& schema, const std::string& path);

FeatureFrame load_csv(const std::string& path, const std::vector<ColumnSpec>& schema,
                      const CsvOptions& opts = {});
void write_csv(const FeatureFrame& frame, const std::string& path, const CsvOptions& opts = {});

// Deterministic synthetic loan data: logistic latent model over mixed
// numeric/categorical features, intercept calibrated so the empirical
// default rate tracks `default_rate`. Keys of `group_effects` are
// "column=category" (log-odds shifts applied to matching rows).
FeatureFrame synthesize(std::size_t n_rows, const std::vector<ColumnSpec>& schema,
                        double default_rate,
                        const std::map<std::string, double>& group_effects,
                        std::uint64_t seed);

SplitPair split(const FeatureFrame& frame, double test_fraction, std::uint64_t seed,
                bool stratified);

// Bundled schema presets (see presets/ for the JSON equivalents).
std::vector<ColumnSpec> schema_loanstatus();
std::vector<ColumnSpec> schema_kaggle_default();

}  // namespace pdkit
