#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdkit/dataset.hpp"
#include "pdkit/fairness.hpp"
#include "pdkit/metrics.hpp"
#include "pdkit/models.hpp"
#include "pdkit/preprocess.hpp"
#include "pdkit/tsvd.hpp"

namespace pdkit {

enum class Arm { Baseline, Svd };
enum class ReportFormat { Text, Json, Csv };

struct SvdConfig {
    std::size_t rank = 0;
    std::size_t oversampling = 10;
    std::size_t power_iters = 2;
};

struct SynthConfig {
    std::size_t n_rows = 0;
    double default_rate = 0.1;
    std::map<std::string, double> group_effects;
};

struct SliceSpec {
    std::string attribute;
    std::vector<NumericBand> bins;  // empty for categorical attributes
};

struct RunConfig {
    std::optional<std::string> csv_path;  // exactly one of csv_path / synth set
    std::optional<SynthConfig> synth;
    std::vector<ColumnSpec> schema;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    ModelKind model = ModelKind::Ols;
    double threshold = 0.5;
    double class_weight = 1.0;  // positive-class weight
    std::optional<SvdConfig> svd;
    std::vector<SliceSpec> slices;  // defaulted from schema when empty
    bool include_sensitive_in_features = false;
    std::string reference_group;  // per-attribute override; empty = largest group
    ReportFormat format = ReportFormat::Text;

    // Every field, defaults included, for the reproducibility echo.
    std::string to_json() const;
};

struct ArmResult {
    Arm arm = Arm::Baseline;
    ClassificationReport report;
    RocCurve roc;
    ConfusionMatrix cm;
    std::vector<FairnessReport> fairness;
    std::vector<int> test_targets;
    std::vector<int> predictions;
    std::string model_json;
    std::string plan_json;
    std::optional<SvdConfig> svd_config;
    std::vector<double> svd_spectrum;
};

struct AblationDeltas {
    double accuracy = 0.0;
    double auc = 0.0;
    double class1_recall = 0.0;
    std::map<std::string, double> fpr_gap;  // per attribute, svd minus baseline
    std::map<std::string, double> fnr_gap;
};

struct AblationReport {
    std::string config_echo;
    ArmResult baseline;
    ArmResult svd;
    AblationDeltas deltas;
    std::vector<std::string> flags;
};

// Resolve the data source (load or synthesize) from the config.
FeatureFrame materialize_frame(const RunConfig& config);

// Attributes to slice by when the config names none: every
// sensitive-categorical column, plus Age with decade bands if present.
std::vector<SliceSpec> default_slices(const std::vector<ColumnSpec>& schema);

ArmResult run_arm(const RunConfig& config, Arm arm, const SplitPair& split);

AblationReport compare(const RunConfig& config, const ArmResult& baseline, const ArmResult& svd);

std::string render_arm_text(const ArmResult& arm);
std::string render_report(const AblationReport& report, ReportFormat format);
std::string arm_to_json(const ArmResult& arm);

// JSON document for a single-arm run (the `run` subcommand output).
std::string render_single(const RunConfig& config, const ArmResult& arm, ReportFormat format);

AblationReport parse_report_json(const std::string& text);

}  // namespace pdkit
