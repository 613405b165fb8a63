#include "pdkit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pdkit {

namespace {

using ojson = nlohmann::ordered_json;

const char* arm_name(Arm arm) { return arm == Arm::Baseline ? "baseline" : "svd"; }

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

ojson bands_to_json(const std::vector<NumericBand>& bands) {
    ojson arr = ojson::array();
    for (const auto& b : bands)
        arr.push_back({{"lo", b.lo}, {"hi", b.hi}, {"label", b.label}});
    return arr;
}

ojson fairness_to_json(const FairnessReport& rep) {
    ojson doc;
    doc["attribute"] = rep.attribute;
    doc["reference_group"] = rep.reference_group;
    doc["groups"] = ojson::array();
    for (const auto& g : rep.groups) {
        ojson gj;
        gj["group"] = g.slice.group_label;
        gj["n"] = g.n;
        gj["tp"] = g.cm.tp;
        gj["fp"] = g.cm.fp;
        gj["tn"] = g.cm.tn;
        gj["fn"] = g.cm.fn;
        gj["fpr"] = g.fpr;
        gj["fnr"] = g.fnr;
        gj["selection_rate"] = g.selection_rate;
        gj["base_rate"] = g.base_rate;
        auto it = rep.disparate_impact.find(g.slice.group_label);
        if (it != rep.disparate_impact.end() && it->second)
            gj["disparate_impact"] = *it->second;
        else
            gj["disparate_impact"] = nullptr;
        doc["groups"].push_back(gj);
    }
    doc["four_fifths_flags"] = rep.four_fifths_flags;
    doc["eq_odds_fpr_gap"] = rep.eq_odds_fpr_gap;
    doc["eq_odds_fnr_gap"] = rep.eq_odds_fnr_gap;
    doc["gap_excluded_groups"] = rep.gap_excluded_groups;
    doc["degenerate_predictor"] = rep.degenerate_predictor;
    return doc;
}

FairnessReport fairness_from_json(const ojson& doc) {
    FairnessReport rep;
    rep.attribute = doc.at("attribute").get<std::string>();
    rep.reference_group = doc.at("reference_group").get<std::string>();
    for (const auto& gj : doc.at("groups")) {
        GroupMetrics g;
        g.slice.attribute = rep.attribute;
        g.slice.group_label = gj.at("group").get<std::string>();
        g.n = gj.at("n").get<std::size_t>();
        g.cm.tp = gj.at("tp").get<std::size_t>();
        g.cm.fp = gj.at("fp").get<std::size_t>();
        g.cm.tn = gj.at("tn").get<std::size_t>();
        g.cm.fn = gj.at("fn").get<std::size_t>();
        g.fpr = gj.at("fpr").get<double>();
        g.fnr = gj.at("fnr").get<double>();
        g.selection_rate = gj.at("selection_rate").get<double>();
        g.base_rate = gj.at("base_rate").get<double>();
        if (gj.at("disparate_impact").is_null())
            rep.disparate_impact[g.slice.group_label] = std::nullopt;
        else
            rep.disparate_impact[g.slice.group_label] = gj.at("disparate_impact").get<double>();
        rep.groups.push_back(std::move(g));
    }
    rep.four_fifths_flags = doc.at("four_fifths_flags").get<std::vector<std::string>>();
    rep.eq_odds_fpr_gap = doc.at("eq_odds_fpr_gap").get<double>();
    rep.eq_odds_fnr_gap = doc.at("eq_odds_fnr_gap").get<double>();
    rep.gap_excluded_groups = doc.at("gap_excluded_groups").get<std::vector<std::string>>();
    rep.degenerate_predictor = doc.at("degenerate_predictor").get<bool>();
    return rep;
}

ojson report_to_json(const ClassificationReport& rep) {
    auto cls = [](const ClassMetrics& c) {
        return ojson{{"precision", c.precision},
                     {"recall", c.recall},
                     {"f1", c.f1},
                     {"support", c.support}};
    };
    auto avg = [](const AverageMetrics& a) {
        return ojson{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
    };
    return ojson{{"class0", cls(rep.class0)},   {"class1", cls(rep.class1)},
                 {"accuracy", rep.accuracy},    {"macro_avg", avg(rep.macro_avg)},
                 {"weighted_avg", avg(rep.weighted_avg)}, {"total_support", rep.total_support}};
}

ClassificationReport report_from_json(const ojson& doc) {
    ClassificationReport rep;
    auto cls = [](const ojson& j, ClassMetrics& c) {
        c.precision = j.at("precision").get<double>();
        c.recall = j.at("recall").get<double>();
        c.f1 = j.at("f1").get<double>();
        c.support = j.at("support").get<std::size_t>();
    };
    auto avg = [](const ojson& j, AverageMetrics& a) {
        a.precision = j.at("precision").get<double>();
        a.recall = j.at("recall").get<double>();
        a.f1 = j.at("f1").get<double>();
    };
    cls(doc.at("class0"), rep.class0);
    cls(doc.at("class1"), rep.class1);
    rep.accuracy = doc.at("accuracy").get<double>();
    avg(doc.at("macro_avg"), rep.macro_avg);
    avg(doc.at("weighted_avg"), rep.weighted_avg);
    rep.total_support = doc.at("total_support").get<std::size_t>();
    return rep;
}

ojson arm_to_json_doc(const ArmResult& arm) {
    ojson doc;
    doc["arm"] = arm_name(arm.arm);
    doc["classification_report"] = report_to_json(arm.report);
    doc["confusion"] = {{"tp", arm.cm.tp}, {"fp", arm.cm.fp}, {"tn", arm.cm.tn},
                        {"fn", arm.cm.fn}};
    doc["auc"] = arm.roc.auc;
    ojson roc = ojson::array();
    for (const auto& p : arm.roc.points)
        roc.push_back({{"threshold", std::isfinite(p.threshold) ? ojson(p.threshold) : ojson()},
                       {"fpr", p.fpr},
                       {"tpr", p.tpr}});
    doc["roc_points"] = roc;
    doc["fairness"] = ojson::array();
    for (const auto& f : arm.fairness) doc["fairness"].push_back(fairness_to_json(f));
    doc["test_targets"] = arm.test_targets;
    doc["provenance"] = ojson();
    doc["provenance"]["model"] = ojson::parse(arm.model_json);
    doc["provenance"]["plan"] = ojson::parse(arm.plan_json);
    if (arm.svd_config) {
        doc["provenance"]["svd"] = {{"rank", arm.svd_config->rank},
                                    {"oversampling", arm.svd_config->oversampling},
                                    {"power_iters", arm.svd_config->power_iters},
                                    {"spectrum", arm.svd_spectrum}};
    } else {
        doc["provenance"]["svd"] = nullptr;
    }
    return doc;
}

ArmResult arm_from_json(const ojson& doc) {
    ArmResult arm;
    arm.arm = doc.at("arm") == "baseline" ? Arm::Baseline : Arm::Svd;
    arm.report = report_from_json(doc.at("classification_report"));
    arm.cm.tp = doc.at("confusion").at("tp").get<std::size_t>();
    arm.cm.fp = doc.at("confusion").at("fp").get<std::size_t>();
    arm.cm.tn = doc.at("confusion").at("tn").get<std::size_t>();
    arm.cm.fn = doc.at("confusion").at("fn").get<std::size_t>();
    arm.roc.auc = doc.at("auc").get<double>();
    for (const auto& pj : doc.at("roc_points")) {
        RocPoint p;
        p.threshold = pj.at("threshold").is_null()
                          ? std::numeric_limits<double>::infinity()
                          : pj.at("threshold").get<double>();
        p.fpr = pj.at("fpr").get<double>();
        p.tpr = pj.at("tpr").get<double>();
        arm.roc.points.push_back(p);
    }
    for (const auto& fj : doc.at("fairness")) arm.fairness.push_back(fairness_from_json(fj));
    arm.test_targets = doc.at("test_targets").get<std::vector<int>>();
    arm.model_json = doc.at("provenance").at("model").dump(2);
    arm.plan_json = doc.at("provenance").at("plan").dump(2);
    if (!doc.at("provenance").at("svd").is_null()) {
        const auto& sj = doc.at("provenance").at("svd");
        SvdConfig cfg;
        cfg.rank = sj.at("rank").get<std::size_t>();
        cfg.oversampling = sj.at("oversampling").get<std::size_t>();
        cfg.power_iters = sj.at("power_iters").get<std::size_t>();
        arm.svd_config = cfg;
        arm.svd_spectrum = sj.at("spectrum").get<std::vector<double>>();
    }
    return arm;
}

void render_report_table(std::ostringstream& os, const ClassificationReport& rep) {
    auto row = [&](const std::string& label, const std::string& p, const std::string& r,
                   const std::string& f, const std::string& s) {
        os << "  ";
        os.width(14);
        os << std::left << label;
        for (const std::string* cell : {&p, &r, &f, &s}) {
            os.width(11);
            os << std::right << *cell;
        }
        os << "\n";
    };
    row("", "Precision", "Recall", "F1-Score", "Support");
    row("0", fixed2(rep.class0.precision), fixed2(rep.class0.recall), fixed2(rep.class0.f1),
        std::to_string(rep.class0.support));
    row("1", fixed2(rep.class1.precision), fixed2(rep.class1.recall), fixed2(rep.class1.f1),
        std::to_string(rep.class1.support));
    row("Accuracy", "", "", fixed2(rep.accuracy), std::to_string(rep.total_support));
    row("Macro Avg", fixed2(rep.macro_avg.precision), fixed2(rep.macro_avg.recall),
        fixed2(rep.macro_avg.f1), std::to_string(rep.total_support));
    row("Weighted Avg", fixed2(rep.weighted_avg.precision), fixed2(rep.weighted_avg.recall),
        fixed2(rep.weighted_avg.f1), std::to_string(rep.total_support));
}

void render_fairness_text(std::ostringstream& os, const FairnessReport& rep) {
    os << "  Fairness by " << rep.attribute << " (reference: " << rep.reference_group << ")\n";
    os << "    group           n      tp      fp      tn      fn     fpr     fnr  sel-rate      di\n";
    for (const auto& g : rep.groups) {
        char buf[160];
        auto it = rep.disparate_impact.find(g.slice.group_label);
        std::string di = (it != rep.disparate_impact.end() && it->second)
                             ? fixed4(*it->second)
                             : "undef";
        std::snprintf(buf, sizeof(buf), "    %-12s %6zu  %6zu  %6zu  %6zu  %6zu  %6.4f  %6.4f  %8.4f  %6s\n",
                      g.slice.group_label.c_str(), g.n, g.cm.tp, g.cm.fp, g.cm.tn, g.cm.fn,
                      g.fpr, g.fnr, g.selection_rate, di.c_str());
        os << buf;
    }
    os << "    eq-odds gaps: fpr " << fixed4(rep.eq_odds_fpr_gap) << ", fnr "
       << fixed4(rep.eq_odds_fnr_gap) << "\n";
    if (!rep.four_fifths_flags.empty()) {
        os << "    four-fifths flags:";
        for (const auto& f : rep.four_fifths_flags) os << " " << f;
        os << "\n";
    }
    if (rep.degenerate_predictor)
        os << "    note: degenerate predictor (reference group selection rate 0); DI undefined\n";
}

void csv_metric_rows(std::ostringstream& os, const ArmResult& arm) {
    const char* a = arm_name(arm.arm);
    auto row = [&](const std::string& attr, const std::string& group, const std::string& metric,
                   double value) {
        char buf[192];
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%.17g\n", a, attr.c_str(), group.c_str(),
                      metric.c_str(), value);
        os << buf;
    };
    row("", "", "accuracy", arm.report.accuracy);
    row("", "", "auc", arm.roc.auc);
    row("", "", "precision_0", arm.report.class0.precision);
    row("", "", "recall_0", arm.report.class0.recall);
    row("", "", "f1_0", arm.report.class0.f1);
    row("", "", "precision_1", arm.report.class1.precision);
    row("", "", "recall_1", arm.report.class1.recall);
    row("", "", "f1_1", arm.report.class1.f1);
    row("", "", "macro_precision", arm.report.macro_avg.precision);
    row("", "", "macro_recall", arm.report.macro_avg.recall);
    row("", "", "macro_f1", arm.report.macro_avg.f1);
    row("", "", "weighted_precision", arm.report.weighted_avg.precision);
    row("", "", "weighted_recall", arm.report.weighted_avg.recall);
    row("", "", "weighted_f1", arm.report.weighted_avg.f1);
    row("", "", "tp", static_cast<double>(arm.cm.tp));
    row("", "", "fp", static_cast<double>(arm.cm.fp));
    row("", "", "tn", static_cast<double>(arm.cm.tn));
    row("", "", "fn", static_cast<double>(arm.cm.fn));
    for (const auto& f : arm.fairness) {
        for (const auto& g : f.groups) {
            row(f.attribute, g.slice.group_label, "fpr", g.fpr);
            row(f.attribute, g.slice.group_label, "fnr", g.fnr);
            row(f.attribute, g.slice.group_label, "selection_rate", g.selection_rate);
            row(f.attribute, g.slice.group_label, "base_rate", g.base_rate);
            auto it = f.disparate_impact.find(g.slice.group_label);
            if (it != f.disparate_impact.end() && it->second)
                row(f.attribute, g.slice.group_label, "disparate_impact", *it->second);
        }
        row(f.attribute, "", "eq_odds_fpr_gap", f.eq_odds_fpr_gap);
        row(f.attribute, "", "eq_odds_fnr_gap", f.eq_odds_fnr_gap);
    }
}

}  // namespace

std::string RunConfig::to_json() const {
    ojson doc;
    if (csv_path) {
        doc["data"] = {{"kind", "csv"}, {"path", *csv_path}};
    } else if (synth) {
        ojson ge;
        for (const auto& [k, v] : synth->group_effects) ge[k] = v;
        doc["data"] = {{"kind", "synth"},
                       {"n_rows", synth->n_rows},
                       {"default_rate", synth->default_rate},
                       {"group_effects", ge}};
    } else {
        doc["data"] = nullptr;
    }
    ojson cols = ojson::array();
    for (const auto& spec : schema) cols.push_back(spec.name);
    doc["schema_columns"] = cols;
    doc["seed"] = seed;
    doc["test_fraction"] = test_fraction;
    doc["model"] = model == ModelKind::Ols ? "ols" : "logistic";
    doc["threshold"] = threshold;
    doc["class_weight"] = class_weight;
    if (svd)
        doc["svd"] = {{"rank", svd->rank},
                      {"oversampling", svd->oversampling},
                      {"power_iters", svd->power_iters}};
    else
        doc["svd"] = nullptr;
    ojson sl = ojson::array();
    for (const auto& s : slices)
        sl.push_back({{"attribute", s.attribute}, {"bins", bands_to_json(s.bins)}});
    doc["slices"] = sl;
    doc["include_sensitive_in_features"] = include_sensitive_in_features;
    doc["reference_group"] = reference_group;
    doc["format"] = format == ReportFormat::Text   ? "text"
                    : format == ReportFormat::Json ? "json"
                                                   : "csv";
    return doc.dump(2);
}

FeatureFrame materialize_frame(const RunConfig& config) {
    if (config.csv_path) return load_csv(*config.csv_path, config.schema);
    if (config.synth)
        return synthesize(config.synth->n_rows, config.schema, config.synth->default_rate,
                          config.synth->group_effects, config.seed);
    throw UsageError("RunConfig: no data source (csv path or synth parameters) given");
}

std::vector<SliceSpec> default_slices(const std::vector<ColumnSpec>& schema) {
    std::vector<SliceSpec> out;
    for (const auto& spec : schema) {
        if (spec.kind == ColumnKind::SensitiveCategorical)
            out.push_back({spec.name, {}});
        else if (spec.kind == ColumnKind::Numeric && spec.name == "Age")
            out.push_back({spec.name, default_age_bands()});
    }
    return out;
}

ArmResult run_arm(const RunConfig& config, Arm arm, const SplitPair& split) {
    try {
        PreprocessPlan plan = fit_plan(split.train, config.include_sensitive_in_features);
        DesignMatrix x_train = apply_plan(plan, split.train);
        DesignMatrix x_test = apply_plan(plan, split.test);

        ArmResult result;
        result.arm = arm;
        result.plan_json = plan.to_json();

        if (arm == Arm::Svd) {
            if (!config.svd) throw UsageError("svd arm requested without svd configuration");
            if (config.svd->rank < 1 || config.svd->rank > x_train.col_count())
                throw UsageError("svd rank " + std::to_string(config.svd->rank) +
                                 " out of range [1, " + std::to_string(x_train.col_count()) + "]");
            TruncatedFactors factors =
                truncated_svd(x_train.values, config.svd->rank, config.svd->oversampling,
                              config.svd->power_iters, config.seed);
            result.svd_config = config.svd;
            result.svd_spectrum = factors.sigma;
            // Train-fitted V applied to both sides.
            DesignMatrix reduced_train, reduced_test;
            reduced_train.values = project(factors, x_train.values);
            reduced_test.values = project(factors, x_test.values);
            for (std::size_t c = 0; c < config.svd->rank; ++c)
                reduced_train.column_names.push_back("svd_" + std::to_string(c));
            reduced_test.column_names = reduced_train.column_names;
            x_train = std::move(reduced_train);
            x_test = std::move(reduced_test);
        }

        TrainedModel model =
            config.model == ModelKind::Ols
                ? fit_ols(x_train, split.train.target, config.class_weight)
                : fit_logistic(x_train, split.train.target, 500, 1e-7, config.class_weight);
        result.model_json = model.to_json();

        std::vector<double> scores = predict_proba(model, x_test);
        std::vector<int> labels = predict_label(scores, config.threshold);

        result.test_targets = split.test.target;
        result.predictions = labels;
        result.report = classification_report(split.test.target, labels);
        result.cm = confusion(split.test.target, labels);
        result.roc = roc_curve(split.test.target, scores);

        // Fairness slices always come from the raw test frame, projection or not.
        std::vector<SliceSpec> slices =
            config.slices.empty() ? default_slices(config.schema) : config.slices;
        for (const auto& s : slices)
            result.fairness.push_back(build_fairness_report(
                split.test, s.attribute, split.test.target, labels, s.bins,
                config.reference_group));
        return result;
    } catch (const Error& e) {
        throw DataError(std::string(arm_name(arm)) + " arm: " + e.what());
    }
}

AblationReport compare(const RunConfig& config, const ArmResult& baseline, const ArmResult& svd) {
    if (baseline.test_targets != svd.test_targets)
        throw DataError("MismatchedTestSets: arms evaluated on different test rows");
    AblationReport report;
    report.config_echo = config.to_json();
    report.baseline = baseline;
    report.svd = svd;
    report.deltas.accuracy = svd.report.accuracy - baseline.report.accuracy;
    report.deltas.auc = svd.roc.auc - baseline.roc.auc;
    report.deltas.class1_recall = svd.report.class1.recall - baseline.report.class1.recall;
    for (std::size_t i = 0; i < baseline.fairness.size() && i < svd.fairness.size(); ++i) {
        const auto& attr = baseline.fairness[i].attribute;
        report.deltas.fpr_gap[attr] =
            svd.fairness[i].eq_odds_fpr_gap - baseline.fairness[i].eq_odds_fpr_gap;
        report.deltas.fnr_gap[attr] =
            svd.fairness[i].eq_odds_fnr_gap - baseline.fairness[i].eq_odds_fnr_gap;
    }
    if (svd.report.class1.recall == 0.0 && baseline.report.class1.recall > 0.0)
        report.flags.push_back("degenerate minority-class predictor under SVD");
    if (svd.cm.tp + svd.cm.fp == 0)
        report.flags.push_back("SVD arm predicts no positives");
    return report;
}

std::string render_arm_text(const ArmResult& arm) {
    std::ostringstream os;
    os << "=== Arm: " << arm_name(arm.arm);
    if (arm.svd_config) os << " (rank " << arm.svd_config->rank << ")";
    os << " ===\n";
    render_report_table(os, arm.report);
    os << "  ROC AUC: " << fixed4(arm.roc.auc) << "\n";
    os << "  Confusion: tp=" << arm.cm.tp << " fp=" << arm.cm.fp << " tn=" << arm.cm.tn
       << " fn=" << arm.cm.fn << "\n";
    os << "  Type I rate: " << fixed4(type1_rate(arm.cm))
       << "  Type II rate: " << fixed4(type2_rate(arm.cm)) << "\n";
    for (const auto& f : arm.fairness) render_fairness_text(os, f);
    return os.str();
}

std::string arm_to_json(const ArmResult& arm) { return arm_to_json_doc(arm).dump(2); }

std::string render_report(const AblationReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ojson doc;
        doc["config"] = ojson::parse(report.config_echo);
        doc["baseline"] = arm_to_json_doc(report.baseline);
        doc["svd"] = arm_to_json_doc(report.svd);
        ojson deltas;
        deltas["accuracy"] = report.deltas.accuracy;
        deltas["auc"] = report.deltas.auc;
        deltas["class1_recall"] = report.deltas.class1_recall;
        ojson fpr, fnr;
        for (const auto& [k, v] : report.deltas.fpr_gap) fpr[k] = v;
        for (const auto& [k, v] : report.deltas.fnr_gap) fnr[k] = v;
        deltas["fpr_gap"] = fpr;
        deltas["fnr_gap"] = fnr;
        doc["deltas"] = deltas;
        doc["flags"] = report.flags;
        return doc.dump(2) + "\n";
    }
    if (format == ReportFormat::Csv) {
        std::ostringstream os;
        os << "arm,attribute,group,metric,value\n";
        csv_metric_rows(os, report.baseline);
        csv_metric_rows(os, report.svd);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "delta,,,accuracy,%.17g\n", report.deltas.accuracy);
        os << buf;
        std::snprintf(buf, sizeof(buf), "delta,,,auc,%.17g\n", report.deltas.auc);
        os << buf;
        std::snprintf(buf, sizeof(buf), "delta,,,class1_recall,%.17g\n",
                      report.deltas.class1_recall);
        os << buf;
        for (const auto& [k, v] : report.deltas.fpr_gap) {
            std::snprintf(buf, sizeof(buf), "delta,%s,,fpr_gap,%.17g\n", k.c_str(), v);
            os << buf;
        }
        for (const auto& [k, v] : report.deltas.fnr_gap) {
            std::snprintf(buf, sizeof(buf), "delta,%s,,fnr_gap,%.17g\n", k.c_str(), v);
            os << buf;
        }
        return os.str();
    }
    std::ostringstream os;
    os << render_arm_text(report.baseline) << "\n" << render_arm_text(report.svd) << "\n";
    os << "=== Deltas (svd - baseline) ===\n";
    os << "  accuracy: " << fixed4(report.deltas.accuracy) << "\n";
    os << "  auc: " << fixed4(report.deltas.auc) << "\n";
    os << "  class-1 recall: " << fixed4(report.deltas.class1_recall) << "\n";
    for (const auto& [k, v] : report.deltas.fnr_gap)
        os << "  fnr gap (" << k << "): " << fixed4(v) << "\n";
    for (const auto& [k, v] : report.deltas.fpr_gap)
        os << "  fpr gap (" << k << "): " << fixed4(v) << "\n";
    for (const auto& f : report.flags) os << "  flag: " << f << "\n";
    return os.str();
}

std::string render_single(const RunConfig& config, const ArmResult& arm, ReportFormat format) {
    if (format == ReportFormat::Json) {
        ojson doc;
        doc["config"] = ojson::parse(config.to_json());
        doc["result"] = arm_to_json_doc(arm);
        return doc.dump(2) + "\n";
    }
    if (format == ReportFormat::Csv) {
        std::ostringstream os;
        os << "arm,attribute,group,metric,value\n";
        csv_metric_rows(os, arm);
        return os.str();
    }
    return render_arm_text(arm);
}

AblationReport parse_report_json(const std::string& text) {
    ojson doc = ojson::parse(text);
    AblationReport report;
    report.config_echo = doc.at("config").dump(2);
    report.baseline = arm_from_json(doc.at("baseline"));
    report.svd = arm_from_json(doc.at("svd"));
    report.deltas.accuracy = doc.at("deltas").at("accuracy").get<double>();
    report.deltas.auc = doc.at("deltas").at("auc").get<double>();
    report.deltas.class1_recall = doc.at("deltas").at("class1_recall").get<double>();
    for (const auto& [k, v] : doc.at("deltas").at("fpr_gap").items())
        report.deltas.fpr_gap[k] = v.get<double>();
    for (const auto& [k, v] : doc.at("deltas").at("fnr_gap").items())
        report.deltas.fnr_gap[k] = v.get<double>();
    report.flags = doc.at("flags").get<std::vector<std::string>>();
    return report;
}

}  // namespace pdkit
