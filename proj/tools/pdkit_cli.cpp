#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdkit/harness.hpp"

namespace {

using namespace pdkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string default_out_dir() {
    const char* env = std::getenv("PDKIT_OUT_DIR");
    return env ? env : ".";
}

// Write to a temp file, rename on success: no half-written reports on error.
void atomic_write(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write output file: " + path);
        out << content;
        if (!out) throw DataError("write failure on: " + path);
    }
    std::filesystem::rename(tmp, target);
}

std::vector<ColumnSpec> resolve_schema(const std::string& arg) {
    if (arg == "kaggle") return schema_kaggle_default();
    if (arg == "loanstatus") return schema_loanstatus();
    return load_schema_json(arg);
}

ReportFormat parse_format(const std::string& s) {
    if (s == "text") return ReportFormat::Text;
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    throw UsageError("--format must be one of text, json, csv (got '" + s + "')");
}

// "18-30,31-40,61+" -> numeric bands, inclusive both ends.
std::vector<NumericBand> parse_bins(const std::string& spec) {
    std::vector<NumericBand> bands;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        NumericBand band;
        band.label = token;
        if (token.back() == '+') {
            band.lo = std::stod(token.substr(0, token.size() - 1));
            band.hi = std::numeric_limits<double>::infinity();
        } else {
            auto dash = token.find('-', 1);
            if (dash == std::string::npos)
                throw UsageError("bad band '" + token + "': expected lo-hi or lo+");
            band.lo = std::stod(token.substr(0, dash));
            band.hi = std::stod(token.substr(dash + 1));
        }
        bands.push_back(band);
    }
    if (bands.empty()) throw UsageError("EmptyBins: no bands in '" + spec + "'");
    return bands;
}

std::vector<SliceSpec> parse_group_by(const std::vector<std::string>& specs) {
    std::vector<SliceSpec> out;
    for (const auto& s : specs) {
        auto colon = s.find(':');
        if (colon == std::string::npos)
            out.push_back({s, {}});
        else
            out.push_back({s.substr(0, colon), parse_bins(s.substr(colon + 1))});
    }
    return out;
}

SynthConfig load_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open synth config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("synth config parse failure: " + std::string(e.what()));
    }
    SynthConfig cfg;
    cfg.n_rows = doc.at("n_rows").get<std::size_t>();
    cfg.default_rate = doc.at("default_rate").get<double>();
    if (doc.contains("group_effects"))
        for (const auto& [k, v] : doc["group_effects"].items())
            cfg.group_effects[k] = v.get<double>();
    return cfg;
}

struct CommonFlags {
    std::string data_path;
    std::string synth_config_path;
    std::string schema_arg = "kaggle";
    std::string model = "ols";
    double threshold = 0.5;
    double class_weight = 1.0;
    int svd_rank = -1;
    std::size_t oversampling = 10;
    std::size_t power_iters = 2;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    std::vector<std::string> group_by;
    bool include_sensitive = false;
    std::string reference;
    std::string format = "text";
    std::string out;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool svd_required) {
    cmd->add_option("--data", f.data_path, "input CSV path");
    cmd->add_option("--synth-config", f.synth_config_path, "synthetic data config JSON");
    cmd->add_option("--schema", f.schema_arg, "schema: 'kaggle', 'loanstatus', or a JSON path");
    cmd->add_option("--model", f.model, "model kind: ols or logistic")
        ->check(CLI::IsMember({"ols", "logistic"}));
    cmd->add_option("--threshold", f.threshold, "classification threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--class-weight", f.class_weight, "positive-class weight")
        ->check(CLI::PositiveNumber);
    auto* rank = cmd->add_option("--svd-rank", f.svd_rank, "truncation rank k")
                     ->check(CLI::PositiveNumber);
    if (svd_required) rank->required();
    cmd->add_option("--oversampling", f.oversampling, "range-finder oversampling");
    cmd->add_option("--power-iters", f.power_iters, "subspace power iterations");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--test-fraction", f.test_fraction, "held-out fraction")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--group-by", f.group_by,
                    "fairness attribute, optionally attr:lo-hi,...,lo+ for numeric bands");
    cmd->add_flag("--include-sensitive", f.include_sensitive,
                  "include sensitive attributes as model features");
    cmd->add_option("--reference", f.reference, "disparate-impact reference group");
    cmd->add_option("--format", f.format, "report format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--out", f.out, "output file path");
}

RunConfig build_config(const CommonFlags& f, bool need_svd) {
    if (f.data_path.empty() == f.synth_config_path.empty())
        throw UsageError("exactly one of --data and --synth-config must be given");
    RunConfig cfg;
    cfg.schema = resolve_schema(f.schema_arg);
    if (!f.data_path.empty())
        cfg.csv_path = f.data_path;
    else
        cfg.synth = load_synth_config(f.synth_config_path);
    cfg.seed = f.seed;
    cfg.test_fraction = f.test_fraction;
    cfg.model = f.model == "ols" ? ModelKind::Ols : ModelKind::Logistic;
    cfg.threshold = f.threshold;
    cfg.class_weight = f.class_weight;
    if (f.svd_rank > 0) {
        cfg.svd = SvdConfig{static_cast<std::size_t>(f.svd_rank), f.oversampling, f.power_iters};
    } else if (need_svd) {
        throw UsageError("--svd-rank is required and must be >= 1");
    }
    cfg.slices = parse_group_by(f.group_by);
    if (cfg.slices.empty()) cfg.slices = default_slices(cfg.schema);
    cfg.include_sensitive_in_features = f.include_sensitive;
    cfg.reference_group = f.reference;
    cfg.format = parse_format(f.format);
    return cfg;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

int run_main(int argc, char** argv) {
    CLI::App app{"probability-of-default modeling with a truncated-SVD ablation"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic loan CSV");
    std::size_t synth_rows = 10000;
    double synth_rate = 0.1155;
    std::uint64_t synth_seed = 0;
    std::string synth_schema = "kaggle";
    std::string synth_out;
    std::vector<std::string> synth_effects;
    synth_cmd->add_option("--rows", synth_rows, "row count")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--default-rate", synth_rate, "target default rate")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    synth_cmd->add_option("--seed", synth_seed, "random seed");
    synth_cmd->add_option("--schema", synth_schema, "schema preset or JSON path");
    synth_cmd->add_option("--group-effect", synth_effects,
                          "column=category=log-odds-shift, repeatable");
    synth_cmd->add_option("--out", synth_out, "output CSV path")->required();

    // run / ablate
    auto* run_cmd = app.add_subcommand("run", "single-arm training and evaluation");
    CommonFlags run_flags;
    add_common_flags(run_cmd, run_flags, false);
    auto* ablate_cmd = app.add_subcommand("ablate", "paired baseline-vs-SVD ablation");
    CommonFlags ablate_flags;
    add_common_flags(ablate_cmd, ablate_flags, true);

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "dump design-matrix singular values");
    CommonFlags spec_flags;
    add_common_flags(spectrum_cmd, spec_flags, false);

    // report
    auto* report_cmd = app.add_subcommand("report", "re-render a JSON ablation report");
    std::string report_in, report_format = "text", report_out;
    report_cmd->add_option("--in", report_in, "report JSON path")->required();
    report_cmd->add_option("--format", report_format, "text or csv")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    report_cmd->add_option("--out", report_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the offending flag + domain
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (synth_cmd->parsed()) {
        std::map<std::string, double> effects;
        for (const auto& e : synth_effects) {
            auto last_eq = e.rfind('=');
            if (last_eq == std::string::npos || last_eq == 0)
                throw UsageError("--group-effect expects column=category=shift, got '" + e + "'");
            effects[e.substr(0, last_eq)] = std::stod(e.substr(last_eq + 1));
        }
        auto schema = resolve_schema(synth_schema);
        std::cerr << "synth: rows=" << synth_rows << " default_rate=" << synth_rate
                  << " seed=" << synth_seed << " schema=" << synth_schema
                  << " out=" << synth_out << "\n";
        FeatureFrame frame = synthesize(synth_rows, schema, synth_rate, effects, synth_seed);
        std::filesystem::path tmp = synth_out + ".tmp";
        write_csv(frame, tmp.string());
        std::filesystem::rename(tmp, synth_out);
        return kExitOk;
    }

    if (run_cmd->parsed()) {
        RunConfig cfg = build_config(run_flags, false);
        std::cerr << cfg.to_json() << "\n";
        FeatureFrame frame = materialize_frame(cfg);
        SplitPair pair = split(frame, cfg.test_fraction, cfg.seed, true);
        ArmResult result = run_arm(cfg, cfg.svd ? Arm::Svd : Arm::Baseline, pair);
        std::string out_path =
            run_flags.out.empty() && cfg.format != ReportFormat::Text
                ? default_out_dir() + "/run_report." + run_flags.format
                : run_flags.out;
        emit(render_single(cfg, result, cfg.format), out_path);
        return kExitOk;
    }

    if (ablate_cmd->parsed()) {
        RunConfig cfg = build_config(ablate_flags, true);
        std::cerr << cfg.to_json() << "\n";
        FeatureFrame frame = materialize_frame(cfg);
        SplitPair pair = split(frame, cfg.test_fraction, cfg.seed, true);
        ArmResult baseline = run_arm(cfg, Arm::Baseline, pair);
        ArmResult svd = run_arm(cfg, Arm::Svd, pair);
        AblationReport report = compare(cfg, baseline, svd);
        std::string out_path = ablate_flags.out;
        if (out_path.empty() && cfg.format != ReportFormat::Text)
            out_path = default_out_dir() + "/ablation_report." + ablate_flags.format;
        emit(render_report(report, cfg.format), out_path);
        // ROC points for each arm land next to the report.
        if (!out_path.empty()) {
            for (const auto* arm : {&report.baseline, &report.svd}) {
                std::ostringstream roc;
                write_roc_csv(arm->roc, roc);
                atomic_write(out_path + "." + (arm->arm == Arm::Baseline ? "baseline" : "svd") +
                                 ".roc.csv",
                             roc.str());
            }
        }
        return kExitOk;
    }

    if (spectrum_cmd->parsed()) {
        RunConfig cfg = build_config(spec_flags, false);
        std::cerr << cfg.to_json() << "\n";
        FeatureFrame frame = materialize_frame(cfg);
        PreprocessPlan plan = fit_plan(frame, cfg.include_sensitive_in_features);
        DesignMatrix design = apply_plan(plan, frame);
        std::size_t k = std::min(design.row_count(), design.col_count());
        TruncatedFactors factors =
            truncated_svd(design.values, k, cfg.svd ? cfg.svd->oversampling : 10,
                          cfg.svd ? cfg.svd->power_iters : 2, cfg.seed);
        std::ostringstream os;
        dump_spectrum(factors.sigma, os);
        emit(os.str(), spec_flags.out);
        return kExitOk;
    }

    if (report_cmd->parsed()) {
        std::ifstream in(report_in);
        if (!in) throw DataError("cannot open report: " + report_in);
        std::stringstream buffer;
        buffer << in.rdbuf();
        AblationReport report = parse_report_json(buffer.str());
        emit(render_report(report, parse_format(report_format)), report_out);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
