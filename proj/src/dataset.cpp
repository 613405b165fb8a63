#include "pdkit/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace pdkit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_na(const ColumnSpec& spec, const std::string& cell) {
    return std::find(spec.na_tokens.begin(), spec.na_tokens.end(), cell) != spec.na_tokens.end();
}

std::string cell_location(std::size_t row, const std::string& col) {
    return " (row " + std::to_string(row + 1) + ", column '" + col + "')";
}

// RFC-4180-style reader: quoted fields may contain delimiters and newlines.
std::vector<std::vector<std::string>> read_csv_records(std::istream& in, char delim) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == delim) {
            record.push_back(field);
            field.clear();
        } else if (c == '\n') {
            record.push_back(field);
            field.clear();
            records.push_back(record);
            record.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (any && (!field.empty() || !record.empty())) {
        record.push_back(field);
        records.push_back(record);
    }
    return records;
}

std::optional<int> parse_target_token(const std::string& raw) {
    std::string t = trim(raw);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "1" || t == "y" || t == "yes" || t == "true") return 1;
    if (t == "0" || t == "n" || t == "no" || t == "false") return 0;
    return std::nullopt;
}

std::string kind_to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Target: return "target";
        case ColumnKind::SensitiveCategorical: return "sensitive-categorical";
    }
    return "numeric";
}

ColumnKind kind_from_string(const std::string& s) {
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "target") return ColumnKind::Target;
    if (s == "sensitive-categorical") return ColumnKind::SensitiveCategorical;
    throw DataError("unknown column kind '" + s + "'");
}

void validate_schema(const std::vector<ColumnSpec>& schema) {
    int n_target = 0;
    for (const auto& spec : schema) {
        if (spec.kind == ColumnKind::Target) ++n_target;
        if (spec.kind == ColumnKind::Categorical || spec.kind == ColumnKind::SensitiveCategorical) {
            if (spec.categories.empty())
                throw DataError("categorical column '" + spec.name + "' has no categories");
            auto sorted = spec.categories;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw DataError("categorical column '" + spec.name + "' has duplicate categories");
        }
    }
    if (n_target != 1)
        throw DataError("schema must contain exactly one target column, found " +
                        std::to_string(n_target));
}

}  // namespace

int FeatureFrame::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (schema[i].name == name) return static_cast<int>(i);
    return -1;
}

FeatureFrame FeatureFrame::take(const std::vector<std::size_t>& indices) const {
    FeatureFrame out;
    out.schema = schema;
    out.n_rows = indices.size();
    out.numeric.resize(schema.size());
    out.categorical.resize(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (!numeric[c].empty()) {
            out.numeric[c].reserve(indices.size());
            for (auto i : indices) out.numeric[c].push_back(numeric[c][i]);
        }
        if (!categorical[c].empty()) {
            out.categorical[c].reserve(indices.size());
            for (auto i : indices) out.categorical[c].push_back(categorical[c][i]);
        }
    }
    out.target.reserve(indices.size());
    for (auto i : indices) out.target.push_back(target[i]);
    return out;
}

std::vector<ColumnSpec> load_schema_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("schema JSON parse failure in " + path + ": " + e.what());
    }
    std::vector<ColumnSpec> schema;
    for (const auto& item : doc.at("columns")) {
        ColumnSpec spec;
        spec.name = item.at("name").get<std::string>();
        spec.kind = kind_from_string(item.at("kind").get<std::string>());
        if (item.contains("categories"))
            spec.categories = item["categories"].get<std::vector<std::string>>();
        if (item.contains("na_tokens"))
            spec.na_tokens = item["na_tokens"].get<std::vector<std::string>>();
        schema.push_back(std::move(spec));
    }
    validate_schema(schema);
    return schema;
}

void save_schema_json(const std::vector<ColumnSpec>& schema, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& spec : schema) {
        nlohmann::ordered_json item;
        item["name"] = spec.name;
        item["kind"] = kind_to_string(spec.kind);
        if (!spec.categories.empty()) item["categories"] = spec.categories;
        item["na_tokens"] = spec.na_tokens;
        doc["columns"].push_back(item);
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write schema file: " + path);
    out << doc.dump(2) << "\n";
}

FeatureFrame load_csv(const std::string& path, const std::vector<ColumnSpec>& schema,
                      const CsvOptions& opts) {
    validate_schema(schema);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file: " + path);
    auto records = read_csv_records(in, opts.delimiter);
    if (records.empty()) throw DataError("empty CSV file: " + path);

    const auto& header = records.front();
    std::vector<std::size_t> col_pos(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == schema[c].name; });
        if (it == header.end())
            throw DataError("MissingColumn: schema column '" + schema[c].name +
                            "' absent from CSV header");
        col_pos[c] = static_cast<std::size_t>(it - header.begin());
    }

    FeatureFrame frame;
    frame.schema = schema;
    frame.n_rows = records.size() - 1;
    frame.numeric.resize(schema.size());
    frame.categorical.resize(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].kind == ColumnKind::Numeric)
            frame.numeric[c].resize(frame.n_rows);
        else if (frame.is_categorical_kind(c))
            frame.categorical[c].resize(frame.n_rows);
    }
    frame.target.resize(frame.n_rows);

    for (std::size_t r = 0; r < frame.n_rows; ++r) {
        const auto& record = records[r + 1];
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const ColumnSpec& spec = schema[c];
            if (col_pos[c] >= record.size())
                throw DataError("ParseError: short record" + cell_location(r, spec.name));
            std::string cell = trim(record[col_pos[c]]);
            if (spec.kind == ColumnKind::Target) {
                if (is_na(spec, cell))
                    throw DataError("BadTarget: missing target value" + cell_location(r, spec.name));
                auto t = parse_target_token(cell);
                if (!t)
                    throw DataError("BadTarget: '" + cell + "' is not a binary label" +
                                    cell_location(r, spec.name));
                frame.target[r] = *t;
            } else if (spec.kind == ColumnKind::Numeric) {
                if (is_na(spec, cell)) continue;
                char* end = nullptr;
                double v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0' || !std::isfinite(v))
                    throw DataError("ParseError: '" + cell + "' is not numeric" +
                                    cell_location(r, spec.name));
                frame.numeric[c][r] = v;
            } else {
                if (is_na(spec, cell)) continue;
                auto it = std::find(spec.categories.begin(), spec.categories.end(), cell);
                if (it == spec.categories.end())
                    throw DataError("ParseError: category '" + cell + "' not in schema roster" +
                                    cell_location(r, spec.name));
                frame.categorical[c][r] = static_cast<int>(it - spec.categories.begin());
            }
        }
    }
    return frame;
}

void write_csv(const FeatureFrame& frame, const std::string& path, const CsvOptions& opts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CSV file: " + path);
    auto quote_if_needed = [&](const std::string& s) {
        if (s.find(opts.delimiter) == std::string::npos && s.find('"') == std::string::npos &&
            s.find('\n') == std::string::npos)
            return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        q += '"';
        return q;
    };
    for (std::size_t c = 0; c < frame.schema.size(); ++c) {
        if (c) out << opts.delimiter;
        out << quote_if_needed(frame.schema[c].name);
    }
    out << "\n";
    char buf[64];
    for (std::size_t r = 0; r < frame.n_rows; ++r) {
        for (std::size_t c = 0; c < frame.schema.size(); ++c) {
            if (c) out << opts.delimiter;
            const ColumnSpec& spec = frame.schema[c];
            if (spec.kind == ColumnKind::Target) {
                out << frame.target[r];
            } else if (spec.kind == ColumnKind::Numeric) {
                const auto& v = frame.numeric[c][r];
                if (!v) {
                    out << (spec.na_tokens.empty() ? "" : spec.na_tokens.front());
                } else {
                    std::snprintf(buf, sizeof(buf), "%.17g", *v);
                    out << buf;
                }
            } else {
                const auto& v = frame.categorical[c][r];
                if (!v)
                    out << (spec.na_tokens.empty() ? "" : spec.na_tokens.front());
                else
                    out << quote_if_needed(spec.categories[static_cast<std::size_t>(*v)]);
            }
        }
        out << "\n";
    }
}

FeatureFrame synthesize(std::size_t n_rows, const std::vector<ColumnSpec>& schema,
                        double default_rate, const std::map<std::string, double>& group_effects,
                        std::uint64_t seed) {
    validate_schema(schema);
    if (n_rows < 10) throw UsageError("synthesize: n_rows must be at least 10");
    if (!(default_rate > 0.0 && default_rate < 1.0))
        throw UsageError("synthesize: default_rate must lie in (0,1)");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FeatureFrame frame;
    frame.schema = schema;
    frame.n_rows = n_rows;
    frame.numeric.resize(schema.size());
    frame.categorical.resize(schema.size());
    frame.target.resize(n_rows);

    std::size_t n_numeric_features = 0;
    for (const auto& spec : schema)
        if (spec.kind == ColumnKind::Numeric) ++n_numeric_features;

    // Latent log-odds, filled column by column so the draw order is fixed.
    std::vector<double> logit(n_rows, 0.0);
    const double numeric_scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(
                                           n_numeric_features, 1)));
    std::size_t numeric_seen = 0;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const ColumnSpec& spec = schema[c];
        if (spec.kind == ColumnKind::Target) continue;
        if (spec.kind == ColumnKind::Numeric) {
            frame.numeric[c].resize(n_rows);
            const double beta = 0.8 * numeric_scale * (numeric_seen % 2 == 0 ? 1.0 : -1.0);
            ++numeric_seen;
            if (spec.name == "Age") {
                std::uniform_int_distribution<int> ages(18, 69);
                for (std::size_t r = 0; r < n_rows; ++r) {
                    int a = ages(rng);
                    frame.numeric[c][r] = static_cast<double>(a);
                    logit[r] += beta * (a - 43.5) / 15.0;
                }
            } else {
                for (std::size_t r = 0; r < n_rows; ++r) {
                    double z = gauss(rng);
                    frame.numeric[c][r] = z;
                    logit[r] += beta * z;
                }
            }
        } else {
            frame.categorical[c].resize(n_rows);
            const std::size_t n_cat = spec.categories.size();
            std::uniform_int_distribution<std::size_t> pick(0, n_cat - 1);
            for (std::size_t r = 0; r < n_rows; ++r) {
                std::size_t k = pick(rng);
                frame.categorical[c][r] = static_cast<int>(k);
                if (spec.kind == ColumnKind::Categorical && n_cat > 1)
                    logit[r] += 0.3 * (static_cast<double>(k) / (n_cat - 1) - 0.5);
                auto it = group_effects.find(spec.name + "=" + spec.categories[k]);
                if (it != group_effects.end()) logit[r] += it->second;
            }
        }
    }

    // Calibrate the intercept so the mean default probability hits default_rate.
    auto mean_prob = [&](double b) {
        double s = 0.0;
        for (double l : logit) s += 1.0 / (1.0 + std::exp(-(b + l)));
        return s / static_cast<double>(n_rows);
    };
    double lo = -30.0, hi = 30.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mean_prob(mid) < default_rate)
            lo = mid;
        else
            hi = mid;
    }
    const double intercept = 0.5 * (lo + hi);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t positives = 0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        double p = 1.0 / (1.0 + std::exp(-(intercept + logit[r])));
        frame.target[r] = unit(rng) < p ? 1 : 0;
        positives += static_cast<std::size_t>(frame.target[r]);
    }
    if (positives == 0 || positives == n_rows)
        throw DataError("DegenerateConfig: default_rate " + std::to_string(default_rate) +
                        " left a class empty at n_rows=" + std::to_string(n_rows));
    return frame;
}

SplitPair split(const FeatureFrame& frame, double test_fraction, std::uint64_t seed,
                bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw UsageError("split: test_fraction must lie in (0,1)");
    std::size_t n = frame.n_rows;
    std::size_t n_pos = static_cast<std::size_t>(
        std::count(frame.target.begin(), frame.target.end(), 1));
    std::size_t n_neg = n - n_pos;
    if (n_pos < 2 || n_neg < 2)
        throw DataError("TooFewRows: each class needs at least 2 rows (have " +
                        std::to_string(n_neg) + "/" + std::to_string(n_pos) + ")");

    const std::size_t test_total =
        static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> test_idx, train_idx;

    if (stratified) {
        std::vector<std::vector<std::size_t>> by_class(2);
        for (std::size_t i = 0; i < n; ++i)
            by_class[static_cast<std::size_t>(frame.target[i])].push_back(i);
        // Largest-remainder apportionment of the test quota across classes:
        // each class stays within 1 of its exact share.
        double exact0 = test_fraction * static_cast<double>(by_class[0].size());
        double exact1 = test_fraction * static_cast<double>(by_class[1].size());
        std::size_t q0 = static_cast<std::size_t>(std::floor(exact0));
        std::size_t q1 = static_cast<std::size_t>(std::floor(exact1));
        std::size_t remaining = test_total - q0 - q1;
        double rem0 = exact0 - static_cast<double>(q0);
        double rem1 = exact1 - static_cast<double>(q1);
        while (remaining > 0) {
            if (rem0 >= rem1) {
                ++q0;
                rem0 -= 1.0;
            } else {
                ++q1;
                rem1 -= 1.0;
            }
            --remaining;
        }
        std::array<std::size_t, 2> quota = {q0, q1};
        for (int cls = 0; cls < 2; ++cls) {
            auto& idx = by_class[static_cast<std::size_t>(cls)];
            if (quota[static_cast<std::size_t>(cls)] == 0 ||
                quota[static_cast<std::size_t>(cls)] >= idx.size())
                throw DataError("TooFewRows: class " + std::to_string(cls) +
                                " would be empty on one side of the split");
            std::shuffle(idx.begin(), idx.end(), rng);
            test_idx.insert(test_idx.end(), idx.begin(),
                            idx.begin() + static_cast<std::ptrdiff_t>(
                                              quota[static_cast<std::size_t>(cls)]));
            train_idx.insert(train_idx.end(),
                             idx.begin() + static_cast<std::ptrdiff_t>(
                                               quota[static_cast<std::size_t>(cls)]),
                             idx.end());
        }
    } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(test_total));
        train_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(test_total), idx.end());
        auto count_pos = [&](const std::vector<std::size_t>& v) {
            std::size_t p = 0;
            for (auto i : v) p += static_cast<std::size_t>(frame.target[i]);
            return p;
        };
        std::size_t tp = count_pos(test_idx), rp = count_pos(train_idx);
        if (tp == 0 || tp == test_idx.size() || rp == 0 || rp == train_idx.size())
            throw DataError("TooFewRows: a class is empty on one side of the split");
    }

    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    SplitPair pair;
    pair.train = frame.take(train_idx);
    pair.test = frame.take(test_idx);
    pair.seed = seed;
    pair.test_fraction = test_fraction;
    return pair;
}

std::vector<ColumnSpec> schema_loanstatus() {
    return {
        {"Gender", ColumnKind::SensitiveCategorical, {"Male", "Female"}},
        {"Married", ColumnKind::SensitiveCategorical, {"Yes", "No"}},
        {"Dependents", ColumnKind::Categorical, {"0", "1", "2", "3+"}},
        {"Education", ColumnKind::Categorical, {"Graduate", "Not Graduate"}},
        {"ApplicantIncome", ColumnKind::Numeric, {}},
        {"CoapplicantIncome", ColumnKind::Numeric, {}},
        {"LoanAmount", ColumnKind::Numeric, {}},
        {"Loan_Amount_Term", ColumnKind::Numeric, {}},
        {"Credit_History", ColumnKind::Numeric, {}},
        {"Property_Area", ColumnKind::Categorical, {"Urban", "Semiurban", "Rural"}},
        {"Loan_Status", ColumnKind::Target, {}},
    };
}

std::vector<ColumnSpec> schema_kaggle_default() {
    return {
        {"Age", ColumnKind::Numeric, {}},
        {"Income", ColumnKind::Numeric, {}},
        {"LoanAmount", ColumnKind::Numeric, {}},
        {"CreditScore", ColumnKind::Numeric, {}},
        {"MonthsEmployed", ColumnKind::Numeric, {}},
        {"NumCreditLines", ColumnKind::Numeric, {}},
        {"InterestRate", ColumnKind::Numeric, {}},
        {"LoanTerm", ColumnKind::Numeric, {}},
        {"DTIRatio", ColumnKind::Numeric, {}},
        {"Education", ColumnKind::Categorical, {"Bachelor's", "High School", "Master's", "PhD"}},
        {"EmploymentType", ColumnKind::Categorical,
         {"Full-time", "Part-time", "Self-employed", "Unemployed"}},
        {"MaritalStatus", ColumnKind::SensitiveCategorical, {"Divorced", "Married", "Single"}},
        {"HasMortgage", ColumnKind::Categorical, {"No", "Yes"}},
        {"HasDependents", ColumnKind::Categorical, {"No", "Yes"}},
        {"LoanPurpose", ColumnKind::Categorical, {"Auto", "Business", "Education", "Home", "Other"}},
        {"HasCoSigner", ColumnKind::Categorical, {"No", "Yes"}},
        {"Default", ColumnKind::Target, {}},
    };
}

}  // namespace pdkit
