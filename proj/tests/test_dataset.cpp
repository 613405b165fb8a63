#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "pdkit/dataset.hpp"

using namespace pdkit;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::vector<ColumnSpec> tiny_schema() {
    return {
        {"income", ColumnKind::Numeric, {}},
        {"area", ColumnKind::Categorical, {"Urban", "Rural"}},
        {"label", ColumnKind::Target, {}},
    };
}

}  // namespace

TEST_CASE("load_csv parses values and NA tokens") {
    auto path = write_temp("pdkit_tiny.csv",
                           "income,area,label\n"
                           "1200.5,Urban,0\n"
                           "NA,Rural,1\n"
                           "800,Urban,0\n");
    FeatureFrame frame = load_csv(path, tiny_schema());
    CHECK(frame.n_rows == 3);
    CHECK(frame.numeric[0][0] == doctest::Approx(1200.5));
    CHECK(!frame.numeric[0][1].has_value());
    CHECK(frame.categorical[1][1] == 1);
    CHECK(frame.target == std::vector<int>{0, 1, 0});
}

TEST_CASE("load_csv error paths carry locations") {
    auto no_target = write_temp("pdkit_nt.csv", "income,area\n1,Urban\n");
    CHECK_THROWS_WITH_AS(load_csv(no_target, tiny_schema()),
                         doctest::Contains("MissingColumn"), DataError);

    auto bad_target = write_temp("pdkit_bt.csv", "income,area,label\n1,Urban,maybe\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_target, tiny_schema()),
                         doctest::Contains("BadTarget"), DataError);

    auto bad_numeric = write_temp("pdkit_bn.csv", "income,area,label\nabc,Urban,1\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_numeric, tiny_schema()),
                         doctest::Contains("row 1"), DataError);
}

TEST_CASE("load_csv handles quoted fields") {
    std::vector<ColumnSpec> schema = {
        {"name", ColumnKind::Categorical, {"a,b", "plain"}},
        {"label", ColumnKind::Target, {}},
    };
    auto path = write_temp("pdkit_q.csv", "name,label\n\"a,b\",1\nplain,0\n");
    FeatureFrame frame = load_csv(path, schema);
    CHECK(frame.categorical[0][0] == 0);
    CHECK(frame.categorical[0][1] == 1);
}

TEST_CASE("synthesize is deterministic and calibrated") {
    auto schema = schema_kaggle_default();
    FeatureFrame a = synthesize(20000, schema, 0.1155, {}, 7);
    FeatureFrame b = synthesize(20000, schema, 0.1155, {}, 7);
    CHECK(a.target == b.target);
    CHECK(a.numeric == b.numeric);
    CHECK(a.categorical == b.categorical);

    double rate = std::count(a.target.begin(), a.target.end(), 1) / 20000.0;
    CHECK(rate == doctest::Approx(0.1155).epsilon(0.1));
    CHECK(std::abs(rate - 0.1155) < 0.01);

    FeatureFrame c = synthesize(20000, schema, 0.1155, {}, 8);
    CHECK(a.target != c.target);
}

TEST_CASE("zero group effects leave per-group default rates balanced") {
    auto schema = schema_kaggle_default();
    FeatureFrame frame = synthesize(60000, schema, 0.2, {}, 3);
    int col = frame.column_index("MaritalStatus");
    REQUIRE(col >= 0);
    std::vector<double> pos(3, 0.0), n(3, 0.0);
    for (std::size_t r = 0; r < frame.n_rows; ++r) {
        int g = *frame.categorical[static_cast<std::size_t>(col)][r];
        n[static_cast<std::size_t>(g)] += 1.0;
        pos[static_cast<std::size_t>(g)] += frame.target[r];
    }
    for (int g = 0; g < 3; ++g)
        CHECK(pos[static_cast<std::size_t>(g)] / n[static_cast<std::size_t>(g)] ==
              doctest::Approx(0.2).epsilon(0.1));
}

TEST_CASE("group effects shift per-group base rates") {
    auto schema = schema_kaggle_default();
    FeatureFrame frame = synthesize(60000, schema, 0.2, {{"MaritalStatus=Single", 1.0}}, 3);
    int col = frame.column_index("MaritalStatus");
    double single_pos = 0, single_n = 0, other_pos = 0, other_n = 0;
    for (std::size_t r = 0; r < frame.n_rows; ++r) {
        int g = *frame.categorical[static_cast<std::size_t>(col)][r];
        if (g == 2) {
            single_n += 1;
            single_pos += frame.target[r];
        } else {
            other_n += 1;
            other_pos += frame.target[r];
        }
    }
    CHECK(single_pos / single_n > other_pos / other_n + 0.1);
}

TEST_CASE("synthesize rejects bad configs") {
    auto schema = schema_kaggle_default();
    CHECK_THROWS_AS(synthesize(5, schema, 0.5, {}, 1), UsageError);
    CHECK_THROWS_AS(synthesize(100, schema, 1.5, {}, 1), UsageError);
    CHECK_THROWS_AS(synthesize(20, schema, 1e-9, {}, 1), DataError);  // empty positive class
}

TEST_CASE("round-trip: synthesize -> write_csv -> load_csv is exact") {
    auto schema = schema_kaggle_default();
    FeatureFrame frame = synthesize(500, schema, 0.2, {}, 11);
    auto path = (std::filesystem::temp_directory_path() / "pdkit_rt.csv").string();
    write_csv(frame, path);
    FeatureFrame loaded = load_csv(path, schema);
    CHECK(loaded.n_rows == frame.n_rows);
    CHECK(loaded.numeric == frame.numeric);
    CHECK(loaded.categorical == frame.categorical);
    CHECK(loaded.target == frame.target);
}

TEST_CASE("schema JSON round-trips") {
    auto path = (std::filesystem::temp_directory_path() / "pdkit_schema.json").string();
    save_schema_json(schema_loanstatus(), path);
    auto schema = load_schema_json(path);
    REQUIRE(schema.size() == schema_loanstatus().size());
    CHECK(schema[0].name == "Gender");
    CHECK(schema[0].kind == ColumnKind::SensitiveCategorical);
    CHECK(schema.back().kind == ColumnKind::Target);
}

TEST_CASE("stratified split hits exact proportions on a clean case") {
    auto schema = tiny_schema();
    FeatureFrame frame;
    frame.schema = schema;
    frame.n_rows = 100;
    frame.numeric.resize(3);
    frame.categorical.resize(3);
    frame.numeric[0].assign(100, 1.0);
    frame.categorical[1].assign(100, 0);
    for (std::size_t i = 0; i < 100; ++i) frame.target.push_back(i < 10 ? 1 : 0);

    SplitPair pair = split(frame, 0.2, 42, true);
    CHECK(pair.test.n_rows == 20);
    CHECK(std::count(pair.test.target.begin(), pair.test.target.end(), 1) == 2);
    CHECK(pair.train.n_rows + pair.test.n_rows == 100);

    SplitPair again = split(frame, 0.2, 42, true);
    CHECK(pair.test.target == again.test.target);
    CHECK(pair.test.numeric == again.test.numeric);
}

TEST_CASE("split of a 255,347-row frame yields a 51,070-row test side") {
    auto schema = schema_kaggle_default();
    FeatureFrame frame = synthesize(255347, schema, 0.1155, {}, 7);
    SplitPair pair = split(frame, 0.2, 1, true);
    CHECK(pair.test.n_rows == 51070);  // ceiling(0.2 * 255347)
    CHECK(pair.train.n_rows == 204277);
}

TEST_CASE("stratified deviation stays within 1 per class across fractions") {
    auto schema = tiny_schema();
    std::mt19937_64 rng(5);
    for (double fraction : {0.1, 0.2, 0.5}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::uniform_int_distribution<std::size_t> size(40, 200);
            std::size_t n = size(rng);
            FeatureFrame frame;
            frame.schema = schema;
            frame.n_rows = n;
            frame.numeric.resize(3);
            frame.categorical.resize(3);
            frame.numeric[0].assign(n, 0.0);
            frame.categorical[1].assign(n, 0);
            std::bernoulli_distribution coin(0.3);
            for (std::size_t i = 0; i < n; ++i) frame.target.push_back(coin(rng));
            std::size_t n1 = static_cast<std::size_t>(
                std::count(frame.target.begin(), frame.target.end(), 1));
            if (n1 < 4 || n - n1 < 4) continue;

            SplitPair pair;
            try {
                pair = split(frame, fraction, trial, true);
            } catch (const DataError&) {
                continue;  // degenerate quota at tiny class counts
            }
            std::size_t t1 = static_cast<std::size_t>(
                std::count(pair.test.target.begin(), pair.test.target.end(), 1));
            std::size_t t0 = pair.test.n_rows - t1;
            CHECK(std::abs(static_cast<double>(t1) - fraction * static_cast<double>(n1)) <=
                  1.0 + 1e-12);
            CHECK(std::abs(static_cast<double>(t0) -
                           fraction * static_cast<double>(n - n1)) <= 1.0 + 1e-12);
            CHECK(pair.train.n_rows + pair.test.n_rows == n);
        }
    }
}

TEST_CASE("split is a partition of the source rows") {
    auto schema = schema_kaggle_default();
    FeatureFrame frame = synthesize(1000, schema, 0.3, {}, 2);
    // Tag rows through a numeric column to track identity across the split.
    int col = frame.column_index("Income");
    for (std::size_t r = 0; r < frame.n_rows; ++r)
        frame.numeric[static_cast<std::size_t>(col)][r] = static_cast<double>(r);
    SplitPair pair = split(frame, 0.25, 9, true);
    std::vector<char> seen(1000, 0);
    for (const auto* side : {&pair.train, &pair.test})
        for (std::size_t r = 0; r < side->n_rows; ++r) {
            auto tag = static_cast<std::size_t>(
                *side->numeric[static_cast<std::size_t>(col)][r]);
            CHECK(!seen[tag]);
            seen[tag] = 1;
        }
    CHECK(std::count(seen.begin(), seen.end(), 1) == 1000);
}

TEST_CASE("split rejects degenerate inputs") {
    auto schema = tiny_schema();
    FeatureFrame frame;
    frame.schema = schema;
    frame.n_rows = 4;
    frame.numeric.resize(3);
    frame.categorical.resize(3);
    frame.numeric[0].assign(4, 0.0);
    frame.categorical[1].assign(4, 0);
    frame.target = {0, 0, 0, 1};
    CHECK_THROWS_AS(split(frame, 0.2, 1, true), DataError);  // lone positive
    frame.target = {0, 0, 1, 1};
    CHECK_THROWS_AS(split(frame, 1.5, 1, true), UsageError);
}
