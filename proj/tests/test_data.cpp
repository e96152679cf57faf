#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "memk/data.hpp"
#include "memk/error.hpp"
#include "memk/rng.hpp"
#include "memk/textio.hpp"
#include "testutil.hpp"

using namespace memk;
using testutil::TempDir;
using testutil::write_text;

namespace {

std::string feature_line(const std::string& id, const std::vector<double>& values) {
    std::string line = id;
    for (double v : values) line += "," + format_real17(v);
    return line + "\n";
}

LabeledDataset random_dataset(size_t n, size_t dim, uint64_t seed) {
    LabeledDataset ds;
    ds.features = Matrix(n, dim);
    Rng rng(seed);
    for (size_t i = 0; i < n; ++i) {
        ds.ids.push_back("vid" + std::to_string(i));
        for (size_t j = 0; j < dim; ++j) ds.features.at(i, j) = rng.normal(0.0, 3.0);
        ds.short_term.push_back(rng.uniform());
        ds.long_term.push_back(rng.uniform());
    }
    return ds;
}

} // namespace

TEST_CASE("load_features parses a 4096-zero line") {
    TempDir dir;
    std::vector<double> zeros(4096, 0.0);
    write_text(dir.file("f.csv"), feature_line("v1", zeros));
    auto records = load_features(dir.file("f.csv"), 4096);
    REQUIRE(records.size() == 1);
    CHECK(records[0].video_id == "v1");
    REQUIRE(records[0].features.size() == 4096);
    for (double v : records[0].features) CHECK(v == 0.0);
}

TEST_CASE("load_features rejects a short line naming line and expected dim") {
    TempDir dir;
    std::vector<double> ok(4096, 0.5), bad(4095, 0.5);
    write_text(dir.file("f.csv"), feature_line("v1", ok) + feature_line("v2", bad));
    CHECK_THROWS_WITH_AS(load_features(dir.file("f.csv"), 4096),
                         doctest::Contains(":2: expected 4096 feature values, found 4095"), Error);
}

TEST_CASE("load_features keeps file order") {
    TempDir dir;
    write_text(dir.file("f.csv"), feature_line("b", {1.0, 2.0}) + feature_line("a", {3.0, 4.0}) +
                                      feature_line("c", {5.0, 6.0}));
    auto records = load_features(dir.file("f.csv"), 2);
    REQUIRE(records.size() == 3);
    CHECK(records[0].video_id == "b");
    CHECK(records[1].video_id == "a");
    CHECK(records[2].video_id == "c");
    CHECK(records[1].features == std::vector<double>{3.0, 4.0});
}

TEST_CASE("load_features skips an optional header") {
    TempDir dir;
    write_text(dir.file("f.csv"), "video_id,f0,f1\n" + feature_line("v1", {1.0, -2.5}));
    auto records = load_features(dir.file("f.csv"), 2);
    REQUIRE(records.size() == 1);
    CHECK(records[0].features[1] == -2.5);
}

TEST_CASE("load_features error cases") {
    TempDir dir;
    SUBCASE("unparseable real") {
        write_text(dir.file("f.csv"), "v1,1.0,abc\n");
        CHECK_THROWS_WITH_AS(load_features(dir.file("f.csv"), 2), doctest::Contains("unparseable"),
                             Error);
    }
    SUBCASE("non-finite real") {
        write_text(dir.file("f.csv"), "v1,1.0,inf\n");
        CHECK_THROWS_AS(load_features(dir.file("f.csv"), 2), Error);
    }
    SUBCASE("duplicate video_id") {
        write_text(dir.file("f.csv"), "v1,1.0,2.0\nv1,3.0,4.0\n");
        CHECK_THROWS_WITH_AS(load_features(dir.file("f.csv"), 2),
                             doctest::Contains("duplicate video_id 'v1'"), Error);
    }
    SUBCASE("empty file") {
        write_text(dir.file("f.csv"), "");
        CHECK_THROWS_WITH_AS(load_features(dir.file("f.csv"), 2), doctest::Contains("empty file"),
                             Error);
    }
    SUBCASE("header-only file is empty") {
        write_text(dir.file("f.csv"), "video_id,f0,f1\n");
        CHECK_THROWS_AS(load_features(dir.file("f.csv"), 2), Error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_WITH_AS(load_features(dir.file("nope.csv"), 2),
                             doctest::Contains("cannot open"), Error);
    }
    SUBCASE("id with embedded whitespace") {
        write_text(dir.file("f.csv"), "v 1,1.0,2.0\n");
        CHECK_THROWS_WITH_AS(load_features(dir.file("f.csv"), 2),
                             doctest::Contains("invalid video_id"), Error);
    }
}

TEST_CASE("infer_feature_dim reads the first data line") {
    TempDir dir;
    write_text(dir.file("f.csv"), "video_id,f0,f1,f2\nv1,1,2,3\n");
    CHECK(infer_feature_dim(dir.file("f.csv")) == 3);
    write_text(dir.file("g.csv"), "v1,1,2\n");
    CHECK(infer_feature_dim(dir.file("g.csv")) == 2);
}

TEST_CASE("load_labels basic parse") {
    TempDir dir;
    write_text(dir.file("l.csv"), "v1,0.5,0.5\n");
    auto records = load_labels(dir.file("l.csv"));
    REQUIRE(records.size() == 1);
    CHECK(records[0].video_id == "v1");
    CHECK(records[0].short_term == 0.5);
    CHECK(records[0].long_term == 0.5);
}

TEST_CASE("load_labels rejects out-of-range scores naming the column") {
    TempDir dir;
    write_text(dir.file("l.csv"), "v1,1.2,0.5\n");
    CHECK_THROWS_WITH_AS(load_labels(dir.file("l.csv")), doctest::Contains("short_term"), Error);
    write_text(dir.file("l2.csv"), "v1,0.5,-0.1\n");
    CHECK_THROWS_WITH_AS(load_labels(dir.file("l2.csv")), doctest::Contains("long_term"), Error);
}

TEST_CASE("load_labels skips a header") {
    TempDir dir;
    write_text(dir.file("l.csv"), "video_id,short_term,long_term\nv1,0.1,0.9\nv2,0.25,0.75\n");
    auto records = load_labels(dir.file("l.csv"));
    REQUIRE(records.size() == 2);
    CHECK(records[1].short_term == 0.25);
}

TEST_CASE("load_labels error cases") {
    TempDir dir;
    SUBCASE("missing column") {
        write_text(dir.file("l.csv"), "v1,0.5\n");
        CHECK_THROWS_WITH_AS(load_labels(dir.file("l.csv")),
                             doctest::Contains("expected columns"), Error);
    }
    SUBCASE("duplicate id") {
        write_text(dir.file("l.csv"), "v1,0.5,0.5\nv1,0.6,0.6\n");
        CHECK_THROWS_WITH_AS(load_labels(dir.file("l.csv")), doctest::Contains("duplicate"),
                             Error);
    }
    SUBCASE("boundary scores 0 and 1 are accepted") {
        write_text(dir.file("l.csv"), "v1,0,1\n");
        auto records = load_labels(dir.file("l.csv"));
        CHECK(records[0].short_term == 0.0);
        CHECK(records[0].long_term == 1.0);
    }
}

TEST_CASE("join keeps the intersection in feature-file order") {
    std::vector<FeatureRecord> features = {{"v1", {1.0}}, {"v2", {2.0}}};
    std::vector<LabelRecord> labels = {{"v2", 0.2, 0.3}, {"v3", 0.4, 0.5}};
    JoinResult r = join(features, labels);
    REQUIRE(r.dataset.size() == 1);
    CHECK(r.dataset.ids[0] == "v2");
    CHECK(r.dataset.features.at(0, 0) == 2.0);
    CHECK(r.dataset.short_term[0] == 0.2);
    CHECK(r.dropped_feature_ids == 1);
    CHECK(r.dropped_label_ids == 1);
}

TEST_CASE("join with identical id sets preserves feature order") {
    std::vector<FeatureRecord> features = {{"b", {1.0}}, {"a", {2.0}}, {"c", {3.0}}};
    std::vector<LabelRecord> labels = {{"a", 0.1, 0.1}, {"b", 0.2, 0.2}, {"c", 0.3, 0.3}};
    JoinResult r = join(features, labels);
    REQUIRE(r.dataset.size() == 3);
    CHECK(r.dataset.ids == std::vector<std::string>{"b", "a", "c"});
    CHECK(r.dropped_feature_ids == 0);
    CHECK(r.dropped_label_ids == 0);
}

TEST_CASE("join rejects a disjoint id set") {
    std::vector<FeatureRecord> features = {{"v1", {1.0}}};
    std::vector<LabelRecord> labels = {{"v2", 0.2, 0.3}};
    CHECK_THROWS_WITH_AS(join(features, labels), doctest::Contains("no video_id"), Error);
}

TEST_CASE("join is idempotent") {
    Rng rng(17);
    std::vector<FeatureRecord> features;
    std::vector<LabelRecord> labels;
    for (int i = 0; i < 30; ++i) {
        features.push_back({"f" + std::to_string(i), {rng.normal(0, 1), rng.normal(0, 1)}});
    }
    for (int i = 10; i < 40; ++i) {
        labels.push_back({"f" + std::to_string(i), rng.uniform(), rng.uniform()});
    }
    JoinResult first = join(features, labels);

    std::vector<FeatureRecord> projected;
    for (size_t i = 0; i < first.dataset.size(); ++i) {
        FeatureRecord rec;
        rec.video_id = first.dataset.ids[i];
        for (size_t j = 0; j < first.dataset.feature_dim(); ++j) {
            rec.features.push_back(first.dataset.features.at(i, j));
        }
        projected.push_back(std::move(rec));
    }
    JoinResult second = join(projected, labels);
    CHECK(second.dataset.ids == first.dataset.ids);
    CHECK(second.dataset.features.data == first.dataset.features.data);
    CHECK(second.dataset.short_term == first.dataset.short_term);
    CHECK(second.dataset.long_term == first.dataset.long_term);
}

TEST_CASE("split sizes and disjointness, N=10 fraction 0.2") {
    LabeledDataset ds = random_dataset(10, 3, 1);
    SplitResult r = split(ds, SplitSpec{0.2, 7});
    CHECK(r.val.size() == 2);
    CHECK(r.train.size() == 8);
    std::set<std::string> ids(r.train.ids.begin(), r.train.ids.end());
    for (const auto& id : r.val.ids) CHECK(ids.count(id) == 0);
}

TEST_CASE("split is deterministic for a fixed seed") {
    LabeledDataset ds = random_dataset(25, 2, 2);
    SplitResult a = split(ds, SplitSpec{0.3, 42});
    SplitResult b = split(ds, SplitSpec{0.3, 42});
    CHECK(a.train.ids == b.train.ids);
    CHECK(a.val.ids == b.val.ids);
    CHECK(a.train.features.data == b.train.features.data);
}

TEST_CASE("split differs across seeds") {
    LabeledDataset ds = random_dataset(100, 2, 3);
    SplitResult a = split(ds, SplitSpec{0.2, 1});
    SplitResult b = split(ds, SplitSpec{0.2, 2});
    CHECK(a.val.ids != b.val.ids);
}

TEST_CASE("split partition property over fractions and sizes") {
    for (size_t n : {2, 3, 5, 17, 64}) {
        LabeledDataset ds = random_dataset(n, 2, n);
        for (double f : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const size_t val_count = static_cast<size_t>(std::ceil(f * static_cast<double>(n)));
            if (val_count == 0 || val_count >= n) {
                CHECK_THROWS_AS(split(ds, SplitSpec{f, 5}), Error);
                continue;
            }
            SplitResult r = split(ds, SplitSpec{f, 5});
            CHECK(r.val.size() == val_count);
            CHECK(r.train.size() + r.val.size() == n);
            std::set<std::string> all(r.train.ids.begin(), r.train.ids.end());
            all.insert(r.val.ids.begin(), r.val.ids.end());
            CHECK(all.size() == n);
        }
    }
}

TEST_CASE("split rejects invalid specs") {
    LabeledDataset ds = random_dataset(10, 2, 4);
    CHECK_THROWS_AS(split(ds, SplitSpec{0.0, 1}), Error);
    CHECK_THROWS_AS(split(ds, SplitSpec{1.0, 1}), Error);
    CHECK_THROWS_AS(split(ds, SplitSpec{0.95, 1}), Error); // ceil(9.5)=10, empty train
    LabeledDataset tiny = random_dataset(1, 2, 5);
    CHECK_THROWS_AS(split(tiny, SplitSpec{0.5, 1}), Error);
}

TEST_CASE("write/load roundtrip is bit-exact") {
    TempDir dir;
    LabeledDataset ds = random_dataset(20, 5, 11);
    // values with no short decimal representation
    ds.features.at(0, 0) = 1.0 / 3.0;
    ds.features.at(1, 1) = -2.7182818284590452e-7;
    ds.short_term[2] = 0.1 + 0.2; // 0.30000000000000004
    write_features(dir.file("f.csv"), ds);
    write_labels(dir.file("l.csv"), ds);

    auto features = load_features(dir.file("f.csv"), 5);
    auto labels = load_labels(dir.file("l.csv"));
    JoinResult r = join(features, labels);
    REQUIRE(r.dataset.size() == ds.size());
    CHECK(r.dataset.ids == ds.ids);
    CHECK(r.dataset.features.data == ds.features.data);
    CHECK(r.dataset.short_term == ds.short_term);
    CHECK(r.dataset.long_term == ds.long_term);
}

TEST_CASE("file_has_data_lines") {
    TempDir dir;
    write_text(dir.file("empty.csv"), "");
    CHECK_FALSE(file_has_data_lines(dir.file("empty.csv")));
    write_text(dir.file("header.csv"), "video_id,f0\n");
    CHECK_FALSE(file_has_data_lines(dir.file("header.csv")));
    write_text(dir.file("data.csv"), "v1,0.5\n");
    CHECK(file_has_data_lines(dir.file("data.csv")));
}
