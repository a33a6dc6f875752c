#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treesmooth/dataset.hpp"
#include "treesmooth/errors.hpp"
#include "treesmooth/rng.hpp"
#include "support/test_helpers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace treesmooth;

TEST_CASE("load_csv parses a small file") {
    const auto path = testutil::write_temp_file(
        "small.csv", "a,b,label\n1.5,2,0\n3,4.25,1\n5,6,0\n");
    const Dataset ds = load_csv(path);
    CHECK(ds.n_samples() == 3);
    CHECK(ds.n_features == 2);
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(ds.at(0, 0) == 1.5);
    CHECK(ds.at(1, 1) == 4.25);
    CHECK(ds.labels == std::vector<int>{0, 1, 0});
}

TEST_CASE("load_csv maps two distinct label values in sorted order") {
    // numeric sort: 1 -> 0, 2 -> 1
    const auto p1 = testutil::write_temp_file("lab12.csv", "x,y\n0,2\n1,1\n2,2\n");
    CHECK(load_csv(p1).labels == std::vector<int>{1, 0, 1});
    // numeric sort beats lexicographic: 10 > 2
    const auto p2 = testutil::write_temp_file("lab10.csv", "x,y\n0,10\n1,2\n");
    CHECK(load_csv(p2).labels == std::vector<int>{1, 0});
    // non-numeric labels sort lexicographically
    const auto p3 = testutil::write_temp_file("labs.csv", "x,y\n0,yes\n1,no\n");
    CHECK(load_csv(p3).labels == std::vector<int>{1, 0});
}

TEST_CASE("load_csv error paths") {
    const auto wrong_cols = testutil::write_temp_file("bad1.csv", "a,b,label\n1,2,0\n1,2\n");
    CHECK_THROWS_WITH_AS(load_csv(wrong_cols), doctest::Contains(":3"), ParseError);

    const auto non_numeric = testutil::write_temp_file("bad2.csv", "a,b,label\n1,x,0\n");
    CHECK_THROWS_AS(load_csv(non_numeric), ParseError);

    const auto missing_cell = testutil::write_temp_file("bad3.csv", "a,b,label\n1,,0\n");
    CHECK_THROWS_AS(load_csv(missing_cell), ParseError);

    const auto three_labels = testutil::write_temp_file("bad4.csv", "a,label\n1,0\n2,1\n3,2\n");
    CHECK_THROWS_AS(load_csv(three_labels), UnsupportedDatasetError);

    const auto one_label = testutil::write_temp_file("bad5.csv", "a,label\n1,0\n2,0\n");
    CHECK_THROWS_AS(load_csv(one_label), UnsupportedDatasetError);

    const auto empty_label = testutil::write_temp_file("bad6.csv", "a,label\n1,0\n2,\n3,1\n");
    CHECK_THROWS_WITH_AS(load_csv(empty_label), doctest::Contains("missing label"), ParseError);

    CHECK_THROWS_AS(load_csv("/nonexistent/nowhere.csv"), ParseError);
}

TEST_CASE("bundled haberman matches its published shape") {
    const Dataset ds = load_csv(testutil::data_dir() + "/haberman.csv");
    CHECK(ds.n_samples() == 306);
    CHECK(ds.n_features == 3);
    const auto counts = ds.class_counts();
    CHECK(std::min(counts[0], counts[1]) == 81);
    CHECK(std::max(counts[0], counts[1]) == 225);
}

TEST_CASE("registry validation passes for all bundled datasets") {
    for (const auto& entry : dataset_registry()) {
        CAPTURE(entry.name);
        const Dataset ds = load_csv(testutil::data_dir() + "/" + entry.name + ".csv");
        const ValidationResult res = validate_against_registry(ds, entry);
        CHECK(res.ok);
        CHECK(res.mismatches.empty());
    }
}

TEST_CASE("registry validation reports mismatches without throwing") {
    const auto* heart = find_registry_entry("heart");
    REQUIRE(heart != nullptr);
    // 14 features instead of the expected 15
    SplitMix64 rng(1);
    Dataset ds = testutil::random_dataset(rng, 270, 14);
    const ValidationResult res = validate_against_registry(ds, *heart);
    CHECK_FALSE(res.ok);
    REQUIRE(res.mismatches.size() >= 1);
    CHECK(res.mismatches.front().find("feature count 14") != std::string::npos);
}

TEST_CASE("registry validation treats class counts as an unordered pair") {
    const auto* entry = find_registry_entry("breast_cancer");
    REQUIRE(entry != nullptr);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 277; ++i) {
        rows.push_back(std::vector<double>(9, static_cast<double>(i)));
        labels.push_back(i < 81 ? 0 : 1); // flipped orientation: 81 zeros, 196 ones
    }
    CHECK(validate_against_registry(testutil::make_dataset(rows, labels), *entry).ok);
}

TEST_CASE("stratified_kfold exact divisibility and determinism") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({static_cast<double>(i)});
        labels.push_back(i % 2);
    }
    const Dataset ds = testutil::make_dataset(rows, labels);
    const FoldAssignment fa = stratified_kfold(ds, 5, 42);
    for (int f = 0; f < 5; ++f) {
        int c0 = 0, c1 = 0;
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (fa.fold_of[i] == f) (ds.labels[i] ? c1 : c0) += 1;
        CHECK(c0 == 1);
        CHECK(c1 == 1);
    }
    const FoldAssignment fb = stratified_kfold(ds, 5, 42);
    CHECK(fa.fold_of == fb.fold_of);
    CHECK(stratified_kfold(ds, 5, 43).fold_of != fa.fold_of);
}

TEST_CASE("stratified_kfold on haberman-sized data") {
    const Dataset ds = load_csv(testutil::data_dir() + "/haberman.csv");
    const FoldAssignment fa = stratified_kfold(ds, 5, 7);
    const auto counts = ds.class_counts();
    const double share1 = static_cast<double>(counts[1]) / static_cast<double>(ds.n_samples());
    std::vector<int> sizes(5, 0), ones(5, 0);
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        sizes[fa.fold_of[i]] += 1;
        ones[fa.fold_of[i]] += ds.labels[i];
    }
    for (int f = 0; f < 5; ++f) {
        CHECK(sizes[f] >= 61);
        CHECK(sizes[f] <= 62);
        CHECK(std::fabs(ones[f] - sizes[f] * share1) <= 1.0);
    }
}

TEST_CASE("stratified_kfold fold-size and stratification bounds, randomized") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + rng.next_below(300);
        const int k = 2 + static_cast<int>(rng.next_below(8));
        const Dataset ds = testutil::random_dataset(rng, n, 2);
        const auto counts = ds.class_counts();
        if (counts[0] < static_cast<std::size_t>(k) || counts[1] < static_cast<std::size_t>(k))
            continue;
        const FoldAssignment fa = stratified_kfold(ds, k, rng.next());
        std::vector<int> sizes(k, 0), ones(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(fa.fold_of[i] >= 0);
            REQUIRE(fa.fold_of[i] < k);
            sizes[fa.fold_of[i]] += 1;
            ones[fa.fold_of[i]] += ds.labels[i];
        }
        const int min_size = *std::min_element(sizes.begin(), sizes.end());
        const int max_size = *std::max_element(sizes.begin(), sizes.end());
        CHECK(max_size - min_size <= 1);
        const double share1 = static_cast<double>(counts[1]) / static_cast<double>(n);
        for (int f = 0; f < k; ++f) CHECK(std::fabs(ones[f] - sizes[f] * share1) <= 1.0);
    }
}

TEST_CASE("stratified_kfold rejects a class smaller than k") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({static_cast<double>(i)});
        labels.push_back(i < 3 ? 1 : 0);
    }
    const Dataset ds = testutil::make_dataset(rows, labels);
    CHECK_THROWS_AS(stratified_kfold(ds, 4, 0), InfeasibleStratificationError);
    CHECK_THROWS_AS(stratified_kfold(ds, 1, 0), std::invalid_argument);
}

TEST_CASE("train_test_split exact proportions") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
        rows.push_back({static_cast<double>(i)});
        labels.push_back(i % 2);
    }
    const Dataset ds = testutil::make_dataset(rows, labels);
    const auto [train, test] = train_test_split(ds, 0.3, 11);
    CHECK(train.n_samples() == 70);
    CHECK(test.n_samples() == 30);
    CHECK(test.class_counts()[1] == 15);
    CHECK(train.class_counts()[1] == 35);

    // union of parts == original sample set, disjoint
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < train.n_samples(); ++i) seen.insert(train.origin_of(i));
    for (std::size_t i = 0; i < test.n_samples(); ++i) {
        CHECK(seen.count(test.origin_of(i)) == 0);
        seen.insert(test.origin_of(i));
    }
    CHECK(seen.size() == 100);
}

TEST_CASE("train_test_split guards degenerate fractions") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({static_cast<double>(i)});
        labels.push_back(i % 2);
    }
    const Dataset ds = testutil::make_dataset(rows, labels);
    CHECK_THROWS_AS(train_test_split(ds, 0.999, 3), InfeasibleSplitError);
    CHECK_THROWS_AS(train_test_split(ds, 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(train_test_split(ds, 1.0, 3), std::invalid_argument);
}

TEST_CASE("train_test_split is deterministic on diabetes") {
    const Dataset ds = load_csv(testutil::data_dir() + "/diabetes.csv");
    const auto [train_a, test_a] = train_test_split(ds, 0.3, 99);
    const auto [train_b, test_b] = train_test_split(ds, 0.3, 99);
    CHECK(train_a.features == train_b.features);
    CHECK(test_a.labels == test_b.labels);
    CHECK(train_a.origin == train_b.origin);
}

TEST_CASE("write_csv then load_csv is the identity") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset ds =
            testutil::random_dataset(rng, 5 + rng.next_below(40), 1 + rng.next_below(6));
        const auto path = testutil::write_temp_file("roundtrip.csv", "");
        write_csv(ds, path);
        const Dataset back = load_csv(path);
        CHECK(back.n_features == ds.n_features);
        CHECK(back.feature_names == ds.feature_names);
        CHECK(back.features == ds.features);
        CHECK(back.labels == ds.labels);
    }
}

TEST_CASE("subset composes origin tracking") {
    SplitMix64 rng(6);
    const Dataset ds = testutil::random_dataset(rng, 20, 2);
    const Dataset first = subset(ds, {3, 5, 7, 9, 11});
    const Dataset second = subset(first, {0, 2, 4});
    CHECK(second.origin == std::vector<std::size_t>{3, 7, 11});
    CHECK(second.at(1, 0) == ds.at(7, 0));
}
