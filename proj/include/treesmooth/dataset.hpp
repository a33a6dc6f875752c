#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace treesmooth {

// A loaded tabular dataset. Immutable after loading; splitting operations
// return fresh objects.
struct Dataset {
    std::string name;
    std::size_t n_features = 0;
    std::vector<std::string> feature_names; // size n_features (may be empty for synthetic data)
    std::vector<double> features;           // row-major, n_samples x n_features
    std::vector<int> labels;                // each exactly 0 or 1
    // Row ids in the dataset this one was subset from; empty means identity.
    // Survives nested subsetting, so a row can always be traced to the
    // originally loaded file. Used by the leakage instrumentation.
    std::vector<std::size_t> origin;

    std::size_t n_samples() const { return labels.size(); }
    double at(std::size_t row, std::size_t col) const {
        return features[row * n_features + col];
    }
    const double* row(std::size_t r) const { return features.data() + r * n_features; }
    std::size_t origin_of(std::size_t r) const { return origin.empty() ? r : origin[r]; }
    std::array<std::size_t, 2> class_counts() const;
};

struct DatasetRegistryEntry {
    std::string name;
    std::size_t expected_samples = 0;
    std::size_t expected_features = 0;
    std::size_t expected_class0 = 0;
    std::size_t expected_class1 = 0;
};

// Outcome of a registry check. Never throws; mismatches are reported.
struct ValidationResult {
    bool ok = true;
    std::vector<std::string> mismatches;
};

struct FoldAssignment {
    int k = 0;
    std::vector<int> fold_of; // fold id per sample, each in [0, k)
};

// Loads a CSV file: one header row, comma separated, final column is the
// label. Labels may be any two distinct values; they are mapped to 0/1 in
// sorted order (numeric if both parse as numbers, else lexicographic).
// Throws ParseError on malformed rows or non-numeric feature cells and
// UnsupportedDatasetError when the label cardinality is not 2.
Dataset load_csv(const std::string& path);

// Inverse of load_csv up to the dataset name: header then rows, label last.
void write_csv(const Dataset& ds, const std::string& path);

// The compiled-in benchmark registry (four datasets).
const std::vector<DatasetRegistryEntry>& dataset_registry();
const DatasetRegistryEntry* find_registry_entry(const std::string& name);

// Checks sample count, feature count and the class-count pair (unordered,
// since the 0/1 orientation of the published counts is not fixed).
ValidationResult validate_against_registry(const Dataset& ds, const DatasetRegistryEntry& entry);

// Deterministic stratified k-fold assignment. Fold sizes differ by at most
// one and each fold's class-1 count is within one of proportional.
FoldAssignment stratified_kfold(const Dataset& ds, int k, std::uint64_t seed);

// Deterministic stratified split; both parts keep both classes or an
// InfeasibleSplitError is thrown. Row order inside each part follows the
// original order.
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// New dataset holding the given rows (in the given order), with origin
// tracking composed across nested calls.
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows);

} // namespace treesmooth
