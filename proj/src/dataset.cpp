#include "treesmooth/dataset.hpp"

#include "treesmooth/errors.hpp"
#include "treesmooth/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace treesmooth {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string file_stem(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

// Per-class row indices, shuffled deterministically from (seed, class).
std::array<std::vector<std::size_t>, 2> shuffled_class_indices(const Dataset& ds,
                                                               std::uint64_t seed) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) by_class[ds.labels[i]].push_back(i);
    for (int c = 0; c < 2; ++c) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(by_class[c]);
    }
    return by_class;
}

} // namespace

std::array<std::size_t, 2> Dataset::class_counts() const {
    std::array<std::size_t, 2> c{0, 0};
    for (int y : labels) c[y] += 1;
    return c;
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 2)
        throw ParseError(path + ": header needs at least one feature column and a label column");
    const std::size_t n_cols = header.size();
    const std::size_t d = n_cols - 1;

    std::vector<double> feats;
    std::vector<std::string> raw_labels;
    std::size_t row_no = 1; // header was row 1
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != n_cols)
            throw ParseError(path + ":" + std::to_string(row_no) + ": expected " +
                             std::to_string(n_cols) + " columns, got " +
                             std::to_string(cells.size()));
        for (std::size_t c = 0; c < d; ++c) {
            double v;
            if (!parse_double(cells[c], v))
                throw ParseError(path + ":" + std::to_string(row_no) +
                                 ": non-numeric or missing value '" + cells[c] + "' in column " +
                                 header[c]);
            feats.push_back(v);
        }
        if (cells[d].empty())
            throw ParseError(path + ":" + std::to_string(row_no) + ": missing label");
        raw_labels.push_back(cells[d]);
    }
    if (raw_labels.empty()) throw ParseError(path + ": no data rows");

    // Map the two distinct raw label values to 0/1 in sorted order
    // (numeric when both parse as numbers, lexicographic otherwise).
    std::map<std::string, int> distinct;
    for (const auto& s : raw_labels) distinct.emplace(s, 0);
    std::vector<std::string> values;
    for (const auto& [s, unused] : distinct) values.push_back(s);

    double num[2];
    bool numeric = values.size() == 2 && parse_double(values[0], num[0]) &&
                   parse_double(values[1], num[1]);
    if (numeric && num[0] == num[1]) numeric = false; // same number spelled twice
    if (values.size() != 2 || (!numeric && values[0] == values[1]))
        throw UnsupportedDatasetError(path + ": label column must contain exactly 2 distinct values, got " +
                                      std::to_string(values.size()));
    if (numeric && num[0] > num[1]) std::swap(values[0], values[1]);
    distinct[values[0]] = 0;
    distinct[values[1]] = 1;

    Dataset ds;
    ds.name = file_stem(path);
    ds.n_features = d;
    ds.feature_names.assign(header.begin(), header.begin() + d);
    ds.features = std::move(feats);
    ds.labels.reserve(raw_labels.size());
    for (const auto& s : raw_labels) ds.labels.push_back(distinct[s]);
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    for (std::size_t c = 0; c < ds.n_features; ++c) {
        out << (c < ds.feature_names.size() ? ds.feature_names[c] : "f" + std::to_string(c))
            << ',';
    }
    out << "label\n";
    char buf[64];
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
        for (std::size_t c = 0; c < ds.n_features; ++c) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ds.at(r, c));
            out.write(buf, ptr - buf);
            out << ',';
        }
        out << ds.labels[r] << '\n';
    }
}

const std::vector<DatasetRegistryEntry>& dataset_registry() {
    // Published benchmark dimensions. The breast cancer row is the cleaned
    // count (277 = 196 + 81): the raw table has 9 incomplete rows, and this
    // loader rejects missing values.
    static const std::vector<DatasetRegistryEntry> registry = {
        {"breast_cancer", 277, 9, 196, 81},
        {"haberman", 306, 3, 81, 225},
        {"heart", 270, 15, 150, 120},
        {"diabetes", 768, 8, 500, 268},
    };
    return registry;
}

const DatasetRegistryEntry* find_registry_entry(const std::string& name) {
    for (const auto& e : dataset_registry())
        if (e.name == name) return &e;
    return nullptr;
}

ValidationResult validate_against_registry(const Dataset& ds, const DatasetRegistryEntry& entry) {
    ValidationResult res;
    auto complain = [&res](std::string msg) {
        res.ok = false;
        res.mismatches.push_back(std::move(msg));
    };
    if (ds.n_samples() != entry.expected_samples)
        complain("sample count " + std::to_string(ds.n_samples()) + " != expected " +
                 std::to_string(entry.expected_samples));
    if (ds.n_features != entry.expected_features)
        complain("feature count " + std::to_string(ds.n_features) + " != expected " +
                 std::to_string(entry.expected_features));
    const auto counts = ds.class_counts();
    const auto lo = std::min(counts[0], counts[1]);
    const auto hi = std::max(counts[0], counts[1]);
    const auto elo = std::min(entry.expected_class0, entry.expected_class1);
    const auto ehi = std::max(entry.expected_class0, entry.expected_class1);
    if (lo != elo || hi != ehi)
        complain("class counts {" + std::to_string(counts[0]) + ", " + std::to_string(counts[1]) +
                 "} != expected {" + std::to_string(entry.expected_class0) + ", " +
                 std::to_string(entry.expected_class1) + "}");
    return res;
}

FoldAssignment stratified_kfold(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    const auto counts = ds.class_counts();
    for (int c = 0; c < 2; ++c)
        if (counts[c] < static_cast<std::size_t>(k))
            throw InfeasibleStratificationError(
                "class " + std::to_string(c) + " has " + std::to_string(counts[c]) +
                " samples, fewer than k=" + std::to_string(k));

    auto by_class = shuffled_class_indices(ds, seed);

    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(ds.n_samples(), -1);
    // Deal each class round-robin. The fold that receives a class's first
    // leftover sample advances across classes, so total fold sizes also
    // stay within one of each other.
    int extra_cursor = 0;
    for (int c = 0; c < 2; ++c) {
        const auto& idx = by_class[c];
        const std::size_t base = idx.size() / k;
        const int rem = static_cast<int>(idx.size() % k);
        std::size_t pos = 0;
        for (int f = 0; f < k; ++f) {
            std::size_t take = base + (((f - extra_cursor) % k + k) % k < rem ? 1 : 0);
            for (std::size_t i = 0; i < take; ++i) fa.fold_of[idx[pos++]] = f;
        }
        extra_cursor = (extra_cursor + rem) % k;
    }
    return fa;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("train_test_split: test_fraction must be in (0,1)");
    const auto counts = ds.class_counts();
    if (counts[0] == 0 || counts[1] == 0)
        throw InfeasibleSplitError("train_test_split: both classes must be present");

    auto by_class = shuffled_class_indices(ds, seed);

    std::vector<std::size_t> train_rows, test_rows;
    for (int c = 0; c < 2; ++c) {
        const auto& idx = by_class[c];
        const auto n_test =
            static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
        if (n_test == 0 || n_test >= idx.size())
            throw InfeasibleSplitError("test_fraction " + std::to_string(test_fraction) +
                                       " leaves class " + std::to_string(c) +
                                       " empty in one part");
        test_rows.insert(test_rows.end(), idx.begin(), idx.begin() + n_test);
        train_rows.insert(train_rows.end(), idx.begin() + n_test, idx.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {subset(ds, train_rows), subset(ds, test_rows)};
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.name = ds.name;
    out.n_features = ds.n_features;
    out.feature_names = ds.feature_names;
    out.features.reserve(rows.size() * ds.n_features);
    out.labels.reserve(rows.size());
    out.origin.reserve(rows.size());
    for (std::size_t r : rows) {
        const double* src = ds.row(r);
        out.features.insert(out.features.end(), src, src + ds.n_features);
        out.labels.push_back(ds.labels[r]);
        out.origin.push_back(ds.origin_of(r));
    }
    return out;
}

} // namespace treesmooth
