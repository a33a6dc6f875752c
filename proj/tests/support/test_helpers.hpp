#pragma once

#include "treesmooth/cart.hpp"
#include "treesmooth/dataset.hpp"
#include "treesmooth/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string data_dir() {
#ifdef TREESMOOTH_DATA_DIR_FOR_TESTS
    return TREESMOOTH_DATA_DIR_FOR_TESTS;
#else
    return "data";
#endif
}

inline std::string write_temp_file(const std::string& stem, const std::string& content) {
    static int counter = 0;
    const auto path = std::filesystem::temp_directory_path() /
                      (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline treesmooth::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                        const std::vector<int>& labels,
                                        const std::string& name = "test") {
    treesmooth::Dataset ds;
    ds.name = name;
    ds.n_features = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < ds.n_features; ++c)
        ds.feature_names.push_back("f" + std::to_string(c));
    for (const auto& row : rows)
        ds.features.insert(ds.features.end(), row.begin(), row.end());
    ds.labels = labels;
    return ds;
}

// Random dataset with a noisy linear signal on the first two features; both
// classes guaranteed present.
inline treesmooth::Dataset random_dataset(treesmooth::SplitMix64& rng, std::size_t n,
                                          std::size_t d, double noise = 0.3) {
    treesmooth::Dataset ds;
    ds.name = "random";
    ds.n_features = d;
    for (std::size_t c = 0; c < d; ++c) ds.feature_names.push_back("f" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        double signal = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double v = rng.next_double();
            ds.features.push_back(v);
            if (c < 2) signal += v;
        }
        const bool flip = rng.next_double() < noise;
        int y = signal > static_cast<double>(std::min<std::size_t>(d, 2)) * 0.5 ? 1 : 0;
        if (flip) y = 1 - y;
        if (i == 0) y = 0;
        if (i == 1) y = 1;
        ds.labels.push_back(y);
    }
    return ds;
}

// Random fitted tree on a fresh random dataset.
inline treesmooth::Tree random_fitted_tree(treesmooth::SplitMix64& rng, std::size_t n = 40,
                                           std::size_t d = 3, int max_depth = -1) {
    const treesmooth::Dataset ds = random_dataset(rng, n, d);
    std::vector<std::size_t> idx(ds.n_samples());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    treesmooth::TreeConfig cfg;
    cfg.max_depth = max_depth;
    cfg.min_samples_leaf = 1 + static_cast<int>(rng.next_below(3));
    cfg.rng_seed = rng.next();
    return fit_tree(ds, idx, cfg);
}

} // namespace testutil
