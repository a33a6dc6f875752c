#pragma once

#include <stdexcept>
#include <string>

namespace treesmooth {

// Malformed input file (wrong column count, non-numeric cell, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid file that this engine cannot handle (e.g. label
// cardinality != 2).
class UnsupportedDatasetError : public std::runtime_error {
public:
    explicit UnsupportedDatasetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Stratified folds cannot be built (some class has fewer than k samples).
class InfeasibleStratificationError : public std::runtime_error {
public:
    explicit InfeasibleStratificationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Train/test split would leave a class empty in one part.
class InfeasibleSplitError : public std::runtime_error {
public:
    explicit InfeasibleSplitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Metric is undefined on the given inputs (a class has no true instances).
class UndefinedMetricError : public std::runtime_error {
public:
    explicit UndefinedMetricError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace treesmooth
