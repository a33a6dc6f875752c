#pragma once

#include "treesmooth/forest.hpp"
#include "treesmooth/regularizer_spec.hpp"

namespace treesmooth {

// Hierarchical shrinkage: rewrites every leaf_value as the telescoping sum
// of mean-response increments down the path, each damped by
// 1 + lambda/N(parent). Structure, counts and mean_response are untouched;
// lambda = 0 reproduces the raw leaf means. Throws std::domain_error for
// negative lambda.
void hs_calibrate(Tree& tree, double lambda);

// Conjugate-prior update along one root-to-leaf path: adds every node's
// class counts to (alpha, beta). alpha accumulates class 0, beta class 1;
// the root's counts are included, which is what weights shallow nodes most.
BetaParams beta_posterior_for_path(const Tree& tree, const NodePath& path,
                                   const BetaParams& prior);

// Beta-posterior calibration: for each leaf, leaf_value becomes
// 1 - beta_ppf(a/(a+b), Beta(a, b)) with (a, b) the path posterior. The
// complement converts the PPF's class-0-axis value into the class-1
// probability the trees emit.
void beta_calibrate(Tree& tree, const BetaParams& prior);

// Returns a calibrated copy of the forest; the input is never modified.
// Only fresh fits may be calibrated: a forest whose calibration is already
// set throws std::logic_error.
FittedForest apply(const FittedForest& forest, const RegularizerSpec& spec);

} // namespace treesmooth
