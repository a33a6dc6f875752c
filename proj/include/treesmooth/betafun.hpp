#pragma once

namespace treesmooth {

// Parameters of a Beta(alpha, beta) distribution. Also carries the pair of
// pseudo-counts that a conjugate prior/posterior accumulates: alpha tracks
// class 0, beta tracks class 1.
struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

// ln Gamma(z) for z > 0. Relative error below 1e-12 on [1e-3, 1e6].
// Throws std::domain_error for z <= 0.
double log_gamma(double z);

// Regularized incomplete beta I_x(alpha, beta) — the Beta CDF.
// Absolute error below 1e-12; monotone non-decreasing in x.
// Throws std::domain_error for x outside [0,1], non-positive parameters, or
// alpha+beta > 1e7 (out of contract; callers in this engine never get there).
double beta_cdf(double x, const BetaParams& p);

// Beta density at x, for diagnostics and the PPF's Newton steps.
double beta_pdf(double x, const BetaParams& p);

// Percent point function: the x with beta_cdf(x) = q, to within 1e-10.
// beta_ppf(0) = 0 and beta_ppf(1) = 1 exactly.
// Throws std::domain_error under the same conditions as beta_cdf.
double beta_ppf(double q, const BetaParams& p);

} // namespace treesmooth
