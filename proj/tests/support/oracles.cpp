#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

long double beta_density(long double t, long double a, long double b) {
    if (t <= 0.0L || t >= 1.0L) {
        if (t == 0.0L && a == 1.0L) return b;
        if (t == 1.0L && b == 1.0L) return a;
        return 0.0L;
    }
    const long double log_norm = lgammal(a + b) - lgammal(a) - lgammal(b);
    return expl(log_norm + (a - 1.0L) * logl(t) + (b - 1.0L) * log1pl(-t));
}

long double simpson(long double fa, long double fm, long double fb, long double h) {
    return h / 6.0L * (fa + 4.0L * fm + fb);
}

long double adaptive_simpson(long double lo, long double hi, long double flo,
                             long double fmid, long double fhi, long double whole,
                             long double tol, int depth, long double a, long double b) {
    const long double mid = 0.5L * (lo + hi);
    const long double lmid = 0.5L * (lo + mid);
    const long double rmid = 0.5L * (mid + hi);
    const long double flmid = beta_density(lmid, a, b);
    const long double frmid = beta_density(rmid, a, b);
    const long double left = simpson(flo, flmid, fmid, mid - lo);
    const long double right = simpson(fmid, frmid, fhi, hi - mid);
    const long double delta = left + right - whole;
    if (depth <= 0 || fabsl(delta) <= 15.0L * tol)
        return left + right + delta / 15.0L;
    return adaptive_simpson(lo, mid, flo, flmid, fmid, left, 0.5L * tol, depth - 1, a, b) +
           adaptive_simpson(mid, hi, fmid, frmid, fhi, right, 0.5L * tol, depth - 1, a, b);
}

long double integrate_density(long double lo, long double hi, long double a, long double b) {
    if (hi <= lo) return 0.0L;
    // Split at the mode so the adaptive pass starts with the peak resolved.
    long double mode = 0.5L;
    if (a > 1.0L && b > 1.0L) mode = (a - 1.0L) / (a + b - 2.0L);
    long double total = 0.0L;
    long double points[3] = {lo, hi, hi};
    int n = 2;
    if (mode > lo && mode < hi) {
        points[1] = mode;
        points[2] = hi;
        n = 3;
    }
    for (int i = 0; i + 1 < n; ++i) {
        const long double x0 = points[i];
        const long double x1 = points[i + 1];
        const long double xm = 0.5L * (x0 + x1);
        const long double f0 = beta_density(x0, a, b);
        const long double fm = beta_density(xm, a, b);
        const long double f1 = beta_density(x1, a, b);
        const long double whole = simpson(f0, fm, f1, x1 - x0);
        total += adaptive_simpson(x0, x1, f0, fm, f1, whole, 1e-15L, 60, a, b);
    }
    return total;
}

} // namespace

double quad_beta_cdf(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto la = static_cast<long double>(a);
    const auto lb = static_cast<long double>(b);
    // Integrate over the shorter tail for accuracy.
    if (x > 0.5) return static_cast<double>(1.0L - integrate_density(x, 1.0L, la, lb));
    return static_cast<double>(integrate_density(0.0L, x, la, lb));
}

double quad_beta_ppf(double q, double a, double b) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quad_beta_ppf: bad q");
    if (q == 0.0) return 0.0;
    if (q == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (quad_beta_cdf(mid, a, b) < q) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double brute_force_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double num = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) { ++n0; continue; }
        ++n1;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j]) num += 1.0;
            else if (scores[i] == scores[j]) num += 0.5;
        }
    }
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("brute_force_auc: one class absent");
    return num / (static_cast<double>(n0) * static_cast<double>(n1));
}

} // namespace oracle
