#include "stablemc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"

namespace stablemc {

double normal_cdf(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("normal_cdf: argument must be finite");
    }
    // erfc keeps full relative accuracy in the lower tail.
    return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

namespace {

// Rational initial guess (Acklam-style), then two Halley refinements against
// normal_cdf bring the result to near machine precision.
double quantile_guess(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must lie in (0,1)");
    }
    double x = quantile_guess(p);
    for (int it = 0; it < 2; ++it) {
        const double e = normal_cdf(x) - p;
        const double pdf =
            std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        if (pdf == 0.0) break;
        const double u = e / pdf;
        x -= u / (1.0 + 0.5 * x * u);  // Halley step
    }
    return x;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw EmptySample("ks_two_sample: both samples must be non-empty");
    }
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const std::size_t m = sa.size();
    const std::size_t n = sb.size();
    std::size_t i = 0, j = 0;
    double stat = 0.0;
    while (i < m && j < n) {
        const double v = std::min(sa[i], sb[j]);
        while (i < m && sa[i] == v) ++i;
        while (j < n && sb[j] == v) ++j;
        const double diff = std::fabs(static_cast<double>(i) / static_cast<double>(m) -
                                      static_cast<double>(j) / static_cast<double>(n));
        if (diff > stat) stat = diff;
    }
    // After one sample is exhausted the gap only shrinks back to 0 at the
    // other's last point, so the merge above already saw the supremum.
    return stat;
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100000; ++k) {
        const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
        if (term < 1e-12) break;
        sum += sign * term;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double kolmogorov_pvalue(double statistic, std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) {
        throw DomainError("kolmogorov_pvalue: sample sizes must be positive");
    }
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    const double lambda = statistic * std::sqrt(mn / static_cast<double>(m + n));
    return kolmogorov_sf(lambda);
}

MeanVar mean_variance(std::span<const double> x) {
    if (x.empty()) {
        throw EmptySample("mean_variance: empty sample");
    }
    const auto& ops = kernels::active();
    const double n = static_cast<double>(x.size());
    const double sum = ops.reduce_sum(x.data(), x.size());
    const double mean = sum / n;
    if (x.size() == 1) return {mean, 0.0};
    // Centered second pass keeps the estimate stable for large offsets.
    std::vector<double> centered(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) centered[i] = x[i] - mean;
    const double ss = ops.reduce_sum_sq(centered.data(), centered.size());
    return {mean, ss / (n - 1.0)};
}

}  // namespace stablemc
