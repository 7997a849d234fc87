#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stablemc {

// Standard normal distribution function, |error| <= 1e-10.
double normal_cdf(double x);

// Inverse of normal_cdf on (0,1); refined to near machine precision.
double normal_quantile(double p);

// Exact two-sample Kolmogorov-Smirnov statistic,
// sup_x |F_a(x) - F_b(x)| with right-continuous empirical CDFs.
// Throws EmptySample if either sample is empty.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample KS p-value: Q(lambda) = 2 sum_{k>=1} (-1)^{k-1}
// exp(-2 k^2 lambda^2) at lambda = statistic * sqrt(mn/(m+n)), series
// truncated below 1e-12 and clamped to [0,1].
double kolmogorov_pvalue(double statistic, std::size_t m, std::size_t n);

// Survival function Q(lambda) of the Kolmogorov distribution.
double kolmogorov_sf(double lambda);

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n-1 denominator)
};

MeanVar mean_variance(std::span<const double> x);

}  // namespace stablemc
