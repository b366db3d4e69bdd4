#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cuepoly
{

struct KsResult
{
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test. `sorted` must be sorted ascending.
/// The statistic takes both one-sided deviations at every jump, so ties are
/// handled by the usual step-function definition.
KsResult ks_statistic(std::span<double const> sorted, std::function<double(double)> const& cdf);

/// Two-sample Kolmogorov-Smirnov test; inputs need not be sorted.
KsResult ks_two_sample(std::span<double const> a, std::span<double const> b);

/// Largest |F_emp(x) - cdf(x)| for sorted data; same as ks_statistic().statistic.
double sup_cdf_deviation(std::span<double const> sorted, std::function<double(double)> const& cdf);

struct MeanEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Sample mean with standard error s / sqrt(n). Throws on empty input.
MeanEstimate estimate_mean(std::span<double const> values);

/// Sample variance (n - 1 denominator) with the standard error of the
/// variance estimated from the fourth central moment.
MeanEstimate estimate_variance(std::span<double const> values);

/// Pearson correlation with the asymptotic standard error (1 - r^2)/sqrt(n).
MeanEstimate estimate_correlation(std::span<double const> x, std::span<double const> y);

/// z-score of a difference between two independent estimates.
double difference_z(MeanEstimate const& a, MeanEstimate const& b);

/// z-score of an estimate against an exact value. A zero standard error
/// gives 0 on exact agreement and infinity otherwise.
double z_score(MeanEstimate const& estimate, double exact);

}  // namespace cuepoly
