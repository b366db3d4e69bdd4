#include "cuepoly/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cuepoly
{

double kolmogorov_survival(double lambda)
{
    if (lambda <= 0.0)
        return 1.0;
    if (lambda < 0.2)
        return 1.0;
    // Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j)
    {
        double const term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-17 * std::abs(sum))
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace
{
// Effective-size correction of Stephens, applied to the asymptotic law.
double ks_p_value(double statistic, double effective_n)
{
    double const root = std::sqrt(effective_n);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * statistic);
}
}  // namespace

double sup_cdf_deviation(std::span<double const> sorted, std::function<double(double)> const& cdf)
{
    if (sorted.empty())
        throw std::invalid_argument("sup_cdf_deviation: empty sample");
    double const n = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size())
    {
        // group ties so the jump at a repeated value is taken once
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
            ++j;
        // left limit of the cdf just below the jump, so point masses in cdf are respected
        double const f_left = cdf(std::nextafter(sorted[i], -std::numeric_limits<double>::infinity()));
        double const f = cdf(sorted[i]);
        double const below = static_cast<double>(i) / n;
        double const above = static_cast<double>(j + 1) / n;
        d = std::max({d, std::abs(f_left - below), std::abs(above - f)});
        i = j + 1;
    }
    return d;
}

KsResult ks_statistic(std::span<double const> sorted, std::function<double(double)> const& cdf)
{
    double const d = sup_cdf_deviation(sorted, cdf);
    return {d, ks_p_value(d, static_cast<double>(sorted.size()))};
}

KsResult ks_two_sample(std::span<double const> a, std::span<double const> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    double const nx = static_cast<double>(x.size());
    double const ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size())
    {
        double const v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

MeanEstimate estimate_mean(std::span<double const> values)
{
    if (values.empty())
        throw std::invalid_argument("estimate_mean: empty sample");
    double const n = static_cast<double>(values.size());
    // two-pass for numerical stability
    double sum = 0.0;
    for (double v : values)
        sum += v;
    double const mean = sum / n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    double const var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), values.size()};
}

MeanEstimate estimate_variance(std::span<double const> values)
{
    if (values.size() < 2)
        throw std::invalid_argument("estimate_variance: need at least two values");
    double const n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    double const mean = sum / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values)
    {
        double const d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    double const var = m2 / (n - 1.0);
    double const mu2 = m2 / n;
    double const mu4 = m4 / n;
    return {var, std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n), values.size()};
}

MeanEstimate estimate_correlation(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("estimate_correlation: need equal sizes >= 3");
    double const n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const dx = x[i] - mx;
        double const dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    double const r = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return {r, (1.0 - r * r) / std::sqrt(n), x.size()};
}

double difference_z(MeanEstimate const& a, MeanEstimate const& b)
{
    double const se = std::hypot(a.std_error, b.std_error);
    double const diff = a.mean - b.mean;
    if (se == 0.0)
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / se;
}

double z_score(MeanEstimate const& estimate, double exact)
{
    double const diff = estimate.mean - exact;
    if (estimate.std_error == 0.0)
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / estimate.std_error;
}

}  // namespace cuepoly
