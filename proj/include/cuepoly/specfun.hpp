#pragma once

#include <array>
#include <cstddef>

namespace cuepoly
{

/// Even-index Bernoulli number B_{2n} stored as an exact ratio.
struct BernoulliRatio
{
    double numerator;
    double denominator;

    constexpr double value() const { return numerator / denominator; }
};

/// B_{2n} for n = 1..20. Entries with |numerator| > 2^53 are rounded to the
/// nearest double; B_2..B_30 are exact.
class BernoulliTable
{
  public:
    static constexpr std::size_t size = 20;

    /// B_{2n}, n >= 1.
    static double b2n(std::size_t n);
    static BernoulliRatio ratio(std::size_t n);
};

/// log Gamma(x) for x > 0, by Stirling's series after an upward shift to
/// x >= 10. Throws std::domain_error for x <= 0 or NaN.
double ln_gamma(double x);

/// lnGamma(x) - [(x - 1/2) log x - x + log(2 pi)/2], x >= 10.
double ln_gamma_stirling_tail(double x);

/// Polygamma psi^{(k)}(x), 0 <= k <= 6, x > 0. Upward recurrence to x >= 10,
/// then the asymptotic series truncated at its smallest term.
double polygamma(int k, double x);

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }

/// Standard normal CDF.
double normal_cdf(double x);

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace cuepoly
