#include "cuepoly/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cuepoly/specfun.hpp"

namespace cuepoly
{

double sample_gamma(double a, RngStream& rng)
{
    if (!(a > 0.0) || std::isinf(a))
        throw std::domain_error("sample_gamma: shape must be positive and finite, got "
                                + std::to_string(a));

    double const shape = a < 1.0 ? a + 1.0 : a;
    double const d = shape - 1.0 / 3.0;
    double const c = 1.0 / std::sqrt(9.0 * d);

    double v, z, u;
    do
    {
        do
        {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        u = rng.uniform_open();
    } while (u > 1.0 - 0.0331 * (z * z) * (z * z)
             && std::log(u) > 0.5 * z * z + d * (1.0 - v + std::log(v)));

    double result = d * v;
    if (a < 1.0)
        result *= std::pow(rng.uniform_open(), 1.0 / a);
    return result;
}

double sample_beta(double a, double b, RngStream& rng)
{
    if (!(a > 0.0))
        throw std::domain_error("sample_beta: a must be positive, got " + std::to_string(a));
    if (!(b >= 0.0))
        throw std::domain_error("sample_beta: b must be nonnegative, got " + std::to_string(b));
    if (b == 0.0)
        return 1.0;

    for (;;)
    {
        double const x = sample_gamma(a, rng);
        double const y = sample_gamma(b, rng);
        double const total = x + y;
        if (total > 0.0)
            return x / total;
    }
}

double sample_beta_one(double b, RngStream& rng)
{
    if (!(b >= 0.0))
        throw std::domain_error("sample_beta_one: b must be nonnegative, got " + std::to_string(b));
    if (b == 0.0)
        return 1.0;
    return -std::expm1(std::log(rng.uniform_open()) / b);
}

double sample_sign(RngStream& rng)
{
    return (rng() >> 63) ? 1.0 : -1.0;
}

WjParams WjParams::make(int j)
{
    if (j < 1)
        throw std::domain_error("WjParams: j must be >= 1, got " + std::to_string(j));
    double const m = j - 1;
    double const log_k = 2.0 * m * std::log(2.0) + 2.0 * ln_gamma(j) - std::log(pi)
                         - ln_gamma(2.0 * m + 1.0);
    return {j, std::exp(log_k)};
}

double w_density(WjParams const& params, double v)
{
    if (!(std::abs(v) < 0.5 * pi))
        return 0.0;
    return params.normalization * std::pow(std::cos(v), 2.0 * (params.j - 1));
}

double sample_w(WjParams const& params, RngStream& rng)
{
    double const b = sample_beta(params.j - 0.5, 0.5, rng);
    return sample_sign(rng) * std::acos(std::sqrt(b));
}

}  // namespace cuepoly
