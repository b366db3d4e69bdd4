#pragma once

#include "cuepoly/rng.hpp"

namespace cuepoly
{

/// Gamma variate with shape a > 0 and unit scale.
///
/// Marsaglia-Tsang squeeze/rejection for a >= 1; for a < 1 the boost
/// gamma_a = gamma_{a+1} * U^{1/a} is applied.
double sample_gamma(double a, RngStream& rng);

/// Beta(a, b) variate via gamma_a / (gamma_a + gamma_b). b == 0 returns
/// exactly 1 (Dirac mass at 1).
double sample_beta(double a, double b, RngStream& rng);

/// Beta(1, b) by inversion, 1 - U^{1/b}; b == 0 returns 1.
double sample_beta_one(double b, RngStream& rng);

/// Symmetric random sign, +1 or -1.
double sample_sign(RngStream& rng);

/// Parameters of the cosine-power angle W_j with density
/// K_j cos^{2(j-1)}(v) on (-pi/2, pi/2).
struct WjParams
{
    int j;
    double normalization;  // K_j

    /// Throws std::domain_error for j < 1.
    static WjParams make(int j);
};

/// K_j cos^{2(j-1)}(v) for |v| < pi/2, else 0.
double w_density(WjParams const& params, double v);

/// W_j = xi * arccos(sqrt(beta_{j-1/2, 1/2})) with an independent sign xi.
double sample_w(WjParams const& params, RngStream& rng);

}  // namespace cuepoly
