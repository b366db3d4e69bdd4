#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cuepoly/batch.hpp"
#include "cuepoly/report.hpp"
#include "cuepoly/rng.hpp"
#include "cuepoly/samplers.hpp"
#include "cuepoly/stats.hpp"

namespace cuepoly
{

/// Exponents (t, s) of E[|Z|^t e^{i s arg Z}] for a group of size n.
struct MomentQuery
{
    double t = 0.0;
    double s = 0.0;
    Group group = Group::Unitary;
    long long n = 1;

    /// Throws std::domain_error naming the violated constraint:
    /// unitary needs Re(t +- s) > -1, SO(2n) needs s = 0 and t > -1/2.
    void validate() const;
};

/// One term c * lnGamma(k + offset) of a log-gamma combination.
struct GammaTerm
{
    double coefficient;
    double offset;
};

/*!
 * sum_{k=first}^{last} sum_i c_i lnGamma(k + x_i).
 *
 * When sum c_i = 0 and sum c_i x_i = 0 the large-k terms cancel to O(1/k);
 * they are then evaluated through the difference of Stirling expansions
 * (and, for k >> max|x_i|, a series in 1/k) instead of differencing large
 * log-gamma values, keeping the absolute error near machine precision for
 * sums over millions of k.
 */
double sum_log_gamma_terms(std::vector<GammaTerm> terms, long long first, long long last);

/// log E[|Z_N|^t e^{i s arg Z_N}] for Haar U(N).
double moment_unitary(MomentQuery const& query);

/// log E[|X_j|^t e^{i s arg X_j}] for X_j = 1 + e^{i theta} sqrt(beta_{1,j-1}).
double moment_factor(long long j, double t, double s);

/// log E[e^{i s W_j}], |s| < 2j.
double fourier_w(long long j, double s);

/// log E[e^{t T_j}], t > -j.
double mellin_t(long long j, double t);

/// log E[det(I - SO)^t] for Haar SO(2n), t > -1/2.
double moment_so2n(long long n, double t);

enum class CumulantOf
{
    Q,  // cumulants of T_j
    R,  // cumulants of W_j
};

/// k-th cumulant of T_j (Q) or W_j (R), 1 <= k <= 6.
double cumulant(long long j, int k, CumulantOf which);

struct CumulantTable
{
    long long n = 0;
    int max_order = 0;
    std::vector<std::vector<double>> q;  // q[j-1][k-1]
    std::vector<std::vector<double>> r;
    std::vector<double> q_sums;  // per order, summed over j
    std::vector<double> r_sums;

    static CumulantTable make(long long n, int max_order);
};

/// (1/2) sum_{j=1}^{n} psi'(j); the common variance of Re and Im log Z_n.
double variance_sum(long long n);

/// E|W_j|^3 by adaptive quadrature against the cosine-power density.
double third_abs_moment_w(long long j);

/// E|T_j|^3 by nested quadrature over (beta_{j,j-1}, W_j).
double third_abs_moment_t(long long j);

enum class LyapunovOf
{
    T,
    W,
};

/// sum_{j<=n} E|X_j|^3 / variance_sum(n)^{3/2} for X = T or W.
double lyapunov(long long n, LyapunovOf which);

/// Lyapunov ratios for several n, sharing the per-j third moments.
std::vector<double> lyapunov_series(std::span<long long const> n_values, LyapunovOf which);

struct ComplexMomentEstimate
{
    MeanEstimate re;
    MeanEstimate im;
};

/// Empirical mean of |Z|^t e^{i s arg Z}. Throws std::overflow_error when
/// t * re_log exceeds the double range; compare in log space instead.
ComplexMomentEstimate empirical_moment(SampleBatch const& batch, double t, double s);
ComplexMomentEstimate empirical_moment(std::span<LogCharPoly const> draws, double t, double s);

struct RateReport
{
    std::vector<long long> n_values;
    std::vector<double> lyapunov_t;
    std::vector<double> lyapunov_w;
    std::vector<double> ks_re;  // sup |P(Re log Z / sqrt(log(n)/2) <= x) - Phi(x)|
    std::vector<double> ks_im;
    double fitted_c = 0.0;      // fitted at n_values.front() on ks_re
    std::vector<double> bound_curve;
    std::size_t samples = 0;

    nlohmann::json to_json() const;
};

struct RateOptions
{
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
    /// E|T_j|^3 by nested quadrature is the slow part; skip when false.
    bool include_lyapunov_t = true;
};

/// Rate-of-convergence diagnostic from coupled trajectories read at n_values.
RateReport rate_report(std::span<long long const> n_values, RateOptions const& options);

struct BarnesOptions
{
    double alpha = 1e-3;
    double tolerance = 1e-10;
};

/// Product of independent gamma(j) against Delta_N prod sqrt(gamma_j gamma'_j):
/// the exact log-moment identity and a Monte Carlo two-sample KS on logs.
Report barnes_identity_check(long long n, double t, std::size_t m_samples, RngStream& rng,
                             BarnesOptions const& options = {});

}  // namespace cuepoly
