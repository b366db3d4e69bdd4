#include "cuepoly/samplers.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cuepoly/distributions.hpp"
#include "cuepoly/specfun.hpp"

namespace cuepoly
{
namespace
{
std::atomic<std::uint64_t> degenerate_factors{0};

constexpr double ln2 = 0.69314718055994530941723212145817657;

// Uniform point on the unit circle as (u, v) in the unit disk: the angle of
// (u, v) is uniform, cos = (u^2 - v^2)/r2, 1 + cos = 2u^2/r2, sin = 2uv/r2.
struct CirclePoint
{
    double u2_over_r2;
    double cos_theta;
    double sin_theta;
};

inline CirclePoint sample_circle(RngStream& rng)
{
    double u, v, r2;
    do
    {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
        r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    double const inv = 1.0 / r2;
    return {u * u * inv, (u * u - v * v) * inv, 2.0 * u * v * inv};
}

// One factor 1 + e^{i theta} sqrt(beta_{1,k-1}): real and imaginary parts
// and the squared modulus, all free of cancellation.
struct Factor
{
    double real;
    double imag;
    double modulus2;
};

// expm1 with a Taylor polynomial near 0, where most large-k draws land
inline double fast_expm1(double x)
{
    if (std::abs(x) >= 0.01)
        return std::expm1(x);
    return x * (1.0 + x * (1.0 / 2 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x * (1.0 / 720 + x * (1.0 / 5040 + x / 40320)))))));
}

inline Factor sample_factor(long long k, RngStream& rng)
{
    for (;;)
    {
        double r = 1.0;
        double one_minus_r = 0.0;
        if (k > 1)
        {
            // beta = 1 - U^{1/(k-1)}
            double const x = std::log(rng.uniform_open()) / static_cast<double>(k - 1);
            double const em1 = fast_expm1(x);
            double const one_minus_beta = em1 > -0.5 ? 1.0 + em1 : std::exp(x);
            r = std::sqrt(-em1);
            one_minus_r = one_minus_beta / (1.0 + r);
        }
        CirclePoint const p = sample_circle(rng);
        // |1 + r e^{i theta}|^2 = (1 - r)^2 + 2 r (1 + cos theta)
        Factor const f{one_minus_r + 2.0 * r * p.u2_over_r2, r * p.sin_theta,
                       one_minus_r * one_minus_r + 4.0 * r * p.u2_over_r2};
        if (f.modulus2 != 0.0)
            return f;
        degenerate_factors.fetch_add(1, std::memory_order_relaxed);
    }
}

// Running sum of Log(1 + e^{i theta_k} sqrt(beta_{1,k-1})). Every factor has
// positive real part, so the principal arguments of two consecutive factors
// add up to the argument of their product; one atan2 per pair. The modulus
// is accumulated as a product renormalized with frexp.
class UnitaryAccumulator
{
  public:
    void add_factor(long long k, RngStream& rng)
    {
        Factor const f = sample_factor(k, rng);
        mantissa_ *= f.modulus2;
        if (has_pending_)
        {
            im_ += std::atan2(pending_.real * f.imag + pending_.imag * f.real,
                              pending_.real * f.real - pending_.imag * f.imag);
            has_pending_ = false;
        }
        else
        {
            pending_ = f;
            has_pending_ = true;
        }
        if (++since_renormalize_ == 32)
            renormalize();
    }

    LogCharPoly value(long long n) const
    {
        double im = im_;
        if (has_pending_)
            im += std::atan2(pending_.imag, pending_.real);
        return {0.5 * (std::log(mantissa_) + static_cast<double>(exponent_) * ln2), im, n, Group::Unitary};
    }

  private:
    void renormalize()
    {
        int e = 0;
        mantissa_ = std::frexp(mantissa_, &e);
        exponent_ += e;
        since_renormalize_ = 0;
    }

    double mantissa_ = 1.0;
    long long exponent_ = 0;
    int since_renormalize_ = 0;
    Factor pending_{};
    bool has_pending_ = false;
    double im_ = 0.0;
};

void require_positive(long long n, char const* who)
{
    if (n < 1)
        throw std::domain_error(std::string(who) + ": n must be >= 1, got " + std::to_string(n));
}
}  // namespace

std::string_view to_string(Group group)
{
    return group == Group::Unitary ? "unitary" : "so2n";
}

std::uint64_t degenerate_factor_count()
{
    return degenerate_factors.load(std::memory_order_relaxed);
}

LogCharPoly sample_unitary_log_charpoly(long long n, RngStream& rng)
{
    require_positive(n, "sample_unitary_log_charpoly");
    UnitaryAccumulator acc;
    for (long long k = 1; k <= n; ++k)
        acc.add_factor(k, rng);
    return acc.value(n);
}

LogCharPoly sample_joint(long long n, RngStream& rng)
{
    require_positive(n, "sample_joint");
    double re = 0.0;
    double im = 0.0;
    for (long long j = 1; j <= n; ++j)
    {
        // cos W_j = sqrt(b) with b ~ beta_{j-1/2,1/2}
        double const b = sample_beta(static_cast<double>(j) - 0.5, 0.5, rng);
        double const w = sample_sign(rng) * std::acos(std::sqrt(b));
        double log_beta = 0.0;
        if (j > 1)
        {
            double const x = sample_gamma(static_cast<double>(j), rng);
            double const y = sample_gamma(static_cast<double>(j - 1), rng);
            log_beta = std::log(x) - std::log(x + y);
        }
        re += log_beta + ln2 + 0.5 * std::log(b);
        im += w;
    }
    return {re, im, n, Group::Unitary};
}

LogCharPoly sample_so2n_log_charpoly(long long n, RngStream& rng)
{
    require_positive(n, "sample_so2n_log_charpoly");
    double re = ln2;
    for (long long k = 2; k <= 2 * n; ++k)
    {
        double const b = 0.5 * static_cast<double>(k - 1);
        for (;;)
        {
            double const x = sample_gamma(0.5, rng);
            double const y = sample_gamma(b, rng);
            double const total = x + y;
            if (!(total > 0.0))
                continue;
            double const r = std::sqrt(x / total);
            double log_factor;
            if (sample_sign(rng) > 0.0)
            {
                log_factor = std::log1p(r);
            }
            else
            {
                // 1 - sqrt(beta) = (1 - beta) / (1 + sqrt(beta)), 1 - beta = y / total
                double const one_minus = (y / total) / (1.0 + r);
                if (one_minus == 0.0)
                {
                    degenerate_factors.fetch_add(1, std::memory_order_relaxed);
                    continue;
                }
                log_factor = std::log(one_minus);
            }
            re += log_factor;
            break;
        }
    }
    return {re, 0.0, n, Group::SpecialOrthogonalEven};
}

Trajectory sample_trajectory(std::span<long long const> checkpoints, RngStream& rng)
{
    if (checkpoints.empty())
        throw std::domain_error("sample_trajectory: checkpoints must be nonempty");
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
    {
        if (checkpoints[i] < 1 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw std::domain_error("sample_trajectory: checkpoints must be >= 1 and strictly increasing");
    }

    Trajectory out;
    out.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    out.values.reserve(checkpoints.size());
    UnitaryAccumulator acc;
    long long k = 0;
    for (long long const checkpoint : checkpoints)
    {
        while (k < checkpoint)
            acc.add_factor(++k, rng);
        out.values.push_back(acc.value(checkpoint));
    }
    return out;
}

}  // namespace cuepoly
