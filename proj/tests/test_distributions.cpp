#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cuepoly/distributions.hpp"
#include "cuepoly/specfun.hpp"
#include "cuepoly/stats.hpp"

using namespace cuepoly;

namespace
{
constexpr std::size_t big = 1000000;

template<class F>
std::vector<double> draws(std::size_t m, std::uint64_t stream, F const& f)
{
    RngStream rng(2024, stream);
    std::vector<double> out(m);
    for (auto& x : out)
        x = f(rng);
    return out;
}

template<class F>
MeanEstimate mean_of(std::vector<double> const& v, F const& g)
{
    std::vector<double> mapped(v.size());
    std::transform(v.begin(), v.end(), mapped.begin(), g);
    return estimate_mean(mapped);
}

// Test-time cross-check: W_j by rejection against the flat density.
double sample_w_by_rejection(int j, RngStream& rng)
{
    for (;;)
    {
        double const v = (rng.uniform() - 0.5) * pi;
        if (rng.uniform() < std::pow(std::cos(v), 2 * (j - 1)))
            return v;
    }
}
}  // namespace

TEST_CASE("gamma variates")
{
    SUBCASE("a = 1: median ln 2")
    {
        auto const x = draws(big, 1, [](RngStream& r) { return sample_gamma(1.0, r); });
        MeanEstimate const above = mean_of(x, [](double v) { return v > std::log(2.0) ? 1.0 : 0.0; });
        CHECK(std::abs(z_score(above, 0.5)) < 5.0);
    }
    SUBCASE("a = 2: mean Gamma(3)/Gamma(2)")
    {
        auto const x = draws(big, 2, [](RngStream& r) { return sample_gamma(2.0, r); });
        CHECK(std::abs(z_score(estimate_mean(x), std::tgamma(3.0) / std::tgamma(2.0))) < 5.0);
    }
    SUBCASE("a = 0.5: second moment Gamma(2.5)/Gamma(0.5)")
    {
        auto const x = draws(big, 3, [](RngStream& r) { return sample_gamma(0.5, r); });
        MeanEstimate const m2 = mean_of(x, [](double v) { return v * v; });
        CHECK(std::abs(z_score(m2, std::tgamma(2.5) / std::tgamma(0.5))) < 5.0);
    }
    SUBCASE("large shape against the exact CDF")
    {
        auto x = draws(100000, 4, [](RngStream& r) { return sample_gamma(37.5, r); });
        std::sort(x.begin(), x.end());
        KsResult const ks = ks_statistic(x, [](double v) { return boost::math::gamma_p(37.5, v); });
        CHECK(ks.p_value > 1e-3);
    }
    CHECK_THROWS_AS(
        [] {
            RngStream rng(1, 0);
            sample_gamma(0.0, rng);
        }(),
        std::domain_error);
}

TEST_CASE("beta variates")
{
    RngStream rng(5, 0);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_beta(1.0, 0.0, rng) == 1.0);

    auto const uniform = draws(big, 10, [](RngStream& r) { return sample_beta(1.0, 1.0, r); });
    CHECK(std::abs(z_score(estimate_mean(uniform), 0.5)) < 5.0);

    // E[beta_{1,N-1}] = 1/N with N = 3
    auto const b12 = draws(big, 11, [](RngStream& r) { return sample_beta(1.0, 2.0, r); });
    CHECK(std::abs(z_score(estimate_mean(b12), 1.0 / 3.0)) < 5.0);

    // the inverse-CDF route for beta_{1,b} has the same law
    auto inverse = draws(100000, 12, [](RngStream& r) { return sample_beta_one(6.0, r); });
    auto ratio = draws(100000, 13, [](RngStream& r) { return sample_beta(1.0, 6.0, r); });
    CHECK(ks_two_sample(inverse, ratio).p_value > 1e-3);
    std::sort(inverse.begin(), inverse.end());
    CHECK(ks_statistic(inverse, [](double v) { return 1.0 - std::pow(1.0 - v, 6.0); }).p_value > 1e-3);

    CHECK_THROWS_AS(sample_beta(0.0, 1.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_beta(1.0, -1.0, rng), std::domain_error);
}

TEST_CASE("symmetric sign")
{
    auto const s = draws(big, 20, [](RngStream& r) { return sample_sign(r); });
    CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v == 1.0 || v == -1.0; }));
    CHECK(std::abs(z_score(estimate_mean(s), 0.0)) < 5.0);
}

TEST_CASE("W_j density and normalization")
{
    CHECK(w_density(WjParams::make(1), 0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
    CHECK(w_density(WjParams::make(3), pi / 2) == doctest::Approx(0.0));
    CHECK(w_density(WjParams::make(3), -pi / 2) == doctest::Approx(0.0));
    CHECK(w_density(WjParams::make(3), 2.0) == 0.0);
    CHECK_THROWS_AS(WjParams::make(0), std::domain_error);

    for (int j : {1, 2, 3, 7, 40, 300})
    {
        WjParams const p = WjParams::make(j);
        // K_j = 2^{2(j-1)} ((j-1)!)^2 / (pi (2j-2)!)
        double const direct =
            std::exp(2.0 * (j - 1) * std::log(2.0) + 2.0 * std::lgamma(j) - std::log(pi) - std::lgamma(2.0 * j - 1.0));
        CAPTURE(j);
        CHECK(p.normalization == doctest::Approx(direct).epsilon(1e-12));
        double const mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double v) { return w_density(p, v); }, -pi / 2, pi / 2, 15, 1e-14);
        CHECK(std::abs(mass - 1.0) <= 1e-10);
    }
}

TEST_CASE("W_j variates")
{
    SUBCASE("j = 1 is uniform")
    {
        auto w = draws(100000, 30, [](RngStream& r) { return sample_w(WjParams::make(1), r); });
        CHECK(std::all_of(w.begin(), w.end(), [](double v) { return v > -pi / 2 && v < pi / 2; }));
        std::sort(w.begin(), w.end());
        CHECK(ks_statistic(w, [](double v) { return std::clamp(v / pi + 0.5, 0.0, 1.0); }).p_value > 1e-3);
    }
    SUBCASE("symmetric")
    {
        for (int j : {1, 2, 9})
        {
            auto const w = draws(big, 31 + j, [j](RngStream& r) { return sample_w(WjParams::make(j), r); });
            CHECK(std::abs(z_score(estimate_mean(w), 0.0)) < 5.0);
        }
    }
    SUBCASE("j = 2 characteristic function at s = 1")
    {
        auto const w = draws(big, 50, [](RngStream& r) { return sample_w(WjParams::make(2), r); });
        double const exact = 1.0 / (std::tgamma(2.5) * std::tgamma(1.5));
        CHECK(exact == doctest::Approx(0.8488263631567751));
        CHECK(std::abs(z_score(mean_of(w, [](double v) { return std::cos(v); }), exact)) < 5.0);
        CHECK(std::abs(z_score(mean_of(w, [](double v) { return std::sin(v); }), 0.0)) < 5.0);
    }
    SUBCASE("beta transform agrees with rejection sampling")
    {
        for (int j : {1, 2, 5})
        {
            auto const fast = draws(100000, 60 + j, [j](RngStream& r) { return sample_w(WjParams::make(j), r); });
            auto const slow = draws(100000, 70 + j, [j](RngStream& r) { return sample_w_by_rejection(j, r); });
            CAPTURE(j);
            CHECK(ks_two_sample(fast, slow).p_value > 1e-3);
        }
    }
}
