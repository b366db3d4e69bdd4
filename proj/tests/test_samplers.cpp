#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cuepoly/analytics.hpp"
#include "cuepoly/samplers.hpp"
#include "cuepoly/specfun.hpp"
#include "cuepoly/stats.hpp"

using namespace cuepoly;

namespace
{
template<class F>
std::vector<LogCharPoly> draws(std::size_t m, std::uint64_t stream, F const& f)
{
    RngStream rng(77, stream);
    std::vector<LogCharPoly> out(m);
    for (auto& x : out)
        x = f(rng);
    return out;
}

template<class G>
MeanEstimate mean_of(std::vector<LogCharPoly> const& v, G const& g)
{
    std::vector<double> x(v.size());
    std::transform(v.begin(), v.end(), x.begin(), g);
    return estimate_mean(x);
}

std::vector<double> re_of(std::vector<LogCharPoly> const& v)
{
    std::vector<double> x;
    for (auto const& d : v)
        x.push_back(d.re_log);
    return x;
}

std::vector<double> im_of(std::vector<LogCharPoly> const& v)
{
    std::vector<double> x;
    for (auto const& d : v)
        x.push_back(d.im_log);
    return x;
}

double modulus2(LogCharPoly const& d)
{
    return std::exp(2.0 * d.re_log);
}
}  // namespace

TEST_CASE("unitary product sampler")
{
    SUBCASE("n = 1")
    {
        auto const d = draws(1000000, 1, [](RngStream& r) { return sample_unitary_log_charpoly(1, r); });
        CHECK(std::all_of(d.begin(), d.end(), [](LogCharPoly const& x) {
            return x.re_log <= std::log(2.0) && x.im_log > -pi / 2 && x.im_log <= pi / 2 && x.n == 1
                   && x.group == Group::Unitary;
        }));
        CHECK(std::abs(z_score(mean_of(d, modulus2), 2.0)) < 5.0);
    }
    SUBCASE("n = 10: E|Z|^2 = 11 and E[Z] = 1")
    {
        auto const d = draws(1000000, 2, [](RngStream& r) { return sample_unitary_log_charpoly(10, r); });
        CHECK(std::abs(z_score(mean_of(d, modulus2), 11.0)) < 5.0);
        auto const re = mean_of(d, [](LogCharPoly const& x) { return std::exp(x.re_log) * std::cos(x.im_log); });
        auto const im = mean_of(d, [](LogCharPoly const& x) { return std::exp(x.re_log) * std::sin(x.im_log); });
        CHECK(std::abs(z_score(re, 1.0)) < 5.0);
        CHECK(std::abs(z_score(im, 0.0)) < 5.0);
        CHECK(std::all_of(d.begin(), d.end(), [](LogCharPoly const& x) {
            return x.im_log > -10 * pi / 2 && x.im_log <= 10 * pi / 2;
        }));
    }
    SUBCASE("E[Z] = 1 for other sizes")
    {
        for (long long n : {3, 40})
        {
            auto const d = draws(200000, 3 + n, [n](RngStream& r) { return sample_unitary_log_charpoly(n, r); });
            auto const re = mean_of(d, [](LogCharPoly const& x) { return std::exp(x.re_log) * std::cos(x.im_log); });
            CHECK(std::abs(z_score(re, 1.0)) < 5.0);
        }
    }
    SUBCASE("large n stays finite")
    {
        RngStream rng(1, 99);
        LogCharPoly const d = sample_unitary_log_charpoly(200000, rng);
        CHECK(std::isfinite(d.re_log));
        CHECK(std::isfinite(d.im_log));
    }
    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_unitary_log_charpoly(0, rng), std::domain_error);
}

TEST_CASE("joint radial/angular sampler")
{
    auto const d = draws(1000000, 10, [](RngStream& r) { return sample_joint(10, r); });
    auto const im = im_of(d);
    CHECK(std::abs(z_score(estimate_mean(im), 0.0)) < 5.0);
    MeanEstimate const var = estimate_variance(im);
    CHECK(std::abs(z_score(var, variance_sum(10))) < 5.0);

    auto const joint = draws(100000, 11, [](RngStream& r) { return sample_joint(5, r); });
    auto const product = draws(100000, 12, [](RngStream& r) { return sample_unitary_log_charpoly(5, r); });
    CHECK(ks_two_sample(re_of(joint), re_of(product)).p_value > 1e-3);
    CHECK(ks_two_sample(im_of(joint), im_of(product)).p_value > 1e-3);

    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_joint(0, rng), std::domain_error);
}

TEST_CASE("SO(2n) product sampler")
{
    auto const d = draws(1000000, 20, [](RngStream& r) { return sample_so2n_log_charpoly(1, r); });
    CHECK(std::all_of(d.begin(), d.end(), [](LogCharPoly const& x) {
        return x.im_log == 0.0 && x.re_log <= std::log(4.0) && x.group == Group::SpecialOrthogonalEven;
    }));
    CHECK(std::abs(z_score(mean_of(d, [](LogCharPoly const& x) { return std::exp(x.re_log); }), 2.0)) < 5.0);
    CHECK(std::abs(z_score(mean_of(d, [](LogCharPoly const& x) { return std::exp(2.0 * x.re_log); }), 6.0)) < 5.0);

    // det(I - O) for O in SO(2): 2 - 2 cos theta with theta uniform
    auto const direct = draws(100000, 21, [](RngStream& r) {
        double const theta = 2.0 * pi * r.uniform();
        return LogCharPoly{std::log(2.0 - 2.0 * std::cos(theta)), 0.0, 1, Group::SpecialOrthogonalEven};
    });
    auto const fast = draws(100000, 22, [](RngStream& r) { return sample_so2n_log_charpoly(1, r); });
    CHECK(ks_two_sample(re_of(direct), re_of(fast)).p_value > 1e-3);

    auto const d2 = draws(1000, 23, [](RngStream& r) { return sample_so2n_log_charpoly(2, r); });
    CHECK(std::all_of(d2.begin(), d2.end(), [](LogCharPoly const& x) { return x.im_log == 0.0 && std::isfinite(x.re_log); }));

    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_so2n_log_charpoly(0, rng), std::domain_error);
}

TEST_CASE("trajectories")
{
    SUBCASE("final value equals the direct sampler on the same stream")
    {
        long long const one[] = {7};
        long long const two[] = {3, 7};
        RngStream a(5, 1), b(5, 1), c(5, 1), d(5, 1);
        Trajectory const t1 = sample_trajectory(one, a);
        Trajectory const t2 = sample_trajectory(two, b);
        LogCharPoly const direct7 = sample_unitary_log_charpoly(7, c);
        LogCharPoly const direct3 = sample_unitary_log_charpoly(3, d);
        CHECK(t1.values.back().re_log == direct7.re_log);
        CHECK(t1.values.back().im_log == direct7.im_log);
        CHECK(t2.values.back().re_log == doctest::Approx(direct7.re_log).epsilon(1e-14));
        CHECK(t2.values.back().im_log == doctest::Approx(direct7.im_log).epsilon(1e-14));
        CHECK(t2.values.front().re_log == doctest::Approx(direct3.re_log).epsilon(1e-14));
        CHECK(t2.values.front().im_log == doctest::Approx(direct3.im_log).epsilon(1e-14));
        CHECK(t2.checkpoints == std::vector<long long>{3, 7});
        CHECK(t2.values.front().n == 3);
    }
    SUBCASE("marginal at a checkpoint")
    {
        long long const at[] = {5};
        auto const traj = draws(100000, 30, [&](RngStream& r) { return sample_trajectory(at, r).values.back(); });
        auto const direct = draws(100000, 31, [](RngStream& r) { return sample_unitary_log_charpoly(5, r); });
        CHECK(ks_two_sample(re_of(traj), re_of(direct)).p_value > 1e-3);
    }
    SUBCASE("increments are independent of the earlier value")
    {
        long long const at[] = {10, 100};
        std::vector<double> first, increment;
        RngStream rng(77, 40);
        for (int i = 0; i < 100000; ++i)
        {
            Trajectory const t = sample_trajectory(at, rng);
            first.push_back(t.values[0].re_log);
            increment.push_back(t.values[1].re_log - t.values[0].re_log);
        }
        MeanEstimate const r = estimate_correlation(first, increment);
        CHECK(std::abs(r.mean) < 5.0 * r.std_error);
    }
    SUBCASE("normalized marginal at n = 1e4")
    {
        long long const at[] = {10000};
        std::vector<double> re;
        RngStream rng(77, 50);
        double const scale = 1.0 / std::sqrt(variance_sum(10000));
        for (int i = 0; i < 100000; ++i)
            re.push_back(sample_trajectory(at, rng).values[0].re_log * scale);
        std::sort(re.begin(), re.end());
        CHECK(sup_cdf_deviation(re, [](double x) { return normal_cdf(x); }) <= 0.02);
    }
    RngStream rng(1, 0);
    std::vector<long long> const empty;
    std::vector<long long> const unordered{5, 5};
    std::vector<long long> const zero{0, 4};
    CHECK_THROWS_AS(sample_trajectory(empty, rng), std::domain_error);
    CHECK_THROWS_AS(sample_trajectory(unordered, rng), std::domain_error);
    CHECK_THROWS_AS(sample_trajectory(zero, rng), std::domain_error);
}
