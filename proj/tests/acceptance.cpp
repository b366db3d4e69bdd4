// Runs the twelve acceptance criteria at full size and prints one PASS/FAIL
// line for each. Optional arguments select criteria by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cuepoly/batch.hpp"
#include "cuepoly/report.hpp"
#include "cuepoly/validation.hpp"

using namespace cuepoly;

namespace
{
SuiteConfig defaults()
{
    SuiteConfig c;
    c.seed = 20240601;
    if (char const* w = std::getenv("CUEPOLY_WORKERS"))
        c.workers = std::max(1, std::atoi(w));
    return c;
}

Report mellin()
{
    return mellin_suite(defaults());
}

Report second_moment()
{
    std::vector<long long> exact;
    for (long long n = 1; n <= 1000000; n *= 10)
        exact.push_back(n);
    exact.push_back(999999);
    exact.push_back(123457);
    return second_moment_suite(defaults(), exact, {1, 10, 100});
}

Report joint()
{
    return joint_suite(defaults());
}

Report matrix()
{
    return matrix_suite(defaults());
}

Report identities()
{
    Report r = offcircle_suite(defaults());
    r.append(eigenrec_suite(defaults()));
    return r;
}

Report so2n()
{
    return so2n_suite(defaults());
}

Report algebra()
{
    Report r = barnes_suite(defaults());
    r.append(betagamma_suite(defaults()));
    return r;
}

Report clt()
{
    return clt_suite(defaults());
}

Report rates()
{
    RateReport raw;
    Report r = rates_suite(defaults(), &raw);
    for (std::size_t i = 0; i < raw.n_values.size(); ++i)
        std::printf("    n=%-6lld ks_re=%.5f ks_im=%.5f bound=%.5f L=%.5f L'=%.5f\n", raw.n_values[i], raw.ks_re[i],
                    raw.ks_im[i], raw.bound_curve[i], i < raw.lyapunov_t.size() ? raw.lyapunov_t[i] : NAN,
                    raw.lyapunov_w[i]);
    return r;
}

Report cumulants()
{
    return cumulant_suite(defaults());
}

Report lil()
{
    std::vector<long long> checkpoints;
    for (double x = 1.0; x <= 4.0 + 1e-9; x += 0.25)
        checkpoints.push_back(std::llround(std::pow(10.0, x)));
    SuiteConfig const c = defaults();
    Report r = lil_coupling_check(checkpoints, 10000, c.seed, c.alpha, c.workers);

    // the diagnostic series for one trajectory: each statistic is present
    // exactly where its iterated logarithm is positive
    TrajectoryBatch const one = generate_trajectories(checkpoints, 1, c.seed);
    bool emitted = true;
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
    {
        LilStatistics const s = lil_statistics(one.re_log[i][0], checkpoints[i]);
        bool const by_log = checkpoints[i] >= 16;
        bool const by_variance = std::log(std::log(variance_sum(checkpoints[i]))) > 0.0;
        emitted = emitted && s.by_log.has_value() == by_log && s.by_variance.has_value() == by_variance
                  && (!by_log || std::isfinite(*s.by_log)) && (!by_variance || std::isfinite(*s.by_variance));
    }
    emitted = emitted && lil_statistics(one.re_log.back()[0], checkpoints.back()).by_variance.has_value();
    r.add(condition_check("lil", "normalized series emitted", emitted));
    return r;
}

Report performance()
{
    Report r;
    struct Size
    {
        long long n;
        std::size_t samples;
    };
    std::vector<BenchRow> rows;
    for (Size s : {Size{1000, 4000}, Size{10000, 400}, Size{100000, 40}, Size{1000000, 6}})
        rows.push_back(bench_size(s.n, s.samples, 5));
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        double const per_n = (rows[i].product_seconds / rows[i].n) / (rows[i - 1].product_seconds / rows[i - 1].n);
        std::printf("    n=%-8lld %.3e s/draw, per-factor ratio to previous %.3f\n", rows[i].n, rows[i].product_seconds,
                    per_n);
        r.add(condition_check("bench", "linear scaling to n=" + std::to_string(rows[i].n),
                              per_n >= 0.5 && per_n <= 2.0, "per-factor cost ratio " + std::to_string(per_n)));
    }
    BenchRow const small = bench_size(64, 20000, 5, 100);
    double const speedup = *small.matrix_seconds / small.product_seconds;
    std::printf("    n=64 product %.3e s/draw, matrix %.3e s/draw, speedup %.0f\n", small.product_seconds,
                *small.matrix_seconds, speedup);
    r.add(condition_check("bench", "speedup at n=64", speedup >= 100.0, "speedup " + std::to_string(speedup)));
    return r;
}
}  // namespace

int main(int argc, char** argv)
{
    struct Criterion
    {
        char const* name;
        std::function<Report()> run;
    };
    std::vector<Criterion> const criteria{
        {"Mellin-Fourier reproduction", mellin},
        {"second moment N+1", second_moment},
        {"product and joint decompositions agree", joint},
        {"matrix ground truth", matrix},
        {"off-circle and eigenangle identities", identities},
        {"SO(2N) moments and sampler", so2n},
        {"beta-gamma algebra and gamma-product identity", algebra},
        {"CLT at N=1e4", clt},
        {"rate shape", rates},
        {"cumulants and Lyapunov ratios", cumulants},
        {"iterated-logarithm coupling", lil},
        {"performance", performance},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        int const id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id))
            continue;
        auto const start = std::chrono::steady_clock::now();
        Report report;
        std::string error;
        try
        {
            report = criteria[i].run();
        }
        catch (std::exception const& e)
        {
            error = e.what();
        }
        double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool const pass = error.empty() && report.all_passed() && !report.checks().empty();
        failed += !pass;
        std::printf("criterion %2d %s: %s (%zu checks, %.1f s)\n", id, pass ? "PASS" : "FAIL", criteria[i].name,
                    report.checks().size(), seconds);
        if (!error.empty())
            std::printf("    error: %s\n", error.c_str());
        for (CheckResult const& c : report.checks())
            if (!c.passed)
                std::printf("    failed %s / %s: statistic %.6g, threshold %.6g %s\n", c.suite.c_str(),
                            c.quantity.c_str(), c.statistic, c.threshold, c.note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
