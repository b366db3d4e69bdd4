#include "cuepoly/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "cuepoly/batch.hpp"
#include "cuepoly/distributions.hpp"
#include "cuepoly/matrix_oracle.hpp"
#include "cuepoly/specfun.hpp"
#include "cuepoly/stats.hpp"

namespace cuepoly
{
namespace
{
constexpr std::array suite_names{"mellin",  "joint",     "so2n", "offcircle", "eigenrec",
                                 "barnes",  "betagamma", "clt",  "rates",     "all"};

// Disjoint stream ids per suite: suite index in the high bits, then one
// block of 1024 ids (one per worker) per batch.
class StreamPlan
{
  public:
    explicit StreamPlan(Suite suite) : next_(static_cast<std::uint64_t>(suite) << 40) {}
    std::uint64_t next()
    {
        std::uint64_t const id = next_;
        next_ += 1024;
        return id;
    }

  private:
    std::uint64_t next_;
};

std::string fmt(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string label_n(long long n)
{
    return "n=" + std::to_string(n);
}

std::vector<long long> n_values_or(SuiteConfig const& config, std::vector<long long> fallback)
{
    return config.n_values.empty() ? std::move(fallback) : config.n_values;
}

std::vector<double> sum_of(std::vector<double> a, std::vector<double> const& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

void add_two_sample_ks(Report& report, std::string const& suite, std::string const& quantity,
                       std::span<double const> a, std::span<double const> b, double alpha)
{
    KsResult const ks = ks_two_sample(a, b);
    report.add(ks_check(suite, quantity, ks.statistic, ks.p_value, std::min(a.size(), b.size()), alpha));
}

// Two-sample KS and the first three raw moments, each within z_threshold.
void add_law_comparison(Report& report, std::string const& suite, std::string const& what,
                        std::vector<double> const& a, std::vector<double> const& b, SuiteConfig const& config)
{
    add_two_sample_ks(report, suite, "KS " + what, a, b, config.alpha);
    std::vector<double> pa(a.size());
    std::vector<double> pb(b.size());
    for (int p = 1; p <= 3; ++p)
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            pa[i] = std::pow(a[i], p);
        for (std::size_t i = 0; i < b.size(); ++i)
            pb[i] = std::pow(b[i], p);
        MeanEstimate const ea = estimate_mean(pa);
        MeanEstimate const eb = estimate_mean(pb);
        double const se = std::hypot(ea.std_error, eb.std_error);
        report.add(z_check(suite, "moment " + std::to_string(p) + " " + what, eb.mean, ea.mean, se,
                           std::min(a.size(), b.size()), config.z_threshold));
    }
}

template<class F>
std::vector<double> draw_many(std::size_t count, RngStream& rng, F const& f)
{
    std::vector<double> out(count);
    for (auto& x : out)
        x = f(rng);
    return out;
}

double normal(double x)
{
    return normal_cdf(x);
}

std::vector<double> scaled_sorted(std::vector<double> v, double scale)
{
    for (double& x : v)
        x *= scale;
    std::sort(v.begin(), v.end());
    return v;
}
}  // namespace

std::string_view to_string(Suite suite)
{
    return suite_names[static_cast<std::size_t>(suite)];
}

Suite suite_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < suite_names.size(); ++i)
        if (name == suite_names[i])
            return static_cast<Suite>(i);
    throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

std::vector<Suite> all_suites()
{
    std::vector<Suite> out;
    for (std::size_t i = 0; i + 1 < suite_names.size(); ++i)
        out.push_back(static_cast<Suite>(i));
    return out;
}

Report mellin_suite(SuiteConfig const& config, std::vector<std::pair<double, double>> const& grid)
{
    Report report;
    StreamPlan plan(Suite::Mellin);
    std::size_t const samples = config.samples_or(1000000);
    for (long long n : n_values_or(config, {1, 2, 5, 10, 50}))
    {
        SampleBatch const batch = generate_batch(SamplerKind::Product, n, samples, config.seed, config.workers,
                                                 plan.next());
        for (auto const& [t, s] : grid)
        {
            double const exact = std::exp(moment_unitary({t, s, Group::Unitary, n}));
            ComplexMomentEstimate const est = empirical_moment(batch, t, s);
            std::string const what = "E[|Z|^" + fmt(t) + " e^{i" + fmt(s) + " arg Z}] " + label_n(n);
            report.add(z_check("mellin", what + " real part", exact, est.re.mean, est.re.std_error, samples,
                               config.z_threshold));
            report.add(z_check("mellin", what + " imaginary part", 0.0, est.im.mean, est.im.std_error, samples,
                               config.z_threshold));
        }
    }
    return report;
}

Report second_moment_suite(SuiteConfig const& config, std::vector<long long> const& exact_n,
                           std::vector<long long> const& mc_n)
{
    Report report;
    StreamPlan plan(Suite::Mellin);
    for (long long n : exact_n)
        report.add(abs_check("mellin", "log E|Z|^2 = log(n+1) " + label_n(n), std::log1p(static_cast<double>(n)),
                             moment_unitary({2.0, 0.0, Group::Unitary, n}), 1e-12));
    std::size_t const samples = config.samples_or(1000000);
    for (long long n : mc_n)
    {
        // separate stream range from mellin_suite
        SampleBatch const batch = generate_batch(SamplerKind::Product, n, samples, config.seed, config.workers,
                                                 plan.next() + (1ull << 36));
        ComplexMomentEstimate const est = empirical_moment(batch, 2.0, 0.0);
        report.add(z_check("mellin", "E|Z|^2 = n+1 " + label_n(n), static_cast<double>(n + 1), est.re.mean,
                           est.re.std_error, samples, config.z_threshold));
    }
    return report;
}

Report joint_suite(SuiteConfig const& config)
{
    Report report;
    StreamPlan plan(Suite::Joint);
    std::size_t const samples = config.samples_or(100000);
    for (long long n : n_values_or(config, {2, 5, 10}))
    {
        SampleBatch const joint = generate_batch(SamplerKind::Joint, n, samples, config.seed, config.workers,
                                                 plan.next());
        SampleBatch const product = generate_batch(SamplerKind::Product, n, samples, config.seed,
                                                   config.workers, plan.next());
        auto const jr = joint.re_logs();
        auto const ji = joint.im_logs();
        auto const pr = product.re_logs();
        auto const pi_ = product.im_logs();
        add_two_sample_ks(report, "joint", "KS re_log joint vs product " + label_n(n), jr, pr, config.alpha);
        add_two_sample_ks(report, "joint", "KS im_log joint vs product " + label_n(n), ji, pi_, config.alpha);
        add_two_sample_ks(report, "joint", "KS re_log+im_log joint vs product " + label_n(n), sum_of(jr, ji),
                          sum_of(pr, pi_), config.alpha);
        MeanEstimate const var = estimate_variance(ji);
        report.add(z_check("joint", "Var im_log = B_n " + label_n(n), variance_sum(n), var.mean, var.std_error,
                           samples, config.z_threshold));
    }
    return report;
}

Report matrix_suite(SuiteConfig const& config)
{
    Report report;
    StreamPlan plan(Suite::Joint);
    // keep clear of joint_suite's ids
    for (int i = 0; i < 4096; ++i)
        plan.next();
    std::size_t const samples = config.samples_or(100000);
    for (long long n : n_values_or(config, {2, 3, 4, 5, 6, 7, 8}))
    {
        SampleBatch const product = generate_batch(SamplerKind::Product, n, samples, config.seed,
                                                   config.workers, plan.next());
        SampleBatch const qr = generate_batch(SamplerKind::MatrixQR, n, samples, config.seed, config.workers,
                                              plan.next());
        SampleBatch const recursive = generate_batch(SamplerKind::MatrixRecursive, n, samples, config.seed,
                                                     config.workers, plan.next());
        add_two_sample_ks(report, "matrix", "KS re_log product vs Haar QR " + label_n(n), product.re_logs(),
                          qr.re_logs(), config.alpha);
        add_two_sample_ks(report, "matrix", "KS im_log product vs Haar QR " + label_n(n), product.im_logs(),
                          qr.im_logs(), config.alpha);
        add_two_sample_ks(report, "matrix", "KS re_log recursive vs Haar QR " + label_n(n), recursive.re_logs(),
                          qr.re_logs(), config.alpha);
        add_two_sample_ks(report, "matrix", "KS im_log recursive vs Haar QR " + label_n(n), recursive.im_logs(),
                          qr.im_logs(), config.alpha);
    }
    return report;
}

Report so2n_suite(SuiteConfig const& config)
{
    Report report;
    StreamPlan plan(Suite::So2n);
    std::size_t const samples = config.samples_or(1000000);
    for (long long n : n_values_or(config, {1, 2, 5, 20}))
    {
        SampleBatch const batch = generate_batch(SamplerKind::ProductSO2N, n, samples, config.seed,
                                                 config.workers, plan.next());
        bool const real = std::all_of(batch.draws.begin(), batch.draws.end(),
                                      [](LogCharPoly const& d) { return d.im_log == 0.0; });
        report.add(condition_check("so2n", "im_log = 0 for every draw " + label_n(n), real));
        for (double t : {1.0, 2.0, 3.0})
        {
            ComplexMomentEstimate const est = empirical_moment(batch, t, 0.0);
            report.add(z_check("so2n", "E[Z^" + fmt(t) + "] " + label_n(n), std::exp(moment_so2n(n, t)),
                               est.re.mean, est.re.std_error, samples, config.z_threshold));
        }
    }
    report.add(abs_check("so2n", "E[Z] = 2 at n=1", 2.0, std::exp(moment_so2n(1, 1.0)), 1e-12));
    report.add(abs_check("so2n", "E[Z^2] = 6 at n=1", 6.0, std::exp(moment_so2n(1, 2.0)), 1e-12));

    std::size_t const matrix_samples = std::min<std::size_t>(samples, 100000);
    SampleBatch const product = generate_batch(SamplerKind::ProductSO2N, 2, matrix_samples, config.seed,
                                               config.workers, plan.next());
    SampleBatch const matrix = generate_batch(SamplerKind::MatrixSO2N, 2, matrix_samples, config.seed,
                                              config.workers, plan.next());
    add_two_sample_ks(report, "so2n", "KS re_log product vs Haar SO(4)", product.re_logs(), matrix.re_logs(),
                      config.alpha);

    RngStream rng(config.seed, plan.next());
    for (int k : {2, 3, 5})
    {
        double const b = 0.5 * (k - 1);
        auto const left = draw_many(matrix_samples, rng, [b](RngStream& r) {
            return 1.0 + sample_sign(r) * std::sqrt(sample_beta(0.5, b, r));
        });
        auto const right = draw_many(matrix_samples, rng, [b](RngStream& r) { return 2.0 * sample_beta(b, b, r); });
        add_two_sample_ks(report, "so2n",
                          "KS 1 + eps sqrt(beta_{1/2,(k-1)/2}) vs 2 beta_{(k-1)/2,(k-1)/2} k=" + std::to_string(k),
                          left, right, config.alpha);
    }
    return report;
}

Report offcircle_suite(SuiteConfig const& config)
{
    RngStream rng(config.seed, static_cast<std::uint64_t>(Suite::Offcircle) << 40);
    IdentityOptions const options{config.alpha, config.z_threshold};
    Report report;
    for (long long n : n_values_or(config, {3}))
        report.append(verify_offcircle_identity(static_cast<long>(n), 0.5, config.samples_or(100000), rng, options));
    return report;
}

Report eigenrec_suite(SuiteConfig const& config)
{
    RngStream rng(config.seed, static_cast<std::uint64_t>(Suite::Eigenrec) << 40);
    IdentityOptions const options{config.alpha, config.z_threshold};
    Report report;
    for (long long n : n_values_or(config, {3}))
        report.append(verify_eigenangle_identity(static_cast<long>(n), 0.5, config.samples_or(100000), rng, options));
    return report;
}

Report barnes_suite(SuiteConfig const& config)
{
    Report report;
    StreamPlan plan(Suite::Barnes);
    BarnesOptions const options{config.alpha, 1e-10};
    for (long long n : n_values_or(config, {1, 3, 5}))
    {
        RngStream rng(config.seed, plan.next());
        bool first = true;
        for (double t : {0.5, 1.0, 2.0})
        {
            // the Monte Carlo side does not depend on t; run it once per n
            report.append(barnes_identity_check(n, t, first ? config.samples_or(100000) : 0, rng, options));
            first = false;
        }
    }
    return report;
}

Report betagamma_suite(SuiteConfig const& config)
{
    Report report;
    StreamPlan plan(Suite::Betagamma);
    std::size_t const samples = config.samples_or(100000);

    for (auto const& [a, b] : {std::pair{1.0, 2.0}, std::pair{2.0, 3.0}, std::pair{0.5, 0.5}})
    {
        RngStream rng(config.seed, plan.next());
        auto const left = draw_many(samples, rng, [a, b](RngStream& r) {
            double const beta = sample_beta(a, b, r);
            return beta * sample_gamma(a + b, r);
        });
        auto const right = draw_many(samples, rng, [a](RngStream& r) { return sample_gamma(a, r); });
        add_law_comparison(report, "betagamma", "beta_{a,b} gamma_{a+b} vs gamma_a (a,b)=(" + fmt(a) + "," + fmt(b) + ")",
                           left, right, config);
    }
    for (int j : {1, 2, 5})
    {
        RngStream rng(config.seed, plan.next());
        double const jd = j;
        auto const left = draw_many(samples, rng, [jd](RngStream& r) { return sample_gamma(jd, r); });
        auto const right = draw_many(samples, rng, [jd](RngStream& r) {
            double const g = sample_gamma(0.5 * jd, r);
            return 2.0 * std::sqrt(g * sample_gamma(0.5 * (jd + 1.0), r));
        });
        add_law_comparison(report, "betagamma", "gamma_j vs 2 sqrt(gamma_{j/2} gamma'_{(j+1)/2}) j=" + std::to_string(j),
                           left, right, config);
    }
    for (int j : {1, 2, 5})
    {
        RngStream rng(config.seed, plan.next());
        WjParams const params = WjParams::make(j);
        auto const left = draw_many(samples, rng, [&](RngStream& r) { return std::cos(sample_w(params, r)); });
        auto const right = draw_many(samples, rng, [j](RngStream& r) {
            return std::sqrt(sample_beta(j - 0.5, 0.5, r));
        });
        add_law_comparison(report, "betagamma", "cos W_j vs sqrt(beta_{j-1/2,1/2}) j=" + std::to_string(j), left, right,
                           config);
    }
    return report;
}

Report clt_suite(SuiteConfig const& config, double max_distance)
{
    Report report;
    StreamPlan plan(Suite::Clt);
    std::size_t const samples = config.samples_or(100000);
    for (long long n : n_values_or(config, {10000}))
    {
        SampleBatch const batch = generate_batch(SamplerKind::Product, n, samples, config.seed, config.workers,
                                                 plan.next());
        auto const re = batch.re_logs();
        auto const im = batch.im_logs();
        double const scale = 1.0 / std::sqrt(variance_sum(n));
        double const log_scale = 1.0 / std::sqrt(0.5 * std::log(static_cast<double>(n)));
        for (int part = 0; part < 2; ++part)
        {
            auto const& v = part == 0 ? re : im;
            std::string const name = part == 0 ? "re_log" : "im_log";
            double const d = sup_cdf_deviation(scaled_sorted(v, scale), normal);
            double const d_log = sup_cdf_deviation(scaled_sorted(v, log_scale), normal);
            CheckResult c = distance_check("clt", "sup |F - Phi| of " + name + " / sqrt(B_n) " + label_n(n), d,
                                           samples, max_distance);
            c.note = "with sqrt(log(n)/2) scaling: " + fmt(d_log);
            report.add(std::move(c));
        }
        MeanEstimate const r = estimate_correlation(re, im);
        report.add(z_check("clt", "corr(re_log, im_log) " + label_n(n), 0.0, r.mean, r.std_error, samples,
                           config.z_threshold));
    }
    return report;
}

Report rates_suite(SuiteConfig const& config, RateReport* raw)
{
    std::vector<long long> const n_values = n_values_or(config, {10, 100, 1000, 10000});
    RateOptions options;
    options.samples = config.samples_or(1000000);
    options.seed = config.seed;
    options.workers = config.workers;
    RateReport const rates = rate_report(n_values, options);

    Report report;
    std::ostringstream values;
    for (std::size_t i = 0; i < n_values.size(); ++i)
        values << (i ? ", " : "") << "n=" << n_values[i] << ": " << rates.ks_re[i];

    bool nonincreasing = true;
    bool bounded = true;
    for (std::size_t i = 1; i < n_values.size(); ++i)
    {
        nonincreasing = nonincreasing && rates.ks_re[i] <= rates.ks_re[i - 1];
        bounded = bounded && rates.ks_re[i] <= rates.bound_curve[i];
    }
    report.add(condition_check("rates", "sup |F_n - Phi| of re_log / sqrt(log(n)/2) nonincreasing in n",
                               nonincreasing, values.str()));
    std::ostringstream bound;
    bound << "c = " << rates.fitted_c << "; bound:";
    for (std::size_t i = 0; i < n_values.size(); ++i)
        bound << " " << rates.bound_curve[i];
    report.add(condition_check("rates", "sup |F_n - Phi| within c / (log n)^{3/2} fitted at the first n", bounded,
                               bound.str()));

    auto const describe = [&](std::vector<double> const& l) {
        std::ostringstream os;
        for (std::size_t i = 0; i < l.size(); ++i)
            os << (i ? ", " : "") << "n=" << n_values[i] << ": " << l[i];
        return os.str();
    };
    bool w_decreasing = true;
    bool t_nonincreasing = true;
    bool positive = true;
    for (std::size_t i = 0; i < n_values.size(); ++i)
    {
        positive = positive && rates.lyapunov_w[i] > 0.0 && rates.lyapunov_t[i] > 0.0;
        if (i > 0)
        {
            w_decreasing = w_decreasing && rates.lyapunov_w[i] < rates.lyapunov_w[i - 1];
            t_nonincreasing = t_nonincreasing && rates.lyapunov_t[i] <= rates.lyapunov_t[i - 1];
        }
    }
    report.add(condition_check("rates", "Lyapunov ratios positive", positive));
    report.add(condition_check("rates", "L'_n (angular) strictly decreasing", w_decreasing, describe(rates.lyapunov_w)));
    report.add(condition_check("rates", "L_n (radial) nonincreasing", t_nonincreasing, describe(rates.lyapunov_t)));
    if (raw)
        *raw = rates;
    return report;
}

Report cumulant_suite(SuiteConfig const& config)
{
    Report report;
    double const h = 1e-4;
    for (long long j : {1, 2, 5, 10, 100, 1000})
    {
        double const d2_t = (mellin_t(j, h) - 2.0 * mellin_t(j, 0.0) + mellin_t(j, -h)) / (h * h);
        report.add(abs_check("cumulants", "Q_{j,2} vs d^2/dt^2 log E[e^{t T_j}] j=" + std::to_string(j), d2_t,
                             cumulant(j, 2, CumulantOf::Q), 1e-6));
        // log E[e^{isW}] = -R_2 s^2 / 2 + ...
        double const d2_w = -(fourier_w(j, h) - 2.0 * fourier_w(j, 0.0) + fourier_w(j, -h)) / (h * h);
        report.add(abs_check("cumulants", "R_{j,2} vs -d^2/ds^2 log E[e^{isW_j}] j=" + std::to_string(j), d2_w,
                             cumulant(j, 2, CumulantOf::R), 1e-6));
    }
    report.add(abs_check("cumulants", "E|W_1|^3 = pi^3/32", pi * pi * pi / 32.0, third_abs_moment_w(1), 1e-8));

    std::vector<long long> const n_values = n_values_or(config, {10, 100, 1000, 10000});
    std::vector<double> const l = lyapunov_series(n_values, LyapunovOf::W);
    bool decreasing = true;
    std::ostringstream os;
    for (std::size_t i = 0; i < l.size(); ++i)
    {
        os << (i ? ", " : "") << "n=" << n_values[i] << ": " << l[i];
        if (i > 0)
            decreasing = decreasing && l[i] < l[i - 1];
    }
    report.add(condition_check("cumulants", "L'_n strictly decreasing", decreasing, os.str()));
    return report;
}

Report run_suite(Suite suite, SuiteConfig const& config)
{
    switch (suite)
    {
        case Suite::Mellin:
        {
            Report r = mellin_suite(config);
            r.append(second_moment_suite(config, {1, 10, 100, 1000, 10000, 100000, 1000000}, {1, 10, 100}));
            return r;
        }
        case Suite::Joint:
        {
            Report r = joint_suite(config);
            r.append(matrix_suite(config));
            return r;
        }
        case Suite::So2n:
            return so2n_suite(config);
        case Suite::Offcircle:
            return offcircle_suite(config);
        case Suite::Eigenrec:
            return eigenrec_suite(config);
        case Suite::Barnes:
            return barnes_suite(config);
        case Suite::Betagamma:
            return betagamma_suite(config);
        case Suite::Clt:
            return clt_suite(config);
        case Suite::Rates:
        {
            Report r = cumulant_suite(config);
            r.append(rates_suite(config));
            return r;
        }
        case Suite::All:
        {
            Report r;
            for (Suite s : all_suites())
                r.append(run_suite(s, config));
            return r;
        }
    }
    throw std::invalid_argument("unknown suite");
}

LilStatistics lil_statistics(double re_log, long long n)
{
    LilStatistics out;
    if (n >= 16)
        out.by_log = re_log / std::sqrt(std::log(static_cast<double>(n)) * std::log(std::log(std::log(static_cast<double>(n)))));
    double const b = variance_sum(n);
    double const loglog = std::log(std::log(b));
    if (b > 1.0 && loglog > 0.0)
        out.by_variance = re_log / std::sqrt(2.0 * b * loglog);
    return out;
}

Report lil_coupling_check(std::span<long long const> checkpoints, std::size_t trajectories, std::uint64_t seed,
                          double alpha, int workers)
{
    if (checkpoints.empty())
        throw std::domain_error("lil_coupling_check: need at least one checkpoint");
    StreamPlan plan(Suite::Rates);
    for (int i = 0; i < 4096; ++i)
        plan.next();
    TrajectoryBatch const paths = generate_trajectories(checkpoints, trajectories, seed, workers, plan.next());
    long long const last = checkpoints.back();
    SampleBatch const direct = generate_batch(SamplerKind::Product, last, trajectories, seed, workers, plan.next());
    Report report;
    add_two_sample_ks(report, "lil", "KS re_log trajectory vs direct at n=" + std::to_string(last),
                      paths.re_log.back(), direct.re_logs(), alpha);
    add_two_sample_ks(report, "lil", "KS im_log trajectory vs direct at n=" + std::to_string(last),
                      paths.im_log.back(), direct.im_logs(), alpha);
    return report;
}

BenchRow bench_size(long long n, std::size_t samples, std::uint64_t seed, std::optional<std::size_t> matrix_samples)
{
    if (n < 1 || samples < 1)
        throw std::domain_error("bench_size: n and samples must be positive");
    using clock = std::chrono::steady_clock;
    BenchRow row;
    row.n = n;
    row.samples = samples;
    RngStream rng(seed, 0);
    double sink = 0.0;
    auto const t0 = clock::now();
    for (std::size_t i = 0; i < samples; ++i)
        sink += sample_unitary_log_charpoly(n, rng).re_log;
    auto const t1 = clock::now();
    row.product_seconds = std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(samples);
    if (n <= bench_matrix_cap)
    {
        std::size_t const m = matrix_samples.value_or(std::min<std::size_t>(samples, 100));
        RngStream matrix_rng(seed, 1);
        auto const t2 = clock::now();
        for (std::size_t i = 0; i < m; ++i)
            sink += log_charpoly_direct(sample_haar_unitary_qr(static_cast<long>(n), matrix_rng), 1.0).re_log;
        auto const t3 = clock::now();
        row.matrix_seconds = std::chrono::duration<double>(t3 - t2).count() / static_cast<double>(m);
    }
    // keep the loops observable
    if (sink == std::numeric_limits<double>::infinity())
        row.samples = 0;
    return row;
}

}  // namespace cuepoly
