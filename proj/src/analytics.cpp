#include "cuepoly/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cuepoly/distributions.hpp"
#include "cuepoly/specfun.hpp"

namespace cuepoly
{
namespace
{
constexpr double half_log_two_pi = 0.91893853320467274178032973640561764;
constexpr int series_order = 14;
constexpr double quadrature_tolerance = 1e-8;
constexpr long long edgeworth_threshold = 200;

// Neumaier compensated sum.
class CompensatedSum
{
  public:
    void add(double x)
    {
        double const t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

std::string format_number(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

double binomial(int n, int k)
{
    double out = 1.0;
    for (int i = 1; i <= k; ++i)
        out = out * (n - k + i) / i;
    return out;
}

// Coefficients c_J (J = 1..series_order) with
// G(k) = sum_i c_i [(k + x_i - 1/2) log1p(x_i/k) + S(k + x_i)] - P_1 = sum_J c_J k^{-J}.
std::vector<double> inverse_power_coefficients(std::vector<GammaTerm> const& terms)
{
    int const max_m = series_order + 1;
    std::vector<double> p(max_m + 1, 0.0);
    for (auto const& term : terms)
    {
        double power = 1.0;
        for (int m = 0; m <= max_m; ++m)
        {
            p[m] += term.coefficient * power;
            power *= term.offset;
        }
    }

    std::vector<double> c(series_order + 1, 0.0);
    for (int j = 1; j <= series_order; ++j)
    {
        double const sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[j] = sign * p[j + 1] / (j + 1) - sign * (p[j + 1] - 0.5 * p[j]) / j;
    }
    // Stirling tail: b_n (k + x)^{-(2n-1)} expanded in x/k
    for (int n = 1; 2 * n - 1 <= series_order; ++n)
    {
        double const b_n = BernoulliTable::b2n(static_cast<std::size_t>(n)) / (2.0 * n * (2.0 * n - 1.0));
        int const p_exp = 2 * n - 1;
        for (int m = 0; p_exp + m <= series_order; ++m)
        {
            double const sign = (m % 2 == 0) ? 1.0 : -1.0;
            c[p_exp + m] += b_n * sign * binomial(p_exp + m - 1, m) * p[m];
        }
    }
    return c;
}
}  // namespace

void MomentQuery::validate() const
{
    if (n < 1)
        throw std::domain_error("moment query: n must be >= 1, got " + std::to_string(n));
    if (!std::isfinite(t) || !std::isfinite(s))
        throw std::domain_error("moment query: t and s must be finite");
    if (group == Group::Unitary)
    {
        if (!(t + s > -1.0) || !(t - s > -1.0))
            throw std::domain_error("moment query: requires Re(t±s) > -1, got t=" + format_number(t)
                                    + ", s=" + format_number(s));
    }
    else
    {
        if (s != 0.0)
            throw std::domain_error("moment query: SO(2n) moments require s = 0, got s=" + format_number(s));
        if (!(t > -0.5))
            throw std::domain_error("moment query: SO(2n) moments require t > -1/2, got t=" + format_number(t));
    }
}

double sum_log_gamma_terms(std::vector<GammaTerm> terms, long long first, long long last)
{
    if (last < first)
        return 0.0;

    std::map<double, double> merged;
    for (auto const& term : terms)
        merged[term.offset] += term.coefficient;
    terms.clear();
    for (auto const& [offset, coefficient] : merged)
        if (coefficient != 0.0)
            terms.push_back({coefficient, offset});
    if (terms.empty())
        return 0.0;

    double min_offset = terms.front().offset;
    double max_abs_offset = 0.0;
    double p0 = 0.0;
    double p1 = 0.0;
    for (auto const& term : terms)
    {
        min_offset = std::min(min_offset, term.offset);
        max_abs_offset = std::max(max_abs_offset, std::abs(term.offset));
        p0 += term.coefficient;
        p1 += term.coefficient * term.offset;
    }
    if (!(static_cast<double>(first) + min_offset > 0.0))
        throw std::domain_error("log-gamma argument must be positive");

    auto const middle_start = static_cast<long long>(std::ceil(10.0 + max_abs_offset));
    auto const series_start = std::max<long long>(64, static_cast<long long>(std::ceil(64.0 * max_abs_offset)));
    std::vector<double> const coefficients = inverse_power_coefficients(terms);

    CompensatedSum total;
    for (long long k = first; k <= last; ++k)
    {
        double const kd = static_cast<double>(k);
        if (k < middle_start)
        {
            if (p0 != 0.0)
            {
                for (auto const& term : terms)
                    total.add(term.coefficient * ln_gamma(kd + term.offset));
                continue;
            }
            // Coefficients cancel: sum c_i [lnGamma(k + x_i) - lnGamma(k + x_min)],
            // with close offsets through the gamma ratio to avoid cancellation.
            double const base = kd + min_offset;
            for (auto const& term : terms)
            {
                double const delta = term.offset - min_offset;
                if (delta == 0.0)
                    continue;
                double const diff = delta <= 1.0 ? -std::log(boost::math::tgamma_delta_ratio(base, delta))
                                                 : ln_gamma(base + delta) - ln_gamma(base);
                total.add(term.coefficient * diff);
            }
            continue;
        }
        double const log_k = std::log(kd);
        if (p0 != 0.0)
            total.add(p0 * ((kd - 0.5) * log_k - kd + half_log_two_pi));
        if (p1 != 0.0)
            total.add(p1 * log_k);
        if (k < series_start)
        {
            double g = -p1;
            for (auto const& term : terms)
            {
                double const z = kd + term.offset;
                g += term.coefficient * ((z - 0.5) * std::log1p(term.offset / kd) + ln_gamma_stirling_tail(z));
            }
            total.add(g);
        }
        else
        {
            double const inv_k = 1.0 / kd;
            double g = 0.0;
            for (int j = series_order; j >= 1; --j)
                g = (g + coefficients[j]) * inv_k;
            total.add(g);
        }
    }
    return total.value();
}

double moment_unitary(MomentQuery const& query)
{
    MomentQuery q = query;
    q.group = Group::Unitary;
    q.validate();
    double const a = 0.5 * (q.t + q.s);
    double const b = q.t - a;
    return sum_log_gamma_terms({{1.0, 0.0}, {1.0, q.t}, {-1.0, a}, {-1.0, b}}, 1, q.n);
}

double moment_factor(long long j, double t, double s)
{
    if (j < 1)
        throw std::domain_error("moment_factor: j must be >= 1");
    if (!(t + s > -1.0) || !(t - s > -1.0))
        throw std::domain_error("moment_factor: requires Re(t±s) > -1, got t=" + format_number(t)
                                + ", s=" + format_number(s));
    double const a = 0.5 * (t + s);
    double const b = t - a;
    return sum_log_gamma_terms({{1.0, 0.0}, {1.0, t}, {-1.0, a}, {-1.0, b}}, j, j);
}

double fourier_w(long long j, double s)
{
    if (j < 1)
        throw std::domain_error("fourier_w: j must be >= 1");
    if (!(std::abs(s) < 2.0 * static_cast<double>(j)))
        throw std::domain_error("fourier_w: requires |s| < 2j, got s=" + format_number(s));
    return sum_log_gamma_terms({{2.0, 0.0}, {-1.0, 0.5 * s}, {-1.0, -0.5 * s}}, j, j);
}

double mellin_t(long long j, double t)
{
    if (j < 1)
        throw std::domain_error("mellin_t: j must be >= 1");
    if (!(t > -static_cast<double>(j)))
        throw std::domain_error("mellin_t: requires t > -j, got t=" + format_number(t));
    return sum_log_gamma_terms({{1.0, 0.0}, {1.0, t}, {-2.0, 0.5 * t}}, j, j);
}

double moment_so2n(long long n, double t)
{
    MomentQuery{t, 0.0, Group::SpecialOrthogonalEven, n}.validate();
    double const nd = static_cast<double>(n);
    double const head = 2.0 * nd * t * std::log(2.0);
    return head
           + sum_log_gamma_terms({{1.0, nd - 1.0}, {1.0, t - 0.5}, {-1.0, -0.5}, {-1.0, t + nd - 1.0}}, 1, n);
}

double cumulant(long long j, int k, CumulantOf which)
{
    if (j < 1)
        throw std::domain_error("cumulant: j must be >= 1");
    if (k < 1 || k > 6)
        throw std::domain_error("cumulant: order must be in [1, 6], got " + std::to_string(k));
    double const scale = std::ldexp(1.0, k - 1);  // 2^{k-1}
    double const jd = static_cast<double>(j);
    if (which == CumulantOf::Q)
        return (scale - 1.0) / scale * polygamma(k - 1, jd);
    if (k % 2 == 1)
        return 0.0;
    double const sign = ((k / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
    return sign / scale * polygamma(k - 1, jd);
}

CumulantTable CumulantTable::make(long long n, int max_order)
{
    if (n < 1)
        throw std::domain_error("CumulantTable: n must be >= 1");
    if (max_order < 1 || max_order > 6)
        throw std::domain_error("CumulantTable: max_order must be in [1, 6]");
    CumulantTable table;
    table.n = n;
    table.max_order = max_order;
    table.q.assign(static_cast<std::size_t>(n), std::vector<double>(max_order));
    table.r.assign(static_cast<std::size_t>(n), std::vector<double>(max_order));
    std::vector<CompensatedSum> qs(max_order), rs(max_order);
    for (long long j = 1; j <= n; ++j)
    {
        for (int k = 1; k <= max_order; ++k)
        {
            double const q = cumulant(j, k, CumulantOf::Q);
            double const r = cumulant(j, k, CumulantOf::R);
            table.q[j - 1][k - 1] = q;
            table.r[j - 1][k - 1] = r;
            qs[k - 1].add(q);
            rs[k - 1].add(r);
        }
    }
    for (int k = 0; k < max_order; ++k)
    {
        table.q_sums.push_back(qs[k].value());
        table.r_sums.push_back(rs[k].value());
    }
    return table;
}

double variance_sum(long long n)
{
    if (n < 1)
        throw std::domain_error("variance_sum: n must be >= 1");
    CompensatedSum sum;
    for (long long j = n; j >= 1; --j)
        sum.add(trigamma(static_cast<double>(j)));
    return 0.5 * sum.value();
}

namespace
{
using boost::math::quadrature::gauss_kronrod;

// Integrate over consecutive breakpoints, checking the error estimate.
template<class F>
double integrate_pieces(F const& f, std::vector<double> breaks, double tolerance, long long j,
                        char const* what)
{
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    {
        double error = 0.0;
        total += gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 8, 1e-12, &error);
        total_error += error;
    }
    if (!(total_error <= tolerance * std::max(1.0, std::abs(total))) || !std::isfinite(total))
        throw std::runtime_error(std::string("quadrature did not converge for ") + what
                                 + " at j=" + std::to_string(j));
    return total;
}

// log of the W_j density K_j cos^{2(j-1)} v, |v| < pi/2
double log_w_density(double log_k, long long j, double v)
{
    double const c = std::cos(v);
    if (c <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return log_k + 2.0 * static_cast<double>(j - 1) * std::log(c);
}

std::vector<double> w_breaks(long long j)
{
    double const half_pi = 0.5 * pi;
    double const sigma = std::sqrt(0.5 * trigamma(static_cast<double>(j)));
    std::vector<double> breaks{0.0, half_pi};
    for (double m : {1.0, 3.0, 6.0, 12.0})
        if (m * sigma < half_pi)
            breaks.push_back(m * sigma);
    return breaks;
}
}  // namespace

double third_abs_moment_w(long long j)
{
    if (j < 1)
        throw std::domain_error("third_abs_moment_w: j must be >= 1");
    double const log_k = std::log(WjParams::make(static_cast<int>(j)).normalization);
    auto const f = [&](double v) { return v * v * v * std::exp(log_w_density(log_k, j, v)); };
    return 2.0 * integrate_pieces(f, w_breaks(j), 0.5 * quadrature_tolerance, j, "E|W_j|^3");
}

double third_abs_moment_t(long long j)
{
    if (j < 1)
        throw std::domain_error("third_abs_moment_t: j must be >= 1");
    if (j >= edgeworth_threshold)
    {
        // Edgeworth: E|X|^3 = sigma^3 sqrt(2/pi) (2 + lambda_4/4 - lambda_3^2/12) + O(j^{-7/2}),
        // below 1e-9 from here on (checked against the quadrature branch)
        double const variance = cumulant(j, 2, CumulantOf::Q);
        double const sigma = std::sqrt(variance);
        double const lambda3 = cumulant(j, 3, CumulantOf::Q) / (variance * sigma);
        double const lambda4 = cumulant(j, 4, CumulantOf::Q) / (variance * variance);
        return variance * sigma * std::sqrt(2.0 / pi) * (2.0 + lambda4 / 4.0 - lambda3 * lambda3 / 12.0);
    }

    double const log_k = std::log(WjParams::make(static_cast<int>(j)).normalization);
    boost::math::quadrature::tanh_sinh<double> ts;

    auto const integrate = [&](auto const& f, std::vector<double> breaks, double tolerance, char const* what) {
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        double total = 0.0;
        double total_error = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        {
            double error = 0.0;
            total += ts.integrate(f, breaks[i], breaks[i + 1], 1e-13, &error);
            total_error += error;
        }
        if (!(total_error <= tolerance * std::max(1.0, std::abs(total))) || !std::isfinite(total))
            throw std::runtime_error(std::string("quadrature did not converge for ") + what
                                     + " at j=" + std::to_string(j));
        return total;
    };

    // E_W |log(2b) + log cos W|^3 for fixed b
    auto const inner = [&](double log_two_b, double tolerance) {
        auto const f = [&](double v) {
            double const value = log_two_b + std::log(std::cos(v));
            return std::abs(value * value * value) * std::exp(log_w_density(log_k, j, v));
        };
        std::vector<double> breaks = w_breaks(j);
        // kink where cos v = 1 / (2b)
        if (log_two_b > 0.0)
            breaks.push_back(std::acos(std::exp(-log_two_b)));
        return 2.0 * integrate(f, breaks, tolerance, "E|T_j|^3 (angle)");
    };

    if (j == 1)
        return inner(std::log(2.0), quadrature_tolerance);

    // beta_{j, j-1} density in log form
    double const a = static_cast<double>(j);
    double const b = static_cast<double>(j - 1);
    double const log_norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    auto const outer = [&](double x) {
        if (x <= 0.0 || x >= 1.0)
            return 0.0;
        double const log_density = log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
        double const weight = std::exp(log_density);
        if (weight == 0.0)
            return 0.0;
        return weight * inner(std::log(2.0 * x), 1e-10);
    };
    double const mean = a / (a + b);
    double const sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    std::vector<double> breaks{0.0, 1.0, 0.5};
    for (double m : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0})
    {
        double const x = mean + m * sd;
        if (x > 0.0 && x < 1.0)
            breaks.push_back(x);
    }
    return integrate(outer, breaks, quadrature_tolerance, "E|T_j|^3 (beta)");
}

std::vector<double> lyapunov_series(std::span<long long const> n_values, LyapunovOf which)
{
    long long max_n = 0;
    for (long long n : n_values)
    {
        if (n < 1)
            throw std::domain_error("lyapunov: n must be >= 1");
        max_n = std::max(max_n, n);
    }
    std::vector<double> partial(static_cast<std::size_t>(max_n) + 1, 0.0);
    CompensatedSum sum;
    for (long long j = 1; j <= max_n; ++j)
    {
        sum.add(which == LyapunovOf::W ? third_abs_moment_w(j) : third_abs_moment_t(j));
        partial[static_cast<std::size_t>(j)] = sum.value();
    }
    std::vector<double> out;
    for (long long n : n_values)
        out.push_back(partial[static_cast<std::size_t>(n)] / std::pow(variance_sum(n), 1.5));
    return out;
}

double lyapunov(long long n, LyapunovOf which)
{
    long long const one[] = {n};
    return lyapunov_series(one, which).front();
}

ComplexMomentEstimate empirical_moment(std::span<LogCharPoly const> draws, double t, double s)
{
    if (draws.empty())
        throw std::invalid_argument("empirical_moment: empty batch");
    std::vector<double> re(draws.size());
    std::vector<double> im(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
    {
        double const log_modulus = t == 0.0 ? 0.0 : t * draws[i].re_log;
        if (log_modulus > 700.0)
            throw std::overflow_error("empirical_moment: |Z|^t overflows for t=" + format_number(t)
                                      + "; compare log moments instead");
        double const modulus = std::exp(log_modulus);
        double const angle = s == 0.0 ? 0.0 : s * draws[i].im_log;
        re[i] = modulus * std::cos(angle);
        im[i] = modulus * std::sin(angle);
    }
    return {estimate_mean(re), estimate_mean(im)};
}

ComplexMomentEstimate empirical_moment(SampleBatch const& batch, double t, double s)
{
    return empirical_moment(std::span<LogCharPoly const>(batch.draws), t, s);
}

nlohmann::json RateReport::to_json() const
{
    nlohmann::json j;
    j["n_values"] = n_values;
    auto array = [](std::vector<double> const& v) {
        nlohmann::json a = nlohmann::json::array();
        for (double x : v)
            a.push_back(finite_or_null(x));
        return a;
    };
    j["lyapunov_t"] = array(lyapunov_t);
    j["lyapunov_w"] = array(lyapunov_w);
    j["ks_re"] = array(ks_re);
    j["ks_im"] = array(ks_im);
    j["fitted_c"] = finite_or_null(fitted_c);
    j["bound_curve"] = array(bound_curve);
    j["samples"] = samples;
    return j;
}

RateReport rate_report(std::span<long long const> n_values, RateOptions const& options)
{
    if (n_values.empty())
        throw std::domain_error("rate_report: need at least one n");
    for (long long n : n_values)
        if (n < 2)
            throw std::domain_error("rate_report: n must be >= 2 for the log N normalization");

    RateReport report;
    report.n_values.assign(n_values.begin(), n_values.end());
    report.samples = options.samples;

    auto const batch = generate_trajectories(n_values, options.samples, options.seed, options.workers);
    auto const normal = [](double x) { return normal_cdf(x); };
    for (std::size_t c = 0; c < n_values.size(); ++c)
    {
        double const scale = 1.0 / std::sqrt(0.5 * std::log(static_cast<double>(n_values[c])));
        for (int part = 0; part < 2; ++part)
        {
            std::vector<double> v = part == 0 ? batch.re_log[c] : batch.im_log[c];
            for (double& x : v)
                x *= scale;
            std::sort(v.begin(), v.end());
            (part == 0 ? report.ks_re : report.ks_im).push_back(sup_cdf_deviation(v, normal));
        }
    }

    report.lyapunov_w = lyapunov_series(n_values, LyapunovOf::W);
    if (options.include_lyapunov_t)
        report.lyapunov_t = lyapunov_series(n_values, LyapunovOf::T);

    double const log_n0 = std::log(static_cast<double>(n_values.front()));
    report.fitted_c = report.ks_re.front() * std::pow(log_n0, 1.5);
    for (long long n : n_values)
        report.bound_curve.push_back(report.fitted_c / std::pow(std::log(static_cast<double>(n)), 1.5));
    return report;
}

Report barnes_identity_check(long long n, double t, std::size_t m_samples, RngStream& rng,
                             BarnesOptions const& options)
{
    if (n < 1)
        throw std::domain_error("barnes_identity_check: n must be >= 1");
    if (!(t > -1.0))
        throw std::domain_error("barnes_identity_check: requires t > -1, got t=" + format_number(t));

    Report report;
    std::string const label = "n=" + std::to_string(n) + ", t=" + format_number(t);

    // log E[(prod gamma_j)^t] = sum_j lnGamma(j+t) - lnGamma(j)
    double const lhs = sum_log_gamma_terms({{1.0, t}, {-1.0, 0.0}}, 1, n);
    double const rhs = moment_unitary({t, 0.0, Group::Unitary, n})
                       + sum_log_gamma_terms({{2.0, 0.5 * t}, {-2.0, 0.0}}, 1, n);
    report.add(abs_check("barnes", "log-moment identity " + label, lhs, rhs, options.tolerance));

    if (m_samples >= 2)
    {
        std::vector<double> left(m_samples);
        std::vector<double> right(m_samples);
        for (std::size_t i = 0; i < m_samples; ++i)
        {
            double l = 0.0;
            for (long long j = 1; j <= n; ++j)
                l += std::log(sample_gamma(static_cast<double>(j), rng));
            left[i] = l;

            double r = sample_joint(n, rng).re_log;
            for (long long j = 1; j <= n; ++j)
            {
                double const g1 = sample_gamma(static_cast<double>(j), rng);
                double const g2 = sample_gamma(static_cast<double>(j), rng);
                r += 0.5 * (std::log(g1) + std::log(g2));
            }
            right[i] = r;
        }
        auto const ks = ks_two_sample(left, right);
        report.add(ks_check("barnes", "KS log prod gamma_j vs log Delta_N prod sqrt(gamma_j gamma'_j) " + label,
                            ks.statistic, ks.p_value, m_samples, options.alpha));
    }
    return report;
}

}  // namespace cuepoly
