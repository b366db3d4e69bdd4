#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cuepoly/analytics.hpp"
#include "cuepoly/report.hpp"

namespace cuepoly
{

enum class Suite
{
    Mellin,
    Joint,
    So2n,
    Offcircle,
    Eigenrec,
    Barnes,
    Betagamma,
    Clt,
    Rates,
    All,
};

std::string_view to_string(Suite suite);
/// Throws std::invalid_argument for unknown names.
Suite suite_from_string(std::string_view name);
std::vector<Suite> all_suites();

/// Shared knobs. A zero sample count or empty n list selects the suite default.
struct SuiteConfig
{
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    int workers = 1;
    double alpha = 1e-3;
    double z_threshold = 5.0;
    std::vector<long long> n_values;

    std::size_t samples_or(std::size_t fallback) const { return samples == 0 ? fallback : samples; }
};

/// Empirical |Z|^t e^{i s arg Z} from the product sampler against the exact
/// transform, over n_values x grid (defaults: n in {1,2,5,10,50}, M = 1e6).
Report mellin_suite(SuiteConfig const& config,
                    std::vector<std::pair<double, double>> const& grid = {
                        {0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 2}, {2, 1}});

/// E|Z_n|^2 = n + 1: the exact transform against log(n+1) for exact_n, and
/// Monte Carlo at mc_n.
Report second_moment_suite(SuiteConfig const& config, std::vector<long long> const& exact_n,
                           std::vector<long long> const& mc_n);

/// Joint-sum sampler against the product sampler: two-sample KS on re_log,
/// im_log and their sum, plus the im_log variance (defaults n in {2,5,10}, M = 1e5).
Report joint_suite(SuiteConfig const& config);

/// Fast sampler against the Haar matrix oracles (QR and recursive
/// reflections): two-sample KS on both marginals (defaults n in 2..8, M = 1e5).
Report matrix_suite(SuiteConfig const& config);

/// SO(2n): product sampler moments against the exact transform for t in
/// {1,2,3} (defaults n in {1,2,5,20}, M = 1e6), the n = 1 point values, the
/// sampler against the SO(2n) matrix oracle at n = 2, and the factor identity
/// 1 + eps sqrt(beta_{1/2,(k-1)/2}) = 2 beta_{(k-1)/2,(k-1)/2} for k in {2,3,5}.
Report so2n_suite(SuiteConfig const& config);

/// Off-circle identity at n = 3, x = 0.5 (M = 1e5 by default).
Report offcircle_suite(SuiteConfig const& config);
/// Eigenangle form of the same identity at n = 3, x = 0.5.
Report eigenrec_suite(SuiteConfig const& config);

/// Gamma-product identity for n in {1,3,5}, t in {0.5,1,2} and its Monte Carlo KS.
Report barnes_suite(SuiteConfig const& config);

/// Beta-gamma algebra, gamma duplication and cos W_j = sqrt(beta_{j-1/2,1/2}).
Report betagamma_suite(SuiteConfig const& config);

/// Normalized marginals at n = 1e4 (M = 1e5) against Phi, and their correlation.
Report clt_suite(SuiteConfig const& config, double max_distance = 0.02);

/// Rate-of-convergence shape and Lyapunov ratios. Also returns the raw report.
Report rates_suite(SuiteConfig const& config, RateReport* raw = nullptr);

/// Cumulants against finite differences of the exact transforms, E|W_1|^3,
/// and the Lyapunov ratio L'_n over n in {10, 1e2, 1e3, 1e4}.
Report cumulant_suite(SuiteConfig const& config);

/// Dispatch by suite; All runs every suite in declaration order.
Report run_suite(Suite suite, SuiteConfig const& config);

/// Normalized iterated-logarithm statistics at one checkpoint.
struct LilStatistics
{
    std::optional<double> by_log;       // re_log / sqrt(log n * log log log n), n >= 16
    std::optional<double> by_variance;  // re_log / sqrt(2 B_n log log B_n), when log log B_n > 0
};

LilStatistics lil_statistics(double re_log, long long n);

/// Trajectory marginal at the last checkpoint against the direct sampler.
Report lil_coupling_check(std::span<long long const> checkpoints, std::size_t trajectories,
                          std::uint64_t seed, double alpha = 1e-3, int workers = 1);

struct BenchRow
{
    long long n = 0;
    std::size_t samples = 0;
    double product_seconds = 0.0;  // per draw
    std::optional<double> matrix_seconds;
};

/// Largest n for which bench rows include the matrix oracle.
inline constexpr long long bench_matrix_cap = 64;

/// Wall time per draw of the product sampler, and of the QR matrix oracle for n <= bench_matrix_cap.
BenchRow bench_size(long long n, std::size_t samples, std::uint64_t seed,
                    std::optional<std::size_t> matrix_samples = std::nullopt);

}  // namespace cuepoly
