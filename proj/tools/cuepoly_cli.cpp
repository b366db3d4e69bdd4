// Command-line front end: sampling, exact moments, validation suites,
// iterated-logarithm trajectories and timing.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cuepoly/analytics.hpp"
#include "cuepoly/batch.hpp"
#include "cuepoly/validation.hpp"

namespace
{
using namespace cuepoly;

constexpr int schema_version = 1;

enum class Format
{
    Jsonl,
    Csv,
};

struct RunConfig
{
    std::string command;
    std::string group = "unitary";
    std::string sampler;
    std::vector<long long> n{10};
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_path;
    Format format = Format::Jsonl;
    bool header = true;
};

std::string number(double x)
{
    if (!std::isfinite(x))
        return "null";
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

std::string json_string(std::string_view s)
{
    return nlohmann::json(std::string(s)).dump();
}

std::string timestamp()
{
    std::time_t const now = std::time(nullptr);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buffer;
}

// One record per line, fields in a fixed order. Values are preformatted
// strings so that JSONL and CSV carry identical digits.
class RecordWriter
{
  public:
    RecordWriter(RunConfig const& config, std::vector<std::string> columns)
        : format_(config.format), columns_(std::move(columns))
    {
        if (!config.out_path.empty())
        {
            file_ = std::make_unique<std::ofstream>(config.out_path, std::ios::out | std::ios::trunc);
            if (!*file_)
                throw std::runtime_error("cannot open output file '" + config.out_path + "' for writing");
        }
        if (config.header)
        {
            if (format_ == Format::Jsonl)
                out() << "{\"type\":\"header\",\"schema_version\":" << schema_version
                      << ",\"command\":" << json_string(config.command) << ",\"seed\":" << config.seed
                      << ",\"workers\":" << config.workers << ",\"created\":" << json_string(timestamp()) << "}\n";
            else
                out() << "# schema_version=" << schema_version << " command=" << config.command
                      << " seed=" << config.seed << " workers=" << config.workers << " created=" << timestamp()
                      << "\n";
        }
        if (format_ == Format::Csv)
        {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                out() << (i ? "," : "") << columns_[i];
            out() << "\n";
        }
    }

    // values: JSON literals (numbers, null, quoted strings), one per column
    void write(std::vector<std::string> const& values)
    {
        if (values.size() != columns_.size())
            throw std::logic_error("record has the wrong number of fields");
        if (format_ == Format::Jsonl)
        {
            out() << "{";
            for (std::size_t i = 0; i < values.size(); ++i)
                out() << (i ? "," : "") << "\"" << columns_[i] << "\":" << values[i];
            out() << "}\n";
        }
        else
        {
            for (std::size_t i = 0; i < values.size(); ++i)
                out() << (i ? "," : "") << csv_field(values[i]);
            out() << "\n";
        }
        if (!out())
            throw std::runtime_error("write failed");
    }

    void flush() { out().flush(); }

  private:
    std::ostream& out() { return file_ ? *file_ : std::cout; }

    static std::string csv_field(std::string const& value)
    {
        if (value == "null")
            return "";
        if (!value.empty() && value.front() == '"')
        {
            std::string const plain = nlohmann::json::parse(value).get<std::string>();
            if (plain.find_first_of(",\"\n") == std::string::npos)
                return plain;
            std::string escaped = "\"";
            for (char c : plain)
                escaped += c == '"' ? std::string("\"\"") : std::string(1, c);
            return escaped + "\"";
        }
        return value;
    }

    Format format_;
    std::vector<std::string> columns_;
    std::unique_ptr<std::ofstream> file_;
};

std::string optional_number(std::optional<double> x)
{
    return x ? number(*x) : "null";
}

int cmd_sample(RunConfig const& config)
{
    SamplerKind kind = config.group == "so2n" ? SamplerKind::ProductSO2N : SamplerKind::Product;
    if (!config.sampler.empty())
        kind = sampler_from_string(config.sampler);
    if (std::string(to_string(group_of(kind))) != config.group)
        throw CLI::ValidationError("--sampler", "sampler '" + std::string(to_string(kind)) + "' does not belong to group '"
                                                    + config.group + "'");

    RecordWriter writer(config, {"schema_version", "seed", "stream_id", "index", "n", "group", "sampler", "re_log",
                                 "im_log"});
    for (long long n : config.n)
    {
        SampleBatch const batch = generate_batch(kind, n, config.samples, config.seed, config.workers);
        for (StreamSlice const& slice : batch.slices)
        {
            for (std::size_t i = 0; i < slice.count; ++i)
            {
                LogCharPoly const& d = batch.draws[slice.begin + i];
                writer.write({std::to_string(schema_version), std::to_string(config.seed),
                              std::to_string(slice.stream_id), std::to_string(i), std::to_string(n),
                              json_string(to_string(batch.group)), json_string(to_string(kind)), number(d.re_log),
                              number(d.im_log)});
            }
        }
    }
    writer.flush();
    return 0;
}

int cmd_moments(RunConfig const& config, double t, double s, std::size_t empirical)
{
    Group const group = config.group == "so2n" ? Group::SpecialOrthogonalEven : Group::Unitary;
    for (long long n : config.n)
        MomentQuery{t, s, group, n}.validate();
    RecordWriter writer(config, {"schema_version", "seed", "group", "n", "t", "s", "exact_log_moment", "exact_moment",
                                 "empirical_samples", "empirical_moment", "std_error", "z_score"});
    for (long long n : config.n)
    {
        MomentQuery const query{t, s, group, n};
        double const log_moment = group == Group::Unitary ? moment_unitary(query) : moment_so2n(n, t);
        double const moment = std::abs(log_moment) < 700.0 ? std::exp(log_moment) : NAN;
        std::string est = "null", se = "null", z = "null";
        if (empirical > 0)
        {
            SamplerKind const kind = group == Group::Unitary ? SamplerKind::Product : SamplerKind::ProductSO2N;
            SampleBatch const batch = generate_batch(kind, n, empirical, config.seed, config.workers);
            ComplexMomentEstimate const e = empirical_moment(batch, t, s);
            est = number(e.re.mean);
            se = number(e.re.std_error);
            z = number(z_score(e.re, moment));
        }
        writer.write({std::to_string(schema_version), std::to_string(config.seed), json_string(to_string(group)),
                      std::to_string(n), number(t), number(s), number(log_moment), number(moment),
                      std::to_string(empirical), est, se, z});
    }
    writer.flush();
    return 0;
}

int cmd_validate(RunConfig const& config, std::string const& suite_name, std::optional<std::size_t> samples,
                 std::vector<long long> const& n_values, double alpha, double z_threshold)
{
    Suite const suite = suite_from_string(suite_name);
    SuiteConfig suite_config;
    suite_config.samples = samples.value_or(0);
    suite_config.seed = config.seed;
    suite_config.workers = config.workers;
    suite_config.alpha = alpha;
    suite_config.z_threshold = z_threshold;
    suite_config.n_values = n_values;
    if (samples && *samples < 10000)
        std::cerr << "warning: low power: " << *samples
                  << " samples per check; the KS p-values are asymptotic and the suites are sized for >= 1e4\n";

    Report const report = run_suite(suite, suite_config);
    RecordWriter writer(config, {"schema_version", "seed", "suite", "quantity", "kind", "exact_value", "estimate",
                                 "std_error", "statistic", "n_samples", "threshold", "pass", "note"});
    for (CheckResult const& c : report.checks())
    {
        std::string const kind = to_string(c.kind);
        writer.write({std::to_string(schema_version), std::to_string(config.seed), json_string(c.suite), json_string(c.quantity),
                      json_string(kind), number(c.exact_value), number(c.estimate), number(c.std_error),
                      number(c.statistic), std::to_string(c.n_samples), number(c.threshold),
                      c.passed ? std::string("true") : std::string("false"), json_string(c.note)});
    }
    writer.flush();
    std::cerr << report.checks().size() - report.failures() << "/" << report.checks().size() << " checks passed\n";
    for (CheckResult const& c : report.checks())
        if (!c.passed)
            std::cerr << "FAIL [" << c.suite << "] " << c.quantity << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    return report.all_passed() ? 0 : 1;
}

std::vector<long long> log_spaced(long long first, long long last, int count)
{
    std::vector<long long> out;
    for (int i = 0; i < count; ++i)
    {
        double const f = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
        auto const n = static_cast<long long>(std::llround(std::exp(std::log(first) + f * (std::log(last) - std::log(first)))));
        if (out.empty() || n > out.back())
            out.push_back(n);
    }
    if (out.back() != last)
        out.push_back(last);
    return out;
}

int cmd_lil(RunConfig const& config, long long n_max, int checkpoint_count, std::vector<long long> checkpoints,
            std::size_t trajectories, bool coupling)
{
    if (n_max < 100)
        throw CLI::ValidationError("--n-max", "must be >= 100");
    if (checkpoints.empty())
        checkpoints = log_spaced(10, n_max, checkpoint_count);
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        if (checkpoints[i] < 1 || checkpoints[i] > n_max || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
            throw CLI::ValidationError("--at", "checkpoints must be strictly increasing within [1, n-max]");
    if (checkpoints.front() < 16)
        std::cerr << "note: checkpoints below 16 have lil_log = null (log log log n <= 0)\n";

    TrajectoryBatch const paths = generate_trajectories(checkpoints, trajectories, config.seed, config.workers);
    RecordWriter writer(config, {"schema_version", "seed", "stream_id", "index", "n", "re_log", "im_log", "lil_log",
                                 "lil_variance"});
    for (StreamSlice const& slice : paths.slices)
        for (std::size_t i = 0; i < slice.count; ++i)
            for (std::size_t c = 0; c < checkpoints.size(); ++c)
            {
                double const re = paths.re_log[c][slice.begin + i];
                LilStatistics const stats = lil_statistics(re, checkpoints[c]);
                writer.write({std::to_string(schema_version), std::to_string(config.seed),
                              std::to_string(slice.stream_id), std::to_string(i), std::to_string(checkpoints[c]),
                              number(re), number(paths.im_log[c][slice.begin + i]), optional_number(stats.by_log),
                              optional_number(stats.by_variance)});
            }
    writer.flush();

    if (!coupling)
        return 0;
    Report const report = lil_coupling_check(checkpoints, trajectories, config.seed, 1e-3, config.workers);
    for (CheckResult const& c : report.checks())
        std::cerr << (c.passed ? "PASS " : "FAIL ") << c.quantity << " (KS " << c.estimate << ", p = " << c.statistic
                  << ")\n";
    return report.all_passed() ? 0 : 1;
}

int cmd_bench(RunConfig const& config, std::optional<std::size_t> matrix_samples)
{
    RecordWriter writer(config, {"schema_version", "seed", "n", "samples", "product_seconds_per_draw",
                                 "matrix_seconds_per_draw", "speedup"});
    for (long long n : config.n)
    {
        BenchRow const row = bench_size(n, config.samples, config.seed, matrix_samples);
        std::optional<double> speedup;
        if (row.matrix_seconds)
            speedup = *row.matrix_seconds / row.product_seconds;
        writer.write({std::to_string(schema_version), std::to_string(config.seed), std::to_string(n),
                      std::to_string(row.samples), number(row.product_seconds), optional_number(row.matrix_seconds),
                      optional_number(speedup)});
        writer.flush();
    }
    return 0;
}

int default_workers()
{
    if (char const* env = std::getenv("CUEPOLY_WORKERS"))
    {
        try
        {
            int const w = std::stoi(env);
            if (w >= 1)
                return w;
        }
        catch (std::exception const&)
        {
        }
        std::cerr << "warning: ignoring CUEPOLY_WORKERS='" << env << "'\n";
    }
    return 1;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo sampling and exact moments of characteristic polynomials of Haar unitary and SO(2n) "
                 "matrices"};
    app.set_config("--config", "", "TOML/INI file with default values for any flag");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    config.workers = default_workers();
    std::string format = "jsonl";
    bool no_header = false;
    app.add_option("--seed", config.seed, "64-bit seed")->capture_default_str();
    app.add_option("--workers", config.workers, "worker threads (default from CUEPOLY_WORKERS, else 1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", config.out_path, "output file (default stdout)");
    app.add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
    app.add_flag("--no-header", no_header, "omit the timestamped header line");

    auto* sample = app.add_subcommand("sample", "draw log Z_n and write one record per draw");
    sample->add_option("--group", config.group)->check(CLI::IsMember({"unitary", "so2n"}))->capture_default_str();
    sample->add_option("--n", config.n, "matrix size(s)")->check(CLI::PositiveNumber);
    sample->add_option("--samples", config.samples, "draws per size")->capture_default_str();
    sample->add_option("--sampler", config.sampler, "product, joint, so2n_product, haar_qr, haar_recursive, haar_so2n");

    double t = 0.0;
    double s = 0.0;
    std::size_t empirical = 0;
    auto* moments = app.add_subcommand("moments", "exact log E[|Z|^t e^{i s arg Z}], optionally with a Monte Carlo estimate");
    moments->add_option("--group", config.group)->check(CLI::IsMember({"unitary", "so2n"}))->capture_default_str();
    moments->add_option("--n", config.n)->check(CLI::PositiveNumber);
    moments->add_option("--t", t)->capture_default_str();
    moments->add_option("--s", s)->capture_default_str();
    moments->add_option("--empirical", empirical, "number of draws for the Monte Carlo estimate");

    std::string suite = "all";
    std::optional<std::size_t> suite_samples;
    std::vector<long long> suite_n;
    double alpha = 1e-3;
    double z_threshold = 5.0;
    auto* validate = app.add_subcommand("validate", "run validation suites; exit code 0 iff every check passes");
    validate->add_option("--suite", suite)
        ->check(CLI::IsMember({"mellin", "joint", "so2n", "offcircle", "eigenrec", "barnes", "betagamma", "clt", "rates",
                               "all"}))
        ->capture_default_str();
    validate->add_option("--samples", suite_samples, "override the per-check sample count");
    validate->add_option("--n", suite_n, "override the suite's sizes")->check(CLI::PositiveNumber);
    validate->add_option("--alpha", alpha, "KS significance level")->capture_default_str();
    validate->add_option("--z-threshold", z_threshold, "largest accepted |z|")->capture_default_str();

    long long n_max = 10000;
    int checkpoint_count = 20;
    std::vector<long long> at;
    std::size_t trajectories = 100;
    bool coupling = false;
    auto* lil = app.add_subcommand("lil", "coupled trajectories with iterated-logarithm normalizations");
    lil->add_option("--n-max", n_max)->capture_default_str();
    lil->add_option("--checkpoints", checkpoint_count, "number of log-spaced checkpoints from 10 to n-max")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    lil->add_option("--at", at, "explicit checkpoints (overrides --checkpoints)");
    lil->add_option("--trajectories", trajectories)->capture_default_str();
    lil->add_flag("--coupling-check", coupling, "KS of the final checkpoint against the direct sampler");

    std::optional<std::size_t> matrix_samples;
    auto* bench = app.add_subcommand("bench", "wall time per draw, product sampler vs matrix oracle (n <= 64)");
    bench->add_option("--n", config.n)->check(CLI::PositiveNumber);
    bench->add_option("--samples", config.samples)->capture_default_str();
    bench->add_option("--matrix-samples", matrix_samples, "draws timed for the matrix oracle");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        // --help and --version exit 0, everything else is a usage error
        return app.exit(e) == 0 ? 0 : 2;
    }

    config.format = format == "csv" ? Format::Csv : Format::Jsonl;
    config.header = !no_header;
    try
    {
        if (sample->parsed())
        {
            config.command = "sample";
            return cmd_sample(config);
        }
        if (moments->parsed())
        {
            config.command = "moments";
            return cmd_moments(config, t, s, empirical);
        }
        if (validate->parsed())
        {
            config.command = "validate";
            return cmd_validate(config, suite, suite_samples, suite_n, alpha, z_threshold);
        }
        if (lil->parsed())
        {
            config.command = "lil";
            return cmd_lil(config, n_max, checkpoint_count, at, trajectories, coupling);
        }
        if (bench->parsed())
        {
            config.command = "bench";
            if (bench->count("--n") == 0)
                config.n = {1000, 10000, 100000};
            return cmd_bench(config, matrix_samples);
        }
    }
    catch (CLI::ValidationError const& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    catch (std::domain_error const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (std::invalid_argument const& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
