#include "cuepoly/report.hpp"

#include <cmath>

namespace cuepoly
{

std::string to_string(CheckKind kind)
{
    switch (kind)
    {
        case CheckKind::ZScore:
            return "z_score";
        case CheckKind::KsPValue:
            return "ks_p_value";
        case CheckKind::KsDistance:
            return "ks_distance";
        case CheckKind::AbsError:
            return "abs_error";
        case CheckKind::Condition:
            return "condition";
    }
    return "unknown";
}

CheckResult z_check(std::string suite, std::string quantity, double exact, double estimate,
                    double std_error, std::size_t n_samples, double z_threshold)
{
    CheckResult c;
    c.suite = std::move(suite);
    c.quantity = std::move(quantity);
    c.kind = CheckKind::ZScore;
    c.exact_value = exact;
    c.estimate = estimate;
    c.std_error = std_error;
    c.n_samples = n_samples;
    c.threshold = z_threshold;
    double const diff = estimate - exact;
    if (std_error > 0.0)
        c.statistic = diff / std_error;
    else
        c.statistic = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    c.passed = std::isfinite(c.statistic) && std::abs(c.statistic) <= z_threshold;
    return c;
}

CheckResult ks_check(std::string suite, std::string quantity, double statistic, double p_value,
                     std::size_t n_samples, double alpha)
{
    CheckResult c;
    c.suite = std::move(suite);
    c.quantity = std::move(quantity);
    c.kind = CheckKind::KsPValue;
    c.estimate = statistic;
    c.statistic = p_value;
    c.n_samples = n_samples;
    c.threshold = alpha;
    c.passed = p_value >= alpha;
    return c;
}

CheckResult distance_check(std::string suite, std::string quantity, double distance,
                           std::size_t n_samples, double max_distance)
{
    CheckResult c;
    c.suite = std::move(suite);
    c.quantity = std::move(quantity);
    c.kind = CheckKind::KsDistance;
    c.estimate = distance;
    c.statistic = distance;
    c.n_samples = n_samples;
    c.threshold = max_distance;
    c.passed = distance <= max_distance;
    return c;
}

CheckResult abs_check(std::string suite, std::string quantity, double exact, double estimate,
                      double tolerance)
{
    CheckResult c;
    c.suite = std::move(suite);
    c.quantity = std::move(quantity);
    c.kind = CheckKind::AbsError;
    c.exact_value = exact;
    c.estimate = estimate;
    c.statistic = std::abs(estimate - exact);
    c.threshold = tolerance;
    c.passed = c.statistic <= tolerance;
    return c;
}

CheckResult condition_check(std::string suite, std::string quantity, bool holds, std::string note)
{
    CheckResult c;
    c.suite = std::move(suite);
    c.quantity = std::move(quantity);
    c.kind = CheckKind::Condition;
    c.passed = holds;
    c.note = std::move(note);
    return c;
}

void Report::append(Report const& other)
{
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool Report::all_passed() const
{
    return failures() == 0;
}

std::size_t Report::failures() const
{
    std::size_t n = 0;
    for (auto const& c : checks_)
        n += c.passed ? 0 : 1;
    return n;
}

nlohmann::json finite_or_null(double value)
{
    if (std::isfinite(value))
        return value;
    return nullptr;
}

nlohmann::json to_json(CheckResult const& c)
{
    nlohmann::json j;
    j["suite"] = c.suite;
    j["quantity"] = c.quantity;
    j["kind"] = to_string(c.kind);
    j["exact_value"] = finite_or_null(c.exact_value);
    j["estimate"] = finite_or_null(c.estimate);
    j["std_error"] = finite_or_null(c.std_error);
    j["statistic"] = finite_or_null(c.statistic);
    j["n_samples"] = c.n_samples;
    j["threshold"] = finite_or_null(c.threshold);
    j["pass"] = c.passed;
    if (!c.note.empty())
        j["note"] = c.note;
    return j;
}

nlohmann::json Report::to_json() const
{
    nlohmann::json out;
    out["checks"] = nlohmann::json::array();
    for (auto const& c : checks_)
        out["checks"].push_back(cuepoly::to_json(c));
    out["failures"] = failures();
    out["pass"] = all_passed();
    return out;
}

}  // namespace cuepoly
