#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace cuepoly
{

/// How a check's estimate is compared against its threshold.
enum class CheckKind
{
    ZScore,       // |estimate - exact| / std_error <= threshold
    KsPValue,     // p-value >= threshold
    KsDistance,   // statistic <= threshold
    AbsError,     // |estimate - exact| <= threshold
    Condition,    // boolean property, threshold unused
};

struct CheckResult
{
    std::string suite;
    std::string quantity;
    CheckKind kind = CheckKind::Condition;
    double exact_value = std::numeric_limits<double>::quiet_NaN();
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    /// z-score, p-value, distance or error, depending on kind
    double statistic = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_samples = 0;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    bool passed = false;
    std::string note;
};

std::string to_string(CheckKind kind);

/// Builders that fill in statistic and passed.
CheckResult z_check(std::string suite, std::string quantity, double exact, double estimate,
                    double std_error, std::size_t n_samples, double z_threshold);
CheckResult ks_check(std::string suite, std::string quantity, double statistic, double p_value,
                     std::size_t n_samples, double alpha);
CheckResult distance_check(std::string suite, std::string quantity, double distance,
                           std::size_t n_samples, double max_distance);
CheckResult abs_check(std::string suite, std::string quantity, double exact, double estimate,
                      double tolerance);
CheckResult condition_check(std::string suite, std::string quantity, bool holds, std::string note = {});

class Report
{
  public:
    void add(CheckResult check) { checks_.push_back(std::move(check)); }
    void append(Report const& other);

    std::vector<CheckResult> const& checks() const { return checks_; }
    bool all_passed() const;
    std::size_t failures() const;

    nlohmann::json to_json() const;

  private:
    std::vector<CheckResult> checks_;
};

/// JSON number, or null when not finite.
nlohmann::json finite_or_null(double value);

nlohmann::json to_json(CheckResult const& check);

}  // namespace cuepoly
