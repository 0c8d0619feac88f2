#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace evpos {

inline constexpr std::size_t default_truncation_length = 200;

/// d+(<x', S^n x>) for n = 0..N; entries are finite and nonnegative.
class DecaySequence {
public:
    explicit DecaySequence(std::vector<double> values, std::string source = {});

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    std::string source_;
};

/// Nonnegative sequence used as a decay majorant.
class MajorantSequence {
public:
    explicit MajorantSequence(std::vector<double> values);

    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double max() const;
    /// Largest entry of the last quarter is at most 1e-6 times the largest entry.
    [[nodiscard]] bool decays_to_zero() const;

private:
    std::vector<double> values_;
};

/// t^q, q > 0.
struct PowerRate {
    double q = 1.0;
};
/// max(t - c, 0); diagnostic only since it vanishes on (0, c].
struct ThresholdRate {
    double c = 0.0;
};
/// Piecewise linear through (t, phi) breakpoints, constant beyond the last one.
struct TableRate {
    std::vector<std::pair<double, double>> breakpoints;
};
using RateFunction = std::variant<PowerRate, ThresholdRate, TableRate>;

/// Throws DomainError when the function is not increasing or has bad parameters.
void validate(const RateFunction& phi);
[[nodiscard]] double evaluate(const RateFunction& phi, double t);
[[nodiscard]] std::string name(const RateFunction& phi);
/// phi(t) > 0 for every t > 0.
[[nodiscard]] bool strictly_positive(const RateFunction& phi);

/// Entries sorted non-increasing. Throws DomainError on a negative entry.
[[nodiscard]] std::vector<double> decreasing_rearrangement(std::vector<double> a);

struct GovernsResult {
    bool governed = false;
    double c = 0.0;          // least constant when governed
    std::size_t index = 0;   // first violating index otherwise
};

/// Least c with a*_n <= c f_n at this truncation length.
[[nodiscard]] GovernsResult governs(const MajorantSequence& f, const DecaySequence& a);

enum class Trend { Summable, Divergent, Inconclusive };
[[nodiscard]] std::string to_string(Trend t);

struct SummabilityEntry {
    std::string rate;
    std::vector<double> partial_sums;
    /// Least-squares slope of log(increment) against n over the last half.
    double log_slope = 0.0;
    /// Minus the slope of log(increment) against log(n + 1) over the last half.
    double power_exponent = 0.0;
    /// Partial sum plus an extrapolated tail; heuristic.
    std::optional<double> limit_estimate;
    Trend trend = Trend::Inconclusive;
    bool diagnostic_only = false;  // rate vanishes somewhere on (0, inf)
};

struct SummabilityReport {
    std::vector<SummabilityEntry> entries;
    /// Smallest plausible p with a in l^p from a log-log fit of a*_n; heuristic.
    std::optional<double> lp_exponent;
    bool lp_heuristic = true;
};

/// Exponent thresholds for the power-law trend.
inline constexpr double summable_exponent = 1.1;
inline constexpr double divergent_exponent = 1.01;

[[nodiscard]] SummabilityReport summability_report(const DecaySequence& a,
                                                   const std::vector<RateFunction>& phis);

struct AlphaValue {
    double value = 0.0;
    double tail_bound = 0.0;  // last entry * r^-(N+1) / (r - 1)
};

/// sum_n f_n / r^(n+1) over the stored entries. Throws DomainError for r <= 1.
[[nodiscard]] AlphaValue alpha(const MajorantSequence& f, double r);

/// sum_j f^(j) / (2^(j+1) max f^(j)) over the list.
[[nodiscard]] MajorantSequence countable_family_reduce(const std::vector<MajorantSequence>& fs);

}  // namespace evpos
