#pragma once

#include "evpos/catalog.hpp"
#include "evpos/operators.hpp"
#include "evpos/pf_verifier.hpp"
#include "evpos/positivity.hpp"
#include "evpos/spectral.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace evpos {

inline constexpr std::string_view tool_version = "0.3.0";
inline constexpr std::string_view report_schema_version = "evpos-report/1";

/// Dense checks run on rank-k grid models only up to this dimension.
inline constexpr std::size_t dense_check_cap = 128;
inline constexpr int cyclicity_power_range = 12;
inline constexpr int multiplicity_power_range = 3;

struct RunOptions {
    unsigned horizon = default_eventual_horizon;
    unsigned asymptotic_horizon = default_asymptotic_horizon;
    double tol = default_classifier_tolerance;
    std::uint64_t seed = 0;
};

/// A model plus the descriptor it came from.
struct ModelInput {
    std::string operator_id;
    OperatorModel model;
    nlohmann::json descriptor;
};

[[nodiscard]] ModelInput input_from_descriptor(const nlohmann::json& descriptor,
                                               std::string operator_id);
[[nodiscard]] ModelInput input_from_example(const std::string& name,
                                            std::optional<std::size_t> size = std::nullopt);
[[nodiscard]] ModelInput input_from_generator(const GeneratorSpec& spec);

struct AnalysisReport {
    std::string operator_id;
    nlohmann::json model_descriptor;
    std::vector<PositivityVerdict> classification;
    std::optional<Spectrum> spectrum;
    std::vector<CheckResult> checks;  // sorted by name
    std::map<std::string, std::vector<double>> decay_sequences;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> versions;
    bool not_classifiable = false;
    std::vector<std::string> contradictions;
    std::vector<std::string> solver_failures;
    std::vector<std::string> notes;

    [[nodiscard]] const PositivityVerdict* verdict(Notion n) const;
    [[nodiscard]] const CheckResult* check(const std::string& name) const;
};

[[nodiscard]] nlohmann::json to_json(const AnalysisReport& r);
/// Inverse of to_json; rejects unknown fields.
[[nodiscard]] AnalysisReport report_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const PositivityVerdict& v);
[[nodiscard]] PositivityVerdict verdict_from_json(const nlohmann::json& j, const std::string& where);
[[nodiscard]] nlohmann::json to_json(const CheckResult& c);
[[nodiscard]] CheckResult check_from_json(const nlohmann::json& j, const std::string& where);
[[nodiscard]] nlohmann::json to_json(const Spectrum& s);

/// Classifier, spectrum and every applicable theorem check. Solver failures
/// are recorded per stage and never abort the report.
[[nodiscard]] AnalysisReport run_classify(const ModelInput& input, const RunOptions& options = {});

/// Expected verdicts and check statuses that the report does not meet.
[[nodiscard]] std::vector<std::string> expectation_mismatches(const AnalysisReport& r,
                                                              const Expectations& e);

enum ExitCode : int { exit_ok = 0, exit_contradiction = 1, exit_input_error = 2, exit_solver_failure = 3 };

[[nodiscard]] int exit_code(const AnalysisReport& r);

struct OrbitRow {
    unsigned n = 0;
    double d_plus = 0.0;
    double norm = 0.0;
};

/// d+(S^n x) and ||S^n x|| for n = 0..horizon, S = T / spr(T) (T itself when spr = 0).
[[nodiscard]] std::vector<OrbitRow> orbit_table(const OperatorModel& t, const LatticeVector& x,
                                                unsigned horizon);

}  // namespace evpos
