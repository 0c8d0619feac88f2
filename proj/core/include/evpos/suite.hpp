#pragma once

#include "evpos/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace evpos {

enum class SuiteKind { Properties, Paper, Random };
[[nodiscard]] std::string to_string(SuiteKind k);
[[nodiscard]] SuiteKind suite_from_string(const std::string& s);

/// Outcome of one seeded invariant sweep.
struct PropertyOutcome {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double worst_margin = 0.0;  // smallest slack seen; negative on failure
    std::string first_failure;
};

struct SweepSizes {
    std::size_t vectors = 10000;
    std::size_t matrices = 1000;
    std::size_t triples = 1000;
    std::size_t sequences = 1000;
    /// Matrices in the uniformly asymptotically positive family; each
    /// supplies triples / family_size resolvent triples.
    std::size_t family_size = 100;
};

inline constexpr double oracle_resolution = 1e-3;
inline constexpr std::size_t oracle_max_dimension = 4;
inline constexpr std::size_t sweep_max_dimension = 16;
inline constexpr std::size_t family_max_dimension = 6;

/// Member m of the eventually positive family used by the resolvent sweeps.
[[nodiscard]] ComplexMatrix sweep_family_matrix(std::uint64_t seed, std::size_t m);

[[nodiscard]] std::vector<PropertyOutcome> property_sweeps(std::uint64_t seed,
                                                           const SweepSizes& sizes = {});

/// One make_eventually_positive instance of the random suite.
struct RandomInstance {
    GeneratorSpec spec;
    unsigned n0_bound = 0;
};
inline constexpr std::size_t random_min_dimension = 2;
inline constexpr std::size_t random_max_dimension = 12;
inline constexpr double random_min_gap = 0.3;
inline constexpr double random_max_gap = 0.7;
[[nodiscard]] RandomInstance random_instance(std::uint64_t seed, std::size_t trial);
/// Options used for random-suite instances.
[[nodiscard]] RunOptions random_suite_options(std::uint64_t seed);
/// Generator guarantees that the report must show.
[[nodiscard]] std::vector<std::string> random_instance_mismatches(const AnalysisReport& r,
                                                                  const RandomInstance& inst);

struct SuiteEntry {
    std::string label;
    AnalysisReport report;
    std::vector<std::string> mismatches;
};

struct SuiteSummary {
    SuiteKind kind = SuiteKind::Paper;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<SuiteEntry> entries;
    std::vector<PropertyOutcome> properties;
    std::size_t contradictions = 0;  // includes property-sweep failures
    std::size_t solver_failures = 0;
    std::size_t mismatches = 0;
    double seconds = 0.0;
};

/// properties: the invariant sweeps, `trials` vectors (default 10^4);
/// paper: the literature catalog; random: `trials` generated instances
/// (default 100).
[[nodiscard]] SuiteSummary run_suite(SuiteKind kind, std::uint64_t seed,
                                     std::optional<std::size_t> trials = std::nullopt);

[[nodiscard]] nlohmann::json to_json(const SuiteSummary& s);
[[nodiscard]] int exit_code(const SuiteSummary& s);

}  // namespace evpos
