#pragma once

#include "evpos/lattice.hpp"
#include "evpos/operators.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace evpos {

enum class Notion {
    UniformEventual,
    IndividualEventual,
    WeakEventual,
    UniformAsymptotic,
    IndividualAsymptotic,
    WeakAsymptotic,
};

enum class VerdictStatus { Confirmed, Refuted, Undetermined };

[[nodiscard]] std::string to_string(Notion n);
[[nodiscard]] std::string to_string(VerdictStatus s);
[[nodiscard]] Notion notion_from_string(const std::string& s);
[[nodiscard]] VerdictStatus status_from_string(const std::string& s);

struct PositivityVerdict {
    Notion notion = Notion::UniformEventual;
    VerdictStatus status = VerdictStatus::Undetermined;
    unsigned n0 = 0;       // meaningful when Confirmed
    unsigned horizon = 0;
    nlohmann::json witness;  // null unless Refuted
    std::vector<double> decay;
    double tolerance = 0.0;
    std::string note;

    [[nodiscard]] bool confirmed() const { return status == VerdictStatus::Confirmed; }
    [[nodiscard]] bool refuted() const { return status == VerdictStatus::Refuted; }
};

enum class TestProvenance { BasisVectors, ZeroOneVectors, SeededRandom, UserSupplied, Canonical };
[[nodiscard]] std::string to_string(TestProvenance p);

/// Finite stand-in for "every x >= 0" (vectors) and "every x' >= 0" (functionals).
struct ConeTestSet {
    std::vector<LatticeVector> vectors;
    std::vector<LatticeVector> functionals;
    std::vector<std::string> vector_labels;      // "e_1", "ones", "random_0", ...
    std::vector<std::string> functional_labels;
    TestProvenance provenance = TestProvenance::UserSupplied;

    /// Basis vectors, the all-ones vector and `random_count` seeded random
    /// positive vectors; functionals likewise.
    static ConeTestSet canonical(std::size_t dim, const Norm& norm, std::uint64_t seed = 0,
                                 std::size_t random_count = 16);
    static ConeTestSet seeded_random(std::size_t dim, const Norm& norm, std::size_t count,
                                     std::uint64_t seed);
    static ConeTestSet basis(std::size_t dim, const Norm& norm);
    /// Validates positivity and normalizes to norm 1.
    static ConeTestSet user(std::vector<LatticeVector> vectors,
                            std::vector<LatticeVector> functionals);
};

/// Norm of x' as a functional under the pairing used by `pairing`.
[[nodiscard]] double dual_norm(const Norm& norm, std::span<const Complex> xprime);

/// spr of the model: eigenvalues for dense models, closed forms otherwise.
[[nodiscard]] double model_spectral_radius(const OperatorModel& t);

[[nodiscard]] bool is_positive_operator(const OperatorModel& t, double tol = 1e-12);
/// T^n >= 0 within tol (relative to the largest entry for matrices).
[[nodiscard]] bool power_is_positive(const OperatorModel& t, unsigned n, double tol = 1e-12);

inline constexpr unsigned default_eventual_horizon = 30;
inline constexpr unsigned default_asymptotic_horizon = 200;
inline constexpr double default_classifier_tolerance = 1e-10;
/// Persistent violations of at least this size (in units of spr^n) refute
/// eventual notions for matrix models.
inline constexpr double persistence_threshold = 1e-3;

[[nodiscard]] PositivityVerdict uniform_eventual(const OperatorModel& t,
                                                 unsigned horizon = default_eventual_horizon,
                                                 double tol = default_classifier_tolerance);
[[nodiscard]] PositivityVerdict individual_eventual(const OperatorModel& t,
                                                    const ConeTestSet& tests,
                                                    unsigned horizon = default_eventual_horizon,
                                                    double tol = default_classifier_tolerance);
[[nodiscard]] PositivityVerdict weak_eventual(const OperatorModel& t, const ConeTestSet& tests,
                                              unsigned horizon = default_eventual_horizon,
                                              double tol = default_classifier_tolerance);

struct ExtremePoints {};
struct MonteCarlo {
    std::size_t samples = 64;
    std::uint64_t seed = 0;
    unsigned ascent_rounds = 3;
};
using DeltaStrategy = std::variant<ExtremePoints, MonteCarlo>;

struct DeltaResult {
    double value = 0.0;
    LatticeVector maximizer;
    bool exact = false;  // false: a lower bound
};

/// sup over x >= 0, ||x|| <= 1 of d+(S^n x), S = T / spr(T).
[[nodiscard]] DeltaResult delta_n(const OperatorModel& t, unsigned n, const DeltaStrategy& strategy);

/// Largest dimension for which classify_asymptotic enumerates 0/1 vectors
/// at every power.
inline constexpr std::size_t zero_one_sequence_cap = 12;
inline constexpr std::size_t zero_one_single_cap = 20;

/// Uniform, individual and weak asymptotic verdicts.
[[nodiscard]] std::array<PositivityVerdict, 3> classify_asymptotic(
    const OperatorModel& t, unsigned horizon, double tol, const ConeTestSet& tests,
    std::uint64_t seed = 0);

/// Pairs in the implication chains uniform => individual => weak (eventual
/// and asymptotic) where a Confirmed notion sits above a Refuted one.
[[nodiscard]] std::vector<std::string> hierarchy_violations(
    const std::vector<PositivityVerdict>& verdicts);

}  // namespace evpos
