#pragma once

#include "evpos/operators.hpp"
#include "evpos/pf_verifier.hpp"
#include "evpos/positivity.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evpos {

// ----------------------------------------------------------- generators

inline constexpr std::size_t max_generated_dimension = 64;

struct EventuallyPositiveInstance {
    ComplexMatrix matrix;  // P + Q
    CVector right;         // v, P = v w^T / (w^T v)
    CVector left;          // w
    double min_projection_entry = 0.0;
    /// A^n > 0 entrywise for every n >= n0_bound.
    unsigned n0_bound = 0;
    double gap = 0.0;
};

/// A = P + Q with P a strictly positive rank-one projection and
/// PQ = QP = 0, ||Q||_2 = 1 - gap. Throws DomainError for dim < 2 or gap
/// outside (0, 1); SolverFailure after 8 degenerate draws.
[[nodiscard]] EventuallyPositiveInstance make_eventually_positive(std::size_t dim, double gap,
                                                                  std::uint64_t seed);

/// Entries uniform in [0.1, 1.1).
[[nodiscard]] ComplexMatrix make_positive_random(std::size_t dim, std::uint64_t seed);

/// k-cycle permutation (x) strictly positive inner block; dimension k * inner_dim.
[[nodiscard]] ComplexMatrix make_cyclic_block(unsigned k, std::size_t inner_dim,
                                              std::uint64_t seed);

/// Cyclic permutation matrix e_{j+1} <- e_j.
[[nodiscard]] ComplexMatrix cycle_permutation(unsigned k);

struct GeneratorSpec {
    enum class Kind { EventuallyPositive, PositiveRandom, CyclicBlock, PaperExample };
    Kind kind = Kind::EventuallyPositive;
    std::size_t dim = 4;
    double gap = 0.5;
    unsigned k = 3;
    std::size_t inner_dim = 2;
    std::uint64_t seed = 0;
    std::string name;
    std::optional<std::size_t> size;
};

/// "eventually_positive:dim=4,gap=0.5,seed=1", "positive_random:dim=5,seed=2",
/// "cyclic_block:k=3,inner_dim=2,seed=0", "paper_example:name=ex5.1,size=50".
[[nodiscard]] GeneratorSpec parse_generator_spec(const std::string& text);
[[nodiscard]] std::string to_string(const GeneratorSpec& spec);

// -------------------------------------------------------------- catalog

struct Expectations {
    std::vector<std::pair<Notion, VerdictStatus>> verdicts;
    std::vector<std::pair<std::string, CheckStatus>> checks;
    /// Asymptotic notions are undefined because spr = 0.
    bool not_classifiable = false;
};

struct CatalogEntry {
    std::string name;
    std::string title;
    OperatorModel model;
    Expectations expected;
    bool from_literature = true;
};

/// Default truncation size of the sequence-space examples.
inline constexpr std::size_t default_truncation = 50;
inline constexpr std::size_t shift_truncation = 16;

[[nodiscard]] std::vector<std::string> catalog_names();
/// Throws DomainError for an unknown name. `size` overrides the truncation.
[[nodiscard]] CatalogEntry catalog_entry(const std::string& name,
                                         std::optional<std::size_t> size = std::nullopt);
/// Entries taken from the literature examples (excludes generated instances).
[[nodiscard]] std::vector<CatalogEntry> literature_catalog();

/// Rank-two models of the two eventual-positivity counterexamples.
[[nodiscard]] RankKModel individual_not_uniform_model(std::size_t nodes = 201);
[[nodiscard]] RankKModel weak_not_individual_model(double p = 2.0, std::size_t cells = 200);
[[nodiscard]] DiagonalModel alternating_diagonal_model(std::size_t n = default_truncation);
[[nodiscard]] WeightedShiftModel negated_shift_model(std::size_t n = shift_truncation);
[[nodiscard]] DenseModel rotating_diagonal_model();

}  // namespace evpos
